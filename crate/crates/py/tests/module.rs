use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(heckeval_py::heckeval_module)(py);
        let globals = PyDict::new(py);
        globals.set_item("heckeval", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn forms_and_class_numbers() {
    run(r#"
f = heckeval.QuadForm.parse("[3,1,2]")
assert f.disc == -23
assert f.reduce().is_reduced()
assert heckeval.class_number(-23) == 3
assert len(heckeval.reduced_forms(-23)) == 3
from fractions import Fraction
assert heckeval.hurwitz(3) == Fraction(1, 3)
assert heckeval.split_prime_norms(-7, 50) == [11, 23, 43]
"#);
}

#[test]
fn pipeline_and_central_value() {
    run(r#"
p = heckeval.Pipeline(-11)
assert (p.class_number, p.type_number) == (2, 2)
r = p.central_value(23)
assert r.d == 23 and r.n == -11
assert r.oracle_difference < 1e-30
assert sum(row["n"] for row in r.rows) == r.sum_n
import json
assert json.loads(r.to_json())["d"] == 23
"#);
}

#[test]
fn input_errors_raise_value_error() {
    run(r#"
for bad in (lambda: heckeval.central_value(-7, 13), lambda: heckeval.central_value(-5, 23), lambda: heckeval.QuadForm.parse("[1,2]")):
    try:
        bad()
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
"#);
}
