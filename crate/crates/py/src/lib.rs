//! Python module `heckeval`.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict};

use heckeval_core::analytic::{PrecComplex, Precision};
use heckeval_core::central::{self, CentralValueReport};
use heckeval_core::checks;
use heckeval_core::quadfield;
use heckeval_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotSplitPrime { .. }
        | Error::UnsupportedField(_)
        | Error::UnsupportedConductor(_)
        | Error::NotDiscriminant(_)
        | Error::ImprimitiveForm(_)
        | Error::InConductor => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn precision(digits: u32) -> PyResult<Precision> {
    if digits < 16 {
        return Err(PyValueError::new_err("precision below 16 digits"));
    }
    Ok(Precision::new(digits))
}

fn fraction<'py>(py: Python<'py>, q: &rug::Rational) -> PyResult<Bound<'py, PyAny>> {
    let f = py.import("fractions")?.getattr("Fraction")?;
    f.call1((q.to_string(),))
}

fn complex<'py>(py: Python<'py>, v: &PrecComplex) -> Bound<'py, PyComplex> {
    PyComplex::from_doubles(py, v.re(), v.im())
}

/// Binary quadratic form `[a, b, c]`.
#[pyclass(name = "QuadForm", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyQuadForm {
    #[pyo3(get)]
    a: i64,
    #[pyo3(get)]
    b: i64,
    #[pyo3(get)]
    c: i64,
}

impl From<quadfield::QuadForm> for PyQuadForm {
    fn from(f: quadfield::QuadForm) -> Self {
        PyQuadForm { a: f.a, b: f.b, c: f.c }
    }
}

impl PyQuadForm {
    fn inner(&self) -> quadfield::QuadForm {
        quadfield::QuadForm::new(self.a, self.b, self.c)
    }
}

#[pymethods]
impl PyQuadForm {
    #[new]
    fn new(a: i64, b: i64, c: i64) -> Self {
        PyQuadForm { a, b, c }
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        s.parse::<quadfield::QuadForm>().map(Into::into).map_err(PyValueError::new_err)
    }

    #[getter]
    fn disc(&self) -> i64 {
        self.inner().disc()
    }

    fn is_reduced(&self) -> bool {
        self.inner().is_reduced()
    }

    /// Reduced representative of the class.
    fn reduce(&self) -> PyResult<Self> {
        Ok(quadfield::reduce_form(&self.inner()).map_err(to_py)?.0.into())
    }

    fn __repr__(&self) -> String {
        format!("QuadForm({}, {}, {})", self.a, self.b, self.c)
    }

    fn __str__(&self) -> String {
        self.inner().to_string()
    }
}

/// Quaternion data for one base field.
#[pyclass(name = "Pipeline", frozen)]
struct PyPipeline {
    inner: central::Pipeline,
}

#[pymethods]
impl PyPipeline {
    #[new]
    fn new(py: Python<'_>, n: i64) -> PyResult<Self> {
        let inner = py.detach(|| central::Pipeline::new(n)).map_err(to_py)?;
        Ok(PyPipeline { inner })
    }

    #[getter]
    fn n(&self) -> i64 {
        self.inner.n
    }

    #[getter]
    fn class_number(&self) -> usize {
        self.inner.classes.len()
    }

    #[getter]
    fn type_number(&self) -> usize {
        self.inner.types.len()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.classes.labels.clone()
    }

    #[getter]
    fn unit_counts(&self) -> Vec<u64> {
        self.inner.classes.unit_counts.clone()
    }

    /// Classes grouped by right-order type, as labels.
    #[getter]
    fn types(&self) -> Vec<Vec<String>> {
        self.inner.types.iter().map(|g| g.iter().map(|&i| self.inner.classes.label(i).to_string()).collect()).collect()
    }

    #[getter]
    fn mass<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.classes.mass())
    }

    /// Basis of a class representative as rows of `p/q` strings in `(1, i, j, k)` coordinates.
    fn basis(&self, label: &str) -> PyResult<Vec<Vec<String>>> {
        let i = self.inner.classes.index_of(label).ok_or_else(|| PyValueError::new_err(format!("no class {label}")))?;
        Ok(self.inner.classes.ideals[i].to_strings())
    }

    #[pyo3(signature = (d, prec = 64, conjugate = false))]
    fn central_value(&self, py: Python<'_>, d: i64, prec: u32, conjugate: bool) -> PyResult<PyReport> {
        let p = precision(prec)?;
        let r = py.detach(|| self.inner.central_value(d, p, conjugate)).map_err(to_py)?;
        Ok(PyReport { inner: r })
    }

    /// Reports for several `|D|`, computed in parallel, in ascending `|D|`.
    #[pyo3(signature = (ds, prec = 64, conjugate = false))]
    fn central_values(&self, py: Python<'_>, ds: Vec<i64>, prec: u32, conjugate: bool) -> PyResult<Vec<PyReport>> {
        let p = precision(prec)?;
        let rs = py.detach(|| central::central_values(&self.inner, &ds, p, conjugate));
        rs.into_iter().map(|r| r.map(|inner| PyReport { inner }).map_err(to_py)).collect()
    }
}

/// Central value report for one `|D|`.
#[pyclass(name = "CentralValueReport", frozen)]
struct PyReport {
    inner: CentralValueReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn n(&self) -> i64 {
        self.inner.n
    }

    #[getter]
    fn d(&self) -> i64 {
        self.inner.d
    }

    #[getter]
    fn b(&self) -> i64 {
        self.inner.b
    }

    #[getter]
    fn sum_n(&self) -> i64 {
        self.inner.sum_n
    }

    #[getter]
    fn parity(&self) -> i64 {
        self.inner.parity
    }

    #[getter]
    fn nonvanishing(&self) -> bool {
        self.inner.nonvanishing
    }

    #[getter]
    fn oracle_difference(&self) -> f64 {
        self.inner.oracle_diff
    }

    #[getter]
    fn l_formula<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        complex(py, &self.inner.l_formula)
    }

    #[getter]
    fn l_oracle<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        complex(py, &self.inner.l_oracle)
    }

    #[getter]
    fn period<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        complex(py, &self.inner.period)
    }

    #[getter]
    fn root_number<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        complex(py, &self.inner.w_psi)
    }

    #[getter]
    fn m_values(&self) -> Vec<(String, i64)> {
        self.inner.m_values.clone()
    }

    #[getter]
    fn r_values(&self) -> Vec<(String, i64)> {
        self.inner.r_values.clone()
    }

    /// Rows as dictionaries with keys `D, form, reduced_form, n, class, residual`.
    #[getter]
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .rows
            .iter()
            .map(|r| {
                let d = PyDict::new(py);
                d.set_item("D", r.d)?;
                d.set_item("form", PyQuadForm::from(r.form))?;
                d.set_item("reduced_form", PyQuadForm::from(r.reduced_form))?;
                d.set_item("n", r.n)?;
                d.set_item("class", &r.class)?;
                d.set_item("residual", r.residual)?;
                Ok(d)
            })
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serialisable")
    }

    fn __repr__(&self) -> String {
        format!("CentralValueReport(N={}, D={}, sum_n={}, nonvanishing={})", self.inner.n, self.inner.d, self.inner.sum_n, self.inner.nonvanishing)
    }
}

#[pyfunction]
fn reduced_forms(disc: i64) -> PyResult<Vec<PyQuadForm>> {
    Ok(quadfield::reduced_forms(disc).map_err(to_py)?.into_iter().map(Into::into).collect())
}

#[pyfunction]
fn class_number(disc: i64) -> PyResult<usize> {
    quadfield::class_number(disc).map_err(to_py)
}

#[pyfunction]
fn hurwitz(py: Python<'_>, n: i64) -> PyResult<Bound<'_, PyAny>> {
    if n <= 0 {
        return Err(PyValueError::new_err("argument must be positive"));
    }
    fraction(py, &quadfield::hurwitz(n))
}

#[pyfunction]
fn split_prime_norms(n: i64, limit: i64) -> Vec<i64> {
    quadfield::split_prime_norms(n, limit)
}

#[pyfunction]
#[pyo3(signature = (n, d, prec = 64))]
fn central_value(py: Python<'_>, n: i64, d: i64, prec: u32) -> PyResult<PyReport> {
    let p = precision(prec)?;
    let r = py.detach(|| central::central_value(n, d, p)).map_err(to_py)?;
    Ok(PyReport { inner: r })
}

/// `(|D|, sum n, parity, ok)` for every split `|D| <= d_max` over `Q(sqrt -7)`.
#[pyfunction]
#[pyo3(signature = (d_max, prec = 64))]
fn nonvanishing_certificate(py: Python<'_>, d_max: i64, prec: u32) -> PyResult<Vec<(i64, i64, i64, bool)>> {
    let p = precision(prec)?;
    let entries = py.detach(|| central::nonvanishing_certificate(d_max, p)).map_err(to_py)?;
    Ok(entries.into_iter().map(|e| (e.d, e.sum_n, e.parity, e.ok)).collect())
}

/// Runs `"paper-tables"` or `"properties"`; returns `(name, passed, detail)` per check.
#[pyfunction]
#[pyo3(signature = (suite, prec = 64))]
fn check(py: Python<'_>, suite: &str, prec: u32) -> PyResult<Vec<(String, bool, String)>> {
    let p = precision(prec)?;
    let out = match suite {
        "paper-tables" => py.detach(|| checks::published_tables(p)),
        "properties" => py.detach(|| checks::properties(p)),
        other => return Err(PyValueError::new_err(format!("unknown suite {other}"))),
    };
    Ok(out.into_iter().map(|o| (o.name, o.passed, o.detail)).collect())
}

#[pymodule]
#[pyo3(name = "heckeval")]
pub fn heckeval_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuadForm>()?;
    m.add_class::<PyPipeline>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(reduced_forms, m)?)?;
    m.add_function(wrap_pyfunction!(class_number, m)?)?;
    m.add_function(wrap_pyfunction!(hurwitz, m)?)?;
    m.add_function(wrap_pyfunction!(split_prime_norms, m)?)?;
    m.add_function(wrap_pyfunction!(central_value, m)?)?;
    m.add_function(wrap_pyfunction!(nonvanishing_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    Ok(())
}
