use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use heckeval::analytic::Precision;
use heckeval::central::{central_values, cross_d_consistency, CentralValueReport, Pipeline};
use heckeval::checks::{published_tables, properties, CheckOutcome};
use heckeval::quadfield::{admissible_n, split_prime_norms, HeckeCharCtx};
use heckeval::quatalg::embedding_count;
use heckeval::Error;

const USAGE: u8 = 1;
const INVARIANT: u8 = 2;
const ORACLE: u8 = 3;

#[derive(Parser)]
#[command(name = "heckeval", version, about = "Central values of Hecke L-functions from theta series and quaternion ideal classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Table of n-values and class labels for every form of each |D|.
    Table(TableArgs),
    /// Central value for one |D| by the theta formula and by the functional equation.
    Lvalue(LvalueArgs),
    /// Left ideal classes of the standard maximal order.
    Classset(ClassArgs),
    /// Reproduction and property suites.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    #[value(name = "paper-tables")]
    PublishedTables,
    Properties,
}

#[derive(Args)]
struct Common {
    /// Discriminant of the base field, one of -7, -11, -19, -43, -67, -163.
    #[arg(long = "n", allow_hyphen_values = true)]
    n: i64,
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = 64)]
    prec: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    /// All admissible |D| up to this bound.
    #[arg(long, conflicts_with_all = ["dlist", "d"])]
    dmax: Option<i64>,
    /// Comma separated |D| values.
    #[arg(long, value_delimiter = ',', conflicts_with = "d")]
    dlist: Option<Vec<i64>>,
    #[arg(long)]
    d: Option<i64>,
    /// Use the other prime above |D|.
    #[arg(long)]
    conjugate_d: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct LvalueArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    conjugate_d: bool,
    /// Accepted for clarity; the oracle comparison always runs.
    #[arg(long)]
    verify_oracle: bool,
}

#[derive(Args)]
struct ClassArgs {
    #[arg(long = "n", allow_hyphen_values = true)]
    n: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<String>,
    /// Report the classes never reached by forms with |D| up to this bound.
    #[arg(long)]
    dmax: Option<i64>,
    #[arg(long, default_value_t = 64)]
    prec: u32,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 64)]
    prec: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSplitPrime { .. } | Error::UnsupportedField(_) | Error::UnsupportedConductor(_) => USAGE,
            Error::OracleDisagreement { .. } => ORACLE,
            _ => INVARIANT,
        };
        let message = if code == INVARIANT {
            json!({"error": e.to_string(), "detail": format!("{e:?}")}).to_string()
        } else {
            e.to_string()
        };
        Failure { code, message }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: USAGE, message: message.into() }
}

fn precision(digits: u32) -> Result<Precision, Failure> {
    if digits < 32 {
        return Err(usage(format!("precision {digits} is below the minimum of 32 digits")));
    }
    Ok(Precision::new(digits))
}

fn emit(out: &Option<String>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {path}: {e}"))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        Some(0) => Err(usage("--jobs must be positive")),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(j).build().map_err(|e| usage(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn complex_json(v: &heckeval::analytic::PrecComplex) -> serde_json::Value {
    json!({"re": v.re(), "im": v.im(), "err": v.err})
}

fn summary_json(r: &CentralValueReport) -> serde_json::Value {
    json!({
        "D": r.d,
        "b": r.b,
        "sum_n": r.sum_n,
        "L_formula": complex_json(&r.l_formula),
        "L_oracle": complex_json(&r.l_oracle),
        "oracle_difference": r.oracle_diff,
        "period": complex_json(&r.period),
        "w_psi": complex_json(&r.w_psi),
        "buhler_gross_xi": r.buhler_gross_xi,
        "m": r.m_values,
        "r": r.r_values,
        "parity": r.parity,
        "nonvanishing": r.nonvanishing,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    d: i64,
    form: String,
    reduced_form: String,
    n: i64,
    class: &'a str,
    residual: f64,
}

fn rows_of(reports: &[CentralValueReport]) -> Vec<CsvRow<'_>> {
    reports
        .iter()
        .flat_map(|r| {
            r.rows.iter().map(|row| CsvRow {
                d: row.d,
                form: row.form.to_string(),
                reduced_form: row.reduced_form.to_string(),
                n: row.n,
                class: &row.class,
                residual: row.residual,
            })
        })
        .collect()
}

fn csv(reports: &[CentralValueReport]) -> String {
    let mut s = String::from("D,form,reduced_form,n,class,residual\n");
    for r in rows_of(reports) {
        s += &format!("{},\"{}\",\"{}\",{},{},{:.3e}\n", r.d, r.form, r.reduced_form, r.n, r.class, r.residual);
    }
    s
}

fn text_table(reports: &[CentralValueReport]) -> String {
    let mut s = format!("{:>5}  {:<18} {:<16} {:>5}  {:<5} {}\n", "D", "form", "reduced", "n", "class", "residual");
    for r in reports {
        for row in &r.rows {
            s += &format!(
                "{:>5}  {:<18} {:<16} {:>5}  {:<5} {:.1e}\n",
                row.d,
                row.form.to_string(),
                row.reduced_form.to_string(),
                row.n,
                row.class,
                row.residual
            );
        }
        s += &format!(
            "       sum n = {}, parity {}, |L - oracle| = {:.1e}, L {}\n",
            r.sum_n,
            if r.parity == 1 { "odd" } else { "even" },
            r.oracle_diff,
            if r.nonvanishing { "nonzero" } else { "zero" }
        );
    }
    s
}

fn table_ds(a: &TableArgs) -> Result<Vec<i64>, Failure> {
    let ds = match (&a.dmax, &a.dlist, &a.d) {
        (Some(m), _, _) => split_prime_norms(a.common.n, *m),
        (_, Some(l), _) => l.clone(),
        (_, _, Some(d)) => vec![*d],
        _ => return Err(usage("one of --dmax, --dlist or --d is required")),
    };
    for &d in &ds {
        HeckeCharCtx::new(a.common.n, d)?;
    }
    let mut ds = ds;
    ds.sort();
    ds.dedup();
    Ok(ds)
}

fn reports_for(pipeline: &Pipeline, ds: &[i64], prec: Precision, conjugate: bool, jobs: Option<usize>) -> Result<Vec<CentralValueReport>, Failure> {
    let results = with_jobs(jobs, || central_values(pipeline, ds, prec, conjugate))?;
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(out)
}

fn cmd_table(a: TableArgs) -> Result<(), Failure> {
    admissible_n(a.common.n)?;
    let prec = precision(a.common.prec)?;
    let ds = table_ds(&a)?;
    let pipeline = Pipeline::new(a.common.n)?;
    let reports = reports_for(&pipeline, &ds, prec, a.conjugate_d, a.jobs)?;
    let text = match a.common.format {
        Format::Text => text_table(&reports),
        Format::Csv => csv(&reports),
        Format::Json => {
            let v = json!({
                "schema": 1,
                "config": {"N": a.common.n, "D": ds, "prec": prec.digits, "guard": prec.guard, "conjugate_d": a.conjugate_d},
                "rows": rows_of(&reports),
                "summary": reports.iter().map(summary_json).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
        }
    };
    emit(&a.common.out, &text)
}

fn cmd_lvalue(a: LvalueArgs) -> Result<(), Failure> {
    admissible_n(a.common.n)?;
    let prec = precision(a.common.prec)?;
    HeckeCharCtx::new(a.common.n, a.d)?;
    let pipeline = Pipeline::new(a.common.n)?;
    let r = pipeline.central_value(a.d, prec, a.conjugate_d)?;
    let text = match a.common.format {
        Format::Json => {
            let v = json!({
                "schema": 1,
                "config": {"N": a.common.n, "D": a.d, "prec": prec.digits, "guard": prec.guard, "conjugate_d": a.conjugate_d},
                "rows": rows_of(std::slice::from_ref(&r)),
                "summary": summary_json(&r),
            });
            serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
        }
        Format::Csv => {
            format!(
                "D,b,sum_n,L_formula_re,L_formula_im,L_oracle_re,L_oracle_im,difference,w_re,w_im,parity,nonvanishing\n{},{},{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{}\n",
                r.d,
                r.b,
                r.sum_n,
                r.l_formula.re(),
                r.l_formula.im(),
                r.l_oracle.re(),
                r.l_oracle.im(),
                r.oracle_diff,
                r.w_psi.re(),
                r.w_psi.im(),
                r.parity,
                r.nonvanishing
            )
        }
        Format::Text => {
            let mut s = format!("N = {}, |D| = {}, b = {}{}\n", r.n, r.d, r.b, if r.conjugate { " (conjugate prime)" } else { "" });
            s += &format!("L_formula    = {:.30e} + {:.30e} i  (err {:.1e})\n", r.l_formula.re(), r.l_formula.im(), r.l_formula.err);
            s += &format!("L_oracle     = {:.30e} + {:.30e} i  (err {:.1e})\n", r.l_oracle.re(), r.l_oracle.im(), r.l_oracle.err);
            s += &format!("|difference| = {:.3e}\n", r.oracle_diff);
            s += &format!("w            = {:.20} + {:.20} i\n", r.w_psi.re(), r.w_psi.im());
            s += &format!("Buhler-Gross sign: {}\n", r.buhler_gross_xi.map_or("no match".to_string(), |x| x.to_string()));
            s += &format!("sum n = {}, parity {}\n", r.sum_n, if r.parity == 1 { "odd" } else { "even" });
            s += &format!("nonvanishing: {}\n", r.nonvanishing);
            s
        }
    };
    emit(&a.common.out, &text)
}

fn cmd_classset(a: ClassArgs) -> Result<(), Failure> {
    admissible_n(a.n)?;
    let pipeline = Pipeline::new(a.n)?;
    let s = &pipeline.classes;
    let never_hit = match a.dmax {
        Some(m) => {
            let prec = precision(a.prec)?;
            let ds = split_prime_norms(a.n, m);
            let reports = reports_for(&pipeline, &ds, prec, false, a.jobs)?;
            Some(cross_d_consistency(&pipeline, &reports).never_hit)
        }
        None => None,
    };
    let types: Vec<Vec<&str>> = pipeline.types.iter().map(|g| g.iter().map(|&i| s.label(i)).collect()).collect();
    let embeddings: Vec<String> = pipeline.types.iter().map(|g| embedding_count(&s.right_orders[g[0]]).to_string()).collect();
    let text = match a.format {
        Format::Json => {
            let classes: Vec<serde_json::Value> = (0..s.len())
                .map(|i| {
                    json!({
                        "label": s.label(i),
                        "norm": s.ideals[i].norm().to_string(),
                        "units": s.unit_counts[i],
                        "type": pipeline.type_of(i),
                        "basis": s.ideals[i].to_strings(),
                        "right_order": s.right_orders[i].to_strings(),
                    })
                })
                .collect();
            let v = json!({
                "schema": 1,
                "config": {"N": a.n},
                "class_number": s.len(),
                "type_number": pipeline.types.len(),
                "mass": s.mass().to_string(),
                "types": types,
                "embeddings_per_type": embeddings,
                "classes": classes,
                "never_hit": never_hit,
            });
            serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
        }
        Format::Csv => {
            let mut t = String::from("label,norm,units,type,basis\n");
            for i in 0..s.len() {
                let basis: Vec<String> = s.ideals[i].to_strings().iter().map(|r| format!("[{}]", r.join(" "))).collect();
                t += &format!("{},{},{},{},\"{}\"\n", s.label(i), s.ideals[i].norm(), s.unit_counts[i], pipeline.type_of(i), basis.join(" "));
            }
            t
        }
        Format::Text => {
            let mut t = format!("N = {}: h = {}, t = {}, mass = {}\n", a.n, s.len(), pipeline.types.len(), s.mass());
            t += &format!("unit counts: {:?}\n", s.unit_counts);
            for (g, e) in types.iter().zip(&embeddings) {
                t += &format!("type {:?}: embeddings {e}\n", g);
            }
            for i in 0..s.len() {
                t += &format!("{} (norm {}):\n", s.label(i), s.ideals[i].norm());
                for row in s.ideals[i].to_strings() {
                    t += &format!("    {}\n", row.join("  "));
                }
            }
            if let Some(nh) = &never_hit {
                t += &format!("never hit for |D| <= {}: {:?}\n", a.dmax.unwrap_or(0), nh);
            }
            t
        }
    };
    emit(&a.out, &text)
}

fn cmd_check(a: CheckArgs) -> Result<(), Failure> {
    let prec = precision(a.prec)?;
    let (name, outcomes): (&str, Vec<CheckOutcome>) = match a.suite {
        Suite::PublishedTables => ("paper-tables", published_tables(prec)),
        Suite::Properties => ("properties", properties(prec)),
    };
    let passed = outcomes.iter().all(|o| o.passed);
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&json!({"schema": 1, "suite": name, "passed": passed, "checks": outcomes})).expect("serialisable") + "\n",
        Format::Csv => {
            let mut t = String::from("check,passed,seconds,detail\n");
            for o in &outcomes {
                t += &format!("\"{}\",{},{:.2},\"{}\"\n", o.name, o.passed, o.seconds, o.detail.replace('"', "'"));
            }
            t
        }
        Format::Text => {
            let mut t = String::new();
            for o in &outcomes {
                t += &format!("{} {} [{:.1}s]: {}\n", if o.passed { "PASS" } else { "FAIL" }, o.name, o.seconds, o.detail);
            }
            t
        }
    };
    emit(&a.out, &text)?;
    match outcomes.iter().find(|o| !o.passed) {
        None => Ok(()),
        Some(first) => {
            let code = if first.detail.contains("oracle difference") { ORACLE } else { INVARIANT };
            Err(Failure { code, message: format!("{}: {}", first.name, first.detail) })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Table(a) => cmd_table(a),
        Command::Lvalue(a) => cmd_lvalue(a),
        Command::Classset(a) => cmd_classset(a),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
