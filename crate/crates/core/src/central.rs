//! Assembly of the central value: n-values, quaternion class labels, the
//! multiplicities m and r, both routes to L, and the parity certificate.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    buhler_gross_sign, l_value_formula, l_value_oracle, n_values, period, root_number_numeric,
    theta_decomposition_residual, PrecComplex, Precision,
};
use crate::error::{Error, Result};
use crate::quadfield::{admissible_n, reduce_form, reduced_forms, split_prime_norms, HeckeCharCtx, QuadForm, QuadIdeal};
use crate::quatalg::{
    class_set, embedding_element, is_maximal_ideal_pair, left_order, siegel_ideal, siegel_point, solve_embedding,
    standard_maximal_order, type_partition, ClassSet, Quat,
};

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub d: i64,
    /// Representative used in the ideal construction (`b = 1 mod 4`).
    pub form: QuadForm,
    pub reduced_form: QuadForm,
    pub n: i64,
    pub class: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CentralValueReport {
    pub n: i64,
    pub d: i64,
    pub b: i64,
    pub conjugate: bool,
    pub rows: Vec<TableRow>,
    /// `(label, m)` in class order.
    pub m_values: Vec<(String, i64)>,
    pub r_values: Vec<(String, i64)>,
    pub sum_n: i64,
    pub period: PrecComplex,
    pub l_formula: PrecComplex,
    pub l_oracle: PrecComplex,
    pub oracle_diff: f64,
    pub w_psi: PrecComplex,
    pub buhler_gross_xi: Option<i32>,
    pub parity: i64,
    pub nonvanishing: bool,
}

impl CentralValueReport {
    pub fn m_of(&self, label: &str) -> Option<i64> {
        self.m_values.iter().find(|(l, _)| l == label).map(|(_, m)| *m)
    }

    pub fn r_of(&self, label: &str) -> Option<i64> {
        self.r_values.iter().find(|(l, _)| l == label).map(|(_, r)| *r)
    }
}

/// Quaternion data for one base field: the standard maximal order, its ideal classes and types.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub n: i64,
    pub classes: ClassSet,
    pub types: Vec<Vec<usize>>,
}

impl Pipeline {
    pub fn new(n: i64) -> Result<Self> {
        admissible_n(n)?;
        let o = standard_maximal_order(n)?;
        let classes = class_set(&o)?;
        let types = type_partition(&classes);
        Ok(Pipeline { n, classes, types })
    }

    /// Index of the type containing the class `idx`.
    pub fn type_of(&self, idx: usize) -> usize {
        self.types.iter().position(|g| g.contains(&idx)).expect("partition covers all classes")
    }

    /// Class of the ideal attached to `form`, transported to the standard order
    /// through the connecting ideal `O O'` when its left order `O'` differs.
    pub fn class_of_form(&self, ctx: &HeckeCharCtx, form: &QuadForm) -> Result<usize> {
        let n = self.n;
        let zp = ctx.z_point(&QuadIdeal::unit(n))?;
        let v = embedding_element(n, solve_embedding(n, ctx.d)?);
        let (g, _) = reduce_form(form)?.0.with_b_one_mod_four();
        let si = siegel_ideal(&zp, &g, &v)?;
        if !is_maximal_ideal_pair(&si.lattice) {
            return Err(Error::identity("maximal ideal", format!("ideal for {g} at |D| = {}", ctx.d)));
        }
        let sp = siegel_point(&si.basis, &Quat::j(n).neg(), &si.norm())?;
        if !sp.matches(&zp, &g)? {
            return Err(Error::identity("Siegel point reconstruction", format!("form {g} at |D| = {}", ctx.d)));
        }
        let o = &self.classes.order;
        let lo = left_order(&si.lattice);
        let ideal = if &lo == o { si.lattice } else { o.product(&lo).product(&si.lattice) };
        self.classes.classify(&ideal)
    }

    pub fn central_value(&self, d: i64, prec: Precision, conjugate: bool) -> Result<CentralValueReport> {
        let n = self.n;
        let ctx = HeckeCharCtx::with_orientation(n, d, conjugate)?;
        let forms = reduced_forms(-d)?;
        let nv = n_values(&QuadIdeal::unit(n), &forms, &ctx, prec)?;
        let mut rows = Vec::with_capacity(forms.len());
        for (f, v) in forms.iter().zip(&nv) {
            let idx = self.class_of_form(&ctx, f)?;
            rows.push(TableRow {
                d,
                form: f.with_b_one_mod_four().0,
                reduced_form: *f,
                n: v.rounded,
                class: self.classes.label(idx).to_string(),
                residual: v.residual,
            });
        }
        // the adjoint form gives the same value
        for r in &rows {
            let adj = reduce_form(&r.reduced_form.opposite())?.0;
            let other = rows.iter().find(|s| s.reduced_form == adj).expect("opposite class present");
            if other.n != r.n {
                return Err(Error::identity("adjoint form symmetry", format!("{} -> {}, {} -> {}", r.reduced_form, r.n, adj, other.n)));
            }
        }
        let (m_values, r_values) = multiplicities(&self.classes, &rows)?;
        let sum_n: i64 = rows.iter().map(|r| r.n).sum();
        let check: i64 = m_values.iter().zip(&r_values).map(|((_, m), (_, r))| m * r).sum();
        if check != sum_n {
            return Err(Error::identity("sum r m = sum n", format!("{check} != {sum_n}")));
        }
        let omega = period(&ctx, prec)?;
        let l_formula = l_value_formula(&ctx, prec)?;
        let via_n = omega.scale(&rug::Float::with_val(prec.bits(), sum_n));
        if !l_formula.close_to(&via_n, prec.identity_tolerance().max(10.0 * l_formula.err)) {
            return Err(Error::identity("L = period * sum n", format!("difference {:e}", l_formula.dist(&via_n))));
        }
        let decomposition = theta_decomposition_residual(&ctx, prec)?;
        if decomposition >= prec.identity_tolerance() {
            return Err(Error::identity("theta decomposition of E_1", format!("residual {decomposition:e}")));
        }
        let l_oracle = l_value_oracle(&ctx, prec)?;
        let oracle_diff = l_formula.dist(&l_oracle);
        if oracle_diff >= prec.oracle_tolerance() {
            return Err(Error::OracleDisagreement { diff: oracle_diff, tolerance: prec.oracle_tolerance() });
        }
        let w_psi = root_number_numeric(&ctx, prec)?;
        let buhler_gross_xi = buhler_gross_sign(&ctx, &w_psi, prec.oracle_tolerance())?;
        let nonvanishing = l_formula.abs() > prec.oracle_tolerance();
        Ok(CentralValueReport {
            n,
            d,
            b: ctx.b,
            conjugate,
            rows,
            m_values,
            r_values,
            sum_n,
            period: omega,
            l_formula,
            l_oracle,
            oracle_diff,
            w_psi,
            buhler_gross_xi,
            parity: sum_n.rem_euclid(2),
            nonvanishing,
        })
    }
}

type LabelValues = Vec<(String, i64)>;

/// `m` per class (common `|n|` of the forms landing there, else 0) and `r = sum n / m`.
fn multiplicities(classes: &ClassSet, rows: &[TableRow]) -> Result<(LabelValues, LabelValues)> {
    let mut ms = Vec::new();
    let mut rs = Vec::new();
    for label in &classes.labels {
        let hits: Vec<i64> = rows.iter().filter(|r| &r.class == label).map(|r| r.n).collect();
        let mut abs: Vec<i64> = hits.iter().map(|x| x.abs()).collect();
        abs.sort();
        abs.dedup();
        if abs.len() > 1 {
            return Err(Error::InconsistentM { label: label.clone(), values: hits });
        }
        let m = abs.first().copied().unwrap_or(0);
        let r = if m == 0 {
            0
        } else {
            let s: i64 = hits.iter().sum();
            if s % m != 0 {
                return Err(Error::NonIntegralR { label: label.clone() });
            }
            s / m
        };
        ms.push((label.clone(), m));
        rs.push((label.clone(), r));
    }
    Ok((ms, rs))
}

pub fn central_value(n: i64, d: i64, prec: Precision) -> Result<CentralValueReport> {
    Pipeline::new(n)?.central_value(d, prec, false)
}

pub fn m_values(pipeline: &Pipeline, d: i64, prec: Precision) -> Result<Vec<(String, i64)>> {
    Ok(pipeline.central_value(d, prec, false)?.m_values)
}

pub fn r_coefficients(pipeline: &Pipeline, d: i64, prec: Precision) -> Result<Vec<(String, i64)>> {
    Ok(pipeline.central_value(d, prec, false)?.r_values)
}

/// Reports for several `|D|` computed in parallel, returned in ascending `|D|`.
pub fn central_values(pipeline: &Pipeline, ds: &[i64], prec: Precision, conjugate: bool) -> Vec<Result<CentralValueReport>> {
    let mut ds = ds.to_vec();
    ds.sort();
    ds.par_iter().map(|&d| pipeline.central_value(d, prec, conjugate)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NonvanishingEntry {
    pub d: i64,
    pub sum_n: i64,
    pub parity: i64,
    pub l_abs: f64,
    pub oracle_diff: f64,
    pub ok: bool,
}

/// Odd parity of `sum n` for every split `|D| <= d_max` over `Q(sqrt -7)`, which forces `L != 0`.
pub fn nonvanishing_certificate(d_max: i64, prec: Precision) -> Result<Vec<NonvanishingEntry>> {
    let pipeline = Pipeline::new(-7)?;
    let ds = split_prime_norms(-7, d_max);
    let reports = central_values(&pipeline, &ds, prec, false);
    let mut out = Vec::with_capacity(ds.len());
    for r in reports {
        let r = r?;
        if r.parity == 0 {
            return Err(Error::EvenParity { d: r.d, sum: r.sum_n });
        }
        out.push(NonvanishingEntry {
            d: r.d,
            sum_n: r.sum_n,
            parity: r.parity,
            l_abs: r.l_formula.abs(),
            oracle_diff: r.oracle_diff,
            ok: r.parity == 1 && r.nonvanishing && r.oracle_diff < prec.oracle_tolerance(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossDReport {
    pub n: i64,
    pub ds: Vec<i64>,
    /// Per class label, the `m` found at each `|D|` in order.
    pub m_table: Vec<(String, Vec<i64>)>,
    /// Classes never reached by any form in the range.
    pub never_hit: Vec<String>,
    pub violations: Vec<String>,
}

/// Checks that each class carries one nonzero `m` across all `|D|`, and that
/// classes of the same type hit at the same `|D|` carry equal `m`.
pub fn cross_d_consistency(pipeline: &Pipeline, reports: &[CentralValueReport]) -> CrossDReport {
    let ds: Vec<i64> = reports.iter().map(|r| r.d).collect();
    let mut m_table = Vec::new();
    let mut violations = Vec::new();
    let mut never_hit = Vec::new();
    for label in &pipeline.classes.labels {
        let ms: Vec<i64> = reports.iter().map(|r| r.m_of(label).unwrap_or(0)).collect();
        let hit_any = reports.iter().any(|r| r.rows.iter().any(|row| &row.class == label));
        if !hit_any {
            never_hit.push(label.clone());
        }
        let mut nonzero: Vec<i64> = ms.iter().copied().filter(|&m| m != 0).collect();
        nonzero.sort();
        nonzero.dedup();
        if nonzero.len() > 1 {
            violations.push(format!("class {label} has m values {nonzero:?} across |D| = {ds:?}"));
        }
        m_table.push((label.clone(), ms));
    }
    for r in reports {
        for group in &pipeline.types {
            let hit: Vec<(String, i64)> = group
                .iter()
                .map(|&i| pipeline.classes.label(i).to_string())
                .filter(|l| r.rows.iter().any(|row| &row.class == l))
                .map(|l| {
                    let m = r.m_of(&l).unwrap_or(0);
                    (l, m)
                })
                .collect();
            if hit.windows(2).any(|w| w[0].1 != w[1].1) {
                violations.push(format!("|D| = {}: classes of one type carry different m: {hit:?}", r.d));
            }
        }
    }
    CrossDReport { n: pipeline.n, ds, m_table, never_hit, violations }
}
