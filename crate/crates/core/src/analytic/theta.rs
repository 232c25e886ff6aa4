use std::collections::BTreeMap;

use rug::{Complex, Float, Rational};

use super::prec::{pi, PrecComplex, Precision};
use crate::arith::{short_vectors, GramMatrix};
use crate::error::{Error, Result};
use crate::quadfield::QuadForm;

/// Upper bound on `sum exp(-pi y v^T S v)` over lattice points with `v^T S v > x`.
///
/// Points with `v^T S v <= t` number at most `prod (2 sqrt(t / d_i) + 1)`
/// for the LDL pivots `d_i`; the tail is summed shell by shell.
fn tail_bound(pivots: &[f64], y: f64, x: f64) -> f64 {
    let count = |t: f64| pivots.iter().map(|d| 2.0 * (t / d).sqrt() + 1.0).product::<f64>();
    let decay = std::f64::consts::PI * y;
    let mut total = 0.0;
    let mut k = x.floor();
    loop {
        let term = count(k + 1.0) * (-decay * k).exp();
        total += term;
        let next = count(k + 2.0) * (-decay * (k + 1.0)).exp();
        let ratio = next / term;
        if ratio < 1.0 && term < 1e-30 * total.max(1e-300) {
            total += next / (1.0 - ratio);
            return total;
        }
        if term == 0.0 {
            return total;
        }
        k += 1.0;
    }
}

/// `sum_{v in Z^g} exp(pi i tau v^T S v)` for a positive definite rational `S`.
pub fn theta_gram(s: &GramMatrix, tau: &Complex, prec: Precision) -> Result<PrecComplex> {
    let y = tau.imag().to_f64();
    if !(y > 0.0) {
        return Err(Error::NotUpperHalfPlane);
    }
    let pivots: Vec<f64> = s.pivots()?.iter().map(|d| d.to_f64()).collect();
    let target = prec.truncation();
    let mut x = 1.0f64;
    while tail_bound(&pivots, y, x) > target {
        x *= 1.1;
    }
    let bound = Rational::from_f64(x.ceil()).expect("finite");
    let mut shells: BTreeMap<Rational, u64> = BTreeMap::new();
    for v in short_vectors(s, &bound)? {
        *shells.entry(v.value).or_insert(0) += 1;
    }
    let bits = prec.bits();
    let pi_i_tau = Complex::with_val(bits, Complex::with_val(bits, (0, pi(bits))) * tau);
    let mut sum = Complex::with_val(bits, 1);
    for (value, count) in &shells {
        let t = Complex::with_val(bits, &pi_i_tau * Float::with_val(bits, value)).exp();
        sum += t * *count;
    }
    let points: u64 = shells.values().sum::<u64>() + 1;
    let rounding = points as f64 * 2f64.powi(-(bits as i32) + 3);
    Ok(PrecComplex::new(sum, tail_bound(&pivots, y, x.ceil()) + rounding))
}

/// `Theta_B(tau) = sum exp(2 pi i tau B(m, n))` over `(m, n) in Z^2`.
pub fn theta_form(q: &QuadForm, tau: &Complex, prec: Precision) -> Result<PrecComplex> {
    if q.a <= 0 || q.disc() >= 0 {
        return Err(Error::NotPositiveDefinite);
    }
    let g = q.gram2();
    theta_gram(&GramMatrix::from_i64(&[g[0].to_vec(), g[1].to_vec()]), tau, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::{reduce_form, reduced_forms, HeckeCharCtx, QuadIdeal};
    use crate::analytic::prec::zpoint_value;

    #[test]
    fn equivalent_forms_agree() {
        let p = Precision::new(40);
        let tau = Complex::with_val(p.bits(), (0.37, 0.05));
        let f = QuadForm::new(13, 17, 6);
        let (g, _) = reduce_form(&f).unwrap();
        let a = theta_form(&f, &tau, p).unwrap();
        let b = theta_form(&g, &tau, p).unwrap();
        assert!(a.close_to(&b, p.identity_tolerance()));
    }

    #[test]
    fn large_imaginary_part() {
        let p = Precision::new(40);
        let q = QuadForm::new(1, 1, 6);
        let tau = Complex::with_val(p.bits(), (0.1, 3.0));
        let t = theta_form(&q, &tau, p).unwrap();
        let next = 2.0 * (-2.0 * std::f64::consts::PI * 3.0f64).exp();
        assert!((t.re() - 1.0).abs() <= next * 1.01);
        assert!(matches!(theta_form(&QuadForm::new(1, 3, 1), &tau, p), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn genus_two_inversion_at_cm_points() {
        // theta(-(tau S)^{-1}) = sqrt(det S) (-i tau) theta(tau S) for S = [[2a,b],[b,2c]]
        let p = Precision::new(64);
        let bits = p.bits();
        for (n, d) in [(-7, 11), (-7, 23), (-7, 71)] {
            let ctx = HeckeCharCtx::new(n, d).unwrap();
            let z = zpoint_value(&ctx.z_point(&QuadIdeal::unit(n)).unwrap(), bits);
            // theta has period one; move to |Re| <= 1/2 so -1/z stays away from the real axis
            let shift = z.real().to_f64().round();
            let z = Complex::with_val(bits, z - shift);
            for f in reduced_forms(-d).unwrap() {
                let g = f.gram2();
                let det = Rational::from(g[0][0] * g[1][1] - g[0][1] * g[0][1]);
                let inv = GramMatrix::new(vec![
                    vec![Rational::from((g[1][1], 1)) / &det, Rational::from((-g[0][1], 1)) / &det],
                    vec![Rational::from((-g[1][0], 1)) / &det, Rational::from((g[0][0], 1)) / &det],
                ]);
                let minus_inv_tau = Complex::with_val(bits, -Complex::with_val(bits, 1) / &z);
                let lhs = theta_gram(&inv, &minus_inv_tau, p).unwrap();
                let rhs = theta_form(&f, &z, p).unwrap();
                let factor = Complex::with_val(bits, &z * Complex::with_val(bits, (0, -1)))
                    * Float::with_val(bits, det.numer()).sqrt();
                let rhs = rhs.mul(&PrecComplex::rounded(factor));
                assert!(lhs.close_to(&rhs, p.identity_tolerance()), "{n} {d} {f}");
            }
        }
    }
}
