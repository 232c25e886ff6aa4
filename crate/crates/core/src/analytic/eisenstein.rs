use rug::{Complex, Float, Rational};

use super::prec::{nome, pi, PrecComplex, Precision};
use crate::arith::kronecker;
use crate::error::{Error, Result};
use crate::quadfield::class_number;

/// `L(eps, 1) = coeff * pi / sqrt(p)` for the odd character of conductor `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletL1 {
    pub coeff: Rational,
    pub p: i64,
}

impl DirichletL1 {
    pub fn value(&self, bits: u32) -> Float {
        pi(bits) * Float::with_val(bits, &self.coeff) / Float::with_val(bits, self.p).sqrt()
    }
}

/// Class number formula `L(eps, 1) = 2 pi h(-p) / (w sqrt p)` with `w = 2`.
pub fn dirichlet_l1(p: i64) -> Result<DirichletL1> {
    if p <= 3 || p % 4 != 3 {
        return Err(Error::UnsupportedConductor(p));
    }
    let h = class_number(-p)? as i64;
    Ok(DirichletL1 { coeff: Rational::from((2 * h, 2)), p })
}

/// Weight one Eisenstein series `E_1(tau, 0) = 2 L(eps,1) + (4 pi / sqrt p) sum sigma_eps(n) q^n`.
pub fn eisenstein_value(p: i64, tau: &Complex, prec: Precision) -> Result<PrecComplex> {
    let y = tau.imag().to_f64();
    if !(y > 0.0) {
        return Err(Error::NotUpperHalfPlane);
    }
    let l1 = dirichlet_l1(p)?;
    let bits = prec.bits();
    let rho = (-2.0 * std::f64::consts::PI * y).exp();
    let scale = 4.0 * std::f64::consts::PI / (p as f64).sqrt();
    // |sigma_eps(n)| <= d(n) <= 2n, tail <= 2 (T+1) rho^{T+1} / (1-rho)^2
    let tail = |t: f64| scale * 2.0 * (t + 1.0) * rho.powf(t + 1.0) / (1.0 - rho).powi(2);
    let mut t = 1.0f64;
    while tail(t) > prec.truncation() {
        t = (t * 1.1).ceil();
    }
    let t = t as usize;
    let mut sigma = vec![0i64; t + 1];
    for d in 1..=t {
        let e = kronecker(d as i64, p) as i64;
        if e != 0 {
            for m in (d..=t).step_by(d) {
                sigma[m] += e;
            }
        }
    }
    let q = nome(&Complex::with_val(bits, tau));
    let mut qn = Complex::with_val(bits, 1);
    let mut series = Complex::with_val(bits, 0);
    for s in sigma.iter().skip(1) {
        qn *= &q;
        if *s != 0 {
            series += Complex::with_val(bits, &qn * *s);
        }
    }
    let coef = pi(bits) * 4u32 / Float::with_val(bits, p).sqrt();
    let value = Complex::with_val(bits, series * coef) + l1.value(bits) * 2u32;
    let rounding = t as f64 * 2f64.powi(-(bits as i32) + 4) * scale / (1.0 - rho);
    Ok(PrecComplex::new(value, tail(t as f64) + rounding))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::theta::theta_form;
    use crate::quadfield::reduced_forms;

    #[test]
    fn class_number_formula() {
        assert_eq!(dirichlet_l1(11).unwrap().coeff, 1);
        assert_eq!(dirichlet_l1(23).unwrap().coeff, 3);
        assert!(dirichlet_l1(3).is_err());
        // against a direct partial sum with the smoothing-free alternating tail
        let v = dirichlet_l1(23).unwrap().value(64).to_f64();
        let direct: f64 = (1..2_000_000).map(|n| kronecker(n, 23) as f64 / n as f64).sum();
        assert!((v - direct).abs() < 1e-4);
    }

    #[test]
    fn constant_term_limit() {
        let p = Precision::new(30);
        let tau = Complex::with_val(p.bits(), (0.2, 8.0));
        let e = eisenstein_value(11, &tau, p).unwrap();
        let l = dirichlet_l1(11).unwrap().value(p.bits()).to_f64();
        assert!((e.re() - 2.0 * l).abs() < 1e-15);
    }

    #[test]
    fn theta_decomposition_at_i_over_5() {
        let p = Precision::new(50);
        let tau = Complex::with_val(p.bits(), (0, 0.2));
        let e = eisenstein_value(23, &tau, p).unwrap();
        let scale = Float::with_val(p.bits(), 23).sqrt() * 2u32 / (pi(p.bits()) * 4u32);
        let lhs = e.scale(&scale);
        let mut rhs = PrecComplex::from_f64(p.bits(), 0.0, 0.0);
        for f in reduced_forms(-23).unwrap() {
            rhs = rhs.add(&theta_form(&f, &tau, p).unwrap());
        }
        assert!(lhs.close_to(&rhs, p.identity_tolerance()), "{lhs:?} {rhs:?}");
    }
}
