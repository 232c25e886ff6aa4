use rug::ops::Pow;
use rug::Complex;

use super::prec::{nome, pi, PrecComplex, Precision};
use crate::error::{Error, Result};

/// Dedekind eta `exp(2 pi i tau / 24) prod (1 - q^n)` via the pentagonal
/// number series, truncated by an a priori geometric tail bound.
pub fn eta(tau: &Complex, prec: Precision) -> Result<PrecComplex> {
    let im = tau.imag().to_f64();
    if !(im > 0.0) {
        return Err(Error::NotUpperHalfPlane);
    }
    let bits = prec.bits();
    let tau = Complex::with_val(bits, tau);
    let rho = (-2.0 * std::f64::consts::PI * im).exp();
    let target = prec.truncation();
    // tail after index k is at most 2 rho^{(k+1)(3k+2)/2} / (1 - rho)
    let tail = |k: u64| -> f64 {
        let e = ((k + 1) * (3 * k + 2) / 2) as f64;
        (2.0f64.ln() + e * rho.ln() - (1.0 - rho).ln()).exp()
    };
    let mut kmax = 1u64;
    while tail(kmax) > target {
        kmax += 1;
    }
    let q = nome(&tau);
    let q3 = Complex::with_val(bits, q.clone().pow(3u32));
    let mut sum = Complex::with_val(bits, 1);
    // q^{k(3k-1)/2} advances by q^{3k+1}; the partner term is q^k times it
    let mut qk = Complex::with_val(bits, 1);
    let mut pent = Complex::with_val(bits, 1);
    let mut step = q.clone();
    for k in 1..=kmax {
        pent *= &step;
        step *= &q3;
        qk *= &q;
        let pair = Complex::with_val(bits, &pent * (Complex::with_val(bits, 1) + &qk));
        if k % 2 == 1 {
            sum -= pair;
        } else {
            sum += pair;
        }
    }
    let pref = Complex::with_val(bits, (0, pi(bits) * 2u32 / 24u32));
    let pref = Complex::with_val(bits, pref * &tau).exp();
    let value = Complex::with_val(bits, sum * pref);
    let rounding = (4 * kmax + 8) as f64 * 2f64.powi(-(bits as i32) + 2) / (1.0 - rho);
    Ok(PrecComplex::new(value, tail(kmax) + rounding))
}
