use rug::{Complex, Float};

use super::eta::eta;
use super::prec::{order_point, pi, zpoint_value, PrecComplex, Precision};
use super::theta::theta_form;
use crate::arith::kronecker;
use crate::error::{Error, Result};
use crate::quadfield::{reduce_form, HeckeCharCtx, QuadElem, QuadForm, QuadIdeal};

/// Normalised theta quotient and its recognised integer value.
#[derive(Clone, Debug)]
pub struct NValue {
    pub raw: PrecComplex,
    pub rounded: i64,
    pub residual: f64,
}

fn elem_value(e: &QuadElem, bits: u32) -> Complex {
    let re = Float::with_val(bits, e.x) / 2u32;
    let im = Float::with_val(bits, -e.disc).sqrt() * e.y / 2u32;
    Complex::with_val(bits, (re, im))
}

/// `psi(conj A)` for an ideal `A` prime to the context prime.
fn psi_of_conjugate(ctx: &HeckeCharCtx, a: &QuadIdeal, bits: u32) -> Result<PrecComplex> {
    let g = a.conj().generator()?;
    let v = ctx.psi_principal(&g)?;
    Ok(PrecComplex::rounded(elem_value(&v, bits)))
}

/// Denominator `eta(z_A) eta((b1 + sqrt N)/2) psi(conj A)` and the point `z_A`.
fn normaliser(a: &QuadIdeal, ctx: &HeckeCharCtx, prec: Precision) -> Result<(Complex, PrecComplex)> {
    let bits = prec.bits();
    let zp = ctx.z_point(a)?;
    let z = zpoint_value(&zp, bits);
    let e1 = eta(&z, prec)?;
    let e0 = eta(&order_point(zp.b1, zp.n, bits), prec)?;
    let psi = psi_of_conjugate(ctx, a, bits)?;
    Ok((z, e1.mul(&e0).mul(&psi)))
}

fn recognise(raw: PrecComplex, prec: Precision, what: &str) -> Result<NValue> {
    let (r, residual) = raw.nearest_integer();
    let tol = prec.integer_tolerance();
    if residual >= tol || raw.err >= tol {
        return Err(Error::Residual { what: what.to_string(), residual: residual.max(raw.err), tolerance: tol });
    }
    let rounded = r.to_i64().ok_or_else(|| Error::Precision("n out of range".into()))?;
    Ok(NValue { raw, rounded, residual })
}

/// `theta(z_A Q_B) / (eta(z_A) eta(O_K) psi(conj A))`, recognised as an integer.
pub fn n_value(a: &QuadIdeal, b: &QuadForm, ctx: &HeckeCharCtx, prec: Precision) -> Result<NValue> {
    let (z, den) = normaliser(a, ctx, prec)?;
    let (red, _) = reduce_form(b)?;
    let th = theta_form(&red, &z, prec)?;
    recognise(th.div(&den)?, prec, &format!("n for form {b} at |D| = {}", ctx.d))
}

/// All `n` values for the given forms, sharing one normaliser.
pub fn n_values(a: &QuadIdeal, forms: &[QuadForm], ctx: &HeckeCharCtx, prec: Precision) -> Result<Vec<NValue>> {
    let (z, den) = normaliser(a, ctx, prec)?;
    forms
        .iter()
        .map(|b| {
            let (red, _) = reduce_form(b)?;
            let th = theta_form(&red, &z, prec)?;
            recognise(th.div(&den)?, prec, &format!("n for form {b} at |D| = {}", ctx.d))
        })
        .collect()
}

fn prefactor(ctx: &HeckeCharCtx, bits: u32) -> Float {
    pi(bits) * 2u32 / (Float::with_val(bits, ctx.d).sqrt() * ctx.w_d())
}

/// The transcendental period `2 pi / (w sqrt|D|) eta(z) eta(O_K)`.
pub fn period(ctx: &HeckeCharCtx, prec: Precision) -> Result<PrecComplex> {
    let unit = QuadIdeal::unit(ctx.n);
    let (_, den) = normaliser(&unit, ctx, prec)?;
    Ok(den.scale(&prefactor(ctx, prec.bits())))
}

/// Central value as `2 pi / (w sqrt|D|)` times the sum of theta values over the form classes.
pub fn l_value_formula(ctx: &HeckeCharCtx, prec: Precision) -> Result<PrecComplex> {
    let bits = prec.bits();
    let unit = QuadIdeal::unit(ctx.n);
    let z = zpoint_value(&ctx.z_point(&unit)?, bits);
    let psi = psi_of_conjugate(ctx, &unit, bits)?;
    let mut sum = PrecComplex::from_f64(bits, 0.0, 0.0);
    for f in crate::quadfield::reduced_forms(-ctx.d)? {
        sum = sum.add(&theta_form(&f, &z, prec)?.div(&psi)?);
    }
    Ok(sum.scale(&prefactor(ctx, bits)))
}

/// `|(w sqrt|D| / 4 pi) E_1(z) - sum_B Theta_B(z)|` at the point of the context prime.
pub fn theta_decomposition_residual(ctx: &HeckeCharCtx, prec: Precision) -> Result<f64> {
    let bits = prec.bits();
    let z = zpoint_value(&ctx.z_point(&QuadIdeal::unit(ctx.n))?, bits);
    let e = super::eisenstein::eisenstein_value(ctx.d, &z, prec)?;
    let scale = Float::with_val(bits, ctx.d).sqrt() * ctx.w_d() / (pi(bits) * 4u32);
    let mut sum = PrecComplex::from_f64(bits, 0.0, 0.0);
    for f in crate::quadfield::reduced_forms(-ctx.d)? {
        sum = sum.add(&theta_form(&f, &z, prec)?);
    }
    Ok(e.scale(&scale).dist(&sum))
}

/// Coefficients `4 a_n = X_n + i Y_n sqrt|N|` of the weight two form attached to the character.
fn series_coefficients(ctx: &HeckeCharCtx, t: usize) -> Result<Vec<(i64, i64)>> {
    let n = ctx.n;
    let mut coeff = vec![(0i64, 0i64); t + 1];
    let lim = 4 * t as i64;
    let mut y = 0i64;
    while -n * y * y <= lim {
        let mut x = 0i64;
        loop {
            let four_norm = x * x - n * y * y;
            if four_norm > lim {
                break;
            }
            if four_norm > 0 && (x - y * n).rem_euclid(2) == 0 {
                let k = (four_norm / 4) as usize;
                let xs: &[i64] = if x == 0 { &[0] } else { &[x, -x] };
                let ys: &[i64] = if y == 0 { &[0] } else { &[y, -y] };
                for &sx in xs {
                    for &sy in ys {
                        match ctx.series_sign(&QuadElem::new(sx, sy, n)) {
                            Ok(e) => {
                                coeff[k].0 += e as i64 * sx;
                                coeff[k].1 += e as i64 * sy;
                            }
                            Err(Error::InConductor) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
            x += 1;
        }
        y += 1;
    }
    Ok(coeff)
}

struct SmoothedSums {
    /// `sum a_n e^{-2 pi n / sqrt M}`
    f: PrecComplex,
    /// `sum a_n / n e^{-2 pi n / sqrt M}`
    a: PrecComplex,
}

fn smoothed_sums(ctx: &HeckeCharCtx, prec: Precision) -> Result<SmoothedSums> {
    let bits = prec.bits();
    let m = (-ctx.n * ctx.d) as f64;
    let r = (-2.0 * std::f64::consts::PI / m.sqrt()).exp();
    // |a_n| <= d(n) sqrt n <= 2n and |a_n / n| <= 2
    let tail_f = |t: f64| 2.0 * (t + 1.0) * r.powf(t + 1.0) / (1.0 - r).powi(2);
    let tail_a = |t: f64| 2.0 * r.powf(t + 1.0) / (1.0 - r);
    let mut t = 16.0f64;
    while tail_f(t) + tail_a(t) > prec.truncation() {
        t = (t * 1.1).ceil();
    }
    let coeff = series_coefficients(ctx, t as usize)?;
    let sqrt_n = Float::with_val(bits, -ctx.n).sqrt();
    let step = (-(pi(bits) * 2u32) / Float::with_val(bits, m).sqrt()).exp();
    let mut rn = Float::with_val(bits, 1);
    let mut f = Complex::with_val(bits, 0);
    let mut a = Complex::with_val(bits, 0);
    for (k, &(x, y)) in coeff.iter().enumerate().skip(1) {
        rn *= &step;
        if x == 0 && y == 0 {
            continue;
        }
        let c = Complex::with_val(bits, (Float::with_val(bits, x) / 4u32, Float::with_val(bits, &sqrt_n * y) / 4u32));
        let term = Complex::with_val(bits, &c * &rn);
        a += Complex::with_val(bits, &term / k as u32);
        f += term;
    }
    let rounding = t * t * 2f64.powi(-(bits as i32) + 4);
    Ok(SmoothedSums { f: PrecComplex::new(f, tail_f(t) + rounding), a: PrecComplex::new(a, tail_a(t) + rounding) })
}

/// `w = f(i / sqrt M) / conj f(i / sqrt M)` with `M = |N| |D|`.
pub fn root_number_numeric(ctx: &HeckeCharCtx, prec: Precision) -> Result<PrecComplex> {
    let s = smoothed_sums(ctx, prec)?;
    if s.f.abs() < 10f64.powi(-(prec.digits as i32) / 4) {
        return Err(Error::Precision("f(i/sqrt M) too small to divide stably".into()));
    }
    s.f.div(&s.f.conj())
}

/// Central value from the functional equation at the self-dual point:
/// `sum a_n / n e^{-2 pi n / sqrt M} + w sum conj(a_n) / n e^{-2 pi n / sqrt M}`.
pub fn l_value_oracle(ctx: &HeckeCharCtx, prec: Precision) -> Result<PrecComplex> {
    let s = smoothed_sums(ctx, prec)?;
    let w = s.f.div(&s.f.conj())?;
    Ok(s.a.add(&w.mul(&s.a.conj())))
}

/// The sign `xi` with `w = xi (2 / |N|) i alpha / |alpha|` for a generator
/// `alpha` of the prime of the L-series character, if either sign matches.
pub fn buhler_gross_sign(ctx: &HeckeCharCtx, w: &PrecComplex, tol: f64) -> Result<Option<i32>> {
    let bits = w.bits();
    let alpha = ctx.series_prime_generator()?;
    let v = elem_value(&alpha, bits);
    let unit = Complex::with_val(bits, &v / Float::with_val(bits, alpha.norm()).sqrt());
    let legendre = kronecker(2, -ctx.n);
    let pred = Complex::with_val(bits, unit * Complex::with_val(bits, (0, legendre)));
    let pred = PrecComplex::rounded(pred);
    for xi in [1, -1] {
        let cand = pred.scale(&Float::with_val(bits, xi));
        if cand.close_to(w, tol) {
            return Ok(Some(xi));
        }
    }
    Ok(None)
}

/// `|Theta_B(z_{p D}) - psi(conj mu) Theta_B(z_D)|` for `mu` of prime norm `p`
/// generating the prime `conj p` and the point of `conj p` times the context prime.
pub fn theta_action_residual(ctx: &HeckeCharCtx, b: &QuadForm, mu: &QuadElem, prec: Precision) -> Result<f64> {
    let p = mu.norm();
    if !crate::arith::is_prime(p) {
        return Err(Error::IncompatibleBasis(format!("norm {p} of mu is not prime")));
    }
    if (6 * ctx.d) % p == 0 || ctx.n % p == 0 {
        return Err(Error::IncompatibleBasis(format!("prime {p} is not prime to 6|D|N")));
    }
    // b' = m / n mod p, b' = b mod 2|D|
    let ninv = (1..p).find(|k| (mu.y.rem_euclid(p) * k) % p == 1).ok_or(Error::IncompatibleBasis("p | y".into()))?;
    let target = (mu.x.rem_euclid(p) * ninv) % p;
    let bp = (0..p)
        .map(|k| ctx.b + 2 * ctx.d * k)
        .find(|v| (v - target).rem_euclid(p) == 0)
        .expect("CRT");
    if (bp * bp - ctx.n).rem_euclid(4 * p * ctx.d) != 0 {
        return Err(Error::IncompatibleBasis("no joint basis for the product ideal".into()));
    }
    let bits = prec.bits();
    let sq = Float::with_val(bits, -ctx.n).sqrt();
    let z1 = Complex::with_val(bits, (Float::with_val(bits, bp) / (2 * p * ctx.d), Float::with_val(bits, &sq / (2 * p * ctx.d))));
    let z0 = Complex::with_val(bits, (Float::with_val(bits, bp) / (2 * ctx.d), Float::with_val(bits, &sq / (2 * ctx.d))));
    let (red, _) = reduce_form(b)?;
    let lhs = theta_form(&red, &z1, prec)?;
    let psi = ctx.psi_principal(&mu.conj())?;
    let rhs = theta_form(&red, &z0, prec)?.mul(&PrecComplex::rounded(elem_value(&psi, bits)));
    Ok(lhs.dist(&rhs))
}

pub fn theta_action_check(ctx: &HeckeCharCtx, b: &QuadForm, mu: &QuadElem, prec: Precision) -> Result<bool> {
    Ok(theta_action_residual(ctx, b, mu, prec)? < prec.identity_tolerance())
}
