use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, kronecker, primes_up_to};
use crate::error::{Error, Result};

use super::CLASS_NUMBER_ONE;

pub fn admissible_n(n: i64) -> Result<()> {
    if CLASS_NUMBER_ONE.contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedField(n))
    }
}

/// Element `(x + y sqrt(disc)) / 2` of the maximal order, `x = y disc mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadElem {
    pub x: i64,
    pub y: i64,
    pub disc: i64,
}

impl QuadElem {
    pub fn new(x: i64, y: i64, disc: i64) -> Self {
        assert_eq!((x - y * disc).rem_euclid(2), 0, "({x} + {y} sqrt({disc}))/2 is not integral");
        QuadElem { x, y, disc }
    }

    pub fn norm(&self) -> i64 {
        (self.x * self.x - self.disc * self.y * self.y) / 4
    }

    pub fn conj(&self) -> Self {
        QuadElem { x: self.x, y: -self.y, disc: self.disc }
    }

    pub fn neg(&self) -> Self {
        QuadElem { x: -self.x, y: -self.y, disc: self.disc }
    }

    pub fn mul(&self, o: &QuadElem) -> Self {
        assert_eq!(self.disc, o.disc);
        let x = (self.x * o.x + self.disc * self.y * o.y) / 2;
        let y = (self.x * o.y + self.y * o.x) / 2;
        QuadElem::new(x, y, self.disc)
    }

    /// Complex embedding with `sqrt(disc) = i sqrt(|disc|)`.
    pub fn to_c64(&self) -> (f64, f64) {
        (self.x as f64 / 2.0, self.y as f64 * (-self.disc as f64).sqrt() / 2.0)
    }
}

/// Ideal `<a, (b + sqrt(disc)) / 2>` with `b^2 = disc mod 4a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadIdeal {
    pub a: i64,
    pub b: i64,
    pub disc: i64,
}

impl QuadIdeal {
    pub fn new(a: i64, b: i64, disc: i64) -> Result<Self> {
        if a <= 0 || (b * b - disc).rem_euclid(4 * a) != 0 {
            return Err(Error::IncompatibleBasis(format!("<{a}, ({b} + sqrt({disc}))/2> is not an ideal")));
        }
        Ok(QuadIdeal { a, b, disc })
    }

    pub fn unit(disc: i64) -> Self {
        QuadIdeal { a: 1, b: disc.rem_euclid(2), disc }
    }

    pub fn norm(&self) -> i64 {
        self.a
    }

    pub fn contains(&self, e: &QuadElem) -> bool {
        // (x + y sqrt)/2 = (x - y b)/2 + y (b + sqrt)/2
        (e.x - e.y * self.b).rem_euclid(2 * self.a) == 0
    }

    pub fn conj(&self) -> Self {
        QuadIdeal { a: self.a, b: -self.b, disc: self.disc }
    }

    /// A generator, which exists since the class number is one.
    pub fn generator(&self) -> Result<QuadElem> {
        let n = -self.disc;
        let mut y = 0i64;
        while n * y * y <= 4 * self.a {
            let rest = 4 * self.a - n * y * y;
            let x = rest.isqrt();
            if x * x == rest {
                for e in [QuadElem::new(x, y, self.disc), QuadElem::new(-x, y, self.disc)] {
                    if self.contains(&e) {
                        return Ok(e);
                    }
                }
            }
            y += 1;
        }
        Err(Error::SearchBound(self.a))
    }
}

/// Primes `3 < p <= limit`, `p = 3 mod 4`, split in `Q(sqrt(n))`.
pub fn split_prime_norms(n: i64, limit: i64) -> Vec<i64> {
    primes_up_to(limit).into_iter().filter(|&p| p > 3 && p % 4 == 3 && kronecker(n, p) == 1).collect()
}

fn check_split(n: i64, d: i64) -> Result<()> {
    admissible_n(n)?;
    if !(d > 3 && d % 4 == 3 && is_prime(d) && kronecker(n, d) == 1) {
        return Err(Error::NotSplitPrime { n, d });
    }
    Ok(())
}

/// Smallest `b = 3 mod 48` with `b^2 = n mod 4d`, optionally restricted to
/// the residue class `b = -b_0 mod d` of the conjugate prime.
fn canonical_b(n: i64, d: i64, conjugate: bool) -> Result<i64> {
    check_split(n, d)?;
    let mut first = None;
    for k in 0..(2 * d) {
        let b = 3 + 48 * k;
        if (b * b - n).rem_euclid(4 * d) != 0 {
            continue;
        }
        match first {
            None if !conjugate => return Ok(b),
            None => first = Some(b),
            Some(f) if (b + f) % d == 0 => return Ok(b),
            Some(_) => {}
        }
    }
    Err(Error::NotSplitPrime { n, d })
}

/// The prime `<|D|, (b + sqrt(N)) / 2>` with `b` the smallest positive
/// integer `= 3 mod 48` satisfying `b^2 = N mod 4|D|`.
pub fn canonical_ideal_above(n: i64, d: i64) -> Result<QuadIdeal> {
    QuadIdeal::new(d, canonical_b(n, d, false)?, n)
}

/// Character data attached to a prime of norm `|D|`.
///
/// `epsilon` reduces modulo the context prime `<|D|, (b + sqrt N)/2>`; the
/// L-series character is `epsilon` composed with complex conjugation, which is
/// the quadratic character of the conjugate prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeCharCtx {
    pub n: i64,
    pub d: i64,
    pub b: i64,
    pub conjugate: bool,
}

impl HeckeCharCtx {
    pub fn new(n: i64, d: i64) -> Result<Self> {
        Self::with_orientation(n, d, false)
    }

    /// `conjugate = true` selects the other prime above `|D|`.
    pub fn with_orientation(n: i64, d: i64, conjugate: bool) -> Result<Self> {
        let b = canonical_b(n, d, conjugate)?;
        Ok(HeckeCharCtx { n, d, b, conjugate })
    }

    pub fn ideal(&self) -> QuadIdeal {
        QuadIdeal { a: self.d, b: self.b, disc: self.n }
    }

    /// Units of the residue field order: `w_{|D|} = 2` for `|D| > 3`.
    pub fn w_d(&self) -> i64 {
        2
    }

    /// Quadratic residue symbol of `alpha` modulo the context prime.
    pub fn epsilon(&self, alpha: &QuadElem) -> Result<i32> {
        let d = self.d as i128;
        let inv2 = (d + 1) / 2;
        let r = ((alpha.x as i128 - alpha.y as i128 * self.b as i128) * inv2).rem_euclid(d);
        if r == 0 {
            return Err(Error::InConductor);
        }
        Ok(kronecker(r as i64, self.d))
    }

    /// `psi(alpha O) = epsilon(alpha) alpha`, well defined since `epsilon(-1) = -1`.
    pub fn psi_principal(&self, alpha: &QuadElem) -> Result<QuadElem> {
        Ok(if self.epsilon(alpha)? == 1 { *alpha } else { alpha.neg() })
    }

    /// Character value `epsilon(conj alpha)` used in the L-series coefficients.
    pub fn series_sign(&self, alpha: &QuadElem) -> Result<i32> {
        self.epsilon(&alpha.conj())
    }

    /// Generator of the conjugate prime, the prime of the L-series character.
    pub fn series_prime_generator(&self) -> Result<QuadElem> {
        self.ideal().conj().generator()
    }

    /// Evaluation point attached to the ideal `a` prime to the context prime.
    pub fn z_point(&self, a: &QuadIdeal) -> Result<ZPoint> {
        if a.disc != self.n {
            return Err(Error::IncompatibleBasis("ideal from a different field".into()));
        }
        if a.a % self.d == 0 {
            return Err(Error::IncompatibleBasis("ideal is not prime to the context prime".into()));
        }
        let m = 4 * a.a * self.d;
        for k in 0..(2 * a.a) {
            let b1 = self.b + 2 * self.d * k;
            if (b1 - a.b).rem_euclid(2 * a.a) == 0 && (b1 * b1 - self.n).rem_euclid(m) == 0 {
                let c1 = (b1 * b1 - self.n) / m;
                return Ok(ZPoint { a1: a.a, b1, c1, d: self.d, n: self.n });
            }
        }
        Err(Error::IncompatibleBasis(format!("no joint basis for {a:?} and the context prime")))
    }
}

/// The point `(b1 + sqrt N) / (2 a1 |D|)` with `b1^2 - 4 a1 |D| c1 = N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZPoint {
    pub a1: i64,
    pub b1: i64,
    pub c1: i64,
    pub d: i64,
    pub n: i64,
}

impl ZPoint {
    pub fn to_c64(&self) -> (f64, f64) {
        let den = (2 * self.a1 * self.d) as f64;
        (self.b1 as f64 / den, (-self.n as f64).sqrt() / den)
    }
}

/// Principal primes `p = mu mu-bar` split in the field, avoiding `exclude`
/// and primes dividing `6N`, with a generator `mu` of a prime above `p`.
pub fn principal_primes(n: i64, exclude: &[i64], count: usize) -> Vec<(i64, QuadElem)> {
    let mut out = Vec::new();
    let mut p = 5;
    while out.len() < count {
        if is_prime(p) && kronecker(n, p) == 1 && !exclude.contains(&p) && (6 * n) % p != 0 {
            let mut y = 1i64;
            while -n * y * y <= 4 * p {
                let rest = 4 * p + n * y * y;
                let x = rest.isqrt();
                if x * x == rest && (x - y * n).rem_euclid(2) == 0 {
                    out.push((p, QuadElem::new(x, y, n)));
                    break;
                }
                y += 1;
            }
        }
        p += 1;
    }
    out
}
