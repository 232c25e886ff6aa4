use std::fmt;

use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadfield::ZPoint;

/// Target precision in decimal digits, with guard digits carried internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub digits: u32,
    pub guard: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: 64, guard: 10 }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision { digits, ..Default::default() }
    }

    /// Working precision in bits.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
    }

    /// Truncation target for series tails, `10^-(P+g)`.
    pub fn truncation(&self) -> f64 {
        10f64.powi(-((self.digits + self.guard) as i32))
    }

    /// Tolerance for analytic identities, `10^-(P-g)`.
    pub fn identity_tolerance(&self) -> f64 {
        10f64.powi(-((self.digits - self.guard) as i32))
    }

    /// Tolerance for comparing the two routes to the central value, `10^-(P/2)`.
    pub fn oracle_tolerance(&self) -> f64 {
        10f64.powi(-((self.digits / 2) as i32))
    }

    /// Integer recognition tolerance.
    pub fn integer_tolerance(&self) -> f64 {
        1e-20
    }

    pub fn doubled(&self) -> Self {
        Precision { digits: 2 * self.digits, guard: self.guard }
    }
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

fn ulp_err(v: &Complex) -> f64 {
    let m = v.real().to_f64().abs() + v.imag().to_f64().abs();
    m * 2f64.powi(2 - v.prec().0 as i32) + f64::MIN_POSITIVE
}

/// Complex value with an absolute error bound.
#[derive(Clone, PartialEq)]
pub struct PrecComplex {
    pub value: Complex,
    pub err: f64,
}

impl PrecComplex {
    pub fn new(value: Complex, err: f64) -> Self {
        PrecComplex { value, err }
    }

    /// A value correct up to rounding of its last bits.
    pub fn rounded(value: Complex) -> Self {
        let err = ulp_err(&value);
        PrecComplex { value, err }
    }

    pub fn from_f64(bits: u32, re: f64, im: f64) -> Self {
        PrecComplex { value: Complex::with_val(bits, (re, im)), err: 0.0 }
    }

    pub fn bits(&self) -> u32 {
        self.value.prec().0
    }

    pub fn re(&self) -> f64 {
        self.value.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.value.imag().to_f64()
    }

    pub fn abs(&self) -> f64 {
        self.re().hypot(self.im())
    }

    pub fn conj(&self) -> Self {
        PrecComplex { value: self.value.clone().conj(), err: self.err }
    }

    pub fn add(&self, o: &Self) -> Self {
        let v = Complex::with_val(self.bits(), &self.value + &o.value);
        let e = self.err + o.err + ulp_err(&v);
        PrecComplex { value: v, err: e }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let v = Complex::with_val(self.bits(), &self.value - &o.value);
        let e = self.err + o.err + ulp_err(&v);
        PrecComplex { value: v, err: e }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let v = Complex::with_val(self.bits(), &self.value * &o.value);
        let e = self.abs() * o.err + o.abs() * self.err + self.err * o.err + ulp_err(&v);
        PrecComplex { value: v, err: e }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let d = o.abs() - o.err;
        if d <= 0.0 || o.err > 0.5 * o.abs() {
            return Err(Error::Precision("division by a value indistinguishable from zero".into()));
        }
        let v = Complex::with_val(self.bits(), &self.value / &o.value);
        let q = self.abs() / o.abs();
        let e = (self.err + q * o.err) / d + ulp_err(&v);
        Ok(PrecComplex { value: v, err: e })
    }

    pub fn scale(&self, s: &Float) -> Self {
        let v = Complex::with_val(self.bits(), &self.value * s);
        let e = self.err * s.to_f64().abs() + ulp_err(&v);
        PrecComplex { value: v, err: e }
    }

    /// `|self - o|` as a float, without the error bounds.
    pub fn dist(&self, o: &Self) -> f64 {
        let d = Complex::with_val(self.bits(), &self.value - &o.value);
        d.abs().real().to_f64()
    }

    /// `|self - o| < tol`, the only sanctioned comparison.
    pub fn close_to(&self, o: &Self, tol: f64) -> bool {
        self.dist(o) < tol
    }

    pub fn nearest_integer(&self) -> (rug::Integer, f64) {
        let r = self.value.real().to_integer().expect("finite value");
        let mut re = self.value.real().clone();
        re -= &r;
        let resid = re.to_f64().hypot(self.im());
        (r, resid)
    }
}

impl Serialize for PrecComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrecComplex", 3)?;
        st.serialize_field("re", &self.re())?;
        st.serialize_field("im", &self.im())?;
        st.serialize_field("err", &self.err)?;
        st.end()
    }
}

impl fmt::Debug for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.20e} + {:.20e}i (err {:.2e})", self.re(), self.im(), self.err)
    }
}

/// `(b1 + sqrt N) / (2 a1 |D|)` at the given precision.
pub fn zpoint_value(z: &ZPoint, bits: u32) -> Complex {
    let den = 2 * z.a1 * z.d;
    let re = Float::with_val(bits, z.b1) / den;
    let im = Float::with_val(bits, -z.n).sqrt() / den;
    Complex::with_val(bits, (re, im))
}

/// `(b + sqrt N) / 2`.
pub(crate) fn order_point(b: i64, n: i64, bits: u32) -> Complex {
    let re = Float::with_val(bits, b) / 2;
    let im = Float::with_val(bits, -n).sqrt() / 2;
    Complex::with_val(bits, (re, im))
}

/// `exp(2 pi i tau)`.
pub(crate) fn nome(tau: &Complex) -> Complex {
    let bits = tau.prec().0;
    let two_pi_i = Complex::with_val(bits, (0, pi(bits) * 2u32));
    Complex::with_val(bits, two_pi_i * tau).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_propagation() {
        let p = Precision::default();
        let a = PrecComplex::new(Complex::with_val(p.bits(), (2, 0)), 1e-30);
        let b = PrecComplex::new(Complex::with_val(p.bits(), (0, 3)), 1e-30);
        let c = a.mul(&b);
        assert!(c.err >= 5e-30 - 1e-40);
        let d = c.div(&b).unwrap();
        assert!(d.close_to(&a, 1e-28));
        assert!(d.err > 0.0);
        let z = PrecComplex::new(Complex::with_val(p.bits(), (1e-40, 0)), 1e-30);
        assert!(a.div(&z).is_err());
    }

    #[test]
    fn integer_recognition() {
        let p = Precision::default();
        let a = PrecComplex::rounded(Complex::with_val(p.bits(), (-2.0000000000000000000000001f64, 1e-30)));
        let (r, res) = a.nearest_integer();
        assert_eq!(r, -2);
        assert!(res < 1e-20);
    }
}
