use std::fmt;

use rug::{Integer, Rational};

/// `t + x i + y j + z k` with `i^2 = -1`, `j^2 = N`, `k = ij`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quat {
    pub n: i64,
    pub c: [Rational; 4],
}

impl Quat {
    pub fn new<T: Into<Rational>>(n: i64, t: T, x: T, y: T, z: T) -> Self {
        Quat { n, c: [t.into(), x.into(), y.into(), z.into()] }
    }

    pub fn from_coords(n: i64, c: [Rational; 4]) -> Self {
        Quat { n, c }
    }

    pub fn scalar<T: Into<Rational>>(n: i64, s: T) -> Self {
        Quat { n, c: [s.into(), Rational::new(), Rational::new(), Rational::new()] }
    }

    pub fn one(n: i64) -> Self {
        Self::scalar(n, 1)
    }

    pub fn i(n: i64) -> Self {
        Self::new(n, 0, 1, 0, 0)
    }

    pub fn j(n: i64) -> Self {
        Self::new(n, 0, 0, 1, 0)
    }

    pub fn k(n: i64) -> Self {
        Self::new(n, 0, 0, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| *x == 0)
    }

    pub fn mul(&self, o: &Quat) -> Quat {
        debug_assert_eq!(self.n, o.n);
        let n = Rational::from(self.n);
        let [t1, x1, y1, z1] = &self.c;
        let [t2, x2, y2, z2] = &o.c;
        let p = |a: &Rational, b: &Rational| Rational::from(a * b);
        let t = p(t1, t2) - p(x1, x2) + Rational::from(&n * (p(y1, y2) + p(z1, z2)));
        let x = p(t1, x2) + p(x1, t2) + Rational::from(&n * (p(z1, y2) - p(y1, z2)));
        let y = p(t1, y2) + p(y1, t2) - p(x1, z2) + p(z1, x2);
        let z = p(t1, z2) + p(z1, t2) + p(x1, y2) - p(y1, x2);
        Quat { n: self.n, c: [t, x, y, z] }
    }

    pub fn add(&self, o: &Quat) -> Quat {
        Quat { n: self.n, c: std::array::from_fn(|i| Rational::from(&self.c[i] + &o.c[i])) }
    }

    pub fn sub(&self, o: &Quat) -> Quat {
        Quat { n: self.n, c: std::array::from_fn(|i| Rational::from(&self.c[i] - &o.c[i])) }
    }

    pub fn neg(&self) -> Quat {
        Quat { n: self.n, c: std::array::from_fn(|i| Rational::from(-&self.c[i])) }
    }

    pub fn scale(&self, s: &Rational) -> Quat {
        Quat { n: self.n, c: std::array::from_fn(|i| Rational::from(&self.c[i] * s)) }
    }

    pub fn conj(&self) -> Quat {
        let [t, x, y, z] = &self.c;
        Quat { n: self.n, c: [t.clone(), Rational::from(-x), Rational::from(-y), Rational::from(-z)] }
    }

    /// Reduced norm `t^2 + x^2 + |N| y^2 + |N| z^2`.
    pub fn norm(&self) -> Rational {
        let [t, x, y, z] = &self.c;
        let m = Rational::from(-self.n);
        Rational::from(t.square_ref()) + Rational::from(x.square_ref())
            + m * (Rational::from(y.square_ref()) + Rational::from(z.square_ref()))
    }

    /// Reduced trace `2t`.
    pub fn trace(&self) -> Rational {
        Rational::from(&self.c[0] * 2u32)
    }

    /// `Tr(self * conj(o))`, the bilinear form attached to the norm.
    pub fn pair(&self, o: &Quat) -> Rational {
        let m = Rational::from(-self.n);
        let p = |i: usize| Rational::from(&self.c[i] * &o.c[i]);
        (p(0) + p(1) + m * (p(2) + p(3))) * 2u32
    }

    pub fn inverse(&self) -> Option<Quat> {
        let nm = self.norm();
        if nm == 0 {
            return None;
        }
        Some(self.conj().scale(&Rational::from(nm.recip_ref())))
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> Integer {
        self.c.iter().fold(Integer::from(1), |l, x| l.lcm(x.denom()))
    }
}

impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.c[0], self.c[1], self.c[2], self.c[3])
    }
}
