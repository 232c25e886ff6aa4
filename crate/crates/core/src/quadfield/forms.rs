use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// Binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// Integer matrix `[[p, q], [r, s]]` of determinant one; `f.apply(t)(x, y) = f(p x + q y, r x + s y)`.
pub type Transform = [[i64; 2]; 2];

impl QuadForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// The form `f(p x + q y, r x + s y)`.
    pub fn apply(&self, t: &Transform) -> QuadForm {
        let [[p, q], [r, s]] = *t;
        QuadForm {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }

    /// Opposite form `[a, -b, c]`, the inverse class.
    pub fn opposite(&self) -> QuadForm {
        QuadForm { a: self.a, b: -self.b, c: self.c }
    }

    /// A properly equivalent form whose middle coefficient is `1 mod 4`.
    ///
    /// Requires an odd discriminant, so `b` is odd. Translating `x -> x + y`
    /// adds `2a` to `b`; swapping the variables negates `b`.
    pub fn with_b_one_mod_four(&self) -> (QuadForm, Transform) {
        let mut f = *self;
        let mut t: Transform = [[1, 0], [0, 1]];
        let mut step = |f: &mut QuadForm, s: Transform| {
            *f = f.apply(&s);
            t = mat_mul(&t, &s);
        };
        if f.b.rem_euclid(4) != 1 {
            if f.a % 2 != 0 {
                step(&mut f, [[1, 1], [0, 1]]);
            } else if f.c % 2 != 0 {
                step(&mut f, [[0, -1], [1, 0]]);
            } else {
                // a + b + c is odd; make it the leading coefficient
                step(&mut f, [[1, 0], [1, 1]]);
                if f.b.rem_euclid(4) != 1 {
                    step(&mut f, [[1, 1], [0, 1]]);
                }
            }
        }
        debug_assert_eq!(f.b.rem_euclid(4), 1);
        (f, t)
    }

    /// 2x2 Gram matrix of the doubled form, `[[2a, b], [b, 2c]]`.
    pub fn gram2(&self) -> [[i64; 2]; 2] {
        [[2 * self.a, self.b], [self.b, 2 * self.c]]
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl From<QuadForm> for String {
    fn from(f: QuadForm) -> String {
        f.to_string()
    }
}

impl FromStr for QuadForm {
    type Err = String;

    /// Parses `[a,b,c]`, also accepting surrounding whitespace.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(|| format!("expected [a,b,c], got {s}"))?;
        let parts: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|e| format!("{s}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        match parts[..] {
            [a, b, c] => Ok(QuadForm::new(a, b, c)),
            _ => Err(format!("expected three coefficients in {s}")),
        }
    }
}

impl TryFrom<String> for QuadForm {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

fn mat_mul(x: &Transform, y: &Transform) -> Transform {
    let mut out = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// Reduced representative of a primitive positive definite form, with the
/// transform `t` such that `f.apply(t)` is the reduced form.
pub fn reduce_form(f: &QuadForm) -> Result<(QuadForm, Transform)> {
    let d = f.disc();
    if d >= 0 || f.a <= 0 {
        return Err(Error::NotDiscriminant(d));
    }
    if !f.is_primitive() {
        return Err(Error::ImprimitiveForm(f.to_string()));
    }
    let mut g = *f;
    let mut t: Transform = [[1, 0], [0, 1]];
    loop {
        // bring b into (-a, a]
        let k = (g.a - g.b).div_euclid(2 * g.a);
        if k != 0 {
            let s = [[1, k], [0, 1]];
            g = g.apply(&s);
            t = mat_mul(&t, &s);
        }
        if g.a > g.c || (g.a == g.c && g.b < 0) {
            let s = [[0, -1], [1, 0]];
            g = g.apply(&s);
            t = mat_mul(&t, &s);
            continue;
        }
        break;
    }
    debug_assert!(g.is_reduced());
    Ok((g, t))
}

/// Primitive reduced forms of discriminant `disc`, sorted by `(a, b)`.
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadForm>> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        return Err(Error::NotDiscriminant(disc));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(disc: i64) -> Result<usize> {
    Ok(reduced_forms(disc)?.len())
}

/// Half the number of units of the order of discriminant `disc`.
pub fn unit_factor(disc: i64) -> i64 {
    match disc {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduced_forms_of_minus_23() {
        let f = reduced_forms(-23).unwrap();
        assert_eq!(f, vec![QuadForm::new(1, 1, 6), QuadForm::new(2, -1, 3), QuadForm::new(2, 1, 3)]);
    }

    #[test]
    fn class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5), (-71, 7), (-163, 1), (-199, 9), (-167, 11), (-151, 7), (-179, 5)] {
            assert_eq!(class_number(d).unwrap(), h, "h({d})");
        }
    }

    #[test]
    fn reduce_known() {
        let (g, t) = reduce_form(&QuadForm::new(13, -17, 6)).unwrap();
        assert_eq!(g.disc(), -23);
        assert!(g.is_reduced());
        assert_eq!(QuadForm::new(13, -17, 6).apply(&t), g);
        assert!(matches!(reduce_form(&QuadForm::new(2, 2, 4)), Err(Error::ImprimitiveForm(_))));
        assert!(matches!(reduce_form(&QuadForm::new(1, 3, 1)), Err(Error::NotDiscriminant(5))));
    }

    #[test]
    fn string_round_trip() {
        let f: QuadForm = "[13,-17, 6]".parse().unwrap();
        assert_eq!(f, QuadForm::new(13, -17, 6));
        assert_eq!(serde_json::to_string(&f).unwrap(), "\"[13,-17,6]\"");
        assert!("[1,2]".parse::<QuadForm>().is_err());
    }

    #[test]
    fn b_one_mod_four() {
        for f in reduced_forms(-71).unwrap().into_iter().chain(reduced_forms(-199).unwrap()) {
            let (g, t) = f.with_b_one_mod_four();
            assert_eq!(g.b.rem_euclid(4), 1);
            assert_eq!(f.apply(&t), g);
            assert_eq!(t[0][0] * t[1][1] - t[0][1] * t[1][0], 1);
        }
    }

    proptest! {
        #[test]
        fn reduction_is_canonical(a in 1i64..40, b in -40i64..40, c in 1i64..40, p in -5i64..5, q in -5i64..5) {
            let f = QuadForm::new(a, b, c);
            prop_assume!(f.disc() < 0 && f.is_primitive());
            let (g, t) = reduce_form(&f).unwrap();
            prop_assert!(g.is_reduced());
            prop_assert_eq!(f.apply(&t), g);
            prop_assert_eq!(t[0][0] * t[1][1] - t[0][1] * t[1][0], 1);
            // an SL2 translate of f reduces to the same form
            let s: Transform = [[1 + p * q, p], [q, 1]];
            let (g2, _) = reduce_form(&f.apply(&s)).unwrap();
            prop_assert_eq!(g2, g);
            prop_assert!(reduced_forms(f.disc()).unwrap().contains(&g));
        }
    }
}
