use rug::Rational;

use super::forms::{class_number, unit_factor};
use crate::arith::kronecker;

fn is_disc(d: i64) -> bool {
    d.rem_euclid(4) <= 1
}

/// Fundamental discriminant and conductor of the negative discriminant `d`.
pub fn fundamental_part(d: i64) -> (i64, i64) {
    assert!(d < 0 && is_disc(d), "{d} is not a negative discriminant");
    let mut f = (d.unsigned_abs().isqrt()) as i64;
    while f > 1 {
        if d % (f * f) == 0 && is_disc(d / (f * f)) {
            return (d / (f * f), f);
        }
        f -= 1;
    }
    (d, 1)
}

/// Hurwitz class number: `sum h(-n/f^2) / u(-n/f^2)` over `f^2 | n` with `-n/f^2` a discriminant.
pub fn hurwitz(n: i64) -> Rational {
    assert!(n > 0);
    let mut s = Rational::new();
    let mut f = 1i64;
    while f * f <= n {
        if n % (f * f) == 0 && is_disc(-n / (f * f)) {
            let d = -n / (f * f);
            let h = class_number(d).expect("valid discriminant") as i64;
            s += Rational::from((h, unit_factor(d)));
        }
        f += 1;
    }
    s
}

/// Local symbol `(d / p)` including `p = 2` via the mod 8 rule.
fn local_symbol(d: i64, p: i64) -> i32 {
    if p == 2 {
        match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    } else {
        kronecker(d, p)
    }
}

/// The variant `H_p(n)` counting embeddings into a maximal order of the
/// quaternion algebra ramified at the prime `p` and infinity.
pub fn hurwitz_mod(p: i64, n: i64) -> Rational {
    assert!(p > 1 && n > 0);
    let d = -n;
    if !is_disc(d) {
        return Rational::new();
    }
    let (_, f) = fundamental_part(d);
    if f % p == 0 {
        return hurwitz_mod(p, n / (p * p));
    }
    match local_symbol(d, p) {
        1 => Rational::new(),
        -1 => hurwitz(n),
        _ => hurwitz(n) / 2u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let want = [(3, (1, 3)), (4, (1, 2)), (7, (1, 1)), (8, (1, 1)), (11, (1, 1)), (12, (4, 3)), (15, (2, 1)), (16, (3, 2))];
        for (n, v) in want {
            assert_eq!(hurwitz(n), Rational::from(v), "H({n})");
        }
        assert_eq!(hurwitz(1), 0);
        assert_eq!(hurwitz(5), 0);
    }

    #[test]
    fn fundamental() {
        assert_eq!(fundamental_part(-28), (-7, 2));
        assert_eq!(fundamental_part(-12), (-3, 2));
        assert_eq!(fundamental_part(-16), (-4, 2));
        assert_eq!(fundamental_part(-163), (-163, 1));
    }

    #[test]
    fn embedding_counts_for_class_number_one() {
        // |N| = 7 mod 8: h(N); |N| = 3 mod 8: 2 h(N)
        assert_eq!(hurwitz_mod(7, 28), 1);
        for p in [11, 19, 43, 67, 163] {
            assert_eq!(hurwitz_mod(p, 4 * p), 2, "p = {p}");
        }
    }
}
