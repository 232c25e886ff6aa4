use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Symmetric rational matrix defining the quadratic form `Q(x) = x^T G x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    n: usize,
    data: Vec<Rational>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "Gram matrix must be square");
            for j in 0..i {
                assert_eq!(rows[i][j], rows[j][i], "Gram matrix must be symmetric");
            }
        }
        GramMatrix { n, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from(x)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n + j]
    }

    pub fn eval(&self, x: &[i64]) -> Rational {
        let mut s = Rational::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if x[i] != 0 && x[j] != 0 {
                    s += Rational::from(self.get(i, j) * Integer::from(x[i] * x[j]));
                }
            }
        }
        s
    }

    /// Exact LDL^T pivots and multipliers: `Q(x) = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2`.
    fn cholesky(&self) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
        let n = self.n;
        let mut q: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        for i in 0..n {
            if q[i][i] <= 0 {
                return Err(Error::NotPositiveDefinite);
            }
            for j in i + 1..n {
                q[j][i] = q[i][j].clone();
                q[i][j] = Rational::from(&q[i][j] / &q[i][i]);
            }
            for k in i + 1..n {
                for l in k..n {
                    let t = Rational::from(&q[k][i] * &q[i][l]);
                    q[k][l] -= t;
                }
            }
        }
        let d = (0..n).map(|i| q[i][i].clone()).collect();
        let mu = (0..n).map(|i| (0..n).map(|j| if j > i { q[i][j].clone() } else { Rational::new() }).collect()).collect();
        Ok((d, mu))
    }

    /// Diagonal pivots of the exact LDL^T factorisation.
    pub fn pivots(&self) -> Result<Vec<Rational>> {
        Ok(self.cholesky()?.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortVector {
    pub coords: Vec<i64>,
    pub value: Rational,
}

/// All nonzero `x` with `x^T G x <= bound`, with their exact values.
///
/// Both `x` and `-x` are returned. Coordinate ranges come from floating
/// point square roots widened by one; membership is decided exactly.
pub fn short_vectors(g: &GramMatrix, bound: &Rational) -> Result<Vec<ShortVector>> {
    let (d, mu) = g.cholesky()?;
    let n = g.n;
    let mut out = Vec::new();
    if *bound <= 0 || n == 0 {
        return Ok(out);
    }
    let mut x = vec![0i64; n];
    recurse(n - 1, &d, &mu, bound.clone(), &mut x, bound, &mut out);
    Ok(out)
}

fn recurse(
    i: usize,
    d: &[Rational],
    mu: &[Vec<Rational>],
    rem: Rational,
    x: &mut Vec<i64>,
    bound: &Rational,
    out: &mut Vec<ShortVector>,
) {
    let n = x.len();
    let mut c = Rational::new();
    for j in i + 1..n {
        if x[j] != 0 {
            c += Rational::from(&mu[i][j] * x[j]);
        }
    }
    let r = (rem.to_f64() / d[i].to_f64()).max(0.0).sqrt();
    let cf = c.to_f64();
    let lo = (-cf - r).floor() as i64 - 1;
    let hi = (-cf + r).ceil() as i64 + 1;
    for xi in lo..=hi {
        let s = Rational::from(&c + xi);
        let t = Rational::from(&d[i] * Rational::from(s.square_ref()));
        if t > rem {
            continue;
        }
        x[i] = xi;
        let left = Rational::from(&rem - &t);
        if i == 0 {
            if x.iter().any(|&v| v != 0) {
                out.push(ShortVector { coords: x.clone(), value: Rational::from(bound - &left) });
            }
        } else {
            recurse(i - 1, d, mu, left, x, bound, out);
        }
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(g: &GramMatrix, bound: i64, box_: i64) -> Vec<Vec<i64>> {
        let n = g.dim();
        let mut res = Vec::new();
        let total = (2 * box_ + 1).pow(n as u32);
        for mut k in 0..total {
            let mut x = vec![0i64; n];
            for xi in x.iter_mut() {
                *xi = k % (2 * box_ + 1) - box_;
                k /= 2 * box_ + 1;
            }
            if x.iter().any(|&v| v != 0) && g.eval(&x) <= bound {
                res.push(x);
            }
        }
        res.sort();
        res
    }

    #[test]
    fn binary_form_counts() {
        // x^2 + xy + 2y^2 (doubled Gram): representations of 2 are +-(0,1), +-(1,-1)... 
        let g = GramMatrix::new(vec![
            vec![Rational::from(1), Rational::from((1, 2))],
            vec![Rational::from((1, 2)), Rational::from(2)],
        ]);
        let v = short_vectors(&g, &Rational::from(1)).unwrap();
        assert_eq!(v.len(), 2);
        let v = short_vectors(&g, &Rational::from(2)).unwrap();
        // values 1 (x2), 2 (x4)
        assert_eq!(v.len(), 6);
        for sv in &v {
            assert_eq!(sv.value, g.eval(&sv.coords));
        }
    }

    #[test]
    fn not_positive_definite() {
        let g = GramMatrix::from_i64(&[vec![1, 2], vec![2, 1]]);
        assert!(matches!(short_vectors(&g, &Rational::from(5)), Err(Error::NotPositiveDefinite)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_brute_force(a in 1i64..6, b in -3i64..4, c in 1i64..6, e in 1i64..5, f in -2i64..3, bound in 1i64..25) {
            // 3x3 form built as L^T D L style to keep it definite
            let rows = vec![
                vec![a * a + 1, a * b, f],
                vec![a * b, b * b + c, e],
                vec![f, e, e * e + f * f + 4],
            ];
            let g = GramMatrix::from_i64(&rows);
            prop_assume!(g.pivots().is_ok());
            let mut got: Vec<Vec<i64>> = short_vectors(&g, &Rational::from(bound)).unwrap().into_iter().map(|s| s.coords).collect();
            got.sort();
            prop_assert_eq!(got, brute(&g, bound, 12));
        }
    }
}
