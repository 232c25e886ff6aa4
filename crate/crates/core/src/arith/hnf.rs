use std::fmt;
use std::ops::{Index, IndexMut};

use rug::Integer;

use crate::error::{Error, Result};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Integer::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Integer::from(1);
        }
        m
    }

    pub fn from_rows<T: Into<Integer> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Integer>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> Integer {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return Integer::new();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = Integer::from(&a[(i, j)] * &a[(k, k)]) - Integer::from(&a[(i, k)] * &a[(k, j)]);
                    a[(i, j)] = v.div_exact(&prev);
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            return Integer::from(1);
        }
        prev * sign
    }

    pub fn gcd_of_entries(&self) -> Integer {
        self.data.iter().fold(Integer::new(), |g, x| g.gcd(x))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[dst] -= q * row[src]`
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &Integer) {
        for j in 0..self.cols {
            let t = Integer::from(q * &self.data[src * self.cols + j]);
            self.data[dst * self.cols + j] -= t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            *v = Integer::from(-&*v);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = Integer;
    fn index(&self, (i, j): (usize, usize)) -> &Integer {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Integer {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Row Hermite normal form `h = u * m` of an `r x c` matrix with `r >= c`.
///
/// The first `c` rows of `h` are upper triangular with positive pivots and
/// entries above each pivot reduced into `[0, pivot)`; the remaining rows are
/// zero. `u` is unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

pub fn hnf(m: &IntMatrix) -> Result<Hnf> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    for col in 0..cols {
        let p = col;
        loop {
            // row below p with the smallest nonzero entry in this column
            let best = (p..rows)
                .filter(|&r| !a[(r, col)].is_zero())
                .min_by(|&x, &y| a[(x, col)].cmp_abs(&a[(y, col)]));
            let Some(best) = best else {
                return Err(Error::RankDeficient);
            };
            a.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut done = true;
            for r in p + 1..rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let q = floor_div(&a[(r, col)], &a[(p, col)]);
                a.sub_row_multiple(r, p, &q);
                u.sub_row_multiple(r, p, &q);
                if !a[(r, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(p, col)] < 0 {
            a.negate_row(p);
            u.negate_row(p);
        }
        for r in 0..p {
            let q = floor_div(&a[(r, col)], &a[(p, col)]);
            if !q.is_zero() {
                a.sub_row_multiple(r, p, &q);
                u.sub_row_multiple(r, p, &q);
            }
        }
    }
    Ok(Hnf { h: a, u })
}

/// The `c x c` basis block of the Hermite normal form.
pub fn hnf_basis(m: &IntMatrix) -> Result<IntMatrix> {
    let Hnf { h, .. } = hnf(m)?;
    let c = h.cols;
    Ok(IntMatrix { rows: c, cols: c, data: h.data[..c * c].to_vec() })
}

fn floor_div(a: &Integer, b: &Integer) -> Integer {
    <(Integer, Integer)>::from(a.div_rem_floor_ref(b)).0
}
