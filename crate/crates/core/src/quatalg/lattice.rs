use std::fmt;

use rug::{Integer, Rational};

use super::quat::Quat;
use crate::arith::{hnf_basis, GramMatrix, IntMatrix};
use crate::error::{Error, Result};

/// Full rank lattice in the algebra, stored as `basis / denom` with `basis`
/// in row Hermite normal form and `gcd(basis, denom) = 1`.
///
/// The stored form is canonical, so structural equality is lattice equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuatLattice {
    n: i64,
    basis: IntMatrix,
    denom: Integer,
}

pub(crate) type RatMatrix = Vec<Vec<Rational>>;

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
pub(crate) fn rat_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.clone();
    let mut inv: RatMatrix = (0..n).map(|i| (0..n).map(|j| Rational::from(u32::from(i == j))).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = Rational::from(&f * &a[col][j]);
                    a[r][j] -= t;
                    let t = Rational::from(&f * &inv[col][j]);
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

pub(crate) fn rat_det(m: &RatMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::from(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r][col] != 0) else {
            return Rational::new();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if a[r][col] != 0 {
                let f = Rational::from(&a[r][col] / &a[col][col]);
                for j in col..n {
                    let t = Rational::from(&f * &a[col][j]);
                    a[r][j] -= t;
                }
            }
        }
    }
    det
}

pub(crate) fn rat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Rational::new(), |s, l| s + Rational::from(&a[i][l] * &b[l][j]))).collect())
        .collect()
}

pub(crate) fn rat_transpose(a: &RatMatrix) -> RatMatrix {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j].clone()).collect()).collect()
}

fn rational_gcd<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num = Integer::new();
    let mut den = Integer::from(1);
    for x in xs {
        num.gcd_mut(x.numer());
        den.lcm_mut(x.denom());
    }
    Rational::from((num, den))
}

impl QuatLattice {
    /// The lattice spanned by `gens`, which must have rank four.
    pub fn from_generators(n: i64, gens: &[Quat]) -> Result<Self> {
        let mut denom = Integer::from(1);
        for g in gens {
            debug_assert_eq!(g.n, n);
            denom.lcm_mut(&g.denominator());
        }
        let rows: Vec<Vec<Integer>> = gens
            .iter()
            .map(|g| g.c.iter().map(|x| Rational::from(x * &denom).into_numer_denom().0).collect())
            .collect();
        if rows.len() < 4 {
            return Err(Error::RankDeficient);
        }
        let basis = hnf_basis(&IntMatrix::from_rows(&rows))?;
        Ok(Self::normalised(n, basis, denom))
    }

    fn normalised(n: i64, basis: IntMatrix, denom: Integer) -> Self {
        let g = basis.gcd_of_entries().gcd(&denom);
        if g == 1 {
            return QuatLattice { n, basis, denom };
        }
        let rows: Vec<Vec<Integer>> = basis.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.div_exact(&g)).collect()).collect();
        QuatLattice { n, basis: IntMatrix::from_rows(&rows), denom: denom.div_exact(&g) }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn basis(&self) -> Vec<Quat> {
        (0..4)
            .map(|i| {
                let r = self.basis.row(i);
                Quat::from_coords(self.n, std::array::from_fn(|j| Rational::from((r[j].clone(), self.denom.clone()))))
            })
            .collect()
    }

    /// Basis rows as rational coordinate vectors.
    pub fn basis_matrix(&self) -> RatMatrix {
        self.basis().into_iter().map(|q| q.c.to_vec()).collect()
    }

    fn from_rational_rows(n: i64, rows: &RatMatrix) -> Result<Self> {
        let gens: Vec<Quat> = rows.iter().map(|r| Quat::from_coords(n, std::array::from_fn(|j| r[j].clone()))).collect();
        Self::from_generators(n, &gens)
    }

    /// Integer coordinates of `q` in the stored basis, if `q` lies in the lattice.
    pub fn coords_of(&self, q: &Quat) -> Option<[Integer; 4]> {
        let mut w: Vec<Integer> = Vec::with_capacity(4);
        for x in &q.c {
            let s = Rational::from(x * &self.denom);
            if *s.denom() != 1 {
                return None;
            }
            w.push(s.numer().clone());
        }
        // basis is upper triangular: coordinate i is fixed by column i
        let mut c: [Integer; 4] = Default::default();
        for i in 0..4 {
            let mut rest = w[i].clone();
            for k in 0..i {
                rest -= Integer::from(&c[k] * &self.basis[(k, i)]);
            }
            let (q, r) = rest.div_rem_floor(self.basis[(i, i)].clone());
            if r != 0 {
                return None;
            }
            c[i] = q;
        }
        Some(c)
    }

    pub fn contains(&self, q: &Quat) -> bool {
        self.coords_of(q).is_some()
    }

    pub fn contains_lattice(&self, other: &QuatLattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, o: &QuatLattice) -> QuatLattice {
        let mut g = self.basis();
        g.extend(o.basis());
        Self::from_generators(self.n, &g).expect("sum of full rank lattices")
    }

    pub fn product(&self, o: &QuatLattice) -> QuatLattice {
        let (a, b) = (self.basis(), o.basis());
        let g: Vec<Quat> = a.iter().flat_map(|x| b.iter().map(move |y| x.mul(y))).collect();
        Self::from_generators(self.n, &g).expect("product of full rank lattices")
    }

    /// `q * L`
    pub fn left_mul(&self, q: &Quat) -> Result<QuatLattice> {
        let g: Vec<Quat> = self.basis().iter().map(|b| q.mul(b)).collect();
        Self::from_generators(self.n, &g)
    }

    /// `L * q`
    pub fn right_mul(&self, q: &Quat) -> Result<QuatLattice> {
        let g: Vec<Quat> = self.basis().iter().map(|b| b.mul(q)).collect();
        Self::from_generators(self.n, &g)
    }

    pub fn scale(&self, s: &Rational) -> QuatLattice {
        let g: Vec<Quat> = self.basis().iter().map(|b| b.scale(s)).collect();
        Self::from_generators(self.n, &g).expect("nonzero scale")
    }

    pub fn conj(&self) -> QuatLattice {
        let g: Vec<Quat> = self.basis().iter().map(Quat::conj).collect();
        Self::from_generators(self.n, &g).expect("conjugate lattice")
    }

    /// Dual with respect to the standard coordinate pairing.
    fn coordinate_dual(&self) -> QuatLattice {
        let inv = rat_inverse(&self.basis_matrix()).expect("full rank");
        Self::from_rational_rows(self.n, &rat_transpose(&inv)).expect("dual of full rank lattice")
    }

    pub fn intersection(&self, o: &QuatLattice) -> QuatLattice {
        self.coordinate_dual().sum(&o.coordinate_dual()).coordinate_dual()
    }

    /// Dual with respect to the trace form `Tr(x conj y)`.
    pub fn trace_dual(&self) -> QuatLattice {
        let g = self.gram_rows();
        let inv = rat_inverse(&g).expect("nondegenerate");
        let rows = rat_mul(&inv, &self.basis_matrix());
        Self::from_rational_rows(self.n, &rows).expect("trace dual")
    }

    fn gram_rows(&self) -> RatMatrix {
        let b = self.basis();
        (0..4).map(|i| (0..4).map(|j| b[i].pair(&b[j])).collect()).collect()
    }

    /// Gram matrix of `Tr(x conj y) = 2 Nrd` on the stored basis.
    pub fn gram(&self) -> GramMatrix {
        GramMatrix::new(self.gram_rows())
    }

    /// Reduced norm: the positive generator of the norms of lattice elements.
    pub fn norm(&self) -> Rational {
        let b = self.basis();
        let mut vals: Vec<Rational> = b.iter().map(Quat::norm).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                vals.push(b[i].pair(&b[j]));
            }
        }
        rational_gcd(&vals)
    }

    /// `|det(Tr(b_i conj b_j))|`
    pub fn discriminant(&self) -> Rational {
        rat_det(&self.gram_rows()).abs()
    }

    /// Index-like volume `det(basis)`, positive.
    pub fn covolume(&self) -> Rational {
        rat_det(&self.basis_matrix()).abs()
    }

    /// Element of the lattice from integer coordinates in the stored basis.
    pub fn element(&self, coords: &[i64]) -> Quat {
        let b = self.basis();
        let mut q = Quat::scalar(self.n, 0);
        for (c, bi) in coords.iter().zip(&b) {
            if *c != 0 {
                q = q.add(&bi.scale(&Rational::from(*c)));
            }
        }
        q
    }

    /// `p/q` strings of the basis rows.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.basis().iter().map(|b| b.c.iter().map(|x| x.to_string()).collect()).collect()
    }
}

impl fmt::Debug for QuatLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.basis()).finish()
    }
}
