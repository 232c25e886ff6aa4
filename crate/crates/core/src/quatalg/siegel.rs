use rug::{Integer, Rational};

use super::lattice::{rat_det, rat_inverse, rat_mul, rat_transpose, QuatLattice, RatMatrix};
use super::quat::Quat;
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::quadfield::{QuadForm, ZPoint};

/// Primitive `(x, y, z)` with `x^2 + |N| y^2 = |D| z^2`: smallest `z`, then `y > 0`, then `x >= 0`.
pub fn solve_embedding(n: i64, d: i64) -> Result<(i64, i64, i64)> {
    let m = -n;
    let bound = ((m * d) as f64).sqrt() as i64 + 1;
    for z in 1..=bound {
        let mut y = 1;
        while m * y * y <= d * z * z {
            let rest = d * z * z - m * y * y;
            let x = rest.isqrt();
            if x * x == rest && gcd(gcd(x, y), z) == 1 {
                return Ok((x, y, z));
            }
            y += 1;
        }
    }
    Err(Error::SearchBound(bound))
}

/// `v = (x i + y k) / z`, trace zero, norm `|D|`, anticommuting with `j`.
pub fn embedding_element(n: i64, (x, y, z): (i64, i64, i64)) -> Quat {
    Quat::new(n, Rational::new(), Rational::from((x, z)), Rational::new(), Rational::from((y, z)))
}

/// The ideal attached to a point and a form, with its construction basis.
#[derive(Clone, Debug)]
pub struct SiegelIdeal {
    pub basis: [Quat; 4],
    pub lattice: QuatLattice,
    pub form: QuadForm,
    pub point: ZPoint,
}

impl SiegelIdeal {
    pub fn norm(&self) -> Rational {
        self.lattice.norm()
    }
}

/// `< xi a v, xi (|D| + b v)/2, (v - b)/2, a >` with `xi = (b1 - j) / (2 a1 |D|)`.
pub fn siegel_ideal(point: &ZPoint, form: &QuadForm, v: &Quat) -> Result<SiegelIdeal> {
    let n = point.n;
    if form.b % 2 == 0 || form.disc() != -point.d {
        return Err(Error::Convention(format!("form {form} must have odd middle coefficient and discriminant -{}", point.d)));
    }
    let (a, b) = (Rational::from(form.a), Rational::from(form.b));
    let d = Rational::from(point.d);
    let xi = Quat::new(n, Rational::from(point.b1), Rational::new(), Rational::from(-1), Rational::new())
        .scale(&Rational::from((1, 2 * point.a1 * point.d)));
    let half = Rational::from((1, 2));
    let g1 = xi.mul(&v.scale(&a));
    let g2 = xi.mul(&Quat::scalar(n, d).add(&v.scale(&b)).scale(&half));
    let g3 = v.sub(&Quat::scalar(n, b)).scale(&half);
    let g4 = Quat::scalar(n, a);
    let basis = [g1, g2, g3, g4];
    let lattice = QuatLattice::from_generators(n, &basis)?;
    let gens: RatMatrix = basis.iter().map(|q| q.c.to_vec()).collect();
    if rat_det(&gens).abs() != lattice.covolume() {
        return Err(Error::IncompatibleBasis("construction vectors do not form a basis".into()));
    }
    Ok(SiegelIdeal { basis, lattice, form: *form, point: *point })
}

/// Polarisation data of an ideal in a chosen basis. Matrices act on column
/// coordinate vectors; `p` and `u` are stored multiplied by `sqrt|N|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelPoint {
    pub n: i64,
    pub p_scaled: RatMatrix,
    pub j: RatMatrix,
    pub u_scaled: RatMatrix,
}

/// `P = Tr(b_i conj b_j) / (sqrt|N| Nrd I)`, `J = Tr(u^-1 b_i conj b_j) / Nrd I`,
/// and `U` the matrix of left multiplication by `u / sqrt|N|`.
pub fn siegel_point(basis: &[Quat; 4], u: &Quat, nrd: &Rational) -> Result<SiegelPoint> {
    let n = u.n;
    if u.trace() != 0 || u.mul(u) != Quat::scalar(n, n) {
        return Err(Error::Convention("u must have trace zero and square N".into()));
    }
    let uinv = u.inverse().expect("nonzero");
    let mut p = vec![vec![Rational::new(); 4]; 4];
    let mut j = vec![vec![Rational::new(); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let prod = basis[r].mul(&basis[c].conj());
            p[r][c] = Rational::from(prod.trace() / nrd);
            j[r][c] = Rational::from(uinv.mul(&prod).trace() / nrd);
            if *j[r][c].denom() != 1 {
                return Err(Error::Convention("u is not in the left order; J is not integral".into()));
            }
        }
    }
    let b: RatMatrix = basis.iter().map(|q| q.c.to_vec()).collect();
    let ub: RatMatrix = basis.iter().map(|q| u.mul(q).c.to_vec()).collect();
    let binv = rat_inverse(&b).ok_or(Error::RankDeficient)?;
    let m = rat_mul(&ub, &binv);
    Ok(SiegelPoint { n, p_scaled: p, j, u_scaled: rat_transpose(&m) })
}

fn block(m: &RatMatrix, r: usize, c: usize) -> RatMatrix {
    (0..2).map(|i| (0..2).map(|k| m[2 * r + i][2 * c + k].clone()).collect()).collect()
}

impl SiegelPoint {
    pub fn det_j(&self) -> Rational {
        rat_det(&self.j)
    }

    pub fn j_is_integral(&self) -> bool {
        self.j.iter().flatten().all(|x| *x.denom() == 1)
    }

    /// `(sqrt|N| U)^2 = N`, that is `U^2 = -1`.
    pub fn u_squared_is_minus_one(&self) -> bool {
        let sq = rat_mul(&self.u_scaled, &self.u_scaled);
        (0..4).all(|i| (0..4).all(|k| sq[i][k] == if i == k { Rational::from(self.n) } else { Rational::new() }))
    }

    /// `-J U = U^T J = P`.
    pub fn hermitian_condition(&self) -> bool {
        let ju = rat_mul(&self.j, &self.u_scaled);
        let utj = rat_mul(&rat_transpose(&self.u_scaled), &self.j);
        let neg: RatMatrix = ju.iter().map(|r| r.iter().map(|x| Rational::from(-x)).collect()).collect();
        neg == self.p_scaled && utj == self.p_scaled
    }

    /// Period matrix `X + i Y` read off the second basis block:
    /// `Y / sqrt|N| = P22^-1` and `X = P22^-1 P21` (in scaled units).
    pub fn period_matrix(&self) -> Result<(RatMatrix, RatMatrix)> {
        let p22inv = rat_inverse(&block(&self.p_scaled, 1, 1)).ok_or(Error::RankDeficient)?;
        let x = rat_mul(&p22inv, &block(&self.p_scaled, 1, 0));
        Ok((x, p22inv))
    }

    /// Whether the point is `z Q` for `z = (b1 + sqrt N)/(2 a1 |D|)` and `Q` the doubled Gram matrix of `form`.
    pub fn matches(&self, point: &ZPoint, form: &QuadForm) -> Result<bool> {
        let (x, y) = self.period_matrix()?;
        let g = form.gram2();
        let den = Integer::from(2 * point.a1 * point.d);
        let q: RatMatrix = g.iter().map(|r| r.iter().map(|&v| Rational::from((Integer::from(v), den.clone()))).collect()).collect();
        let xq: RatMatrix = q.iter().map(|r| r.iter().map(|v| Rational::from(v * point.b1)).collect()).collect();
        Ok(x == xq && y == q)
    }
}

