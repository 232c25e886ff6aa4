use rug::Rational;

use super::lattice::QuatLattice;
use super::quat::Quat;
use crate::arith::short_vectors;
use crate::error::{Error, Result};

/// The maximal order `<(1 + j)/2, (i + k)/2, j, k>` of `(-1, N)`.
pub fn standard_maximal_order(n: i64) -> Result<QuatLattice> {
    if n >= 0 || n.rem_euclid(4) != 1 {
        return Err(Error::UnsupportedField(n));
    }
    let h = Rational::from((1, 2));
    let z = Rational::new;
    QuatLattice::from_generators(
        n,
        &[
            Quat::new(n, h.clone(), z(), h.clone(), z()),
            Quat::new(n, z(), h.clone(), z(), h.clone()),
            Quat::j(n),
            Quat::k(n),
        ],
    )
}

/// `{x : x L in L}`, as the intersection of `L b^-1` over a basis `b` of `L`.
pub fn left_order(l: &QuatLattice) -> QuatLattice {
    l.basis()
        .iter()
        .map(|b| l.right_mul(&b.inverse().expect("nonzero basis vector")).expect("full rank"))
        .reduce(|a, b| a.intersection(&b))
        .expect("four basis vectors")
}

/// `{x : L x in L}`
pub fn right_order(l: &QuatLattice) -> QuatLattice {
    l.basis()
        .iter()
        .map(|b| l.left_mul(&b.inverse().expect("nonzero basis vector")).expect("full rank"))
        .reduce(|a, b| a.intersection(&b))
        .expect("four basis vectors")
}

/// Whether `L` is a locally principal ideal of a maximal order: `disc(L) = N^2 Nrd(L)^4`.
pub fn is_maximal_ideal_pair(l: &QuatLattice) -> bool {
    let nm = l.norm();
    let n2 = Rational::from(l.n() * l.n());
    let nm2 = Rational::from(nm.square_ref());
    l.discriminant() == n2 * Rational::from(nm2.square_ref())
}

/// Elements of `L` with reduced norm exactly `target`.
pub(crate) fn elements_of_norm(l: &QuatLattice, target: &Rational) -> Result<Vec<Quat>> {
    let bound = Rational::from(target * 2u32);
    Ok(short_vectors(&l.gram(), &bound)?
        .into_iter()
        .filter(|v| v.value == bound)
        .map(|v| l.element(&v.coords))
        .collect())
}

/// Number of units of an order, including `+-1`.
pub fn unit_count(o: &QuatLattice) -> u64 {
    elements_of_norm(o, &Rational::from(1)).expect("definite").len() as u64
}

/// `#{beta in R : Tr beta = 0, Nrd beta = |N|} / #R^x`.
pub fn embedding_count(r: &QuatLattice) -> Rational {
    let target = Rational::from(-r.n());
    let betas = elements_of_norm(r, &target).expect("definite");
    let count = betas.iter().filter(|b| b.trace() == 0).count();
    Rational::from((count as u64, unit_count(r)))
}

/// The two-sided prime of norm `|N|`, `|N|` times the trace dual of `o`.
pub fn bilateral_prime(o: &QuatLattice) -> QuatLattice {
    o.trace_dual().scale(&Rational::from(-o.n()))
}
