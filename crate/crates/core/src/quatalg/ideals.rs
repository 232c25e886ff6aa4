use std::collections::VecDeque;

use rug::Rational;

use super::lattice::QuatLattice;
use super::order::{bilateral_prime, elements_of_norm, left_order, right_order, unit_count};
use super::quat::Quat;
use crate::error::{Error, Result};

/// `I^-1 = conj(I) / Nrd(I)` for an invertible ideal.
pub fn ideal_inverse(i: &QuatLattice) -> QuatLattice {
    i.conj().scale(&Rational::from(i.norm().recip_ref()))
}

/// `alpha` with `I = J alpha`, assuming equal left orders.
fn equiv_witness(i: &QuatLattice, j: &QuatLattice) -> Option<Quat> {
    let target = Rational::from(i.norm() / j.norm());
    let l = ideal_inverse(j).product(i);
    elements_of_norm(&l, &target)
        .expect("definite")
        .into_iter()
        .find(|a| j.right_mul(a).map(|ja| &ja == i).unwrap_or(false))
}

/// Witness `alpha` with `I = J alpha` if the left ideals `I`, `J` are equivalent.
pub fn ideal_equiv(i: &QuatLattice, j: &QuatLattice) -> Result<Option<Quat>> {
    if left_order(i) != left_order(j) {
        return Err(Error::MismatchedOrders);
    }
    Ok(equiv_witness(i, j))
}

/// Representatives of the left ideal classes of a maximal order.
#[derive(Clone, Debug)]
pub struct ClassSet {
    pub order: QuatLattice,
    pub ideals: Vec<QuatLattice>,
    pub labels: Vec<String>,
    pub unit_counts: Vec<u64>,
    pub right_orders: Vec<QuatLattice>,
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    /// `sum 1 / #R_i^x`
    pub fn mass(&self) -> Rational {
        self.unit_counts.iter().map(|&w| Rational::from((1, w))).sum()
    }

    /// Index of the class of a left ideal of the base order.
    pub fn classify(&self, i: &QuatLattice) -> Result<usize> {
        if left_order(i) != self.order {
            return Err(Error::MismatchedOrders);
        }
        self.ideals
            .iter()
            .position(|j| equiv_witness(i, j).is_some())
            .ok_or_else(|| Error::identity("class set completeness", "ideal equivalent to no representative"))
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.labels[idx]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Left ideals `p I + I x` of norm `p Nrd(I)` for `x` in the right order.
fn neighbours(i: &QuatLattice, p: i64) -> Vec<QuatLattice> {
    let r = right_order(i);
    let rb = r.basis();
    let pi = i.scale(&Rational::from(p));
    let mut out: Vec<QuatLattice> = Vec::new();
    let total = p.pow(4);
    for mut code in 1..total {
        let mut x = Quat::scalar(i.n(), 0);
        for b in &rb {
            let c = code % p;
            code /= p;
            if c != 0 {
                x = x.add(&b.scale(&Rational::from(c)));
            }
        }
        let nm = x.norm();
        if *nm.denom() != 1 || !nm.numer().is_divisible(&rug::Integer::from(p)) {
            continue;
        }
        let j = pi.sum(&i.right_mul(&x).expect("nonzero"));
        if !out.contains(&j) {
            out.push(j);
        }
    }
    out
}

/// Breadth-first search over 2-neighbours, deduplicated by equivalence, until
/// the mass `sum 1/#R_i^x = (|N| - 1)/24` is reached.
pub fn class_set(o: &QuatLattice) -> Result<ClassSet> {
    let n = o.n();
    let target = Rational::from((-n - 1, 24));
    let p = 2;
    let mut ideals = vec![o.clone()];
    let mut units = vec![unit_count(o)];
    let mut rights = vec![o.clone()];
    let mut mass = Rational::from((1, units[0]));
    let mut queue = VecDeque::from([0usize]);
    while mass < target {
        let Some(k) = queue.pop_front() else {
            return Err(Error::MassNotReached { found: mass.to_string(), expected: target.to_string() });
        };
        for j in neighbours(&ideals[k], p) {
            if mass >= target {
                break;
            }
            if ideals.iter().any(|r| equiv_witness(&j, r).is_some()) {
                continue;
            }
            let r = right_order(&j);
            let w = unit_count(&r);
            mass += Rational::from((1, w));
            ideals.push(j);
            units.push(w);
            rights.push(r);
            queue.push_back(ideals.len() - 1);
        }
    }
    if mass != target {
        return Err(Error::MassNotReached { found: mass.to_string(), expected: target.to_string() });
    }
    let labels = (0..ideals.len()).map(|i| if i == 0 { "O".to_string() } else { format!("I{i}") }).collect();
    Ok(ClassSet { order: o.clone(), ideals, labels, unit_counts: units, right_orders: rights })
}

/// Whether two maximal orders are conjugate: the connecting ideal `R R'`, or
/// its product with the bilateral prime of `R`, is principal.
pub fn orders_conjugate(r1: &QuatLattice, r2: &QuatLattice) -> bool {
    if r1 == r2 {
        return true;
    }
    let c = r1.product(r2);
    if equiv_witness(&c, r1).is_some() {
        return true;
    }
    let pc = bilateral_prime(r1).product(&c);
    equiv_witness(&pc, r1).is_some()
}

/// Classes grouped by conjugacy of their right orders; the number of groups is the type number.
pub fn type_partition(s: &ClassSet) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..s.len() {
        match groups.iter_mut().find(|g| orders_conjugate(&s.right_orders[g[0]], &s.right_orders[i])) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

/// `B(m)_ij = #{alpha in I_j^-1 I_i : Nrd alpha = m Nrd(I_i)/Nrd(I_j)} / #R_j^x`.
pub fn brandt_matrix(m: i64, s: &ClassSet) -> Vec<Vec<Rational>> {
    let h = s.len();
    let inverses: Vec<QuatLattice> = s.ideals.iter().map(ideal_inverse).collect();
    (0..h)
        .map(|i| {
            (0..h)
                .map(|j| {
                    let l = inverses[j].product(&s.ideals[i]);
                    let t = Rational::from(s.ideals[i].norm() / s.ideals[j].norm()) * m;
                    let c = elements_of_norm(&l, &t).expect("definite").len() as u64;
                    Rational::from((c, s.unit_counts[j]))
                })
                .collect()
        })
        .collect()
}
