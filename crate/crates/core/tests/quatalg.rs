use std::sync::OnceLock;

use heckeval::central::Pipeline;
use heckeval::quadfield::{hurwitz_mod, reduced_forms, HeckeCharCtx, QuadForm, QuadIdeal};
use heckeval::quatalg::{
    bilateral_prime, brandt_matrix, embedding_count, embedding_element, ideal_equiv, ideal_inverse,
    is_maximal_ideal_pair, left_order, right_order, siegel_ideal, siegel_point, solve_embedding,
    standard_maximal_order, unit_count, Quat, QuatLattice,
};
use proptest::prelude::*;
use rug::Rational;

const FIELDS: [i64; 6] = [-7, -11, -19, -43, -67, -163];

fn pipelines() -> &'static Vec<Pipeline> {
    static P: OnceLock<Vec<Pipeline>> = OnceLock::new();
    P.get_or_init(|| FIELDS.iter().map(|&n| Pipeline::new(n).unwrap()).collect())
}

fn pipeline(n: i64) -> &'static Pipeline {
    pipelines().iter().find(|p| p.n == n).unwrap()
}

#[test]
fn element_arithmetic() {
    let n = -7;
    let (i, j, k) = (Quat::i(n), Quat::j(n), Quat::k(n));
    assert_eq!(j.norm(), 7);
    assert_eq!(j.trace(), 0);
    assert_eq!(i.mul(&i), Quat::scalar(n, -1));
    assert_eq!(j.mul(&j), Quat::scalar(n, n));
    assert_eq!(i.mul(&j), k);
    let q = i.scale(&Rational::from(3)).add(&k.scale(&Rational::from(2)));
    assert_eq!(q.norm(), 9 + 7 * 4);
}

#[test]
fn standard_orders() {
    for n in FIELDS {
        let o = standard_maximal_order(n).unwrap();
        assert_eq!(o.discriminant(), Rational::from(n * n));
        assert_eq!(o.norm(), 1);
        assert!(o.contains(&Quat::one(n)));
        assert_eq!(o.product(&o), o);
        assert_eq!(left_order(&o), o);
        assert_eq!(right_order(&o), o);
        assert!(is_maximal_ideal_pair(&o));
        for b in o.basis() {
            assert_eq!(*b.trace().denom(), 1);
            assert_eq!(*b.norm().denom(), 1);
        }
    }
    let half = Rational::from((1, 2));
    let o = standard_maximal_order(-11).unwrap();
    for q in [
        Quat::one(-11).add(&Quat::j(-11)).scale(&half),
        Quat::i(-11).add(&Quat::k(-11)).scale(&half),
        Quat::j(-11),
        Quat::k(-11),
    ] {
        assert!(o.contains(&q));
    }
    assert!(!o.contains(&Quat::i(-11).scale(&half)));
}

#[test]
fn class_and_type_numbers() {
    let want = [(-7, 1, 1), (-11, 2, 2), (-19, 2, 2), (-43, 4, 3), (-67, 6, 4), (-163, 14, 8)];
    for (n, h, t) in want {
        let p = pipeline(n);
        assert_eq!((p.classes.len(), p.types.len()), (h, t), "N={n}");
        assert_eq!(p.classes.mass(), Rational::from((-n - 1, 24)), "N={n}");
        assert_eq!(p.classes.label(0), "O");
        assert_eq!(p.classes.ideals[0], p.classes.order);
    }
    let sizes: Vec<usize> = pipeline(-163).types.iter().map(|g| g.len()).collect();
    assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 6);
    assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 2);
    assert_eq!(pipeline(-11).classes.unit_counts, vec![4, 6]);
    assert_eq!(pipeline(-7).classes.unit_counts, vec![4]);
}

#[test]
fn classes_are_pairwise_inequivalent() {
    for p in pipelines() {
        let s = &p.classes;
        for a in 0..s.len() {
            assert!(ideal_equiv(&s.ideals[a], &s.ideals[a]).unwrap().is_some());
            for b in 0..a {
                assert!(ideal_equiv(&s.ideals[a], &s.ideals[b]).unwrap().is_none(), "N={} {a} {b}", p.n);
            }
        }
    }
}

#[test]
fn mismatched_left_orders_rejected() {
    let s = &pipeline(-11).classes;
    let r = right_order(&s.ideals[1]);
    assert!(ideal_equiv(&s.ideals[0], &r).is_err());
}

#[test]
fn unit_counts_bounded_below() {
    for p in pipelines() {
        assert!(p.classes.unit_counts.iter().all(|&w| w >= 2 && w % 2 == 0));
        for (r, &w) in p.classes.right_orders.iter().zip(&p.classes.unit_counts) {
            assert_eq!(unit_count(r), w);
        }
    }
}

#[test]
fn bilateral_prime_swaps_paired_classes() {
    for p in pipelines() {
        let s = &p.classes;
        let bp = bilateral_prime(&s.order);
        assert_eq!(bp.norm(), Rational::from(-p.n));
        assert_eq!(left_order(&bp), s.order);
        assert_eq!(right_order(&bp), s.order);
        for (k, ideal) in s.ideals.iter().enumerate() {
            let image = s.classify(&bp.product(ideal)).unwrap();
            assert_eq!(p.type_of(image), p.type_of(k), "N={} class {k}", p.n);
            let paired = p.types[p.type_of(k)].len() == 2;
            assert_eq!(image != k, paired, "N={} class {k}", p.n);
        }
    }
}

#[test]
fn embeddings_sum_to_modified_hurwitz() {
    for p in pipelines() {
        let mut total = Rational::new();
        for g in &p.types {
            let e = embedding_count(&p.classes.right_orders[g[0]]);
            if g.len() == 2 {
                assert_eq!(e, 0, "paired type in N={}", p.n);
            }
            total += e;
        }
        assert_eq!(total, hurwitz_mod(-p.n, -4 * p.n), "N={}", p.n);
    }
}

#[test]
fn brandt_matrices() {
    for n in [-11, -43, -163] {
        let s = &pipeline(n).classes;
        let h = s.len();
        let w: Vec<Rational> = s.unit_counts.iter().map(|&u| Rational::from(u)).collect();
        let b1 = brandt_matrix(1, s);
        for i in 0..h {
            for j in 0..h {
                assert_eq!(b1[i][j], if i == j { 1 } else { 0 }, "N={n} B(1)");
            }
        }
        let b2 = brandt_matrix(2, s);
        let b3 = brandt_matrix(3, s);
        for i in 0..h {
            let row: Rational = b2[i].iter().sum();
            assert_eq!(row, 3, "N={n} row {i}");
            for j in 0..h {
                assert_eq!(Rational::from(&w[j] * &b2[i][j]), Rational::from(&w[i] * &b2[j][i]), "N={n} ({i},{j})");
                assert_eq!(*b2[i][j].denom(), 1);
            }
        }
        let mul = |x: &Vec<Vec<Rational>>, y: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
            (0..h).map(|i| (0..h).map(|j| (0..h).map(|k| Rational::from(&x[i][k] * &y[k][j])).sum()).collect()).collect()
        };
        assert_eq!(mul(&b2, &b3), mul(&b3, &b2), "N={n}");
    }
}

#[test]
fn embedding_solutions() {
    assert_eq!(solve_embedding(-7, 11).unwrap(), (2, 1, 1));
    assert_eq!(solve_embedding(-7, 23).unwrap(), (4, 1, 1));
    assert_eq!(solve_embedding(-11, 23).unwrap(), (9, 1, 2));
    for (n, d) in [(-7, 71), (-11, 47), (-163, 151), (-163, 199)] {
        let (x, y, z) = solve_embedding(n, d).unwrap();
        assert_eq!(x * x - n * y * y, d * z * z);
        let v = embedding_element(n, (x, y, z));
        assert_eq!(v.norm(), d);
        assert_eq!(v.trace(), 0);
        assert_eq!(Quat::j(n).mul(&v.conj()).trace(), 0);
    }
}

fn check_siegel(n: i64, d: i64) {
    let ctx = HeckeCharCtx::new(n, d).unwrap();
    let zp = ctx.z_point(&QuadIdeal::unit(n)).unwrap();
    let v = embedding_element(n, solve_embedding(n, d).unwrap());
    let one_j = Quat::one(n).add(&Quat::j(n)).scale(&Rational::from((1, 2)));
    for f in reduced_forms(-d).unwrap() {
        let (g, _) = f.with_b_one_mod_four();
        let si = siegel_ideal(&zp, &g, &v).unwrap();
        let lo = left_order(&si.lattice);
        assert!(is_maximal_ideal_pair(&si.lattice), "N={n} |D|={d} {g}");
        let av = v.scale(&Rational::from(zp.a1));
        assert!(lo.contains(&one_j) && lo.contains(&av));
        let sub = QuatLattice::from_generators(n, &[Quat::one(n), one_j.clone(), av.clone(), one_j.mul(&av)]).unwrap();
        assert!(lo.contains_lattice(&sub));
        assert_eq!(Rational::from(sub.covolume() / lo.covolume()), Rational::from(zp.a1 * zp.a1 * d));
        let sp = siegel_point(&si.basis, &Quat::j(n).neg(), &si.norm()).unwrap();
        assert_eq!(sp.det_j(), 1);
        assert!(sp.j_is_integral());
        assert!(sp.u_squared_is_minus_one());
        assert!(sp.hermitian_condition());
        assert!(sp.matches(&zp, &g).unwrap(), "N={n} |D|={d} {g}");
    }
}

#[test]
fn siegel_construction_invariants() {
    for (n, d) in [(-7, 11), (-7, 71), (-11, 23), (-11, 47), (-163, 151), (-163, 199)] {
        check_siegel(n, d);
    }
}

#[test]
fn siegel_ideal_rejects_bad_forms() {
    let ctx = HeckeCharCtx::new(-7, 11).unwrap();
    let zp = ctx.z_point(&QuadIdeal::unit(-7)).unwrap();
    let v = embedding_element(-7, solve_embedding(-7, 11).unwrap());
    assert!(siegel_ideal(&zp, &QuadForm::new(1, 1, 2), &v).is_err());
    assert!(siegel_ideal(&zp, &QuadForm::new(1, 1, 3), &v).is_ok());
}

#[test]
fn siegel_point_needs_u_in_left_order() {
    let o = standard_maximal_order(-7).unwrap();
    let b = o.basis();
    let basis = [b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()];
    assert!(siegel_point(&basis, &Quat::i(-7), &Rational::from(1)).is_err());
    assert!(siegel_point(&basis, &Quat::j(-7).neg(), &Rational::from(1)).is_ok());
}

#[test]
fn form_classes_minus_eleven() {
    let p = pipeline(-11);
    let ctx = HeckeCharCtx::new(-11, 23).unwrap();
    let label = |f: QuadForm| p.classes.label(p.class_of_form(&ctx, &f).unwrap()).to_string();
    assert_eq!(label(QuadForm::new(1, -1, 6)), "I1");
    assert_eq!(label(QuadForm::new(13, 17, 6)), "O");
    let ctx = HeckeCharCtx::new(-7, 11).unwrap();
    assert_eq!(pipeline(-7).class_of_form(&ctx, &QuadForm::new(1, 1, 3)).unwrap(), 0);
}

fn order_element(o: &QuatLattice, c: [i64; 4]) -> Quat {
    o.element(&c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn ideal_invariants(a in prop::array::uniform4(-4i64..5), b in prop::array::uniform4(-4i64..5), k in 0usize..14) {
        for p in pipelines() {
            let s = &p.classes;
            let o = &s.order;
            let alpha = order_element(o, a);
            let beta = order_element(o, b);
            prop_assume!(!alpha.is_zero() && !beta.is_zero());
            // principal ideals
            let oa = o.right_mul(&alpha).unwrap();
            prop_assert_eq!(&left_order(&oa), o);
            prop_assert_eq!(oa.norm(), alpha.norm());
            prop_assert!(is_maximal_ideal_pair(&oa));
            prop_assert_eq!(oa.discriminant(), Rational::from(p.n * p.n) * Rational::from(alpha.norm().square_ref()).square());
            prop_assert_eq!(oa.right_mul(&beta).unwrap(), o.right_mul(&alpha.mul(&beta)).unwrap());
            // class representatives moved by alpha keep their left order
            let rep = &s.ideals[k % s.len()];
            let moved = rep.right_mul(&alpha).unwrap();
            prop_assert_eq!(left_order(&moved), left_order(rep));
            prop_assert_eq!(s.classify(&moved).unwrap(), k % s.len());
            // I I^-1 = O for an invertible ideal
            prop_assert_eq!(&moved.product(&ideal_inverse(&moved)), o);
            // a non-principal ideal O alpha + O m
            let m = alpha.norm();
            let i = oa.sum(&o.scale(&m));
            prop_assert_eq!(&left_order(&i), o);
            prop_assert!(is_maximal_ideal_pair(&i));
            let idx = s.classify(&i).unwrap();
            let w = ideal_equiv(&i, &s.ideals[idx]).unwrap().unwrap();
            prop_assert_eq!(s.ideals[idx].right_mul(&w).unwrap(), i.clone());
            // the canonical basis does not depend on the generating set
            let mut gens = i.basis();
            gens.reverse();
            gens.push(beta.mul(&alpha));
            prop_assert_eq!(QuatLattice::from_generators(p.n, &gens).unwrap(), i);
        }
    }
}
