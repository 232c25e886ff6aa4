use heckeval::arith::{hnf, is_square, kronecker, short_vectors, GramMatrix, IntMatrix};
use heckeval::quatalg::{standard_maximal_order, unit_count};
use proptest::prelude::*;
use rug::Rational;

#[test]
fn kronecker_examples() {
    assert_eq!(kronecker(1, 7), 1);
    assert_eq!(kronecker(3, 5), -1);
    assert_eq!(kronecker(-7, 11), 1);
}

#[test]
fn hnf_examples() {
    let id = IntMatrix::identity(3);
    assert_eq!(hnf(&id).unwrap().h, id);
    let m = IntMatrix::from_rows(&[vec![2i64, 0], vec![1, 1]]);
    assert_eq!(hnf(&m).unwrap().h, IntMatrix::from_rows(&[vec![1i64, 1], vec![0, 2]]));
}

#[test]
fn hnf_rejects_rank_deficient() {
    let m = IntMatrix::from_rows(&[vec![1i64, 2], vec![2, 4]]);
    assert!(hnf(&m).is_err());
}

#[test]
fn square_examples() {
    assert_eq!(is_square(81), Some(9));
    assert_eq!(is_square(12), None);
    assert_eq!(is_square(23 - 11), None);
}

#[test]
fn identity_gram_shells() {
    let g = GramMatrix::from_i64(&[vec![1, 0], vec![0, 1]]);
    assert_eq!(short_vectors(&g, &Rational::from(1)).unwrap().len(), 4);
    assert_eq!(short_vectors(&g, &Rational::from(2)).unwrap().len(), 8);
}

#[test]
fn norm_one_vectors_are_units() {
    let o = standard_maximal_order(-7).unwrap();
    let v = short_vectors(&o.gram(), &Rational::from(2)).unwrap();
    // the gram matrix is that of the trace pairing, so units have value 2
    let units = v.iter().filter(|s| s.value == 2).count() as u64;
    assert_eq!(units, unit_count(&o));
}

#[test]
fn non_definite_gram_rejected() {
    let g = GramMatrix::from_i64(&[vec![1, 2], vec![2, 1]]);
    assert!(short_vectors(&g, &Rational::from(3)).is_err());
}

fn unimodular(ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect();
    for &(i, j, k) in ops {
        if i != j {
            let src = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(src) {
                *x += k * y;
            }
        }
    }
    IntMatrix::from_rows(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kronecker_multiplicative(a in -500i64..500, b in -500i64..500, k in 0usize..40) {
        let n = 2 * k as i64 + 1;
        prop_assert_eq!(kronecker(a, n) * kronecker(b, n), kronecker(a * b, n));
    }

    #[test]
    fn hnf_invariant_under_unimodular(ops in prop::collection::vec((0usize..4, 0usize..4, -3i64..4), 0..12)) {
        let base = IntMatrix::from_rows(&[vec![2i64, 1, 0, 3], vec![0, 3, 1, 1], vec![1, 0, 5, 2], vec![0, 0, 0, 7]]);
        let h = hnf(&base).unwrap().h;
        let moved = unimodular(&ops).mul(&base);
        let r = hnf(&moved).unwrap();
        prop_assert_eq!(&r.h, &h);
        prop_assert_eq!(r.u.mul(&moved), h.clone());
        prop_assert_eq!(hnf(&h).unwrap().h, h);
    }

    #[test]
    fn short_vectors_match_box(d in prop::array::uniform3(1i64..6), off in prop::array::uniform3(-2i64..3), bound in 1i64..12) {
        let rows = vec![
            vec![2 * d[0] + 4, off[0], off[1]],
            vec![off[0], 2 * d[1] + 4, off[2]],
            vec![off[1], off[2], 2 * d[2] + 4],
        ];
        let g = GramMatrix::from_i64(&rows);
        let found = short_vectors(&g, &Rational::from(bound)).unwrap();
        let mut brute = 0;
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                for z in -4i64..=4 {
                    if (x, y, z) != (0, 0, 0) && g.eval(&[x, y, z]) <= bound {
                        brute += 1;
                    }
                }
            }
        }
        prop_assert_eq!(found.len(), brute);
        for s in &found {
            let neg: Vec<i64> = s.coords.iter().map(|c| -c).collect();
            prop_assert!(found.iter().any(|t| t.coords == neg));
        }
    }
}
