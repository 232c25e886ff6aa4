use heckeval::arith::kronecker;
use heckeval::quadfield::{
    canonical_ideal_above, class_number, hurwitz, hurwitz_mod, reduce_form, reduced_forms, split_prime_norms,
    unit_factor, HeckeCharCtx, QuadElem, QuadForm, QuadIdeal,
};
use proptest::prelude::*;
use rug::Rational;

fn f(a: i64, b: i64, c: i64) -> QuadForm {
    QuadForm::new(a, b, c)
}

#[test]
fn reduced_form_lists() {
    assert_eq!(reduced_forms(-7).unwrap(), vec![f(1, 1, 2)]);
    assert_eq!(reduced_forms(-11).unwrap(), vec![f(1, 1, 3)]);
    assert_eq!(reduced_forms(-23).unwrap(), vec![f(1, 1, 6), f(2, -1, 3), f(2, 1, 3)]);
    assert!(reduced_forms(-5).is_err());
}

#[test]
fn reduction_of_table_forms() {
    let (r, t) = reduce_form(&f(1, 1, 2)).unwrap();
    assert_eq!(r, f(1, 1, 2));
    assert_eq!(t, [[1, 0], [0, 1]]);
    for g in [f(13, 17, 6), f(43, 141, 116), f(29, 9, 2), f(131, 453, 392)] {
        let (r, t) = reduce_form(&g).unwrap();
        assert!(r.is_reduced());
        assert_eq!(r.disc(), g.disc());
        assert_eq!(g.apply(&t), r);
        assert_eq!(t[0][0] * t[1][1] - t[0][1] * t[1][0], 1);
        assert!(reduced_forms(g.disc()).unwrap().contains(&r));
    }
    assert!(reduce_form(&f(2, 2, 4)).is_err());
}

#[test]
fn class_numbers_and_units() {
    assert_eq!(class_number(-7).unwrap(), 1);
    assert_eq!(class_number(-23).unwrap(), 3);
    assert_eq!(class_number(-71).unwrap(), 7);
    assert_eq!(unit_factor(-7), 1);
    assert_eq!(unit_factor(-4), 2);
    assert_eq!(unit_factor(-3), 3);
}

/// Counts reduced triples directly, without going through the library's enumeration.
fn brute_class_number(disc: i64) -> usize {
    let mut count = 0;
    for a in 1..=disc.abs() {
        for b in -a..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || heckeval::arith::gcd(heckeval::arith::gcd(a, b), c) != 1 {
                continue;
            }
            if b < 0 && (b == -a || a == c) {
                continue;
            }
            count += 1;
        }
    }
    count
}

#[test]
fn class_numbers_against_brute_force() {
    for disc in [-7, -11, -19, -23, -43, -67, -71, -163] {
        assert_eq!(class_number(disc).unwrap(), brute_class_number(disc), "disc {disc}");
    }
}

#[test]
fn hurwitz_table() {
    let table = [(3, "1/3"), (4, "1/2"), (7, "1"), (8, "1"), (11, "1"), (12, "4/3"), (15, "2"), (16, "3/2")];
    for (n, v) in table {
        assert_eq!(hurwitz(n), v.parse::<Rational>().unwrap(), "H({n})");
    }
    assert_eq!(hurwitz(5), 0);
}

#[test]
fn modified_hurwitz() {
    // (h(-28) + h(-7)) / 2, with 7 ramified in the order of discriminant -28
    assert_eq!(hurwitz_mod(7, 28), 1);
    // 2 splits in the order of discriminant -7
    assert_eq!(hurwitz_mod(2, 7), 0);
    // 3 divides the conductor of -27
    assert_eq!(hurwitz_mod(3, 27), hurwitz_mod(3, 3));
}

#[test]
fn split_primes_cover_tables() {
    let s7 = split_prime_norms(-7, 80);
    for d in [11, 23, 43, 67, 71] {
        assert!(s7.contains(&d));
    }
    let s11 = split_prime_norms(-11, 50);
    for d in [23, 31, 47] {
        assert!(s11.contains(&d));
    }
    let s163 = split_prime_norms(-163, 200);
    for d in [151, 167, 179, 199] {
        assert!(s163.contains(&d));
    }
    assert!(s7.windows(2).all(|w| w[0] < w[1]));
    assert!(s7.iter().all(|&d| d % 4 == 3 && kronecker(-7, d) == 1));
}

#[test]
fn canonical_b_is_minimal() {
    for (n, d) in [(-7, 11), (-7, 23), (-11, 47), (-163, 151)] {
        let p = canonical_ideal_above(n, d).unwrap();
        assert_eq!(p.a, d);
        assert_eq!(p.b % 48, 3);
        assert_eq!((p.b * p.b - n) % (4 * d), 0);
        let smallest = (0..).map(|k| 3 + 48 * k).find(|b| (b * b - n) % (4 * d) == 0).unwrap();
        assert_eq!(p.b, smallest);
        // the generator (b + sqrt N)/2 has norm divisible by |D|
        assert_eq!(QuadElem::new(p.b, 1, n).norm() % d, 0);
    }
    assert!(canonical_ideal_above(-7, 13).is_err());
}

#[test]
fn z_point_for_trivial_ideal() {
    let ctx = HeckeCharCtx::new(-7, 11).unwrap();
    let z = ctx.z_point(&QuadIdeal::unit(-7)).unwrap();
    assert_eq!((z.a1, z.d, z.b1), (1, 11, ctx.b));
    assert_eq!(z.b1 * z.b1 - 4 * z.a1 * z.d * z.c1, -7);
    let (_, im) = z.to_c64();
    assert!((im - 7f64.sqrt() / 22.0).abs() < 1e-15);
    assert!(ctx.z_point(&ctx.ideal()).is_err());
}

#[test]
fn epsilon_examples() {
    let ctx = HeckeCharCtx::new(-7, 23).unwrap();
    assert_eq!(ctx.epsilon(&QuadElem::new(-2, 0, -7)).unwrap(), -1);
    for r in 1..23 {
        assert_eq!(ctx.epsilon(&QuadElem::new(2 * r, 0, -7)).unwrap(), kronecker(r, 23));
    }
    let one = QuadElem::new(2, 0, -7);
    assert_eq!(ctx.psi_principal(&one).unwrap(), one);
    assert!(ctx.epsilon(&QuadElem::new(ctx.b, 1, -7)).is_err());
}

fn elem(n: i64) -> impl Strategy<Value = QuadElem> {
    (-40i64..40, -40i64..40).prop_map(move |(x, y)| QuadElem::new(2 * x + y, y, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn epsilon_is_quadratic_character(a in elem(-7), b in elem(-7)) {
        let ctx = HeckeCharCtx::new(-7, 43).unwrap();
        prop_assume!(a.norm() % 43 != 0 && b.norm() % 43 != 0);
        let ea = ctx.epsilon(&a).unwrap();
        let eb = ctx.epsilon(&b).unwrap();
        prop_assert_eq!(ea * ea, 1);
        prop_assert_eq!(ea * eb, ctx.epsilon(&a.mul(&b)).unwrap());
        let p = ctx.psi_principal(&a).unwrap();
        prop_assert_eq!(p, ctx.psi_principal(&a.neg()).unwrap());
        prop_assert_eq!(p.norm(), a.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn form_ideal_round_trip(d in prop::sample::select(vec![-23i64, -71, -199]), t in prop::array::uniform4(-6i64..7)) {
        let forms = reduced_forms(d).unwrap();
        let base = forms[(t[0].unsigned_abs() as usize) % forms.len()];
        let (p, q) = (t[1], t[2]);
        prop_assume!(heckeval::arith::gcd(p, q) == 1);
        // complete (p, q) to a matrix of determinant 1
        let (mut r, mut s) = (0i64, 0i64);
        'search: for x in -20i64..=20 {
            for y in -20i64..=20 {
                if p * y - q * x == 1 {
                    r = x;
                    s = y;
                    break 'search;
                }
            }
        }
        prop_assume!(p * s - q * r == 1);
        let g = base.apply(&[[p, q], [r + t[3] * p, s + t[3] * q]]);
        prop_assume!(g.a > 0);
        let ideal = QuadIdeal::new(g.a, g.b, d).unwrap();
        let back = QuadForm::new(ideal.a, ideal.b, (ideal.b * ideal.b - d) / (4 * ideal.a));
        prop_assert_eq!(reduce_form(&back).unwrap().0, reduce_form(&g).unwrap().0);
        prop_assert_eq!(reduce_form(&g).unwrap().0, base);
    }
}
