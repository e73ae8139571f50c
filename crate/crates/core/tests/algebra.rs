mod common;

use common::*;
use cubicsym::forms::{apply, fermat, lift_matrix, permutation_matrix, semi_invariance_factor};
use cubicsym::{CycNum, Matrix};
use proptest::prelude::*;

const CONDUCTORS: [u32; 6] = [3, 4, 8, 12, 24, 43];

fn triple() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (cyc(n), cyc(n), cyc(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
        }
        // embedding into a multiple of the conductor is a ring map
        let big = a.conductor() * 5;
        let (ea, eb) = (a.embed(big).unwrap(), b.embed(big).unwrap());
        prop_assert_eq!((&a * &b).embed(big).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).embed(big).unwrap(), &ea + &eb);
    }
}

#[test]
fn zeta_has_exact_order() {
    for n in CONDUCTORS {
        let z = CycNum::zeta(n, 1);
        let mut p = z.clone();
        for k in 1..n {
            assert!(!p.is_one(), "ζ_{n}^{k} = 1");
            p = &p * &z;
        }
        assert!(p.is_one());
    }
}

fn action_case() -> impl Strategy<Value = (cubicsym::CycMatrix, cubicsym::CycMatrix, cubicsym::Form, cubicsym::Form, CycNum)> {
    (2usize..=5).prop_flat_map(|m| (invertible(m), invertible(m), cubic(m, 6), cubic(m, 6), small_entry()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn action_is_contravariant_and_linear((a, b, f, g, c) in action_case()) {
        let ab = a.mul(&b);
        prop_assert_eq!(apply(&ab, &f).unwrap(), apply(&b, &apply(&a, &f).unwrap()).unwrap());
        prop_assert_eq!(apply(&a, &f.add(&g)).unwrap(), apply(&a, &f).unwrap().add(&apply(&a, &g).unwrap()));
        prop_assert_eq!(apply(&a, &f.scale(&c)).unwrap(), apply(&a, &f).unwrap().scale(&c));
    }
}

fn scaled_symmetry(m: usize) -> impl Strategy<Value = (cubicsym::CycMatrix, CycNum)> {
    (permutation(m), prop::collection::vec(0i64..3, m), 0i64..12).prop_map(move |(p, e, s)| {
        // c · P · diag(ξ3^e) scales the Fermat cubic by c³
        let d = Matrix::diagonal(e.iter().map(|&k| CycNum::zeta(3, k)).collect());
        let c = CycNum::zeta(12, s);
        let a = lift_matrix(&permutation_matrix(&p, 3).mul(&d), 12).unwrap().scale(&c);
        (a, c.pow(3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn semi_invariance_factor_is_multiplicative(((a, la), (b, lb)) in (3usize..=5).prop_flat_map(|m| (scaled_symmetry(m), scaled_symmetry(m)))) {
        let f = fermat(a.nrows(), 3);
        let fa = semi_invariance_factor(&a, &f).unwrap().unwrap();
        let fb = semi_invariance_factor(&b, &f).unwrap().unwrap();
        prop_assert_eq!(fa.embed(12).unwrap(), la.embed(12).unwrap());
        prop_assert_eq!(fb.embed(12).unwrap(), lb.embed(12).unwrap());
        let fab = semi_invariance_factor(&a.mul(&b), &f).unwrap().unwrap();
        prop_assert_eq!(fab.embed(12).unwrap(), (&la * &lb).embed(12).unwrap());
    }
}
