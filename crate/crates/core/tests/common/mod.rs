#![allow(dead_code)]

use cubicsym::poly::monomials;
use cubicsym::{CycMatrix, CycNum, Form, Matrix, Mono, Poly};
use proptest::prelude::*;

/// Σ c_k ζ_N^k with small integer c_k on a few random powers.
pub fn cyc(n: u32) -> impl Strategy<Value = CycNum> {
    prop::collection::vec((0..n as i64, -3i64..=3), 0..5).prop_map(move |terms| {
        terms.into_iter().fold(CycNum::zero(n), |acc, (k, c)| &acc + &(&CycNum::zeta(n, k) * &CycNum::from_int(n, c)))
    })
}

/// Entries from {0, ±1, 2, ξ3, ξ3²}.
pub fn small_entry() -> impl Strategy<Value = CycNum> {
    prop::sample::select(vec![(0i64, 0i64), (1, 0), (-1, 0), (2, 0), (1, 1), (1, 2), (0, 0), (0, 0)])
        .prop_map(|(c, k)| &CycNum::from_int(3, c) * &CycNum::zeta(3, k))
}

pub fn matrix(m: usize) -> impl Strategy<Value = CycMatrix> {
    prop::collection::vec(small_entry(), m * m).prop_map(move |v| Matrix::from_vec(m, m, v))
}

/// Invertible m×m matrix: a random one, replaced by a unipotent tweak of
/// the identity when singular.
pub fn invertible(m: usize) -> impl Strategy<Value = CycMatrix> {
    (matrix(m), 0..m, 0..m).prop_map(move |(a, i, j)| {
        if !a.det().is_zero() {
            return a;
        }
        let mut id = Matrix::identity_like(m, &CycNum::zero(3));
        if i != j {
            id.set(i, j, CycNum::zeta(3, 1));
        }
        id
    })
}

/// A cubic with up to `terms` random monomials.
pub fn cubic(m: usize, terms: usize) -> impl Strategy<Value = Form> {
    let monos = monomials(m, 3);
    let k = monos.len();
    prop::collection::vec((0..k, small_entry()), 1..=terms)
        .prop_map(move |ts| Poly::from_terms(m, ts.into_iter().map(|(i, c)| (monos[i], c)).collect::<Vec<(Mono, CycNum)>>()))
}

pub fn permutation(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<usize>>()).prop_shuffle()
}

/// Fermat plus a few random terms: mostly smooth, unlike sparse random cubics.
pub fn near_fermat(m: usize) -> impl Strategy<Value = Form> {
    cubic(m, 3).prop_map(move |g| cubicsym::forms::lift_form(&cubicsym::forms::fermat(m, 3), 3).unwrap().add(&g))
}

pub fn mixed_cubic(m: usize) -> impl Strategy<Value = Form> {
    prop_oneof![cubic(m, 6), near_fermat(m)]
}
