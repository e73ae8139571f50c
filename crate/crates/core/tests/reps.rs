use cubicsym::reps::*;
use cubicsym::smooth::{is_smooth, Smoothness};
use proptest::prelude::*;

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, m - 1);
            out.push(q);
        }
    }
    out
}

fn permuted(elements: &[Vec<u32>], sigma: &[usize]) -> Vec<Vec<u32>> {
    let mut v: Vec<Vec<u32>> = elements.iter().map(|e| sigma.iter().map(|&c| e[c]).collect()).collect();
    v.sort();
    v
}

fn brute_equivalent(a: &[Vec<u32>], b: &[Vec<u32>], m: usize) -> bool {
    let mut b = b.to_vec();
    b.sort();
    permutations(m).iter().any(|s| permuted(a, s) == b)
}

fn group() -> impl Strategy<Value = (u32, usize, Vec<Vec<u32>>)> {
    (prop::sample::select(vec![2u32, 3, 4, 6]), 1usize..=4).prop_flat_map(|(l, m)| {
        (Just(l), Just(m), prop::collection::vec(prop::collection::vec(0..l, m), 1..=2))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_decides_permutation_equivalence(
        (l, m, g1) in group(),
        g2 in prop::collection::vec(prop::collection::vec(0u32..12, 4), 1..=2),
        sigma in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        same in any::<bool>(),
    ) {
        let d1 = diagonal_subgroup(&g1, l);
        prop_assume!(d1.len() <= 200);
        let d2 = if same {
            let sigma: Vec<usize> = sigma.into_iter().filter(|&c| c < m).collect();
            permuted(&d1, &sigma)
        } else {
            let g2: Vec<Vec<u32>> = g2.iter().map(|r| r[..m].iter().map(|&e| e % l).collect()).collect();
            diagonal_subgroup(&g2, l)
        };
        let equal = canonical_subgroup(&d1, l) == canonical_subgroup(&d2, l);
        prop_assert_eq!(equal, brute_equivalent(&d1, &d2, m));
        if same {
            prop_assert!(equal);
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let spec = AbelianSpec::new(vec![11]).unwrap();
    let a = enumerate_diagonal_reps(&spec, 7, 3).unwrap();
    let b = enumerate_diagonal_reps(&spec, 7, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(count_diagonal_reps(&spec, 7, 3).unwrap(), a.len());
    // representatives are pairwise inequivalent
    let mut canon: Vec<_> = a.iter().map(|c| c.canonical()).collect();
    canon.sort();
    canon.dedup();
    assert_eq!(canon.len(), a.len());
}

#[test]
fn c2_rejections_are_ideal_patterns() {
    let spec = AbelianSpec::new(vec![2]).unwrap();
    let v = filter_to_nd_reps(enumerate_diagonal_reps(&spec, 7, 3).unwrap(), 5, 3, 100_000).unwrap();
    let mut counts: Vec<usize> = v.iter().map(|r| r.class.exp[0].iter().filter(|&&e| e == 1).count()).collect();
    counts.sort();
    assert_eq!(counts, vec![1, 2, 3, 4, 5, 6]);
    for r in &v {
        // a entries equal to −1
        let a = r.class.exp[0].iter().filter(|&&e| e == 1).count();
        match &r.status {
            Status::Accepted(_) => assert!(a <= 3, "{}", r.class.exp_text()),
            Status::RejectedNonSmooth(w) => assert_eq!(w.kind.label(), "L38-ii", "{}", r.class.exp_text()),
            Status::Undecided => panic!("undecided C2 class {}", r.class.exp_text()),
        }
    }
}

#[test]
fn restriction_keeps_the_witness() {
    // ⟨diag(ξ9, ξ9^7, ξ9^4, 1, 1, 1, 1), diag(1, 1, 1, ξ5, ξ5^3, ξ5^4, ξ5^2)⟩ as one generator of C45
    let exp = vec![5u32, 35, 20, 9, 27, 36, 18];
    let class = RepClass { spec: AbelianSpec::new(vec![45]).unwrap(), m: 7, d: 3, exp: vec![exp.clone()] };
    assert_eq!(class.invariant_support().len(), 7);
    let v = filter_to_nd_reps(vec![class], 5, 3, 200_000).unwrap();
    let Status::Accepted(w) = &v[0].status else { panic!("C45 class not accepted: {:?}", v[0].status) };
    assert_eq!(is_smooth(w, 200_000).unwrap(), Smoothness::Smooth);
    for (n, k) in [(9u32, 5u32), (5, 9)] {
        let sub = RepClass {
            spec: AbelianSpec::new(vec![n]).unwrap(),
            m: 7,
            d: 3,
            exp: vec![exp.iter().map(|e| (e * k % 45) / k).collect()],
        };
        assert!(witness_is_fixed(&sub, w).unwrap());
        let r = filter_to_nd_reps(vec![sub], 5, 3, 200_000).unwrap();
        assert!(r[0].accepted(), "C{n} restriction");
    }
}
