//! Smoothness of X_F: two monomial-pattern filters that prove singularity,
//! and a Jacobian-ideal decision through Gröbner bases.
//!
//! A smooth verdict obtained modulo a prime is a proof: with p ≡ 1 (mod N) and
//! all coefficients p-integral, a nonzero common zero of the partials over Q̄
//! reduces (after scaling) to a nonzero common zero modulo a prime above p.

use std::fmt;

use crate::field::Field;
use crate::forms::{form_conductor, lift_form};
use crate::groebner::{groebner, has_all_pure_powers, GbResult};
use crate::modular::ModularImage;
use crate::poly::{Mono, Poly};
use crate::{CycNum, Error, Form, Result};

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    L38i,
    L38ii,
    L38iii,
    L38iv,
    L310,
    JacobianZero,
}

impl WitnessKind {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessKind::L38i => "L38-i",
            WitnessKind::L38ii => "L38-ii",
            WitnessKind::L38iii => "L38-iii",
            WitnessKind::L38iv => "L38-iv",
            WitnessKind::L310 => "L310",
            WitnessKind::JacobianZero => "JacobianZero",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonSmoothWitness {
    pub kind: WitnessKind,
    /// L38-i: `[i]`; the ideal patterns: the linear variables P followed by the quadratic block Q.
    pub vars: Vec<usize>,
    /// Split point of `vars` between P and Q for the ideal patterns.
    pub linear_count: usize,
    /// L310 cover.
    pub partition: Option<[Vec<usize>; 3]>,
    /// JacobianZero: a variable with no pure-power leading term, and a point if one was found.
    pub point: Option<Vec<CycNum>>,
}

impl NonSmoothWitness {
    fn simple(kind: WitnessKind, vars: Vec<usize>, linear_count: usize) -> Self {
        NonSmoothWitness { kind, vars, linear_count, partition: None, point: None }
    }

    /// Re-checks the witness against the support of F.
    pub fn replay(&self, f: &Form) -> bool {
        let support = f.support();
        let m = f.nvars();
        match self.kind {
            WitnessKind::L38i => lacks_square_terms(&support, m, self.vars[0]),
            WitnessKind::L38ii | WitnessKind::L38iii | WitnessKind::L38iv => {
                let (p, q) = self.vars.split_at(self.linear_count);
                in_ideal_pattern(&support, p, q)
            }
            WitnessKind::L310 => match &self.partition {
                Some([v1, v2, v3]) => partition_pattern(&support, v1, v2, v3),
                None => false,
            },
            WitnessKind::JacobianZero => match &self.point {
                Some(pt) => jacobian_vanishes_at(f, pt),
                None => !matches!(decide_exact(f, DEFAULT_BUDGET), Ok(Some(true))),
            },
        }
    }
}

impl fmt::Display for NonSmoothWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: &[usize]| v.iter().map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(",");
        match self.kind {
            WitnessKind::L38i => write!(f, "L38-i i={}", self.vars[0] + 1),
            WitnessKind::L38ii | WitnessKind::L38iii | WitnessKind::L38iv => {
                let (p, q) = self.vars.split_at(self.linear_count);
                if q.is_empty() {
                    write!(f, "{} ({})", self.kind.label(), names(p))
                } else {
                    write!(f, "{} ({})+({})^2", self.kind.label(), names(p), names(q))
                }
            }
            WitnessKind::L310 => {
                let [a, b, c] = self.partition.as_ref().unwrap();
                write!(f, "L310 V1={{{}}} V2={{{}}} V3={{{}}}", names(a), names(b), names(c))
            }
            WitnessKind::JacobianZero => match &self.point {
                Some(p) => write!(f, "JacobianZero point=({})", p.iter().map(|c| c.pretty()).collect::<Vec<_>>().join(", ")),
                None => write!(f, "JacobianZero missing-pure-power x{}", self.vars.first().map_or(0, |v| v + 1)),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    Singular(NonSmoothWitness),
    Exhausted,
}

fn lacks_square_terms(support: &[Mono], m: usize, i: usize) -> bool {
    (0..m).all(|j| {
        let want = if i == j { Mono::var_pow(i, 3) } else { Mono::var_pow(i, 2).mul(&Mono::var(j)) };
        !support.contains(&want)
    })
}

/// Every monomial is divisible by a variable of P or has degree ≥ 2 in the variables of Q.
fn in_ideal_pattern(support: &[Mono], p: &[usize], q: &[usize]) -> bool {
    support.iter().all(|mo| p.iter().any(|&v| mo.get(v) > 0) || q.iter().map(|&v| mo.get(v)).sum::<u16>() >= 2)
}

fn partition_pattern(support: &[Mono], v1: &[usize], v2: &[usize], v3: &[usize]) -> bool {
    support.iter().all(|mo| {
        let c1: u16 = v1.iter().map(|&v| mo.get(v)).sum();
        let c2: u16 = v2.iter().map(|&v| mo.get(v)).sum();
        let c3: u16 = v3.iter().map(|&v| mo.get(v)).sum();
        match (c1, c2, c3) {
            (2, 1, 0) => true,
            (1, _, _) if c2 + c3 == 2 => true,
            (0, _, _) if c2 + c3 == 3 => true,
            _ => false,
        }
    })
}

fn combinations(n: usize, k: usize, from: &[usize]) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, from: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..from.len() {
            cur.push(from[i]);
            rec(i + 1, k, from, cur, out);
            cur.pop();
        }
    }
    debug_assert!(from.len() == n);
    let mut out = Vec::new();
    rec(0, k, from, &mut Vec::new(), &mut out);
    out
}

/// The monomial-pattern filters on a cubic's support. The ideal patterns use
/// |P| = a linear variables and |Q| = m − 1 − 2a quadratic ones, which is
/// exactly the (3), (2+2), (1+4) family in seven variables.
pub fn combinatorial_non_smooth_support(support: &[Mono], m: usize) -> Option<NonSmoothWitness> {
    for i in 0..m {
        if lacks_square_terms(support, m, i) {
            return Some(NonSmoothWitness::simple(WitnessKind::L38i, vec![i], 1));
        }
    }
    let all: Vec<usize> = (0..m).collect();
    for (a, kind) in [(3usize, WitnessKind::L38ii), (2, WitnessKind::L38iii), (1, WitnessKind::L38iv)] {
        if m < 2 * a + 1 {
            continue;
        }
        let b = m - 1 - 2 * a;
        for p in combinations(m, a, &all) {
            let rest: Vec<usize> = all.iter().copied().filter(|v| !p.contains(v)).collect();
            for q in combinations(rest.len(), b, &rest) {
                if in_ideal_pattern(support, &p, &q) {
                    let mut vars = p.clone();
                    vars.extend(q);
                    return Some(NonSmoothWitness::simple(kind, vars, a));
                }
            }
        }
    }
    None
}

pub fn combinatorial_non_smooth(f: &Form) -> Result<Option<NonSmoothWitness>> {
    if f.degree() != Some(3) || !f.is_homogeneous() {
        return Err(Error::Domain("the monomial filters apply to cubic forms".into()));
    }
    Ok(combinatorial_non_smooth_support(&f.support(), f.nvars()))
}

fn check_cover(m: usize, v1: &[usize], v2: &[usize], v3: &[usize]) -> Result<()> {
    let mut seen = vec![0u8; m];
    for &v in v1.iter().chain(v2).chain(v3) {
        if v >= m {
            return Err(Error::Domain(format!("variable index {} out of range", v + 1)));
        }
        seen[v] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        return Err(Error::Domain("V1, V2, V3 must be disjoint and cover all variables".into()));
    }
    if v1.len() <= v2.len() {
        return Err(Error::Domain("need |V1| > |V2|".into()));
    }
    Ok(())
}

/// The three-block monomial pattern; true proves F singular.
pub fn partition_non_smooth(f: &Form, v1: &[usize], v2: &[usize], v3: &[usize]) -> Result<bool> {
    check_cover(f.nvars(), v1, v2, v3)?;
    if f.degree() != Some(3) {
        return Err(Error::Domain("the partition test applies to cubic forms".into()));
    }
    Ok(partition_pattern(&f.support(), v1, v2, v3))
}

/// Scans every legal cover (V1, V2, V3) for the three-block pattern.
pub fn partition_scan_support(support: &[Mono], m: usize) -> Option<[Vec<usize>; 3]> {
    let total = 3usize.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        let mut sets: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for v in 0..m {
            sets[c % 3].push(v);
            c /= 3;
        }
        if sets[0].len() > sets[1].len() && partition_pattern(support, &sets[0], &sets[1], &sets[2]) {
            return Some(sets);
        }
    }
    None
}

/// Both filters on a support: L38 first, then the three-block scan.
pub fn support_non_smooth(support: &[Mono], m: usize) -> Option<NonSmoothWitness> {
    combinatorial_non_smooth_support(support, m).or_else(|| {
        partition_scan_support(support, m).map(|p| NonSmoothWitness {
            kind: WitnessKind::L310,
            vars: vec![],
            linear_count: 0,
            partition: Some(p),
            point: None,
        })
    })
}

fn jacobian<K: Field>(f: &Poly<K>) -> Vec<Poly<K>> {
    (0..f.nvars()).map(|i| f.derivative(i)).collect()
}

fn jacobian_vanishes_at(f: &Form, pt: &[CycNum]) -> bool {
    if pt.iter().all(|c| c.is_zero()) || pt.len() != f.nvars() {
        return false;
    }
    let n = pt.iter().fold(form_conductor(f), |a, c| crate::cyclo::lcm(a, c.conductor()));
    let f = lift_form(f, n).unwrap();
    let pt: Vec<CycNum> = pt.iter().map(|c| c.embed(n).unwrap()).collect();
    jacobian(&f).iter().all(|g| g.eval(&pt).map_or(true, |v| v.is_zero()))
}

/// Modular certificate: `Some(true)` proves smoothness; `None` is inconclusive.
pub fn modular_smooth_certificate(f: &Form, budget: usize, primes: usize) -> Option<bool> {
    let n = form_conductor(f);
    for k in 0..primes {
        let img = ModularImage::new(n, k);
        let Some(fp) = img.map_form(f) else { continue };
        if let GbResult::Basis(b) = groebner(&jacobian(&fp), budget) {
            if has_all_pure_powers(&b, f.nvars()) {
                return Some(true);
            }
        }
    }
    None
}

/// Exact decision: `Some(true)` smooth, `Some(false)` singular, `None` on budget exhaustion.
fn decide_exact(f: &Form, budget: usize) -> Result<Option<bool>> {
    let f = lift_form(f, form_conductor(f))?;
    match groebner(&jacobian(&f), budget) {
        GbResult::Basis(b) => Ok(Some(has_all_pure_powers(&b, f.nvars()))),
        GbResult::Exhausted { .. } => Ok(None),
    }
}

fn first_missing_pure_power(f: &Form, budget: usize) -> Option<usize> {
    let f = lift_form(f, form_conductor(f)).ok()?;
    if let GbResult::Basis(b) = groebner(&jacobian(&f), budget) {
        let mut seen = vec![false; f.nvars()];
        for g in &b {
            if let Some(v) = g.lead_mono().and_then(|m| m.pure_power_var()) {
                seen[v] = true;
            }
        }
        return seen.iter().position(|s| !s);
    }
    None
}

/// Searches small points (coordinates in {0, 1, ζ3, ζ3²}) for a common zero of the partials.
pub fn small_singular_point(f: &Form, limit: usize) -> Option<Vec<CycNum>> {
    let m = f.nvars();
    let n = crate::cyclo::lcm(form_conductor(f), 3);
    let f = lift_form(f, n).ok()?;
    let vals = [CycNum::zero(n), CycNum::one(n), CycNum::zeta(n, n as i64 / 3), CycNum::zeta(n, 2 * n as i64 / 3)];
    let total = 4usize.checked_pow(m as u32)?.min(limit);
    let jac = jacobian(&f);
    for code in 1..total {
        let mut c = code;
        let pt: Vec<CycNum> = (0..m)
            .map(|_| {
                let v = vals[c % 4].clone();
                c /= 4;
                v
            })
            .collect();
        // projective normalisation: first nonzero coordinate is 1
        if pt.iter().find(|x| !x.is_zero()).map_or(true, |x| !x.is_one()) {
            continue;
        }
        if jac.iter().all(|g| g.eval(&pt).map_or(true, |v| v.is_zero())) {
            return Some(pt);
        }
    }
    None
}

/// Decides smoothness of the hypersurface F = 0.
pub fn is_smooth(f: &Form, budget: usize) -> Result<Smoothness> {
    if f.is_zero() {
        return Err(Error::Domain("zero polynomial".into()));
    }
    if !f.is_homogeneous() {
        return Err(Error::Domain("form is not homogeneous".into()));
    }
    let d = f.degree().unwrap();
    if d < 2 {
        return Err(Error::Domain("smoothness needs degree at least 2".into()));
    }
    let m = f.nvars();
    if d == 3 {
        if let Some(w) = support_non_smooth(&f.support(), m) {
            return Ok(Smoothness::Singular(w));
        }
    }
    if modular_smooth_certificate(f, budget, 2) == Some(true) {
        return Ok(Smoothness::Smooth);
    }
    match decide_exact(f, budget)? {
        Some(true) => Ok(Smoothness::Smooth),
        Some(false) => {
            let point = small_singular_point(f, 1 << 16);
            let missing = first_missing_pure_power(f, budget).unwrap_or(0);
            Ok(Smoothness::Singular(NonSmoothWitness {
                kind: WitnessKind::JacobianZero,
                vars: vec![missing],
                linear_count: 0,
                partition: None,
                point,
            }))
        }
        None => Ok(Smoothness::Exhausted),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::fermat;

    fn form(m: usize, monos: &[&[u16]]) -> Form {
        Poly::from_terms(m, monos.iter().map(|e| (Mono::new(e), CycNum::one(1))))
    }

    #[test]
    fn fermat_six_in_seven_variables() {
        let f = fermat(6, 3).with_nvars(7);
        let w = combinatorial_non_smooth(&f).unwrap().unwrap();
        assert_eq!(w.kind, WitnessKind::L38i);
        assert_eq!(w.vars, vec![6]);
        assert!(w.replay(&f));
        assert!(combinatorial_non_smooth(&fermat(7, 3)).unwrap().is_none());
    }

    #[test]
    fn ideal_pattern_iv() {
        // x1*x6*x7 + (x2..x5)-quadratic times linear, plus squares so (i) does not fire
        let f = form(
            7,
            &[
                &[1, 0, 0, 0, 0, 1, 1],
                &[0, 2, 0, 0, 0, 1, 0],
                &[0, 0, 2, 0, 0, 0, 1],
                &[0, 0, 0, 2, 0, 1, 0],
                &[0, 0, 0, 0, 2, 0, 1],
                &[0, 1, 1, 0, 0, 1, 0],
                &[3, 0, 0, 0, 0, 0, 0],
                &[1, 0, 0, 0, 0, 2, 0],
                &[1, 0, 0, 0, 0, 0, 2],
                &[0, 2, 1, 0, 0, 0, 0],
                &[0, 0, 2, 1, 0, 0, 0],
                &[0, 0, 0, 2, 1, 0, 0],
                &[0, 1, 0, 0, 2, 0, 0],
            ],
        );
        let w = combinatorial_non_smooth(&f).unwrap().unwrap();
        // brute-force oracle: F ∈ (x1) + (x2,x3,x4,x5)^2 term by term
        assert!(f.support().iter().all(|m| m.get(0) > 0 || (1..5).map(|v| m.get(v)).sum::<u16>() >= 2));
        assert!(matches!(w.kind, WitnessKind::L38ii | WitnessKind::L38iii | WitnessKind::L38iv));
        assert!(w.replay(&f));
    }

    #[test]
    fn partition_examples() {
        let f = form(7, &[&[1, 1, 1, 0, 0, 0, 0]]);
        assert!(partition_non_smooth(&f, &[0, 1, 3, 4, 5, 6], &[2], &[]).unwrap());
        let fe = fermat(7, 3);
        assert!(!partition_non_smooth(&fe, &[0, 1], &[2], &[3, 4, 5, 6]).unwrap());
        assert!(partition_non_smooth(&fe, &[0], &[1, 2], &[3, 4, 5, 6]).is_err());
        assert!(partition_non_smooth(&fe, &[0, 1], &[1], &[2, 3, 4, 5, 6]).is_err());
    }

    #[test]
    fn m96_span_caught_by_first_filter() {
        let f = form(
            7,
            &[
                &[3, 0, 0, 0, 0, 0, 0],
                &[1, 0, 0, 0, 0, 1, 1],
                &[0, 0, 0, 1, 2, 0, 0],
                &[0, 0, 0, 0, 0, 3, 0],
                &[0, 0, 0, 0, 0, 0, 3],
                &[0, 0, 1, 2, 0, 0, 0],
                &[0, 1, 2, 0, 0, 0, 0],
            ],
        );
        let w = combinatorial_non_smooth(&f).unwrap().unwrap();
        assert_eq!((w.kind, w.vars[0]), (WitnessKind::L38i, 1));
        // The three-block pattern also fires, e.g. V1={x2,x4}, V2={x3}: x2*x3^2 and x4*x5^2 are
        // type (ii), x3*x4^2 is type (i), the rest lie in V2 ∪ V3 entirely.
        assert!(partition_non_smooth(&f, &[1, 3], &[2], &[0, 4, 5, 6]).unwrap());
        assert!(partition_scan_support(&f.support(), 7).is_some());
    }

    #[test]
    fn decisions() {
        assert_eq!(is_smooth(&fermat(4, 3), 1000).unwrap(), Smoothness::Smooth);
        let f = fermat(2, 3).with_nvars(3);
        match is_smooth(&f, 1000).unwrap() {
            Smoothness::Singular(w) => assert!(w.replay(&f)),
            other => panic!("{other:?}"),
        }
        // a singular quadric cone decided by the exact path with a point
        let q = form(3, &[&[2, 0, 0], &[0, 2, 0]]);
        match is_smooth(&q, 1000).unwrap() {
            Smoothness::Singular(w) => {
                assert_eq!(w.kind, WitnessKind::JacobianZero);
                assert!(w.replay(&q));
                assert!(w.point.is_some());
            }
            other => panic!("{other:?}"),
        }
        assert!(is_smooth(&Poly::zero(3), 10).is_err());
    }
}
