//! Buchberger's algorithm in graded reverse lexicographic order.
//!
//! Pairs are selected by sugar degree, pruned with the Gebauer–Möller
//! criteria, and every new basis element is made monic. The budget counts
//! S-polynomial reductions; running out is reported, never papered over.

use crate::field::Field;
use crate::poly::{Mono, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GbResult<K: Field> {
    Basis(Vec<Poly<K>>),
    Exhausted { reductions: usize },
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

struct Engine<K> {
    basis: Vec<Poly<K>>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

fn sugar_of<K: Field>(p: &Poly<K>) -> u32 {
    p.degree().unwrap_or(0) as u32
}

/// Full reduction of `p` by the leading terms of `basis` (active elements only).
pub fn reduce<K: Field>(p: &Poly<K>, basis: &[Poly<K>], active: Option<&[bool]>) -> Poly<K> {
    let nvars = p.nvars();
    let mut rem: Vec<(Mono, K)> = Vec::new();
    let mut cur = p.clone();
    while let Some((lm, lc)) = cur.lead().cloned() {
        let div = basis
            .iter()
            .enumerate()
            .find(|(k, g)| active.map_or(true, |a| a[*k]) && g.lead_mono().is_some_and(|gm| gm.divides(&lm)));
        match div {
            Some((_, g)) => {
                let (gm, gc) = g.lead().unwrap();
                let f = if gc.is_one() { lc.clone() } else { lc.mul_ref(&gc.inv().unwrap()) };
                cur = cur.sub_mul_term(&f, &lm.div(gm), g);
            }
            None => {
                rem.push((lm, lc));
                let rest = cur.terms()[1..].to_vec();
                cur = Poly::from_sorted_unchecked(nvars, rest);
            }
        }
    }
    Poly::from_sorted_unchecked(nvars, rem)
}

impl<K: Field> Engine<K> {
    fn add(&mut self, h: Poly<K>, sugar: u32) {
        let t = self.basis.len();
        let lt = h.lead_mono().unwrap();
        // new candidate pairs
        let mut fresh: Vec<(Pair, bool)> = Vec::new();
        for i in 0..t {
            if !self.active[i] {
                continue;
            }
            let li = self.basis[i].lead_mono().unwrap();
            let lcm = li.lcm(&lt);
            let s = (self.sugar[i] + (lcm.deg() - li.deg()) as u32).max(sugar + (lcm.deg() - lt.deg()) as u32);
            fresh.push((Pair { i, j: t, lcm, sugar: s }, li.coprime(&lt)));
        }
        // criterion B on the old pairs
        let basis = &self.basis;
        self.pairs.retain(|p| {
            if !lt.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i].lead_mono().unwrap();
            let lj = basis[p.j].lead_mono().unwrap();
            li.lcm(&lt) == p.lcm || lj.lcm(&lt) == p.lcm
        });
        // criterion M: drop pairs whose lcm is properly divisible by another new lcm
        let lcms: Vec<Mono> = fresh.iter().map(|(p, _)| p.lcm).collect();
        let mut keep: Vec<(Pair, bool)> = fresh
            .into_iter()
            .filter(|(p, _)| !lcms.iter().any(|l| l.divides(&p.lcm) && *l != p.lcm))
            .collect();
        // criterion F: one pair per lcm, preferring a coprime one which is then dropped
        keep.sort_by(|a, b| a.0.lcm.cmp(&b.0.lcm).then(b.1.cmp(&a.1)).then(a.0.i.cmp(&b.0.i)));
        let mut seen: Vec<Mono> = Vec::new();
        for (p, coprime) in keep {
            if seen.last() == Some(&p.lcm) {
                continue;
            }
            seen.push(p.lcm);
            if !coprime {
                self.pairs.push(p);
            }
        }
        // basis elements made redundant by the new leading term
        for i in 0..t {
            if self.active[i] && lt.divides(&self.basis[i].lead_mono().unwrap()) {
                self.active[i] = false;
            }
        }
        self.basis.push(h);
        self.sugar.push(sugar);
        self.active.push(true);
    }

    fn spoly(&self, p: &Pair) -> Poly<K> {
        let (fi, fj) = (&self.basis[p.i], &self.basis[p.j]);
        let (li, ci) = fi.lead().unwrap();
        let (lj, cj) = fj.lead().unwrap();
        let a = fi.mul_term(&cj.clone(), &p.lcm.div(li));
        let b = fj.mul_term(&ci.clone(), &p.lcm.div(lj));
        a.sub(&b)
    }
}

/// Gröbner basis of the ideal generated by `gens`, interreduced and monic.
pub fn groebner<K: Field>(gens: &[Poly<K>], budget: usize) -> GbResult<K> {
    let mut eng = Engine { basis: Vec::new(), sugar: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    let mut input: Vec<Poly<K>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    input.sort_by(|a, b| a.lead_mono().cmp(&b.lead_mono()));
    for g in input {
        let r = reduce(&g, &eng.basis, Some(&eng.active));
        if !r.is_zero() {
            let s = sugar_of(&g);
            eng.add(r.monic(), s);
        }
    }
    let mut reductions = 0usize;
    while !eng.pairs.is_empty() {
        if reductions >= budget {
            return GbResult::Exhausted { reductions };
        }
        // lowest sugar, then smallest lcm, then oldest
        let k = (0..eng.pairs.len())
            .min_by(|&a, &b| {
                let (pa, pb) = (&eng.pairs[a], &eng.pairs[b]);
                pa.sugar.cmp(&pb.sugar).then(pa.lcm.cmp(&pb.lcm)).then((pa.j, pa.i).cmp(&(pb.j, pb.i)))
            })
            .unwrap();
        let pair = eng.pairs.swap_remove(k);
        let s = eng.spoly(&pair);
        reductions += 1;
        let r = reduce(&s, &eng.basis, Some(&eng.active));
        if !r.is_zero() {
            if r.lead_mono().unwrap().deg() == 0 {
                // unit ideal
                let one = r.monic();
                return GbResult::Basis(vec![one]);
            }
            eng.add(r.monic(), pair.sugar);
        }
    }
    let mut out: Vec<Poly<K>> = (0..eng.basis.len()).filter(|&i| eng.active[i]).map(|i| eng.basis[i].clone()).collect();
    // interreduce tails
    for i in 0..out.len() {
        let others: Vec<Poly<K>> = out.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = out[i].lead().unwrap().clone();
        let tail = Poly::from_sorted_unchecked(out[i].nvars(), out[i].terms()[1..].to_vec());
        let red = reduce(&tail, &others, None);
        out[i] = Poly::monomial(out[i].nvars(), lm, lc).add(&red).monic();
    }
    out.sort_by(|a, b| b.lead_mono().cmp(&a.lead_mono()));
    GbResult::Basis(out)
}

/// True when the leading monomials include a pure power of each of the first `nvars` variables,
/// i.e. the projective zero set of a homogeneous ideal is empty.
pub fn has_all_pure_powers<K: Field>(basis: &[Poly<K>], nvars: usize) -> bool {
    let mut seen = vec![false; nvars];
    for g in basis {
        if let Some(m) = g.lead_mono() {
            if let Some(v) = m.pure_power_var() {
                if v < nvars {
                    seen[v] = true;
                }
            }
            if m.deg() == 0 {
                return true;
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// True when the basis is {1}.
pub fn is_unit<K: Field>(basis: &[Poly<K>]) -> bool {
    basis.iter().any(|g| g.lead_mono().is_some_and(|m| m.deg() == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    fn poly(nv: usize, terms: &[(&[u16], i64)]) -> Poly<Fp> {
        Poly::from_terms(nv, terms.iter().map(|(e, c)| (Mono::new(e), Fp::new(*c, 1_000_003))))
    }

    #[test]
    fn classic_example() {
        // x^2 - y, xy - 1 : the basis contains y^3 - 1 style relations; check membership of x - y^2
        let f = poly(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        let g = poly(2, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let GbResult::Basis(b) = groebner(&[f.clone(), g.clone()], 1000) else { panic!() };
        // x = x * (xy) = x^2 y = y^2 mod ideal
        let target = poly(2, &[(&[1, 0], 1), (&[0, 2], -1)]);
        assert!(reduce(&target, &b, None).is_zero());
        assert!(reduce(&f, &b, None).is_zero());
        assert!(!reduce(&poly(2, &[(&[1, 0], 1)]), &b, None).is_zero());
    }

    #[test]
    fn fermat_partials_are_a_basis() {
        let gens: Vec<Poly<Fp>> = (0..4).map(|i| {
            let mut e = [0u16; 4];
            e[i] = 2;
            poly(4, &[(&e, 3)])
        }).collect();
        let GbResult::Basis(b) = groebner(&gens, 100) else { panic!() };
        assert_eq!(b.len(), 4);
        assert!(has_all_pure_powers(&b, 4));
    }

    #[test]
    fn unit_ideal_and_budget() {
        let f = poly(2, &[(&[1, 0], 1), (&[0, 0], -1)]);
        let g = poly(2, &[(&[1, 0], 1)]);
        let GbResult::Basis(b) = groebner(&[f, g], 10) else { panic!() };
        assert!(is_unit(&b));
        let h1 = poly(3, &[(&[2, 0, 0], 1), (&[0, 1, 1], 1)]);
        let h2 = poly(3, &[(&[0, 2, 0], 1), (&[1, 0, 1], 1)]);
        let h3 = poly(3, &[(&[0, 0, 2], 1), (&[1, 1, 0], 3)]);
        assert!(matches!(groebner(&[h1, h2, h3], 0), GbResult::Exhausted { .. }));
    }
}
