//! Monomial automorphisms of a form: matrices with one nonzero entry per row
//! and column that fix F exactly.
//!
//! Write A[i][σ(i)] = t_i, so x_i ↦ t_i x_{σ(i)} and x^e ↦ t^e x^{σ(e)}. A fixes
//! F iff σ permutes the support and t^e = c_{σ(e)}/c_e for every term. With
//! t_i = e^{2πi u_i} the second condition is a torus system solved by Smith form.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::expr::shrink_matrix;
use crate::forms::uniform_form;
use crate::matrix::Matrix;
use crate::poly::Mono;
use crate::snf::{solve_torus, TorusSolution};
use crate::{CycMatrix, CycNum, Error, Form, Result};

#[derive(Clone, Debug)]
pub struct MonomialGroup {
    pub nvars: usize,
    /// Admissible permutations σ (σ[i] is the image of variable i).
    pub perms: Vec<Vec<usize>>,
    /// Diagonal stabiliser generators followed by one monomial lift per chosen permutation.
    pub gens: Vec<CycMatrix>,
    pub diagonal_order: u64,
    pub linear_order: u64,
    /// Phases t_i = ζ_L^{u_i} allowed over each permutation, parallel to `perms`.
    pub phases: Vec<TorusSolution>,
}

impl MonomialGroup {
    /// Order modulo the scalars ξ_d I, which always fix a degree-d form.
    pub fn projective_order(&self, d: usize) -> u64 {
        self.linear_order / d as u64
    }

    /// Number of elements with det = 1, by enumerating every (σ, t).
    pub fn det_one_count(&self) -> u64 {
        self.perms
            .iter()
            .zip(&self.phases)
            .map(|(p, sol)| {
                // det = sgn(σ) ζ_L^{Σu}
                let half = match (sign(p), sol.l % 2) {
                    (1, _) => 0,
                    (_, 0) => sol.l / 2,
                    // -1 is not a power of ζ_L
                    _ => return 0,
                };
                sol.all().iter().filter(|u| u.iter().sum::<i64>().rem_euclid(sol.l) == half).count() as u64
            })
            .sum()
    }
}

fn profile(support: &[Mono], m: usize, i: usize) -> Vec<(u16, Vec<u16>)> {
    let mut p: Vec<(u16, Vec<u16>)> = support
        .iter()
        .filter(|mo| mo.get(i) > 0)
        .map(|mo| {
            let mut e = mo.exps(m).to_vec();
            e.sort_unstable();
            (mo.get(i), e)
        })
        .collect();
    p.sort();
    p
}

/// σ(e); slots of σ not yet assigned must carry exponent zero.
fn image(mo: &Mono, perm: &[usize]) -> Mono {
    let mut e = [0u16; crate::poly::MAXV];
    for (i, &p) in perm.iter().enumerate() {
        if mo.get(i) > 0 {
            e[p] = mo.get(i);
        }
    }
    Mono::new(&e[..perm.len()])
}

/// Permutations of the variables that map the support onto itself.
pub fn support_permutations(support: &[Mono], m: usize) -> Vec<Vec<usize>> {
    let set: HashSet<Mono> = support.iter().copied().collect();
    let profiles: Vec<_> = (0..m).map(|i| profile(support, m, i)).collect();
    // monomials grouped by their largest variable, checked once that variable is placed
    let mut by_top: Vec<Vec<Mono>> = vec![Vec::new(); m];
    for mo in support {
        if let Some(top) = (0..m).rev().find(|&v| mo.get(v) > 0) {
            by_top[top].push(*mo);
        }
    }
    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; m];
    let mut used = vec![false; m];
    fn rec(
        k: usize,
        m: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        profiles: &[Vec<(u16, Vec<u16>)>],
        by_top: &[Vec<Mono>],
        set: &HashSet<Mono>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == m {
            out.push(perm.clone());
            return;
        }
        for j in 0..m {
            if used[j] || profiles[j] != profiles[k] {
                continue;
            }
            perm[k] = j;
            // unassigned slots never occur in these monomials
            let ok = by_top[k].iter().all(|mo| set.contains(&image(mo, perm)));
            if ok {
                used[j] = true;
                rec(k + 1, m, perm, used, profiles, by_top, set, out);
                used[j] = false;
            }
        }
        perm[k] = usize::MAX;
    }
    rec(0, m, &mut perm, &mut used, &profiles, &by_top, &set, &mut out);
    out
}

fn sign(p: &[usize]) -> i32 {
    let mut seen = vec![false; p.len()];
    let mut s = 1;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        if len % 2 == 0 {
            s = -s;
        }
    }
    s
}

fn torus_for(f: &Form, perm: &[usize]) -> Result<Option<TorusSolution>> {
    let m = f.nvars();
    let mut rows = Vec::with_capacity(f.len());
    let mut phases = Vec::with_capacity(f.len());
    for (mo, c) in f.terms() {
        let target = f.coeff(&image(mo, perm)).expect("support is preserved");
        let ratio = target * &c.inverse().expect("nonzero coefficient");
        // only root-of-unity ratios give finite-order solutions
        let Some((k, big)) = ratio.root_of_unity_exponent() else { return Ok(None) };
        rows.push(mo.exps(m).iter().map(|&x| x as i64).collect::<Vec<_>>());
        phases.push((k as i64, big as i64));
    }
    let den = phases.iter().fold(1i64, |acc, &(_, b)| num_integer::lcm(acc, b));
    let s: Vec<i64> = phases.iter().map(|&(k, b)| k * (den / b)).collect();
    solve_torus(&rows, m, &s, den)
}

fn monomial_matrix(perm: &[usize], u: &[i64], l: i64) -> CycMatrix {
    let m = perm.len();
    let mut a = Matrix::filled(m, m, CycNum::zero(l as u32));
    for i in 0..m {
        a.set(i, perm[i], CycNum::zeta(l as u32, u[i]));
    }
    shrink_matrix(&a)
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

fn perm_closure(gens: &[Vec<usize>], m: usize) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..m).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(&p, g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// The group of monomial matrices fixing F. Errors when the diagonal
/// stabiliser is infinite (F is then far from smooth).
pub fn monomial_automorphisms(f: &Form) -> Result<MonomialGroup> {
    let m = f.nvars();
    if m > 9 {
        return Err(Error::Domain("monomial search is limited to at most 9 variables".into()));
    }
    if f.is_zero() {
        return Err(Error::Domain("zero form".into()));
    }
    let f = uniform_form(f);
    let candidates = support_permutations(&f.support(), m);
    let mut admissible: Vec<(Vec<usize>, TorusSolution)> = Vec::new();
    for p in candidates {
        if let Some(sol) = torus_for(&f, &p)? {
            admissible.push((p, sol));
        }
    }
    let id: Vec<usize> = (0..m).collect();
    let kernel = admissible.iter().find(|(p, _)| *p == id).expect("identity always fixes F").1.clone();
    let mut gens: Vec<CycMatrix> =
        kernel.gens.iter().map(|(u, _)| monomial_matrix(&id, u, kernel.l)).collect();
    let lookup: HashMap<Vec<usize>, &TorusSolution> = admissible.iter().map(|(p, s)| (p.clone(), s)).collect();
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    let mut reach = perm_closure(&chosen, m);
    for (p, _) in &admissible {
        if !reach.contains(p) {
            chosen.push(p.clone());
            reach = perm_closure(&chosen, m);
        }
    }
    for p in &chosen {
        let sol = lookup[p];
        gens.push(monomial_matrix(p, &sol.particular, sol.l));
    }
    let diagonal_order = kernel.count();
    let (perms, phases) = admissible.into_iter().unzip::<_, _, Vec<_>, Vec<_>>();
    Ok(MonomialGroup { nvars: m, linear_order: perms.len() as u64 * diagonal_order, perms, phases, gens, diagonal_order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_form;
    use crate::forms::{fermat, fixes};

    #[test]
    fn fermat_group() {
        let g = monomial_automorphisms(&fermat(7, 3)).unwrap();
        assert_eq!(g.perms.len(), 5040);
        assert_eq!(g.diagonal_order, 2187);
        assert_eq!(g.projective_order(3), 3_674_160);
        let g6 = monomial_automorphisms(&fermat(6, 3)).unwrap();
        // symplectic part of the Fermat fourfold, modulo ξ3 I
        assert_eq!(g6.det_one_count() / 3, 29160);
        for a in &g.gens {
            assert!(fixes(a, &fermat(7, 3)).unwrap());
        }
    }

    #[test]
    fn klein_group() {
        let f = parse_form("x_1^2x_2+x_2^2x_3+x_3^2x_4+x_4^2x_5+x_5^2x_6+x_6^2x_7+x_7^2x_1", 7).unwrap();
        let g = monomial_automorphisms(&f).unwrap();
        assert_eq!(g.perms.len(), 7);
        assert_eq!(g.linear_order, 903);
        assert_eq!(g.projective_order(3), 301);
        assert!(g.gens.iter().all(|a| fixes(a, &f).unwrap()));
    }

    #[test]
    fn coefficients_force_phases() {
        // swapping x1, x2 in x1^3 - x2^3 needs t^3 = -1
        let f = parse_form("x_1^3-x_2^3", 2).unwrap();
        let g = monomial_automorphisms(&f).unwrap();
        assert_eq!(g.linear_order, 18);
        assert!(g.gens.iter().all(|a| fixes(a, &f).unwrap()));
        // x1^3 + 2 x2^3: the swap would need a non-root-of-unity ratio
        let h = parse_form("x_1^3+2x_2^3", 2).unwrap();
        assert_eq!(monomial_automorphisms(&h).unwrap().linear_order, 9);
        assert!(monomial_automorphisms(&parse_form("x_1^2x_2", 2).unwrap()).is_err());
    }
}
