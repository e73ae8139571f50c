//! Differential ranks, characteristic sets and the partition detectors.
//!
//! D_i^F sends an order-i operator ∂^α to ∂^α F; its rank is unchanged by
//! linear coordinate changes. For a cubic, Σ l_i ∂F/∂x_i is a quadric whose
//! D_1-matrix is M(l) = Σ l_i T_i with T_i[j][k] = ∂³F/∂x_i∂x_j∂x_k, so
//! S_1^F ≠ ∅ asks for a nonzero l making M(l) of rank one.

use std::fmt;

use crate::cyclo::lcm;
use crate::forms::{form_conductor, lift_form, lift_matrix, matrix_conductor, MonomialBasis};
use crate::groebner::{groebner, has_all_pure_powers, GbResult};
use crate::groups::{eigen_multiset, partition_tag};
use crate::matrix::Matrix;
use crate::poly::{Mono, Poly};
use crate::{CycMatrix, CycNum, Error, Form, Result};

fn derivative_by(f: &Form, op: &Mono) -> Form {
    let mut g = f.clone();
    for v in 0..f.nvars() {
        for _ in 0..op.get(v) {
            g = g.derivative(v);
        }
    }
    g
}

/// Rank of the coefficient matrix of all order-i partials of F.
pub fn rank_d(f: &Form, i: usize) -> Result<usize> {
    let d = f.degree().ok_or_else(|| Error::Domain("zero form".into()))?;
    if i == 0 || i > d {
        return Err(Error::Domain(format!("derivative order {i} outside 1..={d}")));
    }
    let m = f.nvars();
    let n = form_conductor(f);
    let f = lift_form(f, n)?;
    let target = MonomialBasis::new(m, d - i);
    let zero = CycNum::zero(n);
    let rows: Vec<Vec<CycNum>> =
        MonomialBasis::new(m, i).monos.iter().map(|op| target.coords(&derivative_by(&f, op), &zero)).collect();
    Ok(Matrix::from_rows(rows).rank())
}

fn directional(f: &Form, l: &[CycNum]) -> Result<Form> {
    let m = f.nvars();
    if l.len() != m {
        return Err(Error::Dimension(format!("l has length {}, expected {m}", l.len())));
    }
    if l.iter().all(|c| c.is_zero()) {
        return Err(Error::Domain("l must be nonzero".into()));
    }
    let n = l.iter().fold(form_conductor(f), |acc, c| lcm(acc, c.conductor()));
    let f = lift_form(f, n)?;
    let mut g = Poly::zero(m);
    for (i, c) in l.iter().enumerate() {
        if !c.is_zero() {
            g = g.add(&f.derivative(i).scale(&c.embed(n)?));
        }
    }
    Ok(g)
}

/// l ∈ S_r^F: rk D_1 of Σ l_i ∂F/∂x_i equals r.
pub fn char_set_member(f: &Form, l: &[CycNum], r: usize) -> Result<bool> {
    if f.degree().unwrap_or(0) < 2 {
        return Err(Error::Domain("characteristic sets need degree at least 2".into()));
    }
    let g = directional(f, l)?;
    if g.is_zero() {
        return Ok(r == 0);
    }
    Ok(rank_d(&g, 1)? == r)
}

/// The map P(l) = A l, which carries S_r of A(F) onto S_r of F.
pub fn transport(a: &CycMatrix, l: &[CycNum]) -> Vec<CycNum> {
    let n = l.iter().fold(matrix_conductor(a), |acc, c| lcm(acc, c.conductor()));
    let a = lift_matrix(a, n).expect("conductor divides the lcm");
    let l: Vec<CycNum> = l.iter().map(|c| c.embed(n).expect("conductor divides the lcm")).collect();
    a.mul_vec(&l)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum S1 {
    /// Nonempty; a point of S_1 when the candidate search found one.
    Yes(Option<Vec<CycNum>>),
    No,
    Exhausted,
}

/// M(l) as a matrix of linear forms in l.
fn l_hessian(f: &Form) -> Vec<Vec<Poly<CycNum>>> {
    let m = f.nvars();
    let mut out = vec![vec![Poly::zero(m); m]; m];
    for (j, row) in out.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            let fjk = f.derivative(j).derivative(k);
            let terms = (0..m).filter_map(|i| {
                let c = fjk.derivative(i);
                c.terms().first().map(|(_, c)| (Mono::var(i), c.clone()))
            });
            *entry = Poly::from_terms(m, terms.collect::<Vec<_>>());
        }
    }
    out
}

fn unit_candidates(n: u32, m: usize) -> Vec<Vec<CycNum>> {
    // first nonzero entry 1, others from the 12th roots of unity, support ≤ 3
    let big = lcm(n, 12);
    let roots: Vec<CycNum> = (0..12).map(|k| CycNum::zeta(big, k * big as i64 / 12)).collect();
    let zero = CycNum::zero(big);
    let mut out = Vec::new();
    for a in 0..m {
        let mut e = vec![zero.clone(); m];
        e[a] = CycNum::one(big);
        out.push(e.clone());
        for b in a + 1..m {
            for r in &roots {
                let mut v = e.clone();
                v[b] = r.clone();
                out.push(v.clone());
                for c in b + 1..m {
                    for s in &roots {
                        let mut w = v.clone();
                        w[c] = s.clone();
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

/// Whether S_1^F is nonempty, for a smooth cubic F. The 2×2 minors of M(l)
/// cut out the rank ≤ 1 locus; smoothness keeps M(l) ≠ 0 for l ≠ 0, so S_1 is
/// empty exactly when the minors have no common projective zero.
pub fn s1_non_empty(f: &Form, budget: usize) -> Result<S1> {
    if f.degree() != Some(3) || !f.is_homogeneous() {
        return Err(Error::Domain("S_1 test needs a cubic form".into()));
    }
    let m = f.nvars();
    let n = form_conductor(f);
    let f = lift_form(f, n)?;
    let h = l_hessian(&f);
    // entries vanish simultaneously only for a cone
    let mb = MonomialBasis::new(m, 1);
    let zero = CycNum::zero(n);
    let lin: Vec<Vec<CycNum>> = h.iter().flatten().map(|p| mb.coords(p, &zero)).collect();
    if Matrix::from_rows(lin).rank() < m {
        return Err(Error::Domain("M(l) vanishes for some l ≠ 0, so F is singular".into()));
    }
    let mut minors = Vec::new();
    for j in 0..m {
        for j2 in j + 1..m {
            for k in 0..m {
                for k2 in k + 1..m {
                    let p = h[j][k].mul(&h[j2][k2]).sub(&h[j][k2].mul(&h[j2][k]));
                    if !p.is_zero() {
                        minors.push(p);
                    }
                }
            }
        }
    }
    let empty = if minors.is_empty() {
        false
    } else {
        match groebner(&minors, budget) {
            GbResult::Basis(b) => has_all_pure_powers(&b, m),
            GbResult::Exhausted { .. } => return Ok(S1::Exhausted),
        }
    };
    if empty {
        return Ok(S1::No);
    }
    let witness = unit_candidates(n, m).into_iter().find(|l| char_set_member(&f, l, 1).unwrap_or(false));
    Ok(S1::Yes(witness))
}

/// (2,5) or (3,4) when A is similar to diag(ξ3,ξ3,1,…) or diag(ξ3,ξ3,ξ3,1,…) up to a scalar.
pub fn eigen_partition_witness(a: &CycMatrix) -> Result<Option<(usize, usize)>> {
    Ok(partition_tag(&eigen_multiset(a)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    MonomialSupport,
    EigenvalueWitness,
    ExplicitMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionReport {
    pub blocks: Vec<Vec<usize>>,
    /// Variables in no monomial.
    pub residual: Vec<usize>,
    pub certified_by: Certificate,
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &[usize]| format!("{{{}}}", v.iter().map(|i| format!("x{}", i + 1)).collect::<Vec<_>>().join(","));
        let blocks: Vec<String> = self.blocks.iter().map(|b| set(b)).collect();
        write!(f, "blocks {} residual {} certified {:?}", blocks.join(" "), set(&self.residual), self.certified_by)
    }
}

/// Connected components of the graph joining variables that share a monomial.
pub fn support_partition(monos: &[Mono], m: usize) -> PartitionReport {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut x = x;
        while p[x] != r {
            let nx = p[x];
            p[x] = r;
            x = nx;
        }
        r
    }
    let mut used = vec![false; m];
    for mo in monos {
        let vars: Vec<usize> = (0..m).filter(|&v| mo.get(v) > 0).collect();
        for &v in &vars {
            used[v] = true;
        }
        for w in vars.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_of = std::collections::HashMap::new();
    for v in (0..m).filter(|&v| used[v]) {
        let r = find(&mut parent, v);
        let idx = *root_of.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[idx].push(v);
    }
    PartitionReport { blocks, residual: (0..m).filter(|&v| !used[v]).collect(), certified_by: Certificate::MonomialSupport }
}

/// The support split of A(F), for a caller-supplied change of coordinates A.
pub fn explicit_partition(a: &CycMatrix, f: &Form) -> Result<PartitionReport> {
    let g = crate::forms::apply(a, f)?;
    let mut r = support_partition(&g.support(), g.nvars());
    r.certified_by = Certificate::ExplicitMatrix;
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    Diagonal,
    /// Shape (1,3,3), also allowing the two 3×3 blocks to be exchanged.
    SwapThrees,
}

fn block_of(sizes: &[usize], m: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(m);
    for (b, &s) in sizes.iter().enumerate() {
        out.extend(std::iter::repeat(b).take(s));
    }
    // leftover coordinates form one more block
    out.resize(m, sizes.len());
    out
}

/// Whether A respects the block shape. The admissible matrices form a group, so
/// checking the generators of a group decides it for every element.
pub fn has_block_shape(a: &CycMatrix, sizes: &[usize], mode: BlockMode) -> bool {
    let m = a.nrows();
    if sizes.iter().sum::<usize>() > m {
        return false;
    }
    let blk = block_of(sizes, m);
    let zero_outside = |map: &dyn Fn(usize) -> usize| {
        (0..m).all(|i| (0..m).all(|j| map(blk[i]) == blk[j] || a.get(i, j).is_zero()))
    };
    if zero_outside(&|b| b) {
        return true;
    }
    mode == BlockMode::SwapThrees
        && sizes == [1, 3, 3]
        && m == 7
        && zero_outside(&|b| match b {
            1 => 2,
            2 => 1,
            b => b,
        })
}

pub fn verify_block_shape(gens: &[CycMatrix], sizes: &[usize], mode: BlockMode) -> bool {
    gens.iter().all(|a| has_block_shape(a, sizes, mode))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_form;
    use crate::forms::{diag_roots, fermat, permutation_matrix};

    fn e(m: usize, i: usize) -> Vec<CycNum> {
        (0..m).map(|j| CycNum::from_int(1, (i == j) as i64)).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_d(&fermat(7, 3), 1).unwrap(), 7);
        assert_eq!(rank_d(&parse_form("x_1^3", 1).unwrap(), 1).unwrap(), 1);
        assert_eq!(rank_d(&parse_form("x_1^2x_2", 2).unwrap(), 2).unwrap(), 2);
        assert!(rank_d(&fermat(3, 3), 4).is_err());
    }

    #[test]
    fn membership() {
        assert!(char_set_member(&fermat(7, 3), &e(7, 0), 1).unwrap());
        let h = parse_form("x_1^3+x_2^3+x_3^3+x_1x_2x_3", 3).unwrap();
        assert!(!char_set_member(&h, &e(3, 0), 1).unwrap());
        assert!(char_set_member(&h, &e(3, 0), 3).unwrap());
        assert!(char_set_member(&h, &vec![CycNum::zero(1); 3], 1).is_err());
    }

    #[test]
    fn first_characteristic_set() {
        assert!(matches!(s1_non_empty(&fermat(3, 3), 10_000).unwrap(), S1::Yes(Some(_))));
        let hesse = parse_form("x_1^3+x_2^3+x_3^3+3(\\sqrt{3}-1)x_1x_2x_3", 3).unwrap();
        assert_eq!(s1_non_empty(&hesse, 100_000).unwrap(), S1::No);
        let h2 = parse_form("x_1^2x_2+x_2^2x_1", 2).unwrap();
        match s1_non_empty(&h2, 10_000).unwrap() {
            S1::Yes(Some(l)) => assert!(char_set_member(&h2, &l, 1).unwrap()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eigen_tags() {
        assert_eq!(eigen_partition_witness(&diag_roots(3, &[1, 1, 0, 0, 0, 0, 0])).unwrap(), Some((2, 5)));
        assert_eq!(eigen_partition_witness(&diag_roots(3, &[1, 1, 1, 0, 0, 0, 0])).unwrap(), Some((3, 4)));
        assert_eq!(eigen_partition_witness(&diag_roots(3, &[1, 0, 0, 0, 0, 0, 0])).unwrap(), None);
    }

    #[test]
    fn supports() {
        let mono = |e: [u16; 7]| Mono::new(&e);
        let c95 = [
            mono([2, 1, 0, 0, 0, 0, 0]),
            mono([0, 2, 1, 0, 0, 0, 0]),
            mono([1, 0, 2, 0, 0, 0, 0]),
            mono([0, 0, 0, 2, 1, 0, 0]),
            mono([0, 0, 0, 0, 2, 1, 0]),
            mono([0, 0, 0, 0, 0, 2, 1]),
            mono([0, 0, 0, 1, 0, 0, 2]),
        ];
        let r = support_partition(&c95, 7);
        assert_eq!(r.blocks, vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
        assert!(r.residual.is_empty());
        let all = crate::poly::monomials(7, 3);
        assert_eq!(support_partition(&all, 7).blocks, vec![(0..7).collect::<Vec<_>>()]);
    }

    #[test]
    fn explicit_split_of_the_two_variable_cubic() {
        // ((−1,−1),((1−√3 i)/2,(1+√3 i)/2)) takes x1²x2 + x2²x1 to x1³ + x2³
        // (1 ∓ √3 i)/2 = −ξ3, −ξ3²
        let a = crate::expr::parse_matrix(r"\begin{pmatrix}-1&-1\\-\xi_3&-\xi_3^2\end{pmatrix}").unwrap();
        let f = parse_form("x_1^2x_2+x_2^2x_1", 2).unwrap();
        let r = explicit_partition(&a, &f).unwrap();
        assert_eq!(r.blocks, vec![vec![0], vec![1]]);
        assert_eq!(r.certified_by, Certificate::ExplicitMatrix);
    }

    #[test]
    fn block_shapes() {
        let cycle = permutation_matrix(&[1, 2, 3, 4, 5, 6, 0], 1);
        assert!(!verify_block_shape(&[cycle], &[3, 4], BlockMode::Diagonal));
        let id = permutation_matrix(&[0, 1, 2, 3, 4, 5, 6], 1);
        assert!(verify_block_shape(&[id.clone()], &[3, 4], BlockMode::Diagonal));
        let swap = permutation_matrix(&[0, 4, 5, 6, 1, 2, 3], 1);
        assert!(!verify_block_shape(&[swap.clone()], &[1, 3, 3], BlockMode::Diagonal));
        assert!(verify_block_shape(&[swap, id], &[1, 3, 3], BlockMode::SwapThrees));
    }
}
