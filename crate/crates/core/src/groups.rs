//! Finite matrix groups: closure, orders, scalars and eigenvalue data.
//!
//! Exact closure works at the common conductor of the generators. The
//! modular closure reduces modulo a prime p ≡ 1 (mod 2N); when every generator
//! has p-integral entries the reduction is injective on the finite group
//! (congruence kernels are torsion-free above unramified odd primes), so
//! counts there are exact.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;

use crate::cyclo::lcm;
use crate::field::{powmod, Field, Fp};
use crate::forms::{fixes, lift_matrix, matrix_conductor};
use crate::matrix::Matrix;
use crate::modular::ModularImage;
use crate::{CycMatrix, CycNum, Error, Form, Result};

pub const DEFAULT_CAP: usize = 300_000;
/// Largest element order accepted when diagonalising.
pub const ORDER_CAP: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct MatGroup {
    pub m: usize,
    pub conductor: u32,
    pub gens: Vec<CycMatrix>,
    /// Every element, identity first, in breadth-first order.
    pub elements: Vec<CycMatrix>,
}

fn common(gens: &[CycMatrix]) -> Result<(usize, u32, Vec<CycMatrix>)> {
    let first = gens.first().ok_or_else(|| Error::Domain("no generators".into()))?;
    let m = first.nrows();
    if gens.iter().any(|g| g.nrows() != m || g.ncols() != m) {
        return Err(Error::Dimension("generators of different sizes".into()));
    }
    let n = gens.iter().fold(1, |acc, g| lcm(acc, matrix_conductor(g)));
    let gens = gens.iter().map(|g| lift_matrix(g, n)).collect::<Result<Vec<_>>>()?;
    if gens.iter().any(|g| g.det().is_zero()) {
        return Err(Error::Domain("singular generator".into()));
    }
    Ok((m, n, gens))
}

/// Breadth-first product closure; `CapExceeded` carries the count reached.
pub fn closure(gens: &[CycMatrix], cap: usize) -> Result<MatGroup> {
    let (m, n, gens) = common(gens)?;
    let id = Matrix::identity_like(m, &CycNum::zero(n));
    let mut seen: HashSet<CycMatrix> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let products: Vec<CycMatrix> =
            frontier.par_iter().flat_map_iter(|a| gens.iter().map(move |g| a.mul(g))).collect();
        let mut next = Vec::new();
        for p in products {
            if !seen.contains(&p) {
                seen.insert(p.clone());
                elements.push(p.clone());
                next.push(p);
                if elements.len() > cap {
                    return Err(Error::CapExceeded(elements.len()));
                }
            }
        }
        frontier = next;
    }
    Ok(MatGroup { m, conductor: n, gens, elements })
}

impl MatGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// |G ∩ scalars|.
    pub fn scalar_subgroup(&self) -> usize {
        self.elements.iter().filter(|a| a.scalar_value().is_some()).count()
    }

    /// |G| / |G ∩ scalars|, the order of the image in PGL.
    pub fn projective_order(&self) -> usize {
        self.order() / self.scalar_subgroup()
    }

    /// Every element has one nonzero entry per row; generators suffice since such matrices form a group.
    pub fn is_semi_permutation(&self) -> bool {
        self.gens.iter().all(is_semi_permutation)
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)))
    }

    pub fn fixes_form(&self, f: &Form) -> Result<bool> {
        for a in &self.elements {
            if !fixes(a, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Eigenvalue multisets of every element.
    pub fn eigen_multisets(&self) -> Result<Vec<Vec<Eigen>>> {
        self.elements.iter().map(eigen_multiset).collect()
    }

    /// No element has eigenvalues {ξ3^{a+1}×2, ξ3^a×5} or {ξ3^{a+1}×3, ξ3^a×4}.
    pub fn is_special(&self) -> Result<bool> {
        if self.m != 7 {
            return Err(Error::Domain("the special condition is defined in dimension 7".into()));
        }
        for a in &self.elements {
            // the forbidden spectra consist of cube roots of unity
            if !a.pow(3).is_identity() {
                continue;
            }
            if partition_tag(&eigen_multiset(a)?).is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn is_semi_permutation<K: Field>(a: &Matrix<K>) -> bool {
    (0..a.nrows()).all(|i| (0..a.ncols()).filter(|&j| !a.get(i, j).is_zero()).count() == 1)
        && (0..a.ncols()).all(|j| (0..a.nrows()).filter(|&i| !a.get(i, j).is_zero()).count() == 1)
}

/// Eigenvalue e^{2πi·num/den} (reduced, 0 ≤ num < den) with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Eigen {
    pub num: u32,
    pub den: u32,
    pub mult: usize,
}

/// Eigenvalues of a finite-order matrix via the nullity of A − ζ^j I.
pub fn eigen_multiset(a: &CycMatrix) -> Result<Vec<Eigen>> {
    let k = a.order(ORDER_CAP).ok_or_else(|| Error::Domain(format!("element order exceeds {ORDER_CAP}")))?;
    let n = lcm(matrix_conductor(a), k as u32);
    let a = lift_matrix(a, n)?;
    let m = a.nrows();
    let mut out = Vec::new();
    let mut total = 0;
    for j in 0..k {
        let z = CycNum::zeta(n, (j * (n as u64 / k)) as i64);
        let shifted = a.sub(&Matrix::identity_like(m, &z).scale(&z));
        let mult = m - shifted.rank();
        if mult > 0 {
            let g = j.gcd(&k);
            out.push(Eigen { num: (j / g) as u32, den: (k / g) as u32, mult });
            total += mult;
            if total == m {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// (2,5) or (3,4) when the spectrum is {ξ3^{a+1}×s, ξ3^a×(7−s)} with s ∈ {2, 3}.
pub fn partition_tag(spec: &[Eigen]) -> Option<(usize, usize)> {
    let [x, y] = spec else { return None };
    let third = |e: &Eigen| if e.den == 1 || e.den == 3 { Some(e.num * 3 / e.den) } else { None };
    let (tx, ty) = (third(x)?, third(y)?);
    for (hi, lo, th, tl) in [(x, y, tx, ty), (y, x, ty, tx)] {
        if th == (tl + 1) % 3 && hi.mult + lo.mult == 7 && (hi.mult == 2 || hi.mult == 3) {
            return Some((hi.mult, lo.mult));
        }
    }
    None
}

/// Order data computed modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularOrder {
    pub prime: u64,
    pub order: usize,
    pub scalars: usize,
    /// Elements on which the tracked character is trivial, when one was given.
    pub kernel: Option<usize>,
}

impl ModularOrder {
    pub fn projective(&self) -> usize {
        self.order / self.scalars
    }

    /// Image of the character's kernel in PGL. Only meaningful when the
    /// character is trivial on the scalars of the group.
    pub fn projective_kernel(&self) -> Option<usize> {
        self.kernel.map(|k| k / self.scalars)
    }
}

fn fp_mul(a: &[u64], b: &[u64], m: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; m * m];
    for i in 0..m {
        for k in 0..m {
            let x = a[i * m + k];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                let y = b[k * m + j];
                if y != 0 {
                    out[i * m + j] = ((out[i * m + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
                }
            }
        }
    }
    out
}

/// Closure of the reduced generators. Errors when some entry is not p-integral.
pub fn modular_order(gens: &[CycMatrix], cap: usize) -> Result<ModularOrder> {
    modular_order_with_character(gens, None, cap)
}

/// As [`modular_order`], also counting the kernel of a homomorphism to the
/// roots of unity given by its values on the generators.
pub fn modular_order_with_character(gens: &[CycMatrix], chars: Option<&[CycNum]>, cap: usize) -> Result<ModularOrder> {
    let (m, n, gens) = common(gens)?;
    let n = chars.map_or(n, |cs| cs.iter().fold(n, |acc, c| lcm(acc, c.conductor())));
    let img = ModularImage::new(n, 0);
    let p = img.prime();
    let not_integral = || Error::Domain("generator entries are not integral at the chosen prime".into());
    let red: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| {
            let g = lift_matrix(g, n).ok()?;
            img.map_matrix(&g).map(|a| a.entries().iter().map(|x: &Fp| x.v).collect())
        })
        .collect::<Option<_>>()
        .ok_or_else(not_integral)?;
    let chi: Vec<u64> = match chars {
        Some(cs) => {
            if cs.len() != gens.len() {
                return Err(Error::Dimension("one character value per generator".into()));
            }
            cs.iter().map(|c| c.embed(n).ok().and_then(|c| img.map(&c)).map(|x| x.v)).collect::<Option<_>>().ok_or_else(not_integral)?
        }
        None => vec![1; gens.len()],
    };
    let mut id = vec![0u64; m * m];
    for i in 0..m {
        id[i * m + i] = 1;
    }
    let root_exp = if n % 2 == 0 { n as u64 } else { 2 * n as u64 };
    let is_scalar = |a: &[u64]| {
        let c = a[0];
        (0..m).all(|i| (0..m).all(|j| a[i * m + j] == if i == j { c } else { 0 })) && powmod(c, root_exp, p) == 1
    };
    let mut index: HashMap<Vec<u64>, u64> = HashMap::from([(id.clone(), 1)]);
    let mut frontier = vec![(id, 1u64)];
    let mut scalars = 1;
    let mut kernel = 1;
    while !frontier.is_empty() {
        let products: Vec<(Vec<u64>, u64)> = frontier
            .par_iter()
            .flat_map_iter(|(a, c)| {
                red.iter().zip(&chi).map(move |(g, x)| (fp_mul(a, g, m, p), (*c as u128 * *x as u128 % p as u128) as u64))
            })
            .collect();
        let mut next = Vec::new();
        for (q, c) in products {
            if !index.contains_key(&q) {
                if is_scalar(&q) {
                    scalars += 1;
                }
                if c == 1 {
                    kernel += 1;
                }
                index.insert(q.clone(), c);
                next.push((q, c));
                if index.len() > cap {
                    return Err(Error::CapExceeded(index.len()));
                }
            }
        }
        frontier = next;
    }
    Ok(ModularOrder { prime: p, order: index.len(), scalars, kernel: chars.map(|_| kernel) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_matrix;
    use crate::forms::{diag_roots, permutation_matrix};

    fn cycle7() -> CycMatrix {
        permutation_matrix(&[1, 2, 3, 4, 5, 6, 0], 1)
    }

    #[test]
    fn scalars_and_projective_order() {
        let s = Matrix::identity_like(7, &CycNum::zeta(3, 1)).scale(&CycNum::zeta(3, 1));
        let g = closure(&[s.clone()], DEFAULT_CAP).unwrap();
        assert_eq!((g.order(), g.scalar_subgroup(), g.projective_order()), (3, 3, 1));
        let p = closure(&[cycle7()], DEFAULT_CAP).unwrap();
        assert_eq!((p.order(), p.scalar_subgroup()), (7, 1));
        assert!(p.is_semi_permutation() && p.is_abelian());
        let both = closure(&[cycle7(), s], DEFAULT_CAP).unwrap();
        assert_eq!(both.order(), 21);
        let mo = modular_order(&both.gens, DEFAULT_CAP).unwrap();
        assert_eq!((mo.order, mo.scalars), (21, 3));
        // det(ξ3 I) = ξ3 in dimension 7, so only the 7-cycle survives
        let dets: Vec<CycNum> = both.gens.iter().map(|g| g.det()).collect();
        let k = modular_order_with_character(&both.gens, Some(&dets), DEFAULT_CAP).unwrap();
        assert_eq!(k.kernel, Some(7));
    }

    #[test]
    fn klein_closure() {
        let d = diag_roots(43, &[1, -2, 4, -8, 16, -32, 64]);
        let g = closure(&[d, cycle7()], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 301);
        assert_eq!(g.projective_order(), 301);
        assert!(!g.is_abelian());
    }

    #[test]
    fn cap_is_reported() {
        let d = diag_roots(43, &[1, -2, 4, -8, 16, -32, 64]);
        assert_eq!(closure(&[d, cycle7()], 100).unwrap_err(), Error::CapExceeded(101));
    }

    #[test]
    fn eigenvalues_and_special() {
        let a = diag_roots(3, &[1, 1, 0, 0, 0, 0, 0]);
        let spec = eigen_multiset(&a).unwrap();
        assert_eq!(spec, vec![Eigen { num: 0, den: 1, mult: 5 }, Eigen { num: 1, den: 3, mult: 2 }]);
        assert_eq!(partition_tag(&spec), Some((2, 5)));
        assert_eq!(partition_tag(&eigen_multiset(&diag_roots(3, &[1, 1, 1, 0, 0, 0, 0])).unwrap()), Some((3, 4)));
        assert_eq!(partition_tag(&eigen_multiset(&diag_roots(3, &[1, 0, 0, 0, 0, 0, 0])).unwrap()), None);
        // shifted by a scalar: {ξ3^2 ×2, ξ3 ×5}
        assert_eq!(partition_tag(&eigen_multiset(&diag_roots(3, &[2, 2, 1, 1, 1, 1, 1])).unwrap()), Some((2, 5)));
        assert!(!closure(&[a], 10).unwrap().is_special().unwrap());
        assert!(closure(&[cycle7()], 10).unwrap().is_special().unwrap());
        let c = eigen_multiset(&cycle7()).unwrap();
        assert_eq!(c.len(), 7);
    }

    #[test]
    fn fourier_matrix_is_not_semi_permutation() {
        let f = parse_matrix("\\frac{1}{\\sqrt{-3}}\\begin{pmatrix}1&1&1\\\\1&\\xi_3&\\xi_3^2\\\\1&\\xi_3^2&\\xi_3\\end{pmatrix}");
        // the scalar prefix is not part of the matrix grammar; build it entrywise
        assert!(f.is_err());
        let s = crate::consts::sqrt3().inverse().unwrap();
        let body = parse_matrix("\\begin{pmatrix}1&1&1\\\\1&\\xi_3&\\xi_3^2\\\\1&\\xi_3^2&\\xi_3\\end{pmatrix}").unwrap();
        let n = lcm(matrix_conductor(&body), s.conductor());
        let dft = lift_matrix(&body, n).unwrap().scale(&s.embed(n).unwrap());
        assert!(!is_semi_permutation(&dft));
        assert!(is_semi_permutation(&cycle7()));
    }
}
