//! Invariant forms of a matrix group, the symplectic test for fourfold
//! automorphisms, and the covering construction F ↦ F + x_{m+1}^d.

use num_integer::Integer;

use crate::cyclo::lcm;
use crate::forms::{apply_generic, form_conductor, lift_form, lift_matrix, matrix_conductor, semi_invariance_factor, MonomialBasis};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::{CycMatrix, CycNum, Error, Form, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSpace {
    pub m: usize,
    pub d: usize,
    /// Reduced echelon basis over the grevlex monomial basis, leading coefficients 1.
    pub basis: Vec<Form>,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when f lies in the span of the basis.
    pub fn contains(&self, f: &Form) -> bool {
        if f.is_zero() {
            return true;
        }
        let mb = MonomialBasis::new(self.m, self.d);
        let n = self.basis.iter().fold(form_conductor(f), |acc, b| lcm(acc, form_conductor(b)));
        let zero = CycNum::zero(n);
        let rows: Vec<Vec<CycNum>> =
            self.basis.iter().map(|b| mb.coords(&lift_form(b, n).unwrap(), &zero)).collect();
        let r0 = if rows.is_empty() { 0 } else { Matrix::from_rows(rows.clone()).rank() };
        let mut all = rows;
        all.push(mb.coords(&lift_form(f, n).unwrap(), &zero));
        Matrix::from_rows(all).rank() == r0
    }
}

/// Matrix of F ↦ A(F) on degree-d forms, column j the image of the j-th monomial.
pub fn action_matrix(a: &CycMatrix, d: usize, mb: &MonomialBasis) -> CycMatrix {
    let n = matrix_conductor(a);
    let zero = CycNum::zero(n);
    let cols: Vec<Vec<CycNum>> = mb
        .monos
        .iter()
        .map(|mo| mb.coords(&apply_generic(a, &Poly::monomial(mb.m, *mo, CycNum::one(n))), &zero))
        .collect();
    debug_assert!(cols.iter().all(|c| c.len() == mb.len()) && d == mb.d);
    Matrix::from_rows(cols).transpose()
}

/// The degree-d forms fixed by every generator: the null space of the stacked
/// maps A − I, in reduced echelon form (leftmost grevlex pivot, coefficient 1).
pub fn invariant_forms(gens: &[CycMatrix], d: usize) -> Result<InvariantSpace> {
    let m = gens.first().ok_or_else(|| Error::Domain("no generators".into()))?.nrows();
    if gens.iter().any(|g| g.nrows() != m || g.ncols() != m) {
        return Err(Error::Dimension("generators of different sizes".into()));
    }
    let n = gens.iter().fold(1, |acc, g| lcm(acc, matrix_conductor(g)));
    let gens: Vec<CycMatrix> = gens.iter().map(|g| lift_matrix(g, n)).collect::<Result<_>>()?;
    let mb = MonomialBasis::new(m, d);
    let id = Matrix::identity_like(mb.len(), &CycNum::zero(n));
    let mut rows: Vec<Vec<CycNum>> = Vec::new();
    for g in &gens {
        let mut block = action_matrix(g, d, &mb).sub(&id);
        let piv = block.rref();
        rows.extend((0..piv.len()).map(|r| block.row(r).to_vec()));
    }
    let null = if rows.is_empty() {
        (0..mb.len()).map(|i| id.row(i).to_vec()).collect()
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    if null.is_empty() {
        return Ok(InvariantSpace { m, d, basis: vec![] });
    }
    let mut ech = Matrix::from_rows(null);
    let piv = ech.rref();
    let basis = (0..piv.len()).map(|r| crate::expr::shrink_form(&mb.form_from_coords(ech.row(r)))).collect();
    Ok(InvariantSpace { m, d, basis })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticCheck {
    pub symplectic: bool,
    pub lambda: CycNum,
    pub det: CycNum,
    /// Root of unity c used to replace A by cA so that ord([A]) = ord(A).
    pub scaled_by: Option<CycNum>,
}

/// Smallest k ≥ 1 with A^k scalar, and that scalar.
fn projective_power(a: &CycMatrix, cap: u64) -> Option<(u64, CycNum)> {
    let mut p = a.clone();
    for k in 1..=cap {
        if let Some(c) = p.scalar_value() {
            return Some((k, c));
        }
        p = p.mul(a);
    }
    None
}

/// det(A) = λ² where A(F) = λF, after scaling A so that its order equals the
/// order of its class in PGL.
pub fn is_symplectic(a: &CycMatrix, f: &Form) -> Result<SymplecticCheck> {
    let n = lcm(matrix_conductor(a), form_conductor(f));
    let a = lift_matrix(a, n)?;
    let (k, mu) = projective_power(&a, crate::groups::ORDER_CAP)
        .ok_or_else(|| Error::Domain("matrix has no finite projective order within the cap".into()))?;
    let (e, r) = mu.root_of_unity_exponent().ok_or_else(|| Error::Domain("matrix has infinite order".into()))?;
    // μ = ζ_r^e; c = ζ_{kr}^{-e} gives (cA)^k = I
    let (a, scaled_by) = if mu.is_one() {
        (a, None)
    } else {
        let big = lcm(n, k as u32 * r);
        let c = CycNum::zeta(big, -(e as i64));
        (lift_matrix(&a, big)?.scale(&c), Some(c))
    };
    let lambda = semi_invariance_factor(&a, f)?.ok_or_else(|| Error::Domain("matrix does not fix the form up to a scalar".into()))?;
    let det = a.det();
    let n2 = lcm(lambda.conductor(), det.conductor());
    let l2 = lambda.embed(n2)?;
    let sq = &l2 * &l2;
    let symplectic = det.embed(n2)? == sq;
    Ok(SymplecticCheck { symplectic, lambda: crate::expr::shrink_scalar(&lambda), det: crate::expr::shrink_scalar(&det), scaled_by })
}

/// diag(A, 1) for every generator together with diag(ξ_d I_m, 1).
pub fn covering_lift(gens: &[CycMatrix], d: usize) -> Vec<CycMatrix> {
    let one = |n: u32| Matrix::identity_like(1, &CycNum::zero(n));
    let mut out: Vec<CycMatrix> = gens.iter().map(|g| g.direct_sum(&one(matrix_conductor(g)))).collect();
    if let Some(m) = gens.first().map(|g| g.nrows()) {
        let s = Matrix::identity_like(m, &CycNum::zero(d as u32)).scale(&CycNum::zeta(d as u32, 1));
        out.push(s.direct_sum(&one(d as u32)));
    }
    out
}

/// Whether every automorphism group of a smooth degree-d hypersurface in m
/// variables lifts isomorphically to G_F: exactly when gcd(m, d) = 1.
pub fn f_lifting_exists(m: usize, d: usize) -> Result<bool> {
    if m < 3 || d < 3 || (m, d) == (3, 3) || (m, d) == (4, 4) {
        return Err(Error::Domain(format!("lifting criterion does not apply to (m, d) = ({m}, {d})")));
    }
    Ok(m.gcd(&d) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_form;
    use crate::forms::{diag_roots, fixes, hat};
    use crate::poly::Mono;

    #[test]
    fn scalars_fix_every_cubic() {
        let s = Matrix::identity_like(7, &CycNum::zero(3)).scale(&CycNum::zeta(3, 1));
        assert_eq!(invariant_forms(&[s], 3).unwrap().dim(), 84);
    }

    #[test]
    fn m96_basis() {
        // diag(1, ξ4^3, ξ8^5, ξ16^3, ξ32^13) ⊕ swap, and diag(1,1,1,1,1,ξ3,ξ3^2)
        let mut a1 = diag_roots(32, &[0, 24, 20, 6, 13, 0, 0]);
        a1.set(5, 5, CycNum::zero(32));
        a1.set(6, 6, CycNum::zero(32));
        a1.set(5, 6, CycNum::one(32));
        a1.set(6, 5, CycNum::one(32));
        let a2 = diag_roots(3, &[0, 0, 0, 0, 0, 1, 2]);
        let sp = invariant_forms(&[a1, a2], 3).unwrap();
        let want = ["x_1^3", "x_1x_6x_7", "x_4x_5^2", "x_6^3+x_7^3", "x_3x_4^2", "x_2x_3^2"];
        assert_eq!(sp.dim(), 6);
        for w in want {
            let f = parse_form(w, 7).unwrap();
            assert!(sp.basis.iter().any(|b| crate::expr::same_form(b, &f)), "{w} missing");
        }
    }

    #[test]
    fn c11_support() {
        let a = diag_roots(11, &[9, 5, 4, 3, 1, 0, 0]);
        let sp = invariant_forms(&[a], 3).unwrap();
        assert_eq!(sp.dim(), 9);
        assert!(sp.basis.iter().all(|b| b.len() == 1));
        assert!(sp.contains(&Poly::monomial(7, Mono::new(&[2, 0, 1, 0, 0, 0, 0]), CycNum::one(1))));
    }

    #[test]
    fn symplectic_examples() {
        let f5 = parse_form("x_1^2x_2+x_2^2x_3+x_3^2x_4+x_4^2x_5+x_5^3+x_6^3", 6).unwrap();
        // diag(ξ16, ξ8^7, ξ4, −1, 1, ξ3)
        let a = diag_roots(48, &[3, 42, 12, 24, 0, 16]);
        let s = is_symplectic(&a, &f5).unwrap();
        assert!(s.lambda.is_one());
        assert!(!s.symplectic);
        assert_eq!(s.det.root_of_unity_order(), Some(48));
        let id = Matrix::identity_like(6, &CycNum::zero(1));
        assert!(is_symplectic(&id, &f5).unwrap().symplectic);
        let bad = diag_roots(1, &[0; 6]).scale(&CycNum::from_int(1, 2));
        // 2I is not of finite order
        assert!(is_symplectic(&bad, &f5).is_err());
    }

    #[test]
    fn lift_and_criterion() {
        let f = parse_form("x_1^3+x_2^3+x_3^3", 3).unwrap();
        let id = Matrix::identity_like(3, &CycNum::zero(1));
        let lifted = covering_lift(&[id], 3);
        assert_eq!(lifted.len(), 2);
        let h = hat(&f).unwrap();
        assert!(lifted.iter().all(|a| fixes(a, &h).unwrap()));
        assert!(f_lifting_exists(7, 3).unwrap());
        assert!(!f_lifting_exists(6, 3).unwrap());
        assert!(f_lifting_exists(5, 3).unwrap());
        assert!(f_lifting_exists(3, 3).is_err());
    }
}
