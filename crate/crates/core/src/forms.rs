//! Forms, the substitution action A(F)(x) = F(x·Aᵀ), and the flat-file formats.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::cyclo::{lcm, CycNum};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::{monomials, Mono, Poly};
use crate::{CycMatrix, Error, Form, Result};

pub use crate::poly::monomials as monomial_basis;

/// Ordered list of the degree-d monomials in m variables (grevlex, largest first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub m: usize,
    pub d: usize,
    pub monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl MonomialBasis {
    pub fn new(m: usize, d: usize) -> MonomialBasis {
        let monos = monomials(m, d);
        let index = monos.iter().enumerate().map(|(i, mo)| (*mo, i)).collect();
        MonomialBasis { m, d, monos, index }
    }
    pub fn len(&self) -> usize {
        self.monos.len()
    }
    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }
    pub fn index_of(&self, mo: &Mono) -> Option<usize> {
        self.index.get(mo).copied()
    }
    /// Coordinate vector of a form in this basis.
    pub fn coords<K: Field>(&self, f: &Poly<K>, proto: &K) -> Vec<K> {
        let mut v = vec![proto.zero_like(); self.len()];
        for (mo, c) in f.terms() {
            v[self.index[mo]] = c.clone();
        }
        v
    }
    pub fn form_from_coords<K: Field>(&self, v: &[K]) -> Poly<K> {
        let terms: Vec<(Mono, K)> = self.monos.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c.clone())).collect();
        Poly::from_sorted_unchecked(self.m, terms)
    }
}

/// lcm of the coefficient conductors; 1 for the zero form.
pub fn form_conductor(f: &Form) -> u32 {
    f.terms().iter().fold(1, |acc, (_, c)| lcm(acc, c.conductor()))
}

pub fn matrix_conductor(a: &CycMatrix) -> u32 {
    a.entries().iter().fold(1, |acc, c| lcm(acc, c.conductor()))
}

pub fn lift_form(f: &Form, n: u32) -> Result<Form> {
    f.try_map_coeffs(|c| c.embed(n))
}

pub fn lift_matrix(a: &CycMatrix, n: u32) -> Result<CycMatrix> {
    a.try_map(|c| c.embed(n))
}

/// Lifts every coefficient to the form's lcm conductor.
pub fn uniform_form(f: &Form) -> Form {
    lift_form(f, form_conductor(f)).expect("lcm is a multiple")
}

pub fn uniform_matrix(a: &CycMatrix) -> CycMatrix {
    lift_matrix(a, matrix_conductor(a)).expect("lcm is a multiple")
}

/// A(F) for any scalar field; substitution x_i ↦ Σ_j a_ij x_j with memoised powers.
pub fn apply_generic<K: Field>(a: &Matrix<K>, f: &Poly<K>) -> Poly<K> {
    let m = f.nvars();
    assert_eq!(a.nrows(), m, "matrix dimension must equal the number of variables");
    let Some(proto) = f.proto() else { return f.clone() };
    let rows: Vec<Vec<(usize, K)>> =
        (0..m).map(|i| (0..m).filter(|&j| !a.get(i, j).is_zero()).map(|j| (j, a.get(i, j).clone())).collect()).collect();
    if rows.iter().all(|r| r.len() == 1) {
        // monomial matrix: each term maps to a single term
        let terms = f.terms().iter().map(|(mo, c)| {
            let mut e = [0u16; crate::poly::MAXV];
            let mut coef = c.clone();
            for i in 0..m {
                let k = mo.get(i);
                if k == 0 {
                    continue;
                }
                let (j, ref s) = rows[i][0];
                e[j] += k;
                if !s.is_one() {
                    for _ in 0..k {
                        coef = coef.mul_ref(s);
                    }
                }
            }
            (Mono::new(&e[..m]), coef)
        });
        return Poly::from_terms(m, terms);
    }
    let one = proto.one_like();
    let lin: Vec<Poly<K>> = rows.iter().map(|r| Poly::from_terms(m, r.iter().map(|(j, c)| (Mono::var(*j), c.clone())))).collect();
    let mut pows: Vec<Vec<Poly<K>>> = lin.iter().map(|l| vec![Poly::monomial(m, Mono::one(), one.clone()), l.clone()]).collect();
    let mut acc: HashMap<Mono, K> = HashMap::new();
    for (mo, c) in f.terms() {
        let mut prod = Poly::monomial(m, Mono::one(), c.clone());
        for i in 0..m {
            let k = mo.get(i) as usize;
            if k == 0 {
                continue;
            }
            while pows[i].len() <= k {
                let next = pows[i].last().unwrap().mul(&lin[i]);
                pows[i].push(next);
            }
            prod = prod.mul(&pows[i][k]);
        }
        for (mm, cc) in prod.into_terms() {
            match acc.get_mut(&mm) {
                Some(v) => *v = v.add_ref(&cc),
                None => {
                    acc.insert(mm, cc);
                }
            }
        }
    }
    Poly::from_terms(m, acc)
}

/// A(F) with conductors lifted to their lcm.
pub fn apply(a: &CycMatrix, f: &Form) -> Result<Form> {
    if a.nrows() != f.nvars() || a.ncols() != f.nvars() {
        return Err(Error::Dimension(format!("{}x{} matrix on a form in {} variables", a.nrows(), a.ncols(), f.nvars())));
    }
    let n = lcm(matrix_conductor(a), form_conductor(f));
    Ok(apply_generic(&lift_matrix(a, n)?, &lift_form(f, n)?))
}

/// λ with A(F) = λF, if any.
pub fn semi_invariance_factor(a: &CycMatrix, f: &Form) -> Result<Option<CycNum>> {
    if f.is_zero() {
        return Err(Error::Domain("semi-invariance factor of the zero form".into()));
    }
    let g = apply(a, f)?;
    let n = lcm(form_conductor(&g), form_conductor(f));
    let g = lift_form(&g, n)?;
    let f = lift_form(f, n)?;
    if g.len() != f.len() {
        return Ok(None);
    }
    let (m0, c0) = &f.terms()[0];
    let Some(g0) = g.coeff(m0) else { return Ok(None) };
    let lambda = g0 * &c0.inverse().unwrap();
    if f.scale(&lambda) == g {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// True when A(F) = F exactly.
pub fn fixes(a: &CycMatrix, f: &Form) -> Result<bool> {
    let g = apply(a, f)?;
    let n = lcm(form_conductor(&g), form_conductor(f));
    Ok(lift_form(&g, n)? == lift_form(f, n)?)
}

/// F̂ = F + x_{m+1}^d.
pub fn hat(f: &Form) -> Result<Form> {
    let d = f.degree().ok_or_else(|| Error::Domain("hat of the zero form".into()))?;
    let m = f.nvars();
    let n = form_conductor(f);
    let g = f.with_nvars(m + 1);
    Ok(g.add(&Poly::monomial(m + 1, Mono::var_pow(m, d as u16), CycNum::one(n))))
}

/// x_1^d + … + x_m^d.
pub fn fermat(m: usize, d: usize) -> Form {
    Poly::from_terms(m, (0..m).map(|i| (Mono::var_pow(i, d as u16), CycNum::one(1))))
}

/// Permutation matrix sending x_i to x_{perm[i]} under the action, i.e. row i = e_{perm[i]}.
pub fn permutation_matrix(perm: &[usize], n: u32) -> CycMatrix {
    let m = perm.len();
    let mut a = Matrix::filled(m, m, CycNum::zero(n));
    for (i, &p) in perm.iter().enumerate() {
        a.set(i, p, CycNum::one(n));
    }
    a
}

/// diag(ζ_N^{e_1}, …).
pub fn diag_roots(n: u32, exps: &[i64]) -> CycMatrix {
    Matrix::diagonal(exps.iter().map(|&e| CycNum::zeta(n, e)).collect())
}

// ---- text formats ----------------------------------------------------------

pub fn form_to_text(f: &Form) -> String {
    let n = form_conductor(f);
    let d = f.degree().unwrap_or(0);
    let f = lift_form(f, n).unwrap();
    let mut s = format!("form {} {} {}\n", f.nvars(), d, n);
    for (mo, c) in f.terms() {
        let exps: Vec<String> = mo.exps(f.nvars()).iter().map(|e| e.to_string()).collect();
        writeln!(s, "{} | {}", exps.join(" "), c.encode()).unwrap();
    }
    s
}

fn lines_of(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header<'a>(line: &'a str, word: &str, count: usize) -> Result<Vec<u64>> {
    let toks: Vec<&'a str> = line.split_whitespace().collect();
    if toks.first() != Some(&word) || toks.len() != count + 1 {
        return Err(Error::Parse(format!("expected `{word}` header with {count} fields, got {line:?}")));
    }
    toks[1..].iter().map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad header field {t:?}")))).collect()
}

pub fn form_from_text(text: &str) -> Result<Form> {
    let mut lines = lines_of(text);
    let (_, head) = lines.next().ok_or_else(|| Error::Parse("empty form file".into()))?;
    let h = parse_header(head, "form", 3)?;
    let (m, d, n) = (h[0] as usize, h[1] as usize, h[2] as u32);
    if m == 0 || m > crate::poly::MAXV || n == 0 {
        return Err(Error::Parse(format!("unsupported form header {head:?}")));
    }
    let mut terms = Vec::new();
    for (ln, l) in lines {
        let (lhs, rhs) = l.split_once('|').ok_or_else(|| Error::Parse(format!("line {ln}: missing `|`")))?;
        let exps: Result<Vec<u16>, _> = lhs.split_whitespace().map(|t| t.parse::<u16>()).collect();
        let exps = exps.map_err(|_| Error::Parse(format!("line {ln}: bad exponent")))?;
        if exps.len() != m {
            return Err(Error::Parse(format!("line {ln}: expected {m} exponents")));
        }
        if exps.iter().map(|&e| e as usize).sum::<usize>() != d {
            return Err(Error::Parse(format!("line {ln}: term is not of degree {d}")));
        }
        let c = CycNum::decode(rhs)?;
        if n % c.conductor() != 0 {
            return Err(Error::Parse(format!("line {ln}: conductor {} does not divide {n}", c.conductor())));
        }
        terms.push((Mono::new(&exps), c.embed(n)?));
    }
    Ok(Poly::from_terms(m, terms))
}

pub fn matrix_to_text(a: &CycMatrix) -> String {
    let n = matrix_conductor(a);
    let a = lift_matrix(a, n).unwrap();
    let mut s = format!("matrix {} {}\n", a.nrows(), n);
    for i in 0..a.nrows() {
        let row: Vec<String> = a.row(i).iter().map(|c| c.encode()).collect();
        writeln!(s, "{}", row.join(" ; ")).unwrap();
    }
    s
}

fn parse_matrix_rows<'a>(m: usize, n: u32, rows: impl Iterator<Item = (usize, &'a str)>) -> Result<CycMatrix> {
    let mut cells = Vec::with_capacity(m * m);
    let mut count = 0;
    for (ln, l) in rows {
        let parts: Vec<&str> = l.split(';').collect();
        if parts.len() != m {
            return Err(Error::Parse(format!("line {ln}: expected {m} entries")));
        }
        for p in parts {
            let c = CycNum::decode(p)?;
            if n % c.conductor() != 0 {
                return Err(Error::Parse(format!("line {ln}: conductor {} does not divide {n}", c.conductor())));
            }
            cells.push(c.embed(n)?);
        }
        count += 1;
    }
    if count != m {
        return Err(Error::Parse(format!("expected {m} matrix rows, got {count}")));
    }
    Ok(Matrix::from_vec(m, m, cells))
}

pub fn matrix_from_text(text: &str) -> Result<CycMatrix> {
    let mut lines = lines_of(text);
    let (_, head) = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let h = parse_header(head, "matrix", 2)?;
    if h[0] == 0 || h[1] == 0 {
        return Err(Error::Parse("degenerate matrix header".into()));
    }
    parse_matrix_rows(h[0] as usize, h[1] as u32, lines)
}

pub fn group_to_text(gens: &[CycMatrix], m: usize) -> String {
    let n = gens.iter().fold(1, |acc, g| lcm(acc, matrix_conductor(g)));
    let mut s = format!("group {} {} {}\n", m, n, gens.len());
    for g in gens {
        s.push_str(&matrix_to_text(&lift_matrix(g, n).unwrap()));
    }
    s
}

pub fn group_from_text(text: &str) -> Result<(usize, Vec<CycMatrix>)> {
    let lines: Vec<(usize, &str)> = lines_of(text).collect();
    let (_, head) = *lines.first().ok_or_else(|| Error::Parse("empty group file".into()))?;
    let h = parse_header(head, "group", 3)?;
    let (m, n, k) = (h[0] as usize, h[1] as u32, h[2] as usize);
    if m == 0 || n == 0 {
        return Err(Error::Parse("degenerate group header".into()));
    }
    let mut gens = Vec::with_capacity(k);
    let mut pos = 1;
    for _ in 0..k {
        let (ln, mh) = *lines.get(pos).ok_or_else(|| Error::Parse(format!("expected {k} matrices")))?;
        let hh = parse_header(mh, "matrix", 2).map_err(|e| Error::Parse(format!("line {ln}: {e}")))?;
        if hh[0] as usize != m || n as u64 % hh[1] != 0 {
            return Err(Error::Parse(format!("line {ln}: matrix header inconsistent with group header")));
        }
        let rows = lines.get(pos + 1..pos + 1 + m).ok_or_else(|| Error::Parse("truncated matrix".into()))?;
        gens.push(lift_matrix(&parse_matrix_rows(m, hh[1] as u32, rows.iter().copied())?, n)?);
        pos += 1 + m;
    }
    if pos != lines.len() {
        return Err(Error::Parse("trailing lines after the last matrix".into()));
    }
    Ok((m, gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts;

    fn mono_form(m: usize, e: &[u16]) -> Form {
        Poly::monomial(m, Mono::new(e), CycNum::one(1))
    }

    #[test]
    fn swap_acts_on_monomial() {
        let f = mono_form(2, &[2, 1]);
        let a = permutation_matrix(&[1, 0], 1);
        assert_eq!(apply(&a, &f).unwrap(), mono_form(2, &[1, 2]));
    }

    #[test]
    fn identity_fixes() {
        let f = fermat(4, 3).add(&mono_form(4, &[1, 1, 1, 0]));
        let id = Matrix::identity_like(4, &CycNum::one(1));
        assert_eq!(apply(&id, &f).unwrap(), f);
    }

    #[test]
    fn hesse_block_becomes_fermat() {
        // x2^2 x3 + x3^2 x2 in two variables, matrix ((-1,-1),((1-√3 i)/2,(1+√3 i)/2)).
        let h = mono_form(2, &[2, 1]).add(&mono_form(2, &[1, 2]));
        let s = consts::sqrt(-3).unwrap().embed(12).unwrap();
        let half = CycNum::from_ratio(12, 1, 2);
        let one = CycNum::one(12);
        let a = Matrix::from_rows(vec![
            vec![-&one, -&one],
            vec![&(&one - &s) * &half, &(&one + &s) * &half],
        ]);
        let image = uniform_form(&apply(&a, &h).unwrap());
        // oracle: with u = -(x+y), v = ω̄x + ωy we have u^2 v + u v^2 = uv(u+v) and u+v = ... ; compare with x^3 + y^3 directly
        let expect = lift_form(&fermat(2, 3), 12).unwrap();
        assert_eq!(image, expect);
    }

    #[test]
    fn semi_invariance_examples() {
        let f = fermat(7, 3);
        let scalar = Matrix::identity_like(7, &CycNum::one(3)).scale(&CycNum::zeta(3, 1));
        assert_eq!(semi_invariance_factor(&scalar, &f).unwrap(), Some(CycNum::one(3)));
        let mut d = Matrix::identity_like(7, &CycNum::one(1));
        d.set(0, 0, CycNum::from_int(1, 2));
        assert_eq!(semi_invariance_factor(&d, &f).unwrap(), None);
        assert!(semi_invariance_factor(&d, &Poly::zero(7)).is_err());
    }

    #[test]
    fn hat_adds_pure_power() {
        let h = hat(&fermat(6, 3)).unwrap();
        assert_eq!(h, fermat(7, 3));
    }

    #[test]
    fn text_round_trips() {
        let f = uniform_form(&fermat(3, 3).add(&Poly::monomial(3, Mono::new(&[1, 1, 1]), consts::sqrt3())));
        let t = form_to_text(&f);
        let g = form_from_text(&t).unwrap();
        assert_eq!(g, f);
        assert_eq!(form_to_text(&g), t);

        let a = diag_roots(8, &[1, 3, 0]);
        let t = matrix_to_text(&a);
        assert_eq!(matrix_to_text(&matrix_from_text(&t).unwrap()), t);

        let gens = vec![diag_roots(3, &[1, 0]), permutation_matrix(&[1, 0], 1)];
        let t = group_to_text(&gens, 2);
        let (m, back) = group_from_text(&t).unwrap();
        assert_eq!(m, 2);
        assert_eq!(group_to_text(&back, 2), t);
        assert!(form_from_text("form 2 3 1\n1 1 | 1 1 1\n").is_err());
    }
}
