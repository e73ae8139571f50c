//! The shipped examples: 20 cubic fivefolds, 15 cubic fourfolds and the A7
//! fourfold, each with a form, generators and the expected group orders.
//!
//! Generators come from three places: the monomial search (diagonal and
//! permutation matrices), explicit building blocks (the 3×3 Fourier matrix on
//! Hesse triples, S_k acting on a hyperplane), and matrices printed verbatim
//! in `data/`. Records whose full generating sets were never printed carry a
//! `partial` note; their generators span a subgroup only.

use crate::cyclo::consts;
use crate::expr::{parse_form, parse_matrix, shrink_matrix};
use crate::forms::{diag_roots, lift_matrix, matrix_conductor};
use crate::matrix::Matrix;
use crate::monomial::monomial_automorphisms;
use crate::poly::{Mono, Poly};
use crate::{CycMatrix, CycNum, Error, Form, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Fivefold,
    Fourfold,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub id: String,
    pub kind: Kind,
    pub form: Form,
    pub gens: Vec<CycMatrix>,
    /// Order of the group in PGL.
    pub expected_order: u64,
    pub expected_symplectic: Option<u64>,
    /// Why the generators are incomplete, if they are.
    pub partial: Option<&'static str>,
}

const X15: &str = include_str!("../data/x15.tex");
const X16_BLOCK: &str = include_str!("../data/x16_block.tex");
const X17: [&str; 3] =
    [include_str!("../data/x17_a.tex"), include_str!("../data/x17_b.tex"), include_str!("../data/x17_c.tex")];
const X18: [&str; 3] =
    [include_str!("../data/x18_a.tex"), include_str!("../data/x18_b.tex"), include_str!("../data/x18_c.tex")];
const F12: &str = include_str!("../data/f12.tex");
const F15: &str = include_str!("../data/f15.tex");
const F17: &str = include_str!("../data/f17.tex");
const F18: &str = include_str!("../data/f18.tex");
const F10P: &str = include_str!("../data/f10p.tex");
const F13P: &str = include_str!("../data/f13p.tex");
const F14P: &str = include_str!("../data/f14p.tex");
const F15P: &str = include_str!("../data/f15p.tex");

const HESSE: &str = "3(\\sqrt{3}-1)";
const FA7: &str = "x_1^3+x_2^3+x_3^3+\\frac{12}{5}x_1x_2x_3+x_1x_4^2+x_2x_5^2+x_3x_6^2+\\frac{4\\sqrt{15}}{9}x_4x_5x_6";
const PSL211: &str = "generators of the PSL(2,11) factor were not printed; the monomial subgroup is shipped";
const M10: &str = "generators of the M10 part were not printed; the monomial subgroup is shipped";

pub const FIVEFOLD_ORDERS: [u64; 20] = [
    3674160, 69984, 1296, 19440, 288, 11880, 23328, 864, 12960, 96, 378, 2160, 15120, 96, 1008, 7560, 144, 648, 64, 301,
];
/// (|Aut|, |Aut^s|) of the fourfolds 1'–15'.
pub const FOURFOLD_ORDERS: [(u64, u64); 15] = [
    (174960, 29160),
    (5832, 486),
    (144, 6),
    (2160, 360),
    (48, 1),
    (1980, 660),
    (7776, 1944),
    (32, 1),
    (126, 21),
    (720, 720),
    (5040, 2520),
    (32, 16),
    (336, 168),
    (48, 48),
    (216, 72),
];
/// Fivefold j with F_j = hat(F'_i) up to a permutation of variables, for i = 1..15.
pub const FOURFOLD_TO_FIVEFOLD: [usize; 15] = [1, 2, 3, 4, 5, 6, 7, 10, 11, 12, 13, 14, 15, 17, 18];

pub fn ids() -> Vec<String> {
    let mut v: Vec<String> = (1..=20).map(|i| format!("X{i}")).collect();
    v.extend((1..=15).map(|i| format!("X{i}'")));
    v.push("XA7'".into());
    v
}

fn identity(m: usize, n: u32) -> CycMatrix {
    Matrix::identity_like(m, &CycNum::zero(n))
}

/// Embeds a k×k block at the given coordinates of an m×m identity.
fn embed_block(block: &CycMatrix, at: &[usize], m: usize) -> CycMatrix {
    let n = matrix_conductor(block);
    let b = lift_matrix(block, n).unwrap();
    let mut a = identity(m, n);
    for (r, &i) in at.iter().enumerate() {
        for (c, &j) in at.iter().enumerate() {
            a.set(i, j, b.get(r, c).clone());
        }
    }
    a
}

/// (1/√3)·[[1,1,1],[1,ξ3,ξ3²],[1,ξ3²,ξ3]].
pub fn hesse_fourier() -> CycMatrix {
    let s = consts::sqrt3().inverse().unwrap().embed(12).unwrap();
    let w = CycNum::zeta(12, 4);
    let w2 = CycNum::zeta(12, 8);
    let one = CycNum::one(12);
    let rows = vec![vec![one.clone(), one.clone(), one.clone()], vec![one.clone(), w.clone(), w2.clone()], vec![one, w2, w]];
    shrink_matrix(&Matrix::from_rows(rows).scale(&s))
}

/// A permutation σ of k letters acting on the hyperplane x_1 + … + x_k = 0,
/// written in the coordinates x_1, …, x_{k−1} (x_k = −Σ) of an m-dimensional space.
pub fn hyperplane_permutation(sigma: &[usize], m: usize) -> CycMatrix {
    let k = sigma.len();
    let mut a = identity(m, 1);
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            a.set(i, j, CycNum::zero(1));
        }
        if sigma[i] == k - 1 {
            for j in 0..k - 1 {
                a.set(i, j, CycNum::from_int(1, -1));
            }
        } else {
            a.set(i, sigma[i], CycNum::one(1));
        }
    }
    a
}

/// Σ_{i<k} x_i³ − (x_1 + … + x_{k−1})³ in m variables.
fn hyperplane_fermat(k: usize, m: usize) -> Form {
    let one = CycNum::one(1);
    let lin = Poly::from_terms(m, (0..k - 1).map(|i| (Mono::var(i), one.clone())));
    let cubes = Poly::from_terms(m, (0..k - 1).map(|i| (Mono::var_pow(i, 3), one.clone())));
    cubes.sub(&lin.pow(3, &one))
}

fn hyperplane_gens(k: usize, m: usize) -> Vec<CycMatrix> {
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    let mut swap: Vec<usize> = (0..k).collect();
    swap.swap(0, 1);
    vec![hyperplane_permutation(&cycle, m), hyperplane_permutation(&swap, m)]
}

fn monomial_gens(f: &Form) -> Result<Vec<CycMatrix>> {
    Ok(monomial_automorphisms(f)?.gens)
}

fn with_hesse(f: &Form, triples: &[[usize; 3]]) -> Result<Vec<CycMatrix>> {
    let mut g = monomial_gens(f)?;
    let dft = hesse_fourier();
    g.extend(triples.iter().map(|t| embed_block(&dft, t, f.nvars())));
    Ok(g)
}

/// Lower-right block after dropping the first `k` coordinates.
fn drop_leading(a: &CycMatrix, k: usize) -> CycMatrix {
    let m = a.nrows();
    Matrix::from_rows((k..m).map(|i| (k..m).map(|j| a.get(i, j).clone()).collect()).collect())
}

fn hesse(vars: [usize; 3]) -> String {
    let [a, b, c] = vars;
    format!("x_{a}^3+x_{b}^3+x_{c}^3+{HESSE}x_{a}x_{b}x_{c}")
}

fn x15_gens() -> Result<Vec<CycMatrix>> {
    Ok(vec![diag_roots(24, &[8, 0, 12, 18, 6, 21, 3]), parse_matrix(X15)?])
}

fn x16_gens() -> Result<Vec<CycMatrix>> {
    let block = parse_matrix(X16_BLOCK)?;
    let one = Matrix::identity_like(1, &CycNum::zero(matrix_conductor(&block)));
    Ok(vec![diag_roots(6, &[0, 2, 4, 3, 2, 1, 0]), block.direct_sum(&one)])
}

fn x17_gens() -> Result<Vec<CycMatrix>> {
    X17.iter().map(|s| parse_matrix(s)).collect()
}

fn x18_gens() -> Result<Vec<CycMatrix>> {
    X18.iter().map(|s| parse_matrix(s)).collect()
}

fn fivefold(i: usize) -> Result<(Form, Vec<CycMatrix>, Option<&'static str>)> {
    let chain = |k: usize| (1..k).map(|j| format!("x_{j}^2x_{}", j + 1)).collect::<Vec<_>>().join("+");
    let cubes = |r: std::ops::RangeInclusive<usize>| r.map(|j| format!("x_{j}^3")).collect::<Vec<_>>().join("+");
    let mono = |src: String| -> Result<(Form, Vec<CycMatrix>, Option<&'static str>)> {
        let f = parse_form(&src, 7)?;
        let g = monomial_gens(&f)?;
        Ok((f, g, None))
    };
    match i {
        1 => mono(cubes(1..=7)),
        2 => {
            let f = parse_form(&format!("{}+{}", hesse([1, 2, 3]), cubes(4..=7)), 7)?;
            let g = with_hesse(&f, &[[0, 1, 2]])?;
            Ok((f, g, None))
        }
        3 => mono(format!("{}+x_4^3+{}", chain(4), cubes(5..=7))),
        4 | 9 | 13 => {
            let (k, rest) = match i {
                4 => (5, cubes(5..=7)),
                9 => (5, hesse([5, 6, 7])),
                _ => (7, "x_7^3".to_string()),
            };
            let f = hyperplane_fermat(k, 7).add(&parse_form(&rest, 7)?);
            let f = crate::expr::shrink_form(&crate::forms::uniform_form(&f));
            let mut g = if i == 9 { with_hesse(&f, &[[4, 5, 6]])? } else { monomial_gens(&f)? };
            g.extend(hyperplane_gens(k, 7));
            Ok((f, g, None))
        }
        5 => mono(format!("{}+x_5^3+x_6^3+x_7^3", chain(5))),
        6 => {
            let (f, g, _) = mono(format!("{}+x_5^2x_1+x_6^3+x_7^3", chain(5)))?;
            Ok((f, g, Some(PSL211)))
        }
        7 => {
            let f = parse_form(&format!("{}+{}+x_7^3", hesse([1, 2, 3]), hesse([4, 5, 6])), 7)?;
            let g = with_hesse(&f, &[[0, 1, 2], [3, 4, 5]])?;
            Ok((f, g, None))
        }
        8 => {
            let f = parse_form(&format!("{}+x_4^3+{}", chain(4), hesse([5, 6, 7])), 7)?;
            let g = with_hesse(&f, &[[4, 5, 6]])?;
            Ok((f, g, None))
        }
        10 => mono(format!("{}+x_6^3+x_7^3", chain(6))),
        11 => mono(format!("{}+x_6^2x_1+x_7^3", chain(6))),
        12 => {
            let (f, g, _) = mono(F12.to_string())?;
            Ok((f, g, Some(M10)))
        }
        14 => mono("x_1^2x_2+x_2^2x_5+x_3^2x_4+x_4^2x_5+x_5^2x_6+x_2x_4x_6+x_6^3+x_7^3".into()),
        15 => Ok((parse_form(F15, 7)?, x15_gens()?, None)),
        16 => Ok((parse_form(&format!("{FA7}+x_7^3"), 7)?, x16_gens()?, None)),
        17 => Ok((parse_form(F17, 7)?, x17_gens()?, None)),
        18 => Ok((parse_form(F18, 7)?, x18_gens()?, None)),
        19 => mono(format!("{}+x_7^3", chain(7))),
        20 => mono(format!("{}+x_7^2x_1", chain(7))),
        _ => Err(Error::Domain(format!("no fivefold example {i}"))),
    }
}

fn fourfold(i: usize) -> Result<(Form, Vec<CycMatrix>, Option<&'static str>)> {
    let chain = |k: usize| (1..k).map(|j| format!("x_{j}^2x_{}", j + 1)).collect::<Vec<_>>().join("+");
    let mono = |src: String| -> Result<(Form, Vec<CycMatrix>, Option<&'static str>)> {
        let f = parse_form(&src, 6)?;
        let g = monomial_gens(&f)?;
        Ok((f, g, None))
    };
    let lower = |gens: Vec<CycMatrix>| gens.iter().map(|a| shrink_matrix(&drop_leading(a, 1))).collect::<Vec<_>>();
    match i {
        1 => mono("x_1^3+x_2^3+x_3^3+x_4^3+x_5^3+x_6^3".into()),
        2 => {
            let f = parse_form(&format!("{}+x_4^3+x_5^3+x_6^3", hesse([1, 2, 3])), 6)?;
            let g = with_hesse(&f, &[[0, 1, 2]])?;
            Ok((f, g, None))
        }
        3 => mono(format!("{}+x_4^3+x_5^3+x_6^3", chain(4))),
        4 | 11 => {
            let k = if i == 4 { 5 } else { 7 };
            let mut f = hyperplane_fermat(k, 6);
            if i == 4 {
                f = f.add(&parse_form("x_5^3+x_6^3", 6)?);
            }
            let mut g = monomial_gens(&f)?;
            g.extend(hyperplane_gens(k, 6));
            Ok((f, g, None))
        }
        5 => mono(format!("{}+x_5^3+x_6^3", chain(5))),
        6 => {
            let (f, g, _) = mono(format!("{}+x_5^2x_1+x_6^3", chain(5)))?;
            Ok((f, g, Some(PSL211)))
        }
        7 => {
            let f = parse_form(&format!("{}+{}", hesse([1, 2, 3]), hesse([4, 5, 6])), 6)?;
            let g = with_hesse(&f, &[[0, 1, 2], [3, 4, 5]])?;
            Ok((f, g, None))
        }
        8 => mono(format!("{}+x_6^3", chain(6))),
        9 => mono(format!("{}+x_6^2x_1", chain(6))),
        10 => {
            let (f, g, _) = mono(F10P.to_string())?;
            Ok((f, g, Some(M10)))
        }
        12 => mono("x_1^2x_2+x_2^2x_5+x_3^2x_4+x_4^2x_5+x_5^2x_6+x_2x_4x_6+x_6^3".into()),
        13 => Ok((parse_form(F13P, 6)?, lower(x15_gens()?), None)),
        14 => Ok((parse_form(F14P, 6)?, lower(x17_gens()?), None)),
        15 => Ok((parse_form(F15P, 6)?, lower(x18_gens()?), None)),
        _ => Err(Error::Domain(format!("no fourfold example {i}'"))),
    }
}

/// Looks up a record by id (`X7`, `X12'`, `XA7'`).
pub fn example(id: &str) -> Result<Example> {
    let bad = || Error::Domain(format!("unknown example id {id}"));
    if id == "XA7'" {
        let g = x16_gens()?.iter().map(|a| shrink_matrix(&first_block(a, 6))).collect();
        return Ok(Example {
            id: id.into(),
            kind: Kind::Fourfold,
            form: parse_form(FA7, 6)?,
            gens: g,
            expected_order: 2520,
            expected_symplectic: Some(2520),
            partial: None,
        });
    }
    let body = id.strip_prefix('X').ok_or_else(bad)?;
    let (num, kind) = match body.strip_suffix('\'') {
        Some(n) => (n, Kind::Fourfold),
        None => (body, Kind::Fivefold),
    };
    let i: usize = num.parse().map_err(|_| bad())?;
    let (form, gens, partial) = match kind {
        Kind::Fivefold if (1..=20).contains(&i) => fivefold(i)?,
        Kind::Fourfold if (1..=15).contains(&i) => fourfold(i)?,
        _ => return Err(bad()),
    };
    let (expected_order, expected_symplectic) = match kind {
        Kind::Fivefold => (FIVEFOLD_ORDERS[i - 1], None),
        Kind::Fourfold => (FOURFOLD_ORDERS[i - 1].0, Some(FOURFOLD_ORDERS[i - 1].1)),
    };
    Ok(Example { id: id.into(), kind, form, gens, expected_order, expected_symplectic, partial })
}

/// Upper-left k×k block.
fn first_block(a: &CycMatrix, k: usize) -> CycMatrix {
    Matrix::from_rows((0..k).map(|i| (0..k).map(|j| a.get(i, j).clone()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::fixes;

    #[test]
    fn every_record_builds_and_its_generators_fix_the_form() {
        for id in ids() {
            let ex = example(&id).unwrap();
            assert!(!ex.gens.is_empty(), "{id}");
            for a in &ex.gens {
                assert!(fixes(a, &ex.form).unwrap(), "{id}: generator does not fix the form");
            }
        }
    }

    #[test]
    fn hyperplane_action_permutes_the_coordinates() {
        // the 5-cycle on x1+…+x5 = 0 has order 5
        let a = hyperplane_permutation(&[1, 2, 3, 4, 0], 4);
        assert_eq!(a.order(10), Some(5));
        assert!(fixes(&a, &hyperplane_fermat(5, 4)).unwrap());
    }
}
