//! A small reader for formulas written the way they are typeset:
//! `x_1^2x_2+3(\sqrt{3}-1)x_1x_2x_3`, `\frac{\xi_4}{2}`, `\xi_{12}^{7}`,
//! and `\begin{pmatrix} a & b \\ c & d \end{pmatrix}`.
//!
//! Everything is evaluated exactly at one conductor, the lcm of the roots
//! and square roots mentioned in the input.

use crate::cyclo::{consts, lcm, CycNum};
use crate::forms::{form_conductor, lift_form};
use crate::matrix::Matrix;
use crate::poly::{Mono, Poly, MAXV};
use crate::{CycMatrix, Error, Form, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Under,
    Open,
    Close,
    Frac,
    Sqrt,
    Xi,
    Var,
    ImagI,
}

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' | '\r' | '$' => i += 1,
            '0'..='9' => {
                let mut v: i64 = 0;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    v = v.checked_mul(10).and_then(|v| v.checked_add(cs[i] as i64 - '0' as i64)).ok_or_else(|| err("number too large"))?;
                    i += 1;
                }
                out.push(Tok::Num(v));
            }
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '_' => {
                out.push(Tok::Under);
                i += 1
            }
            '(' | '{' | '[' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' | '}' | ']' => {
                out.push(Tok::Close);
                i += 1
            }
            'x' => {
                out.push(Tok::Var);
                i += 1
            }
            'i' => {
                out.push(Tok::ImagI);
                i += 1
            }
            '\\' => {
                let start = i + 1;
                let mut j = start;
                while j < cs.len() && cs[j].is_ascii_alphabetic() {
                    j += 1;
                }
                if j == start {
                    // `\,` `\;` `\!` spacing
                    i = j + 1;
                    continue;
                }
                let word: String = cs[start..j].iter().collect();
                match word.as_str() {
                    "frac" | "dfrac" | "tfrac" => out.push(Tok::Frac),
                    "sqrt" => out.push(Tok::Sqrt),
                    "xi" | "zeta" => out.push(Tok::Xi),
                    "cdot" | "times" => out.push(Tok::Star),
                    "left" | "right" | "footnotesize" | "small" | "displaystyle" => {}
                    other => return Err(err(format!("unsupported command \\{other}"))),
                }
                i = j;
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

/// Conductor needed to hold every constant in the token stream.
fn needed_conductor(toks: &[Tok]) -> Result<u32> {
    let mut n = 1u32;
    let mut k = 0;
    while k < toks.len() {
        match toks[k] {
            Tok::Xi => {
                let (v, _) = read_index(toks, k + 1)?;
                if v <= 0 || v > 10_000 {
                    return Err(err(format!("root of unity of order {v} out of range")));
                }
                n = lcm(n, v as u32);
            }
            Tok::Sqrt => {
                // \sqrt{k}: only integer radicands
                if let (Some(Tok::Open), Some(Tok::Num(v)), Some(Tok::Close)) = (toks.get(k + 1), toks.get(k + 2), toks.get(k + 3)) {
                    let s = consts::sqrt(*v).ok_or_else(|| err(format!("\\sqrt{{{v}}} is not supported")))?;
                    n = lcm(n, s.conductor());
                } else {
                    return Err(err("\\sqrt takes an integer argument in braces"));
                }
            }
            Tok::ImagI => n = lcm(n, 4),
            _ => {}
        }
        k += 1;
    }
    Ok(n)
}

/// `_7` or `_{12}`; returns the value and the position after it.
fn read_index(toks: &[Tok], at: usize) -> Result<(i64, usize)> {
    if toks.get(at) != Some(&Tok::Under) {
        return Err(err("expected a subscript"));
    }
    read_small(toks, at + 1, false)
}

/// A single digit, or a braced (optionally negative) integer.
fn read_small(toks: &[Tok], at: usize, allow_neg: bool) -> Result<(i64, usize)> {
    match toks.get(at) {
        Some(Tok::Num(v)) => {
            // unbraced: only the first digit belongs to the script
            let s = v.to_string();
            if s.len() == 1 {
                Ok((*v, at + 1))
            } else {
                Err(err(format!("ambiguous unbraced script {s}; use braces")))
            }
        }
        Some(Tok::Open) => {
            let (neg, p) = if allow_neg && toks.get(at + 1) == Some(&Tok::Minus) { (true, at + 2) } else { (false, at + 1) };
            match (toks.get(p), toks.get(p + 1)) {
                (Some(Tok::Num(v)), Some(Tok::Close)) => Ok((if neg { -v } else { *v }, p + 2)),
                _ => Err(err("expected a braced integer")),
            }
        }
        _ => Err(err("expected a digit or a braced integer")),
    }
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    m: usize,
    n: u32,
}

type P = Poly<CycNum>;

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn constant(&self, c: CycNum) -> P {
        Poly::monomial(self.m, Mono::one(), c.embed(self.n).expect("conductor chosen to fit"))
    }
    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(format!("expected {t:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<P> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(t: Option<&Tok>) -> bool {
        matches!(t, Some(Tok::Num(_) | Tok::Open | Tok::Frac | Tok::Sqrt | Tok::Xi | Tok::Var | Tok::ImagI))
    }

    fn term(&mut self) -> Result<P> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    acc = acc.mul(&self.invert(&d)?);
                }
                t if Self::starts_factor(t) => acc = acc.mul(&self.power()?),
                _ => return Ok(acc),
            }
        }
    }

    fn invert(&self, d: &P) -> Result<P> {
        match d.terms() {
            [(mo, c)] if mo.deg() == 0 => {
                Ok(self.constant(c.inverse().ok_or_else(|| err("division by zero"))?))
            }
            _ => Err(err("division by a non-constant")),
        }
    }

    fn power(&mut self) -> Result<P> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            let (e, next) = read_small(self.toks, self.pos + 1, true)?;
            self.pos = next;
            if e >= 0 {
                Ok(base.pow(e as u32, &CycNum::one(self.n)))
            } else {
                Ok(self.invert(&base)?.pow((-e) as u32, &CycNum::one(self.n)))
            }
        } else {
            Ok(base)
        }
    }

    fn braced(&mut self) -> Result<P> {
        self.expect(Tok::Open)?;
        let v = self.expr()?;
        self.expect(Tok::Close)?;
        Ok(v)
    }

    fn primary(&mut self) -> Result<P> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(self.constant(CycNum::from_int(1, v)))
            }
            Some(Tok::Open) => self.braced(),
            Some(Tok::Frac) => {
                self.pos += 1;
                let a = self.braced()?;
                let b = self.braced()?;
                Ok(a.mul(&self.invert(&b)?))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                self.expect(Tok::Open)?;
                let Some(Tok::Num(v)) = self.peek().cloned() else { return Err(err("\\sqrt needs an integer")) };
                self.pos += 1;
                self.expect(Tok::Close)?;
                Ok(self.constant(consts::sqrt(v).ok_or_else(|| err(format!("\\sqrt{{{v}}} unsupported")))?))
            }
            Some(Tok::Xi) => {
                let (k, next) = read_index(self.toks, self.pos + 1)?;
                self.pos = next;
                Ok(self.constant(CycNum::zeta(k as u32, 1)))
            }
            Some(Tok::ImagI) => {
                self.pos += 1;
                Ok(self.constant(consts::i()))
            }
            Some(Tok::Var) => {
                let (k, next) = read_index(self.toks, self.pos + 1)?;
                self.pos = next;
                if k < 1 || k as usize > self.m {
                    return Err(err(format!("variable x_{k} outside 1..{}", self.m)));
                }
                Ok(Poly::monomial(self.m, Mono::var(k as usize - 1), CycNum::one(self.n)))
            }
            other => Err(err(format!("unexpected token {other:?} at {}", self.pos))),
        }
    }
}

fn parse_poly(src: &str, m: usize) -> Result<P> {
    if m == 0 || m > MAXV {
        return Err(err(format!("unsupported number of variables {m}")));
    }
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(err("empty expression"));
    }
    let n = needed_conductor(&toks)?;
    let mut p = Parser { toks: &toks, pos: 0, m, n };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(err(format!("trailing input at token {}", p.pos)));
    }
    Ok(v)
}

/// Largest variable index mentioned, so callers can default m.
pub fn max_variable(src: &str) -> Result<usize> {
    let toks = tokenize(src)?;
    let mut best = 0;
    for (k, t) in toks.iter().enumerate() {
        if *t == Tok::Var {
            best = best.max(read_index(&toks, k + 1)?.0 as usize);
        }
    }
    Ok(best)
}

/// Rewrites every coefficient at the smallest conductor holding all of them.
pub fn shrink_form(f: &Form) -> Form {
    let n = f.terms().iter().fold(1, |acc, (_, c)| lcm(acc, c.minimal_conductor()));
    if n == form_conductor(f) {
        return f.clone();
    }
    f.map_coeffs(|c| c.restrict(n).expect("value lies in the smaller field"))
}

pub fn shrink_scalar(c: &CycNum) -> CycNum {
    c.restrict(c.minimal_conductor()).expect("value lies in its minimal field")
}

pub fn shrink_matrix(a: &CycMatrix) -> CycMatrix {
    let n = a.entries().iter().fold(1, |acc, c| lcm(acc, c.minimal_conductor()));
    a.map(|c| c.restrict(n).expect("value lies in the smaller field"))
}

/// A homogeneous form in `m` variables.
pub fn parse_form(src: &str, m: usize) -> Result<Form> {
    let p = parse_poly(src, m)?;
    if p.is_zero() {
        return Err(err("the form is zero"));
    }
    if !p.is_homogeneous() {
        return Err(err("the expression is not homogeneous"));
    }
    Ok(shrink_form(&p))
}

/// A constant expression such as `3(\sqrt{3}-1)`.
pub fn parse_scalar(src: &str) -> Result<CycNum> {
    let p = parse_poly(src, 1)?;
    match p.terms() {
        [] => Ok(CycNum::zero(1)),
        [(mo, c)] if mo.deg() == 0 => Ok(c.restrict(c.minimal_conductor()).unwrap()),
        _ => Err(err("expected a constant")),
    }
}

/// `\begin{pmatrix} … \end{pmatrix}` (or the bare body): rows split on `\\`, entries on `&`.
pub fn parse_matrix(src: &str) -> Result<CycMatrix> {
    let mut body = src.trim();
    for w in ["\\begin{pmatrix}", "\\begin{bmatrix}", "\\begin{matrix}"] {
        if let Some(rest) = body.strip_prefix(w) {
            body = rest;
        }
    }
    for w in ["\\end{pmatrix}", "\\end{bmatrix}", "\\end{matrix}"] {
        if let Some(rest) = body.trim_end().strip_suffix(w) {
            body = rest;
        }
    }
    let rows: Vec<&str> = body.split("\\\\").map(str::trim).filter(|r| !r.is_empty()).collect();
    let m = rows.len();
    if m == 0 {
        return Err(err("empty matrix"));
    }
    let mut cells = Vec::with_capacity(m * m);
    for (r, row) in rows.iter().enumerate() {
        let parts: Vec<&str> = row.split('&').collect();
        if parts.len() != m {
            return Err(err(format!("row {} has {} entries, expected {m}", r + 1, parts.len())));
        }
        for p in parts {
            cells.push(parse_scalar(p)?);
        }
    }
    let n = cells.iter().fold(1, |acc, c| lcm(acc, c.conductor()));
    let cells = cells.into_iter().map(|c| c.embed(n).unwrap()).collect();
    Ok(Matrix::from_vec(m, m, cells))
}

/// Form equality across conductors.
pub fn same_form(f: &Form, g: &Form) -> bool {
    let n = lcm(form_conductor(f), form_conductor(g));
    f.nvars() == g.nvars() && lift_form(f, n).ok() == lift_form(g, n).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{apply, fermat};

    #[test]
    fn reads_typeset_cubics() {
        let f = parse_form("x_1^2x_2+x_2^2x_3+x_3^2x_1", 3).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.coeff(&Mono::new(&[2, 1, 0])), Some(&CycNum::one(1)));
        let h = parse_form("x_1^3+x_2^3+x_3^3+3(\\sqrt{3}-1)x_1 x_2 x_3", 3).unwrap();
        let c = h.coeff(&Mono::new(&[1, 1, 1])).unwrap();
        let s3 = consts::sqrt3();
        let want = &(&s3 - &CycNum::one(12)) * &CycNum::from_int(12, 3);
        assert_eq!(c.embed(12).unwrap(), want);
        assert!(same_form(&parse_form("x_1^3+x_2^3", 2).unwrap(), &fermat(2, 3)));
    }

    #[test]
    fn fractions_and_roots() {
        assert_eq!(parse_scalar("\\frac{1}{2}+\\frac{1}{2}").unwrap(), CycNum::one(1));
        assert_eq!(parse_scalar("\\xi_4^2").unwrap(), CycNum::from_int(1, -1));
        assert_eq!(parse_scalar("\\xi_{12}^{-1}\\xi_{12}").unwrap(), CycNum::one(1));
        assert_eq!(parse_scalar("(\\sqrt{2})^2/2").unwrap(), CycNum::one(1));
        assert_eq!(parse_scalar("\\frac{3+\\xi_4}{8\\sqrt{2}}*8\\sqrt{2}-\\xi_4").unwrap(), CycNum::from_int(1, 3));
        assert!(parse_scalar("x_1").is_err());
        assert!(parse_form("x_1^2+x_2", 2).is_err());
        assert!(parse_form("x_3^3", 2).is_err());
    }

    #[test]
    fn conic_example_matrix_splits_the_binary_cubic() {
        // A(x_1^2x_2 + x_2^2x_1) = x_1^3 + x_2^3 for this A
        let a = parse_matrix("\\begin{pmatrix}-1&-1\\\\ \\frac{1-\\sqrt{3} i}{2}& \\frac{1+\\sqrt{3} i}{2}\\end{pmatrix}").unwrap();
        let f = parse_form("x_1^2x_2+x_2^2x_1", 2).unwrap();
        assert!(same_form(&apply(&a, &f).unwrap(), &fermat(2, 3)));
    }
}
