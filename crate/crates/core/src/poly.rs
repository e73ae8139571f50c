//! Sparse multivariate polynomials over a [`Field`], terms kept in
//! graded-reverse-lexicographic order (largest first).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::field::Field;

/// Maximum number of variables a monomial can carry.
pub const MAXV: usize = 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    e: [u16; MAXV],
    deg: u16,
}

impl Mono {
    pub fn new(exps: &[u16]) -> Mono {
        assert!(exps.len() <= MAXV, "too many variables");
        let mut e = [0u16; MAXV];
        e[..exps.len()].copy_from_slice(exps);
        Mono { e, deg: exps.iter().sum() }
    }
    pub fn from_usize(exps: &[usize]) -> Mono {
        Mono::new(&exps.iter().map(|&x| x as u16).collect::<Vec<_>>())
    }
    pub fn one() -> Mono {
        Mono::default()
    }
    pub fn var(i: usize) -> Mono {
        Mono::var_pow(i, 1)
    }
    pub fn var_pow(i: usize, k: u16) -> Mono {
        let mut e = [0u16; MAXV];
        e[i] = k;
        Mono { e, deg: k }
    }
    #[inline]
    pub fn get(&self, i: usize) -> u16 {
        self.e[i]
    }
    pub fn exps(&self, n: usize) -> &[u16] {
        &self.e[..n]
    }
    #[inline]
    pub fn deg(&self) -> u16 {
        self.deg
    }
    pub fn with(&self, i: usize, k: u16) -> Mono {
        let mut m = *self;
        m.deg = m.deg - m.e[i] + k;
        m.e[i] = k;
        m
    }
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = [0u16; MAXV];
        for i in 0..MAXV {
            e[i] = self.e[i] + o.e[i];
        }
        Mono { e, deg: self.deg + o.deg }
    }
    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && (0..MAXV).all(|i| self.e[i] <= o.e[i])
    }
    /// `self / o`, assuming divisibility.
    pub fn div(&self, o: &Mono) -> Mono {
        let mut e = [0u16; MAXV];
        for i in 0..MAXV {
            e[i] = self.e[i] - o.e[i];
        }
        Mono { e, deg: self.deg - o.deg }
    }
    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut e = [0u16; MAXV];
        let mut d = 0;
        for i in 0..MAXV {
            e[i] = self.e[i].max(o.e[i]);
            d += e[i];
        }
        Mono { e, deg: d }
    }
    pub fn coprime(&self, o: &Mono) -> bool {
        (0..MAXV).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }
    /// Index of the single variable if this is a pure power x_i^k, k ≥ 1.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for i in 0..MAXV {
            if self.e[i] > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
    /// Variables that occur.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAXV).filter(move |&i| self.e[i] > 0)
    }
    /// Apply a variable relabelling: variable i becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Mono {
        let mut e = [0u16; MAXV];
        for (i, &p) in perm.iter().enumerate() {
            e[p] = self.e[i];
        }
        Mono { e, deg: self.deg }
    }
    /// Text like `x1^2*x3`, 1-based.
    pub fn pretty(&self) -> String {
        let parts: Vec<String> = (0..MAXV)
            .filter(|&i| self.e[i] > 0)
            .map(|i| if self.e[i] == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, self.e[i]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Mono {
    /// Graded reverse lexicographic order.
    fn cmp(&self, o: &Self) -> Ordering {
        match self.deg.cmp(&o.deg) {
            Ordering::Equal => {}
            c => return c,
        }
        for i in (0..MAXV).rev() {
            if self.e[i] != o.e[i] {
                return o.e[i].cmp(&self.e[i]);
            }
        }
        Ordering::Equal
    }
}
impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// All monomials of degree d in m variables, largest first.
pub fn monomials(m: usize, d: usize) -> Vec<Mono> {
    fn rec(i: usize, m: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if i == m - 1 {
            cur.push(left as u16);
            out.push(Mono::new(cur));
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k as u16);
            rec(i + 1, m, left - k, cur, out);
            cur.pop();
        }
    }
    assert!(m >= 1 && m <= MAXV);
    let mut out = Vec::new();
    rec(0, m, d, &mut Vec::with_capacity(m), &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<K> {
    nvars: usize,
    terms: Vec<(Mono, K)>,
}

impl<K: Field> Poly<K> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAXV);
        Poly { nvars, terms: Vec::new() }
    }
    pub fn monomial(nvars: usize, m: Mono, c: K) -> Self {
        if c.is_zero() {
            Poly::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(m, c)] }
        }
    }
    /// Builds from arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Mono, K)>) -> Self {
        let mut map: HashMap<Mono, K> = HashMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(v) => *v = v.add_ref(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(nvars, map)
    }
    fn from_map(nvars: usize, map: HashMap<Mono, K>) -> Self {
        let mut terms: Vec<(Mono, K)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { nvars, terms }
    }
    /// Terms already sorted descending, distinct, nonzero.
    pub fn from_sorted_unchecked(nvars: usize, terms: Vec<(Mono, K)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Poly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> &[(Mono, K)] {
        &self.terms
    }
    pub fn into_terms(self) -> Vec<(Mono, K)> {
        self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn lead(&self) -> Option<&(Mono, K)> {
        self.terms.first()
    }
    pub fn lead_mono(&self) -> Option<Mono> {
        self.terms.first().map(|t| t.0)
    }
    pub fn support(&self) -> Vec<Mono> {
        self.terms.iter().map(|t| t.0).collect()
    }
    pub fn coeff(&self, m: &Mono) -> Option<&K> {
        self.terms.binary_search_by(|t| m.cmp(&t.0)).ok().map(|i| &self.terms[i].1)
    }
    /// Total degree of the leading term (all terms, if homogeneous).
    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.0.deg() as usize).max()
    }
    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.deg() == w[1].0.deg())
    }
    /// Some scalar of the polynomial, used as a prototype for constants.
    pub fn proto(&self) -> Option<&K> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn with_nvars(&self, nvars: usize) -> Self {
        assert!(nvars <= MAXV);
        if nvars < self.nvars {
            assert!(self.terms.iter().all(|t| (nvars..self.nvars).all(|i| t.0.get(i) == 0)), "dropped variable in use");
        }
        Poly { nvars, terms: self.terms.clone() }
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect() }
    }
    pub fn scale(&self, s: &K) -> Self {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(s))).collect() }
    }
    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !c.is_zero()).collect() }
    }
    pub fn try_map_coeffs<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Poly<L>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.push((*m, v));
            }
        }
        Ok(Poly { nvars: self.nvars, terms })
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0, if negate { b.1.neg_ref() } else { b.1.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a.1.sub_ref(&b.1) } else { a.1.add_ref(&b.1) };
                    if !c.is_zero() {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for b in &o.terms[j..] {
            out.push((b.0, if negate { b.1.neg_ref() } else { b.1.clone() }));
        }
        Poly { nvars: self.nvars.max(o.nvars), terms: out }
    }
    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    /// `self - c·m·q`, the reduction step.
    pub fn sub_mul_term(&self, c: &K, m: &Mono, q: &Self) -> Self {
        let shifted = Poly { nvars: q.nvars, terms: q.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.mul_ref(c))).collect() };
        self.sub(&shifted)
    }
    pub fn mul_term(&self, c: &K, m: &Mono) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc.mul_ref(c))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.nvars.max(o.nvars));
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].1, &o.terms[0].0);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].1, &self.terms[0].0);
        }
        let mut map: HashMap<Mono, K> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let t = ca.mul_ref(cb);
                match map.get_mut(&m) {
                    Some(v) => *v = v.add_ref(&t),
                    None => {
                        map.insert(m, t);
                    }
                }
            }
        }
        Self::from_map(self.nvars.max(o.nvars), map)
    }

    pub fn pow(&self, k: u32, one: &K) -> Self {
        let mut r = Poly::monomial(self.nvars, Mono::one(), one.clone());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.get(i) > 0)
            .map(|(m, c)| {
                let e = m.get(i);
                (m.with(i, e - 1), c.mul_ref(&c.from_i64_like(e as i64)))
            })
            .filter(|(_, c)| !c.is_zero());
        // differentiation can break the order only through zero-dropped terms; re-sort defensively
        Self::from_terms(self.nvars, terms)
    }

    pub fn eval(&self, point: &[K]) -> Option<K> {
        let proto = point.first()?;
        let mut acc = proto.zero_like();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                for _ in 0..m.get(i) {
                    t = t.mul_ref(&point[i]);
                }
            }
            acc = acc.add_ref(&t);
        }
        Some(acc)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().unwrap()),
        }
    }

    /// Relabels variables: x_i ↦ x_{perm[i]}.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.permute(perm), c.clone())))
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c:?})*{}", m.pretty())).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(7, 3).len(), 84);
        assert_eq!(monomials(1, 5), vec![Mono::new(&[5])]);
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 0).len(), 1);
    }

    #[test]
    fn grevlex_examples() {
        // x1 > x2 > x3, and x2^2 > x1 x3 in grevlex (last variable penalised)
        let x = |e: &[u16]| Mono::new(e);
        assert!(x(&[1, 0, 0]) > x(&[0, 1, 0]));
        assert!(x(&[0, 2, 0]) > x(&[1, 0, 1]));
        assert!(x(&[2, 0, 0]) > x(&[1, 1, 0]));
        assert!(x(&[0, 0, 2]) < x(&[1, 1, 0]));
        let ms = monomials(3, 2);
        assert_eq!(ms[0], x(&[2, 0, 0]));
        assert_eq!(ms[5], x(&[0, 0, 2]));
    }

    #[test]
    fn arithmetic() {
        let p = 97;
        let c = |v| Fp::new(v, p);
        let x = Poly::monomial(2, Mono::var(0), c(1));
        let y = Poly::monomial(2, Mono::var(1), c(1));
        let s = x.add(&y);
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&Mono::new(&[1, 1])), Some(&c(2)));
        let diff = sq.sub(&x.mul(&x)).sub(&y.mul(&y));
        assert_eq!(diff, Poly::monomial(2, Mono::new(&[1, 1]), c(2)));
        assert_eq!(sq.derivative(0), x.scale(&c(2)).add(&y.scale(&c(2))));
        assert_eq!(sq.eval(&[c(2), c(3)]), Some(c(25)));
    }
}
