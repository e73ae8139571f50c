//! Exact arithmetic in Q(ζ_N), power basis modulo the N-th cyclotomic polynomial.
//!
//! Values are `(c_0 + c_1 ζ + … + c_{φ-1} ζ^{φ-1}) / d` with integer c_i and
//! d > 0 in lowest terms. Coefficients live in i64 while they fit and fall back
//! to bignums otherwise; the representation is canonical either way, so
//! derived equality and hashing are exact.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::Field;
use crate::matrix::Matrix;
use crate::Error;

pub struct CycContext {
    n: u32,
    phi: usize,
    /// Φ_N, low degree first, monic.
    phi_poly: Vec<i64>,
    /// `table[i - φ]` is ζ^i reduced, stored sparsely.
    table: Vec<Vec<(usize, i64)>>,
}

impl CycContext {
    pub fn conductor(&self) -> u32 {
        self.n
    }
    pub fn phi(&self) -> usize {
        self.phi
    }
    pub fn cyclotomic_poly(&self) -> &[i64] {
        &self.phi_poly
    }
    /// ζ^i reduced into the power basis, dense.
    pub fn power(&self, i: i64) -> Vec<i64> {
        let k = i.rem_euclid(self.n as i64) as usize;
        let mut v = vec![0; self.phi];
        if k < self.phi {
            v[k] = 1;
        } else {
            for &(j, c) in &self.table[k - self.phi] {
                v[j] = c;
            }
        }
        v
    }

    fn build(n: u32) -> CycContext {
        let phi_poly = cyclotomic_poly(n as usize);
        let phi = phi_poly.len() - 1;
        let mut table = Vec::new();
        // r = x^phi mod Φ = -(lower coefficients)
        let mut r: Vec<i64> = phi_poly[..phi].iter().map(|c| -c).collect();
        for _ in phi..n as usize {
            table.push(r.iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, *c)).collect());
            // multiply by x and reduce the overflow coefficient
            let top = r[phi - 1];
            let mut next = vec![0i64; phi];
            for j in (1..phi).rev() {
                next[j] = r[j - 1];
            }
            if top != 0 {
                for j in 0..phi {
                    next[j] = next[j].checked_sub(top.checked_mul(phi_poly[j]).expect("cyclotomic table overflow")).expect("cyclotomic table overflow");
                }
            }
            r = next;
        }
        CycContext { n, phi, phi_poly, table }
    }
}

/// Φ_n by exact division of x^n - 1 by Φ_d for the proper divisors d.
pub fn cyclotomic_poly(n: usize) -> Vec<i64> {
    fn go(n: usize, memo: &mut HashMap<usize, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = memo.get(&n) {
            return p.clone();
        }
        let mut num = vec![0i64; n + 1];
        num[0] = -1;
        num[n] = 1;
        for d in 1..n {
            if n % d == 0 {
                let q = go(d, memo);
                num = div_exact_monic(&num, &q);
            }
        }
        memo.insert(n, num.clone());
        num
    }
    assert!(n >= 1);
    go(n, &mut HashMap::new())
}

fn div_exact_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = r.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + db];
        q[k] = c;
        if c != 0 {
            for j in 0..=db {
                r[k + j] -= c * b[j];
            }
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

static REGISTRY: OnceLock<RwLock<HashMap<u32, &'static CycContext>>> = OnceLock::new();

/// Shared context for conductor n. Contexts are built once and never freed.
pub fn context(n: u32) -> &'static CycContext {
    assert!(n >= 1, "conductor must be positive");
    let reg = REGISTRY.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(c) = reg.read().unwrap().get(&n) {
        return c;
    }
    let built: &'static CycContext = Box::leak(Box::new(CycContext::build(n)));
    *reg.write().unwrap().entry(n).or_insert(built)
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Coeffs {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

#[derive(Clone)]
pub struct CycNum {
    ctx: &'static CycContext,
    c: Coeffs,
}

impl PartialEq for CycNum {
    fn eq(&self, o: &Self) -> bool {
        self.ctx.n == o.ctx.n && self.c == o.c
    }
}
impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.ctx.n.hash(h);
        self.c.hash(h);
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl CycNum {
    // ---- construction -------------------------------------------------

    pub fn zero(n: u32) -> CycNum {
        let ctx = context(n);
        CycNum { ctx, c: Coeffs::Small { num: vec![0; ctx.phi], den: 1 } }
    }
    pub fn one(n: u32) -> CycNum {
        CycNum::from_int(n, 1)
    }
    pub fn from_int(n: u32, v: i64) -> CycNum {
        let ctx = context(n);
        let mut num = vec![0; ctx.phi];
        num[0] = v;
        CycNum { ctx, c: Coeffs::Small { num, den: 1 } }
    }
    pub fn from_ratio(n: u32, p: i64, q: i64) -> CycNum {
        assert!(q != 0, "zero denominator");
        let ctx = context(n);
        let mut num = vec![0i128; ctx.phi];
        num[0] = p as i128;
        Self::from_i128(ctx, num, q as i128)
    }
    pub fn from_bigint(n: u32, v: BigInt) -> CycNum {
        let ctx = context(n);
        let mut num = vec![BigInt::zero(); ctx.phi];
        num[0] = v;
        Self::from_big(ctx, num, BigInt::one())
    }
    /// ζ_n^k.
    pub fn zeta(n: u32, k: i64) -> CycNum {
        let ctx = context(n);
        CycNum { ctx, c: Coeffs::Small { num: ctx.power(k), den: 1 } }
    }
    /// Power-basis coordinates `num[i] / den`.
    pub fn from_coeffs(n: u32, num: &[i64], den: i64) -> Result<CycNum, Error> {
        let ctx = context(n);
        if num.len() != ctx.phi {
            return Err(Error::Parse(format!("conductor {n} needs {} coefficients, got {}", ctx.phi, num.len())));
        }
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::from_i128(ctx, num.iter().map(|&c| c as i128).collect(), den as i128))
    }

    /// Σ (p/q) ζ_n^e over the raw terms, exponents taken mod n.
    pub fn reduce(raw: &[(i64, i64, i64)], n: u32) -> Result<CycNum, Error> {
        if n == 0 {
            return Err(Error::Domain("conductor 0".into()));
        }
        let mut acc = CycNum::zero(n);
        for &(e, p, q) in raw {
            if q == 0 {
                return Err(Error::Domain("zero denominator".into()));
            }
            acc = &acc + &(&CycNum::zeta(n, e) * &CycNum::from_ratio(n, p, q));
        }
        Ok(acc)
    }

    fn from_i128(ctx: &'static CycContext, mut num: Vec<i128>, mut den: i128) -> CycNum {
        let mut g = den;
        for &c in &num {
            if c != 0 {
                g = gcd_i128(g, c);
                if g == 1 {
                    break;
                }
            }
        }
        if num.iter().all(|&c| c == 0) {
            return CycNum { ctx, c: Coeffs::Small { num: vec![0; ctx.phi], den: 1 } };
        }
        if den < 0 {
            g = -g.abs();
        } else {
            g = g.abs();
        }
        if g != 1 {
            for c in num.iter_mut() {
                *c /= g;
            }
            den /= g;
        }
        let fits = |v: i128| v >= i64::MIN as i128 && v <= i64::MAX as i128;
        if fits(den) && num.iter().all(|&c| fits(c)) {
            CycNum { ctx, c: Coeffs::Small { num: num.into_iter().map(|c| c as i64).collect(), den: den as i64 } }
        } else {
            Self::from_big(ctx, num.into_iter().map(BigInt::from).collect(), BigInt::from(den))
        }
    }

    fn from_big(ctx: &'static CycContext, mut num: Vec<BigInt>, mut den: BigInt) -> CycNum {
        if num.iter().all(|c| c.is_zero()) {
            return CycNum { ctx, c: Coeffs::Small { num: vec![0; ctx.phi], den: 1 } };
        }
        let mut g = den.clone();
        for c in &num {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
        }
        if den.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in num.iter_mut() {
                *c = &*c / &g;
            }
            den = &den / &g;
        }
        let small_den = den.to_i64();
        let small_num: Option<Vec<i64>> = num.iter().map(|c| c.to_i64()).collect();
        match (small_num, small_den) {
            (Some(num), Some(den)) => CycNum { ctx, c: Coeffs::Small { num, den } },
            _ => CycNum { ctx, c: Coeffs::Big { num, den } },
        }
    }

    // ---- accessors ----------------------------------------------------

    pub fn conductor(&self) -> u32 {
        self.ctx.n
    }
    pub fn context(&self) -> &'static CycContext {
        self.ctx
    }
    pub fn is_zero(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, .. } => num.iter().all(|&c| c == 0),
            Coeffs::Big { .. } => false,
        }
    }
    pub fn is_one(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&c| c == 0),
            Coeffs::Big { .. } => false,
        }
    }
    pub fn is_rational(&self) -> bool {
        match &self.c {
            Coeffs::Small { num, .. } => num[1..].iter().all(|&c| c == 0),
            Coeffs::Big { num, .. } => num[1..].iter().all(|c| c.is_zero()),
        }
    }
    /// Numerators and denominator as bignums.
    pub fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.c {
            Coeffs::Small { num, den } => (num.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(*den)),
            Coeffs::Big { num, den } => (num.clone(), den.clone()),
        }
    }
    /// Small-integer parts if they fit in i64.
    pub fn small_parts(&self) -> Option<(&[i64], i64)> {
        match &self.c {
            Coeffs::Small { num, den } => Some((num, *den)),
            Coeffs::Big { .. } => None,
        }
    }
    /// Number of nonzero power-basis coordinates.
    pub fn support_len(&self) -> usize {
        match &self.c {
            Coeffs::Small { num, .. } => num.iter().filter(|&&c| c != 0).count(),
            Coeffs::Big { num, .. } => num.iter().filter(|c| !c.is_zero()).count(),
        }
    }

    // ---- arithmetic ---------------------------------------------------

    pub fn try_add(&self, o: &CycNum) -> Result<CycNum, Error> {
        self.check(o)?;
        Ok(self.add_same(o, false))
    }
    pub fn try_sub(&self, o: &CycNum) -> Result<CycNum, Error> {
        self.check(o)?;
        Ok(self.add_same(o, true))
    }
    pub fn try_mul(&self, o: &CycNum) -> Result<CycNum, Error> {
        self.check(o)?;
        Ok(self.mul_same(o))
    }
    pub fn try_inv(&self) -> Result<CycNum, Error> {
        self.inverse().ok_or_else(|| Error::Domain("inverse of zero".into()))
    }

    fn check(&self, o: &CycNum) -> Result<(), Error> {
        if self.ctx.n != o.ctx.n {
            Err(Error::ConductorMismatch(self.ctx.n, o.ctx.n))
        } else {
            Ok(())
        }
    }

    /// Brings two operands to a shared conductor; conductor-1 values are
    /// promoted, anything else must already agree.
    fn unify<'a>(a: &'a CycNum, b: &'a CycNum) -> (std::borrow::Cow<'a, CycNum>, std::borrow::Cow<'a, CycNum>) {
        use std::borrow::Cow;
        if a.ctx.n == b.ctx.n {
            (Cow::Borrowed(a), Cow::Borrowed(b))
        } else if a.ctx.n == 1 {
            (Cow::Owned(a.embed(b.ctx.n).unwrap()), Cow::Borrowed(b))
        } else if b.ctx.n == 1 {
            (Cow::Borrowed(a), Cow::Owned(b.embed(a.ctx.n).unwrap()))
        } else {
            panic!("conductor mismatch: {} vs {} (embed first)", a.ctx.n, b.ctx.n)
        }
    }

    fn add_same(&self, o: &CycNum, negate: bool) -> CycNum {
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (&self.c, &o.c) {
            let s: i128 = if negate { -1 } else { 1 };
            if da == db {
                let num = a.iter().zip(b).map(|(&x, &y)| x as i128 + s * y as i128).collect();
                return Self::from_i128(self.ctx, num, *da as i128);
            }
            let (da, db) = (*da as i128, *db as i128);
            let mut num = Vec::with_capacity(a.len());
            let mut ok = true;
            for (&x, &y) in a.iter().zip(b) {
                match (x as i128).checked_mul(db).zip((y as i128 * s).checked_mul(da)).and_then(|(p, q)| p.checked_add(q)) {
                    Some(v) => num.push(v),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                if let Some(den) = da.checked_mul(db) {
                    return Self::from_i128(self.ctx, num, den);
                }
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = o.big_parts();
        let num = a
            .iter()
            .zip(&b)
            .map(|(x, y)| if negate { x * &db - y * &da } else { x * &db + y * &da })
            .collect();
        Self::from_big(self.ctx, num, da * db)
    }

    fn mul_same(&self, o: &CycNum) -> CycNum {
        let ctx = self.ctx;
        if let (Coeffs::Small { num: a, den: da }, Coeffs::Small { num: b, den: db }) = (&self.c, &o.c) {
            if let Some(r) = mul_small(ctx, a, *da, b, *db) {
                return r;
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = o.big_parts();
        let n = ctx.n as usize;
        let mut acc = vec![BigInt::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    acc[(i + j) % n] += x * y;
                }
            }
        }
        for k in ctx.phi..n {
            if acc[k].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut acc[k]);
            for &(j, t) in &ctx.table[k - ctx.phi] {
                acc[j] += &c * t;
            }
        }
        acc.truncate(ctx.phi);
        Self::from_big(ctx, acc, da * db)
    }

    fn neg_same(&self) -> CycNum {
        match &self.c {
            Coeffs::Small { num, den } if num.iter().all(|&c| c != i64::MIN) => {
                CycNum { ctx: self.ctx, c: Coeffs::Small { num: num.iter().map(|c| -c).collect(), den: *den } }
            }
            _ => {
                let (a, d) = self.big_parts();
                Self::from_big(self.ctx, a.into_iter().map(|c| -c).collect(), d)
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<CycNum> {
        if self.is_zero() {
            return None;
        }
        let ctx = self.ctx;
        let (num, den) = self.big_parts();
        // c ζ^k: invert directly
        let nz: Vec<usize> = (0..ctx.phi).filter(|&i| !num[i].is_zero()).collect();
        if nz.len() == 1 {
            let k = nz[0] as i64;
            let z = CycNum::zeta(ctx.n, -k);
            let (zn, _) = z.big_parts();
            let c = num[nz[0]].clone();
            return Some(Self::from_big(ctx, zn.into_iter().map(|v| v * &den).collect(), c));
        }
        // Solve (multiplication-by-num matrix) x = e_0 over Q, then scale by den.
        let phi = ctx.phi;
        let numc = Self::from_big(ctx, num, BigInt::one());
        let colvecs: Vec<Vec<BigInt>> =
            (0..phi).map(|j| numc.mul_same(&CycNum::zeta(ctx.n, j as i64)).big_parts().0).collect();
        let mut cells = Vec::with_capacity(phi * (phi + 1));
        for i in 0..phi {
            for col in &colvecs {
                cells.push(CycNum::from_bigint(1, col[i].clone()));
            }
            cells.push(CycNum::from_int(1, (i == 0) as i64));
        }
        let mut aug = Matrix::from_vec(phi, phi + 1, cells);
        let pivots = aug.rref();
        debug_assert_eq!(pivots.len(), phi);
        let mut acc = CycNum::zero(ctx.n);
        let scale = CycNum::from_bigint(ctx.n, den);
        for i in 0..phi {
            let xi = aug.get(i, phi);
            if xi.is_zero() {
                continue;
            }
            let zi = CycNum::zeta(ctx.n, i as i64);
            acc = acc.add_same(&zi.mul_same(&xi.embed(ctx.n).unwrap()), false);
        }
        Some(acc.mul_same(&scale))
    }

    pub fn pow(&self, e: i64) -> CycNum {
        let mut base = if e < 0 { self.inverse().expect("negative power of zero") } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut r = CycNum::one(self.ctx.n);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul_same(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_same(&base);
            }
        }
        r
    }

    /// Image under ζ_N ↦ ζ_M^{M/N}.
    pub fn embed(&self, m: u32) -> Result<CycNum, Error> {
        let n = self.ctx.n;
        if m == 0 || m % n != 0 {
            return Err(Error::Domain(format!("conductor {n} does not divide {m}")));
        }
        if m == n {
            return Ok(self.clone());
        }
        let step = (m / n) as i64;
        let target = context(m);
        match &self.c {
            Coeffs::Small { num, den } => {
                let mut acc = vec![0i128; target.phi];
                for (i, &c) in num.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let k = (i as i64 * step) as usize % m as usize;
                    if k < target.phi {
                        acc[k] += c as i128;
                    } else {
                        for &(j, t) in &target.table[k - target.phi] {
                            acc[j] += c as i128 * t as i128;
                        }
                    }
                }
                Ok(Self::from_i128(target, acc, *den as i128))
            }
            Coeffs::Big { num, den } => {
                let mut acc = vec![BigInt::zero(); target.phi];
                for (i, c) in num.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let k = (i as i64 * step) as usize % m as usize;
                    if k < target.phi {
                        acc[k] += c;
                    } else {
                        for &(j, t) in &target.table[k - target.phi] {
                            acc[j] += c * t;
                        }
                    }
                }
                Ok(Self::from_big(target, acc, den.clone()))
            }
        }
    }

    /// Smallest conductor dividing this one that contains the value.
    pub fn minimal_conductor(&self) -> u32 {
        let n = self.ctx.n;
        let mut best = n;
        for d in 1..n {
            if n % d == 0 && d < best {
                // membership test: embedding of a candidate preimage must match
                if let Some(pre) = self.restrict(d) {
                    if pre.embed(n).ok().as_ref() == Some(self) {
                        best = d;
                        break;
                    }
                }
            }
        }
        best
    }

    /// Preimage in Q(ζ_d) if the value lies there (d | N).
    pub fn restrict(&self, d: u32) -> Option<CycNum> {
        let n = self.ctx.n;
        if n % d != 0 {
            return None;
        }
        let step = (n / d) as usize;
        let small = context(d);
        // Basis ζ_d^j = ζ_N^{j*step}; solve by elimination on the φ(d) embedded basis vectors.
        let (num, den) = self.big_parts();
        let mut rows = Vec::new();
        for i in 0..self.ctx.phi {
            for j in 0..small.phi {
                let e = self.ctx.power((j * step) as i64);
                rows.push(CycNum::from_int(1, e[i]));
            }
            rows.push(CycNum::from_big(context(1), vec![num[i].clone()], den.clone()));
        }
        let mut m = Matrix::from_vec(self.ctx.phi, small.phi + 1, rows);
        let piv = m.rref();
        if piv.iter().any(|&c| c == small.phi) {
            return None;
        }
        let mut acc = CycNum::zero(d);
        for (r, &c) in piv.iter().enumerate() {
            let v = m.get(r, small.phi).embed(d).unwrap();
            acc = acc.add_same(&CycNum::zeta(d, c as i64).mul_same(&v), false);
        }
        Some(acc)
    }

    /// If the value is a root of unity, returns `(k, M)` with value = e^{2πik/M}, M = lcm(2, N), k < M.
    pub fn root_of_unity_exponent(&self) -> Option<(u32, u32)> {
        let n = self.ctx.n;
        if self.is_zero() {
            return None;
        }
        let big = if n % 2 == 0 { n } else { 2 * n };
        for j in 0..n {
            let z = CycNum::zeta(n, j as i64);
            if &z == self {
                return Some(((j * (big / n)) % big, big));
            }
            if z.neg_same() == *self {
                return Some(((j * (big / n) + big / 2) % big, big));
            }
        }
        None
    }

    /// Multiplicative order if the value is a root of unity.
    pub fn root_of_unity_order(&self) -> Option<u32> {
        self.root_of_unity_exponent().map(|(k, m)| m / (k as u64).gcd(&(m as u64)) as u32)
    }

    /// Floating-point approximation (debug printing only).
    pub fn to_complex(&self) -> (f64, f64) {
        let (num, den) = self.big_parts();
        let d = den.to_f64().unwrap_or(f64::NAN);
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in num.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * i as f64 / self.ctx.n as f64;
            let c = c.to_f64().unwrap_or(f64::NAN);
            re += c * a.cos();
            im += c * a.sin();
        }
        (re / d, im / d)
    }

    /// Text encoding `N d c0 … c_{φ−1}`.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        use std::fmt::Write;
        match &self.c {
            Coeffs::Small { num, den } => {
                write!(s, "{} {}", self.ctx.n, den).unwrap();
                for c in num {
                    write!(s, " {c}").unwrap();
                }
            }
            Coeffs::Big { num, den } => {
                write!(s, "{} {}", self.ctx.n, den).unwrap();
                for c in num {
                    write!(s, " {c}").unwrap();
                }
            }
        }
        s
    }

    pub fn decode(text: &str) -> Result<CycNum, Error> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::Parse(format!("cyclotomic encoding too short: {text:?}")));
        }
        let n: u32 = toks[0].parse().map_err(|_| Error::Parse(format!("bad conductor {:?}", toks[0])))?;
        if n == 0 {
            return Err(Error::Parse("conductor 0".into()));
        }
        let ctx = context(n);
        let den: BigInt = toks[1].parse().map_err(|_| Error::Parse(format!("bad denominator {:?}", toks[1])))?;
        if !den.is_positive() {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        if toks.len() != ctx.phi + 2 {
            return Err(Error::Parse(format!("conductor {n} needs {} coefficients, got {}", ctx.phi, toks.len() - 2)));
        }
        let num: Result<Vec<BigInt>, _> = toks[2..].iter().map(|t| t.parse::<BigInt>()).collect();
        let num = num.map_err(|_| Error::Parse(format!("bad coefficient in {text:?}")))?;
        Ok(Self::from_big(ctx, num, den))
    }

    /// Human-readable form such as `(1 + 2*z8^3)/5`.
    pub fn pretty(&self) -> String {
        let (num, den) = self.big_parts();
        let mut parts = Vec::new();
        for (i, c) in num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let z = match i {
                0 => String::new(),
                1 => format!("z{}", self.ctx.n),
                _ => format!("z{}^{}", self.ctx.n, i),
            };
            parts.push(if z.is_empty() {
                c.to_string()
            } else if c.is_one() {
                z
            } else if *c == -BigInt::one() {
                format!("-{z}")
            } else {
                format!("{c}*{z}")
            });
        }
        if parts.is_empty() {
            return "0".into();
        }
        let body = parts.join(" + ").replace("+ -", "- ");
        if den.is_one() {
            if parts.len() == 1 { body } else { format!("({body})") }
        } else if parts.len() == 1 {
            format!("{body}/{den}")
        } else {
            format!("({body})/{den}")
        }
    }
}

fn mul_small(ctx: &'static CycContext, a: &[i64], da: i64, b: &[i64], db: i64) -> Option<CycNum> {
    let n = ctx.n as usize;
    let phi = ctx.phi;
    let mut acc = [0i128; 64];
    let mut heap;
    let acc: &mut [i128] = if n <= 64 {
        &mut acc[..n]
    } else {
        heap = vec![0i128; n];
        &mut heap
    };
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let mut k = i + j;
            if k >= n {
                k -= n;
            }
            acc[k] = acc[k].checked_add(x as i128 * y as i128)?;
        }
    }
    for k in phi..n {
        let c = acc[k];
        if c == 0 {
            continue;
        }
        for &(j, t) in &ctx.table[k - phi] {
            acc[j] = acc[j].checked_add(c.checked_mul(t as i128)?)?;
        }
    }
    let den = (da as i128).checked_mul(db as i128)?;
    Some(CycNum::from_i128(ctx, acc[..phi].to_vec(), den))
}

pub fn lcm(a: u32, b: u32) -> u32 {
    (a as u64).lcm(&(b as u64)) as u32
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [Q(z{})]", self.pretty(), self.ctx.n)
    }
}

impl FromStr for CycNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        CycNum::decode(s)
    }
}

impl Field for CycNum {
    fn zero_like(&self) -> Self {
        CycNum::zero(self.ctx.n)
    }
    fn one_like(&self) -> Self {
        CycNum::one(self.ctx.n)
    }
    fn from_i64_like(&self, v: i64) -> Self {
        CycNum::from_int(self.ctx.n, v)
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
    fn is_one(&self) -> bool {
        CycNum::is_one(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        self.neg_same()
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, o: &'a CycNum) -> CycNum {
                let (a, b) = CycNum::unify(self, o);
                $body(&*a, &*b)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                $tr::$m(&self, &o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &'a CycNum) -> CycNum {
                $tr::$m(&self, o)
            }
        }
    };
}

binop!(Add, add, |a: &CycNum, b: &CycNum| a.add_same(b, false));
binop!(Sub, sub, |a: &CycNum, b: &CycNum| a.add_same(b, true));
binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_same(b));
binop!(Div, div, |a: &CycNum, b: &CycNum| a.mul_same(&b.inverse().expect("division by zero")));

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_same()
    }
}
impl<'a> Neg for &'a CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_same()
    }
}

impl Zero for CycNum {
    fn zero() -> Self {
        CycNum::zero(1)
    }
    fn is_zero(&self) -> bool {
        CycNum::is_zero(self)
    }
}

impl One for CycNum {
    fn one() -> Self {
        CycNum::one(1)
    }
}

/// Common algebraic constants, each realised at its smallest natural conductor.
pub mod consts {
    use super::CycNum;

    /// ξ_k = e^{2πi/k}.
    pub fn xi(k: u32) -> CycNum {
        CycNum::zeta(k, 1)
    }
    /// i = ξ_4.
    pub fn i() -> CycNum {
        xi(4)
    }
    pub fn sqrt2() -> CycNum {
        &CycNum::zeta(8, 1) + &CycNum::zeta(8, 7)
    }
    pub fn sqrt3() -> CycNum {
        &CycNum::zeta(12, 1) + &CycNum::zeta(12, 11)
    }
    /// √−3 = ξ_3 − ξ_3².
    pub fn sqrt_m3() -> CycNum {
        &CycNum::zeta(3, 1) - &CycNum::zeta(3, 2)
    }
    pub fn sqrt5() -> CycNum {
        let z = |k| CycNum::zeta(5, k);
        &(&(&z(1) - &z(2)) - &z(3)) + &z(4)
    }
    /// √n for n ∈ {1, 2, 3, 5, 6, 10, 15, 30} and negatives via i.
    pub fn sqrt(n: i64) -> Option<CycNum> {
        let pos = match n.abs() {
            0 => CycNum::zero(1),
            1 => CycNum::one(1),
            2 => sqrt2(),
            3 => sqrt3(),
            4 => CycNum::from_int(1, 2),
            5 => sqrt5(),
            6 => mul(&sqrt2(), &sqrt3()),
            8 => &CycNum::from_int(1, 2) * &sqrt2(),
            9 => CycNum::from_int(1, 3),
            10 => mul(&sqrt2(), &sqrt5()),
            12 => &CycNum::from_int(1, 2) * &sqrt3(),
            15 => mul(&sqrt3(), &sqrt5()),
            30 => mul(&mul(&sqrt2(), &sqrt3()), &sqrt5()),
            _ => return None,
        };
        Some(if n < 0 { mul(&pos, &i()) } else { pos })
    }

    /// Product after lifting both operands to the lcm conductor.
    pub fn mul(a: &CycNum, b: &CycNum) -> CycNum {
        let n = super::lcm(a.conductor(), b.conductor());
        &a.embed(n).unwrap() * &b.embed(n).unwrap()
    }
    pub fn add(a: &CycNum, b: &CycNum) -> CycNum {
        let n = super::lcm(a.conductor(), b.conductor());
        &a.embed(n).unwrap() + &b.embed(n).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::zeta(n, k)
    }

    #[test]
    fn cyclotomic_polys_match_known_values() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).iter().any(|&c| c == -2));
        assert_eq!(cyclotomic_poly(43).len(), 43);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(z(4, 2), CycNum::from_int(4, -1));
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(3, -1));
        let r2 = CycNum::reduce(&[(1, 1, 1), (-1, 1, 1)], 8).unwrap();
        // oracle: (x + x^7)^2 = x^2 + 2x^8 + x^14 ≡ x^2 + 2 + x^6 = 2 + x^2 - x^2 (mod x^4+1)
        assert_eq!(&r2 * &r2, CycNum::from_int(8, 2));
        assert!(CycNum::reduce(&[], 0).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(&(&CycNum::one(8) + &z(8, 1)) * &(&CycNum::one(8) - &z(8, 1)), &CycNum::one(8) - &z(8, 2));
        for n in [3u32, 8, 24, 43] {
            assert_eq!(z(n, 1).inverse().unwrap(), z(n, n as i64 - 1));
        }
        let a = &CycNum::one(3) + &z(3, 1);
        let inv = a.inverse().unwrap();
        // 1 + ζ3 = -ζ3^2, so the inverse is -ζ3; the product check is the oracle
        assert!((&a * &inv).is_one());
        assert_eq!(inv, -z(3, 1));
        assert_eq!(&a * &(-z(3, 2)), z(3, 1));
        assert!(CycNum::zero(5).inverse().is_none());
        let b = CycNum::reduce(&[(0, 3, 7), (1, -2, 5), (5, 1, 3), (9, 4, 1)], 24).unwrap();
        assert!((&b * &b.inverse().unwrap()).is_one());
    }

    #[test]
    fn embed_examples() {
        assert_eq!(z(3, 1).embed(12).unwrap(), z(12, 4));
        for k in 1..6u32 {
            assert_eq!(CycNum::from_int(2, -1).embed(2 * k).unwrap(), CycNum::from_int(2 * k, -1));
        }
        let r2 = consts::sqrt2().embed(24).unwrap();
        assert_eq!(&r2 * &r2, CycNum::from_int(24, 2));
        assert!(z(8, 1).embed(12).is_err());
    }

    #[test]
    fn square_roots() {
        for n in [2i64, 3, 5, 6, 10, 15, 30, -1, -3] {
            let s = consts::sqrt(n).unwrap();
            assert_eq!(&s * &s, CycNum::from_int(s.conductor(), n), "sqrt({n})");
        }
        assert_eq!(consts::sqrt_m3().embed(12).unwrap(), consts::sqrt(-3).unwrap().embed(12).unwrap());
    }

    #[test]
    fn zeta_order_is_exact() {
        for n in [1u32, 2, 3, 4, 8, 12, 24, 43, 96] {
            let zn = z(n, 1);
            let first = (1..=n).find(|&k| zn.pow(k as i64).is_one()).unwrap();
            assert_eq!(first, n);
            assert_eq!(zn.root_of_unity_order(), Some(if n == 1 { 1 } else { n }));
        }
        assert_eq!(CycNum::from_int(3, -1).root_of_unity_order(), Some(2));
        assert_eq!((-z(3, 1)).root_of_unity_order(), Some(6));
        assert_eq!(consts::sqrt2().root_of_unity_order(), None);
    }

    #[test]
    fn encoding_round_trip() {
        let b = CycNum::reduce(&[(0, 3, 7), (1, -2, 5), (5, 1, 3)], 12).unwrap();
        let s = b.encode();
        assert_eq!(CycNum::decode(&s).unwrap(), b);
        assert_eq!(CycNum::decode(&s).unwrap().encode(), s);
        assert_eq!(CycNum::decode("3 1 0 1").unwrap(), z(3, 1));
        assert!(CycNum::decode("3 0 0 1").is_err());
        assert!(CycNum::decode("3 1 0").is_err());
        let big = CycNum::from_bigint(3, BigInt::from(i64::MAX) * BigInt::from(i64::MAX));
        assert_eq!(CycNum::decode(&big.encode()).unwrap(), big);
    }

    #[test]
    fn big_fallback_is_canonical() {
        let huge = CycNum::from_int(8, i64::MAX);
        let sq = &huge * &huge;
        let back = &sq / &huge;
        assert_eq!(back, huge);
        assert!(back.small_parts().is_some());
    }

    #[test]
    fn restrict_and_minimal_conductor() {
        let x = z(3, 1).embed(24).unwrap();
        assert_eq!(x.restrict(3).unwrap(), z(3, 1));
        assert_eq!(x.minimal_conductor(), 3);
        assert!(z(8, 1).embed(24).unwrap().restrict(12).is_none());
        assert_eq!(consts::sqrt3().minimal_conductor(), 12);
    }

    #[test]
    fn mismatch_is_an_error() {
        assert!(matches!(z(3, 1).try_add(&z(4, 1)), Err(Error::ConductorMismatch(3, 4))));
        // conductor 1 promotes silently in operators
        assert_eq!(&z(4, 1) + &CycNum::from_int(1, 1), &z(4, 1) + &CycNum::one(4));
    }
}
