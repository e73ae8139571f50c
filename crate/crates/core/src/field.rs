//! Scalar abstraction shared by the polynomial, matrix and Gröbner code.
//!
//! Both concrete scalars carry runtime data (a conductor, a modulus), so the
//! trait builds constants from an existing instance instead of from nothing.

use std::fmt::Debug;
use std::hash::Hash;

pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul_ref(&r))
    }
}

/// Element of the prime field F_p with the modulus carried inline.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Fp {
        Fp { v: (v as i128).rem_euclid(p as i128) as u64, p }
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn from_i64_like(&self, v: i64) -> Self {
        Fp::new(v, self.p)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        let s = self.v as u128 + rhs.v as u128;
        Fp { v: (s % self.p as u128) as u64, p: self.p }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        let v = if self.v >= rhs.v { self.v - rhs.v } else { self.p - (rhs.v - self.v) };
        Fp { v, p: self.p }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Fp { v: mulmod(self.v, rhs.v, self.p), p: self.p }
    }
    fn neg_ref(&self) -> Self {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(Fp { v: powmod(self.v, self.p - 2, self.p), p: self.p })
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes p ≡ 1 (mod n), largest first, below 2^61.
pub fn primes_one_mod(n: u64) -> impl Iterator<Item = u64> {
    let n = n.max(2);
    let top = (1u64 << 61) / n;
    (1..=top).rev().map(move |k| k * n + 1).filter(|&p| is_prime(p))
}

/// An element of exact multiplicative order n in F_p; requires n | p-1.
pub fn primitive_root_of_unity(n: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % n, 0);
    let qs = prime_factors(n);
    for g in 2..p {
        let w = powmod(g, (p - 1) / n, p);
        if qs.iter().all(|&q| powmod(w, n / q, p) != 1) {
            return w;
        }
    }
    unreachable!("F_p* is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let ps: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn root_of_unity_has_exact_order() {
        let p = primes_one_mod(24).next().unwrap();
        assert_eq!(p % 24, 1);
        let w = primitive_root_of_unity(24, p);
        let orders: Vec<u64> = (1..=24).filter(|&k| powmod(w, k, p) == 1).collect();
        assert_eq!(orders, vec![24]);
    }

    #[test]
    fn fp_inverse() {
        let a = Fp::new(-5, 101);
        assert_eq!(a.mul_ref(&a.inv().unwrap()).v, 1);
        assert!(a.zero_like().inv().is_none());
    }
}
