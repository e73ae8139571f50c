//! Reduction of cyclotomic data modulo a prime p ≡ 1 (mod N).
//!
//! ζ_N is sent to a fixed primitive N-th root of unity ω in F_p. This is a
//! ring map from the p-integral part of Q(ζ_N), so anything certified about
//! the image (a zero-dimensional Jacobian ideal, a trivial intersection,
//! group orders of finite groups) transfers back under the usual hypotheses.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::field::{primes_one_mod, primitive_root_of_unity, Field, Fp};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::{CycMatrix, CycNum, Form};

#[derive(Clone, Debug)]
pub struct ModularImage {
    n: u32,
    p: u64,
    /// ω^k for 0 ≤ k < n.
    pows: Vec<u64>,
}

impl ModularImage {
    /// The `index`-th (0-based) prime image for conductor n, primes taken from the top down.
    pub fn new(n: u32, index: usize) -> ModularImage {
        let base = if n % 2 == 0 { n as u64 } else { 2 * n as u64 };
        let p = primes_one_mod(base).nth(index).expect("enough primes");
        let w = primitive_root_of_unity(n as u64, p);
        let mut pows = Vec::with_capacity(n as usize);
        let mut cur = 1u64;
        for _ in 0..n {
            pows.push(cur);
            cur = crate::field::mulmod(cur, w, p);
        }
        ModularImage { n, p, pows }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn conductor(&self) -> u32 {
        self.n
    }
    pub fn zero(&self) -> Fp {
        Fp { v: 0, p: self.p }
    }

    fn reduce_int(&self, c: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((c % &p) + &p) % &p;
        r.to_u64().unwrap()
    }

    /// Image of c; `None` when its denominator vanishes mod p or its conductor does not divide N.
    pub fn map(&self, c: &CycNum) -> Option<Fp> {
        let cn = c.conductor();
        if self.n % cn != 0 {
            return None;
        }
        let step = (self.n / cn) as usize;
        let p = self.p;
        let (acc, den) = match c.small_parts() {
            Some((num, den)) => {
                let mut acc = 0u64;
                for (i, &x) in num.iter().enumerate() {
                    if x != 0 {
                        let xv = Fp::new(x, p);
                        acc = (acc as u128 + crate::field::mulmod(xv.v, self.pows[(i * step) % self.n as usize], p) as u128)
                            .rem_euclid(p as u128) as u64;
                    }
                }
                (acc, Fp::new(den, p).v)
            }
            None => {
                let (num, den) = c.big_parts();
                let mut acc = 0u64;
                for (i, x) in num.iter().enumerate() {
                    let xv = self.reduce_int(x);
                    if xv != 0 {
                        acc = ((acc as u128 + crate::field::mulmod(xv, self.pows[(i * step) % self.n as usize], p) as u128) % p as u128) as u64;
                    }
                }
                (acc, self.reduce_int(&den))
            }
        };
        let d = Fp { v: den, p }.inv()?;
        Some(Fp { v: acc, p }.mul_ref(&d))
    }

    pub fn map_form(&self, f: &Form) -> Option<Poly<Fp>> {
        f.try_map_coeffs(|c| self.map(c).ok_or(())).ok()
    }

    pub fn map_matrix(&self, a: &CycMatrix) -> Option<Matrix<Fp>> {
        a.try_map(|c| self.map(c).ok_or(())).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::consts;

    #[test]
    fn map_is_a_ring_homomorphism() {
        let img = ModularImage::new(24, 0);
        let a = CycNum::reduce(&[(0, 3, 7), (5, -2, 5), (11, 1, 1)], 24).unwrap();
        let b = consts::sqrt2().embed(24).unwrap();
        let (ma, mb) = (img.map(&a).unwrap(), img.map(&b).unwrap());
        assert_eq!(img.map(&(&a * &b)).unwrap(), ma.mul_ref(&mb));
        assert_eq!(img.map(&(&a + &b)).unwrap(), ma.add_ref(&mb));
        // lower conductors map consistently
        assert_eq!(img.map(&CycNum::zeta(3, 1)).unwrap(), img.map(&CycNum::zeta(24, 8)).unwrap());
        assert_eq!(img.map(&(&b * &b)).unwrap().v, 2);
        assert!(img.map(&CycNum::zeta(5, 1)).is_none());
    }
}
