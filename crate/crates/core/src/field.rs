//! Arithmetic in the prime field F_p.

use crate::error::{BvhError, Result};

/// The prime field F_p for a small prime `p < 2^16`.
///
/// Scalars are plain `u32` values in `[0, p)`; the field only carries the
/// modulus, so it is `Copy` and cheap to thread through every routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 16 {
            return Err(BvhError::NotPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.p == 2
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    /// `(-1)^k` as a field element.
    #[inline]
    pub fn sign(self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.neg(1)
        }
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a % self.p, (self.p - 2) as u64)
    }

    /// Signed representative in `(-p/2, p/2]`, used for display.
    pub fn signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}
