//! Arithmetic in the prime field GF(p).
//!
//! [`Prime`] carries the modulus and offers raw `u32` kernels used by the
//! matrix code. [`Scalar`] is the checked, modulus-carrying value type for
//! callers that want mixed-modulus mistakes reported as errors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime modulus small enough that products fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub const MAX: u32 = (1 << 31) - 1;

    /// Validates primality by trial division.
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=Self::MAX).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Prime(p))
    }

    pub const fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    /// Reduces a possibly negative integer.
    pub fn reduce_signed(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.0 as u64 {
            (s - self.0 as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            self.0 - (b - a)
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse via Fermat's little theorem; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.0) {
            None
        } else {
            Some(self.pow(a, self.0 as u64 - 2))
        }
    }

    pub fn is_square(self, a: u32) -> bool {
        let a = a % self.0;
        if a == 0 || self.0 == 2 {
            return true;
        }
        self.pow(a, (self.0 as u64 - 1) / 2) == 1
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u32 {
        if self.0 == 2 {
            return 1;
        }
        let order = self.0 as u64 - 1;
        let factors = prime_factors(order);
        (2..self.0)
            .find(|&g| factors.iter().all(|&q| self.pow(g, order / q) != 1))
            .expect("every prime field has a primitive root")
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if (p as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// True iff the field has odd characteristic (the involution theory needs it).
pub fn is_odd_characteristic(p: Prime) -> bool {
    p.value() != 2
}

/// An element of GF(p) that remembers its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    modulus: Prime,
}

// Arithmetic is fallible on mismatched moduli, so these stay inherent methods.
#[allow(clippy::should_implement_trait)]
impl Scalar {
    pub fn new(value: u64, modulus: Prime) -> Self {
        Scalar {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn zero(modulus: Prime) -> Self {
        Scalar { value: 0, modulus }
    }

    pub fn one(modulus: Prime) -> Self {
        Scalar {
            value: 1 % modulus.value(),
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_modulus(self, other: Scalar) -> Result<Prime> {
        if self.modulus == other.modulus {
            Ok(self.modulus)
        } else {
            Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            })
        }
    }

    pub fn add(self, other: Scalar) -> Result<Scalar> {
        let p = self.same_modulus(other)?;
        Ok(Scalar {
            value: p.add(self.value, other.value),
            modulus: p,
        })
    }

    pub fn sub(self, other: Scalar) -> Result<Scalar> {
        let p = self.same_modulus(other)?;
        Ok(Scalar {
            value: p.sub(self.value, other.value),
            modulus: p,
        })
    }

    pub fn mul(self, other: Scalar) -> Result<Scalar> {
        let p = self.same_modulus(other)?;
        Ok(Scalar {
            value: p.mul(self.value, other.value),
            modulus: p,
        })
    }

    pub fn neg(self) -> Scalar {
        Scalar {
            value: self.modulus.neg(self.value),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<Scalar> {
        let value = self.modulus.inv(self.value).ok_or(Error::ZeroInverse)?;
        Ok(Scalar {
            value,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}
