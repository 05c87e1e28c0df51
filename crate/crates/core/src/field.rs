//! Arithmetic in the prime field F_p and the vector space F_p^n.
//!
//! Every value is stored as its canonical representative in `[0, p)`. The
//! Fermat indicator `1 - s^(p-1)` is the building block of the tensor that
//! encodes zero sums.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    /// Validates `p` by trial division.
    pub fn new(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn zero(self) -> FpScalar {
        FpScalar { value: 0, modulus: self }
    }

    #[inline]
    pub fn one(self) -> FpScalar {
        FpScalar { value: 1, modulus: self }
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn reduce(self, value: u64) -> FpScalar {
        FpScalar {
            value: (value % self.0 as u64) as u32,
            modulus: self,
        }
    }

    /// Wraps a value that must already be canonical.
    pub fn scalar(self, value: u64) -> Result<FpScalar> {
        if value >= self.0 as u64 {
            return Err(Error::NotCanonical { value, p: self.0 });
        }
        Ok(FpScalar {
            value: value as u32,
            modulus: self,
        })
    }

    /// All field elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = FpScalar> {
        (0..self.0).map(move |value| FpScalar { value, modulus: self })
    }
}

impl<'de> Deserialize<'de> for PrimeModulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        PrimeModulus::new(p).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u32,
    modulus: PrimeModulus,
}

impl FpScalar {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// `self^e`, with `0^0 = 1`.
    pub fn pow(self, mut e: u64) -> FpScalar {
        let p = self.modulus.0 as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FpScalar {
            value: acc as u32,
            modulus: self.modulus,
        }
    }

    /// `1 - self^(p-1)`: one at zero, zero elsewhere.
    pub fn fermat_indicator(self) -> FpScalar {
        let p = self.modulus.0 as u64;
        self.modulus.one() - self.pow(p - 1)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(self) -> Option<FpScalar> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus.0 as u64 - 2))
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn add(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0 as u64;
        FpScalar {
            value: ((self.value as u64 + rhs.value as u64) % p) as u32,
            modulus: self.modulus,
        }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn sub(self, rhs: FpScalar) -> FpScalar {
        self + (-rhs)
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn neg(self) -> FpScalar {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus.0 - self.value
        };
        FpScalar {
            value,
            modulus: self.modulus,
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    #[inline]
    fn mul(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0 as u64;
        FpScalar {
            value: (self.value as u64 * rhs.value as u64 % p) as u32,
            modulus: self.modulus,
        }
    }
}

/// An element of F_p^n, stored as canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    modulus: PrimeModulus,
    coords: Vec<u32>,
}

impl FpVector {
    /// Builds a vector from canonical coordinates.
    pub fn new(modulus: PrimeModulus, coords: Vec<u32>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("vectors must have dimension >= 1".into()));
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= modulus.get()) {
            return Err(Error::NotCanonical {
                value: bad as u64,
                p: modulus.get(),
            });
        }
        Ok(FpVector { modulus, coords })
    }

    pub fn zero(modulus: PrimeModulus, n: usize) -> Self {
        FpVector {
            modulus,
            coords: vec![0; n],
        }
    }

    /// Inverse of [`FpVector::code`].
    pub fn from_code(modulus: PrimeModulus, n: usize, mut code: u64) -> Self {
        let p = modulus.get() as u64;
        let mut coords = vec![0u32; n];
        for c in coords.iter_mut().rev() {
            *c = (code % p) as u32;
            code /= p;
        }
        FpVector { modulus, coords }
    }

    /// Base-p integer whose digits (most significant first) are the coordinates.
    pub fn code(&self) -> u64 {
        let p = self.modulus.get() as u64;
        self.coords.iter().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    #[inline]
    pub fn coord(&self, i: usize) -> FpScalar {
        FpScalar {
            value: self.coords[i],
            modulus: self.modulus,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &FpVector, left: &str, right: &str) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: left.to_string(),
                left_p: self.modulus.get(),
                right: right.to_string(),
                right_p: other.modulus.get(),
            });
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: left.to_string(),
                left_dim: self.dim(),
                right: right.to_string(),
                right_dim: other.dim(),
            });
        }
        Ok(())
    }

    /// Coordinatewise sum mod p.
    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.check_compatible(other, "left operand", "right operand")?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &FpVector) -> FpVector {
        let p = self.modulus.get();
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        FpVector {
            modulus: self.modulus,
            coords,
        }
    }

    pub fn neg(&self) -> FpVector {
        let p = self.modulus.get();
        FpVector {
            modulus: self.modulus,
            coords: self
                .coords
                .iter()
                .map(|&c| if c == 0 { 0 } else { p - c })
                .collect(),
        }
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
