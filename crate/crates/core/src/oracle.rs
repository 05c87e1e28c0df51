//! Brute-force slice rank for tiny 3-tensors.
//!
//! Every function `A^3 -> F_p` is encoded as a base-p integer whose digits
//! are its entries. The oracle enumerates every single slice, deduplicates
//! them as points of that function space, marks all pairwise sums in a
//! bitset, and answers rank queries by membership:
//! `t` has rank at most `r` iff `t - s` has rank at most `r - 1` for some
//! slice `s`.

use std::fmt;

use serde::Serialize;

use crate::budget::{checked_pow_within, Budget};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;
use crate::tensor::FpTensor;

/// Exact slice rank, or the statement that it exceeds the search limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleRank {
    Exact(usize),
    AboveMax(usize),
}

impl OracleRank {
    pub fn exact(self) -> Option<usize> {
        match self {
            OracleRank::Exact(r) => Some(r),
            OracleRank::AboveMax(_) => None,
        }
    }
}

impl fmt::Display for OracleRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleRank::Exact(r) => write!(f, "{r}"),
            OracleRank::AboveMax(r) => write!(f, ">{r}"),
        }
    }
}

impl Serialize for OracleRank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OracleRank::Exact(r) => s.serialize_u64(*r as u64),
            OracleRank::AboveMax(_) => s.collect_str(self),
        }
    }
}

/// Precomputed rank-1 and rank-2 sets for one `(p, |A|)`.
pub struct SliceRankOracle {
    modulus: PrimeModulus,
    domain_size: usize,
    /// `|A|^3`: digits per code.
    points: usize,
    /// Functions of slice rank at most 1, sorted, including zero.
    rank1: Vec<u64>,
    /// Bitset over the function space: slice rank at most 2.
    rank2: Vec<u64>,
}

impl SliceRankOracle {
    /// Builds the tables, refusing when `p^(|A|^3)` exceeds the oracle budget.
    pub fn new(modulus: PrimeModulus, domain_size: usize, budget: &Budget) -> Result<Self> {
        let p = modulus.get() as u64;
        let points = domain_size.pow(3);
        let space = checked_pow_within(p, points as u64, budget.oracle_space).ok_or_else(|| {
            Error::Unsupported(format!(
                "slice-rank oracle needs a function space of {p}^{points} points, above the limit of {}",
                budget.oracle_space
            ))
        })?;

        let mut oracle = SliceRankOracle {
            modulus,
            domain_size,
            points,
            rank1: Vec::new(),
            rank2: vec![0u64; (space as usize).div_ceil(64)],
        };
        oracle.rank1 = oracle.enumerate_slices();
        oracle.fill_rank2();
        Ok(oracle)
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    /// Number of distinct functions of slice rank at most 1 (zero included).
    pub fn rank_one_count(&self) -> usize {
        self.rank1.len()
    }

    fn encode_digits(&self, digits: &[u32]) -> u64 {
        let p = self.modulus.get() as u64;
        digits.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64)
    }

    fn decode(&self, mut code: u64, out: &mut [u32]) {
        let p = self.modulus.get() as u64;
        for d in out.iter_mut() {
            *d = (code % p) as u32;
            code /= p;
        }
    }

    pub fn encode(&self, t: &FpTensor) -> u64 {
        self.encode_digits(t.entries())
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        let p = self.modulus.get() as u64;
        if p == 2 {
            return x ^ y;
        }
        let (mut x, mut y) = (x, y);
        let (mut out, mut scale) = (0u64, 1u64);
        for _ in 0..self.points {
            out += (x % p + y % p) % p * scale;
            x /= p;
            y /= p;
            scale *= p;
        }
        out
    }

    fn sub(&self, x: u64, y: u64) -> u64 {
        let p = self.modulus.get() as u64;
        if p == 2 {
            return x ^ y;
        }
        let (mut x, mut y) = (x, y);
        let (mut out, mut scale) = (0u64, 1u64);
        for _ in 0..self.points {
            out += (x % p + p - y % p) % p * scale;
            x /= p;
            y /= p;
            scale *= p;
        }
        out
    }

    fn enumerate_slices(&self) -> Vec<u64> {
        let p = self.modulus.get() as u64;
        let size = self.domain_size;
        let h_count = p.pow(size as u32);
        let g_count = p.pow((size * size) as u32);
        let mut h = vec![0u32; size];
        let mut g = vec![0u32; size * size];
        let mut digits = vec![0u32; self.points];
        let mut out = vec![0u64];
        for axis in 0..3 {
            for hc in 1..h_count {
                self.decode(hc, &mut h);
                for gc in 1..g_count {
                    self.decode(gc, &mut g);
                    for (flat, d) in digits.iter_mut().enumerate() {
                        let (x, y, z) = (flat / (size * size), (flat / size) % size, flat % size);
                        let (on, rest) = match axis {
                            0 => (x, y * size + z),
                            1 => (y, x * size + z),
                            _ => (z, x * size + y),
                        };
                        *d = (h[on] as u64 * g[rest] as u64 % p) as u32;
                    }
                    out.push(self.encode_digits(&digits));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn fill_rank2(&mut self) {
        let mut bits = std::mem::take(&mut self.rank2);
        for (i, &x) in self.rank1.iter().enumerate() {
            for &y in &self.rank1[i..] {
                let s = self.add(x, y);
                bits[(s / 64) as usize] |= 1 << (s % 64);
            }
        }
        self.rank2 = bits;
    }

    fn in_rank1(&self, code: u64) -> bool {
        self.rank1.binary_search(&code).is_ok()
    }

    fn in_rank2(&self, code: u64) -> bool {
        self.rank2[(code / 64) as usize] >> (code % 64) & 1 == 1
    }

    /// Slice rank at most `r`.
    fn within(&self, code: u64, r: usize) -> bool {
        match r {
            0 => code == 0,
            1 => self.in_rank1(code),
            2 => self.in_rank2(code),
            _ => self
                .rank1
                .iter()
                .any(|&s| self.within(self.sub(code, s), r - 1)),
        }
    }

    /// The least `r <= max_rank` with `t` of slice rank at most `r`.
    pub fn rank(&self, t: &FpTensor, max_rank: usize) -> Result<OracleRank> {
        if t.k() != 3 || t.domain_size() != self.domain_size || t.modulus() != self.modulus {
            return Err(Error::InvalidInput(format!(
                "oracle built for k = 3, |A| = {}, p = {}; got k = {}, |A| = {}, p = {}",
                self.domain_size,
                self.modulus,
                t.k(),
                t.domain_size(),
                t.modulus()
            )));
        }
        let code = self.encode(t);
        Ok((0..=max_rank)
            .find(|&r| self.within(code, r))
            .map_or(OracleRank::AboveMax(max_rank), OracleRank::Exact))
    }
}

/// One-shot oracle query; see [`SliceRankOracle`].
pub fn slice_rank_oracle(t: &FpTensor, max_rank: usize, budget: &Budget) -> Result<OracleRank> {
    if t.k() != 3 {
        return Err(Error::Unsupported(format!(
            "slice-rank oracle handles k = 3 only, got k = {}",
            t.k()
        )));
    }
    SliceRankOracle::new(t.modulus(), t.domain_size(), budget)?.rank(t, max_rank)
}
