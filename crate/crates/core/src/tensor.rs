//! Tensors `A^k -> F_p`, slices, and the triangular-support certificate.
//!
//! The domain `A` is `{0, .., |A| - 1}` internally; every index that leaves
//! the library (JSON, certificates) is 1-based. The linear order on `A` is
//! the integer order, so any other order is handled by relabeling the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FpScalar, PrimeModulus};

/// Largest dense table the library will allocate.
pub const MAX_TENSOR_ENTRIES: u64 = 1 << 28;

/// A dense function `A^k -> F_p`, row-major with the first coordinate most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpTensor {
    modulus: PrimeModulus,
    k: usize,
    domain_size: usize,
    entries: Vec<u32>,
}

fn table_len(domain_size: usize, k: usize) -> Result<usize> {
    let mut len = 1u64;
    for _ in 0..k {
        len = len.saturating_mul(domain_size as u64);
    }
    if len > MAX_TENSOR_ENTRIES {
        return Err(Error::BudgetExceeded {
            what: "dense tensor",
            needed: format!("{domain_size}^{k} entries"),
            budget: MAX_TENSOR_ENTRIES,
        });
    }
    Ok(len as usize)
}

impl FpTensor {
    pub fn zeros(modulus: PrimeModulus, k: usize, domain_size: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("tensor arity must be >= 2, got {k}")));
        }
        let len = table_len(domain_size, k)?;
        Ok(FpTensor {
            modulus,
            k,
            domain_size,
            entries: vec![0; len],
        })
    }

    /// Builds a tensor from a function of 0-based index tuples.
    pub fn from_fn<F>(modulus: PrimeModulus, k: usize, domain_size: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> FpScalar,
    {
        let mut t = Self::zeros(modulus, k, domain_size)?;
        let mut idx = vec![0usize; k];
        for flat in 0..t.entries.len() {
            t.unflatten_into(flat, &mut idx);
            t.entries[flat] = f(&idx).value();
        }
        Ok(t)
    }

    /// A matrix (k = 2) from its rows.
    pub fn from_rows(modulus: PrimeModulus, rows: &[Vec<u32>]) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        let mut t = Self::zeros(modulus, 2, size)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                t.set(&[i, j], modulus.scalar(v as u64)?);
            }
        }
        Ok(t)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    /// Raw canonical values in row-major order.
    #[inline]
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.k);
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.domain_size);
            acc * self.domain_size + i
        })
    }

    pub fn unflatten_into(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.domain_size;
            flat /= self.domain_size;
        }
    }

    #[inline]
    pub fn get(&self, idx: &[usize]) -> FpScalar {
        self.modulus.reduce(self.entries[self.flatten(idx)] as u64)
    }

    #[inline]
    pub fn set(&mut self, idx: &[usize], v: FpScalar) {
        let flat = self.flatten(idx);
        self.entries[flat] = v.value();
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Nonzero entries in row-major order, 0-based indices.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, FpScalar)> + '_ {
        self.entries.iter().enumerate().filter(|(_, &v)| v != 0).map(|(flat, &v)| {
            let mut idx = vec![0; self.k];
            self.unflatten_into(flat, &mut idx);
            (idx, self.modulus.reduce(v as u64))
        })
    }

    /// `f(x, x, .., x)` for each x.
    pub fn diagonal(&self) -> Vec<FpScalar> {
        (0..self.domain_size)
            .map(|x| self.get(&vec![x; self.k]))
            .collect()
    }

    /// Rows of a k = 2 tensor.
    pub fn rows(&self) -> Result<Vec<Vec<u32>>> {
        if self.k != 2 {
            return Err(Error::InvalidInput(format!(
                "expected a matrix (k = 2), got k = {}",
                self.k
            )));
        }
        Ok(self
            .entries
            .chunks(self.domain_size.max(1))
            .take(self.domain_size)
            .map(<[u32]>::to_vec)
            .collect())
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    index: Vec<usize>,
    value: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct TensorJson {
    p: PrimeModulus,
    k: usize,
    domain_size: usize,
    entries: Vec<EntryJson>,
}

impl Serialize for FpTensor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            p: self.modulus,
            k: self.k,
            domain_size: self.domain_size,
            entries: self
                .nonzero()
                .map(|(idx, v)| EntryJson {
                    index: idx.into_iter().map(|i| i + 1).collect(),
                    value: v.value(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FpTensor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TensorJson::deserialize(d)?;
        let mut t = FpTensor::zeros(raw.p, raw.k, raw.domain_size).map_err(D::Error::custom)?;
        let mut seen = std::collections::HashSet::new();
        for e in raw.entries {
            if e.index.len() != raw.k {
                return Err(D::Error::custom(format!(
                    "entry index {:?} has {} coordinates, expected {}",
                    e.index,
                    e.index.len(),
                    raw.k
                )));
            }
            if e.index.iter().any(|&i| i == 0 || i > raw.domain_size) {
                return Err(D::Error::custom(format!(
                    "entry index {:?} outside 1..={}",
                    e.index, raw.domain_size
                )));
            }
            if !seen.insert(e.index.clone()) {
                return Err(D::Error::custom(format!("duplicate entry index {:?}", e.index)));
            }
            let v = raw.p.scalar(e.value as u64).map_err(D::Error::custom)?;
            let idx: Vec<usize> = e.index.iter().map(|i| i - 1).collect();
            t.set(&idx, v);
        }
        Ok(t)
    }
}

/// A function of the form `h(x_axis) * g(other coordinates)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slice {
    /// 1-based axis carrying `h`.
    pub axis: usize,
    /// `h` on `A`.
    pub h: Vec<u32>,
    /// `g` on `A^(k-1)`, row-major over the remaining axes in order.
    pub g: Vec<u32>,
}

impl Slice {
    /// Value at a 0-based index tuple.
    pub fn eval(&self, modulus: PrimeModulus, domain_size: usize, idx: &[usize]) -> FpScalar {
        let ax = self.axis - 1;
        let hv = self.h[idx[ax]];
        if hv == 0 {
            return modulus.zero();
        }
        let gi = idx
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ax)
            .fold(0, |acc, (_, &x)| acc * domain_size + x);
        modulus.reduce(hv as u64 * self.g[gi] as u64)
    }

    /// Neither table is identically zero.
    pub fn is_nonvanishing(&self) -> bool {
        self.h.iter().any(|&v| v != 0) && self.g.iter().any(|&v| v != 0)
    }
}

/// A tensor written as a sum of slices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceDecomposition {
    pub slices: Vec<Slice>,
    pub target: FpTensor,
}

impl SliceDecomposition {
    /// The tensor the slices actually sum to.
    pub fn sum(&self) -> FpTensor {
        let t = &self.target;
        let m = t.modulus();
        let size = t.domain_size();
        let mut out = FpTensor::zeros(m, t.k(), size).expect("same shape as target");
        let mut idx = vec![0usize; t.k()];
        for flat in 0..out.entries.len() {
            out.unflatten_into(flat, &mut idx);
            let v = self
                .slices
                .iter()
                .fold(m.zero(), |acc, s| acc + s.eval(m, size, &idx));
            out.entries[flat] = v.value();
        }
        out
    }

    /// Exhaustive pointwise comparison against the target.
    pub fn reproduces_target(&self) -> bool {
        self.sum() == self.target
    }
}

impl Serialize for SliceDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SliceDecomposition", 4)?;
        st.serialize_field("p", &self.target.modulus())?;
        st.serialize_field("k", &self.target.k())?;
        st.serialize_field("domainSize", &self.target.domain_size())?;
        st.serialize_field("slices", &self.slices)?;
        st.end()
    }
}

/// Result of [`check_triangular`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TriangularCertificate {
    pub holds: bool,
    /// First violating nonzero entry in row-major order, 1-based.
    pub witness: Option<Vec<usize>>,
    pub diagonal_count: usize,
    /// Certified lower bound on the slice rank, present when `holds`.
    pub lower_bound: Option<usize>,
}

fn triangular_at(idx: &[usize]) -> bool {
    let (first, last) = (idx[0], idx[idx.len() - 1]);
    first <= last && idx[1..idx.len() - 1].iter().all(|&x| first <= x && x <= last)
}

/// Checks that every nonzero entry satisfies `x_1 <= x_i <= x_k`. When it
/// does, the slice rank is at least the number of nonzero diagonal entries.
pub fn check_triangular(t: &FpTensor) -> TriangularCertificate {
    let witness = t
        .nonzero()
        .find(|(idx, _)| !triangular_at(idx))
        .map(|(idx, _)| idx.into_iter().map(|i| i + 1).collect::<Vec<_>>());
    let diagonal_count = t.diagonal().iter().filter(|v| !v.is_zero()).count();
    let holds = witness.is_none();
    TriangularCertificate {
        holds,
        witness,
        diagonal_count,
        lower_bound: holds.then_some(diagonal_count),
    }
}

/// Rank of a rectangular matrix over F_p by Gaussian elimination. The pivot
/// in each column is the first nonzero entry at or below the current row.
pub fn rank_mod_p(rows: &[Vec<u32>], p: PrimeModulus) -> usize {
    let mut a: Vec<Vec<FpScalar>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| p.reduce(v as u64)).collect())
        .collect();
    let height = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        if rank == height {
            break;
        }
        let Some(pivot) = (rank..height).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = a[rank][col].inverse().expect("pivot is nonzero");
        for v in a[rank].iter_mut() {
            *v = *v * inv;
        }
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let factor = row[col];
            if factor.is_zero() {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = *x - factor * y;
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a k = 2 tensor, which equals its slice rank.
pub fn matrix_rank(t: &FpTensor) -> Result<usize> {
    Ok(rank_mod_p(&t.rows()?, t.modulus()))
}
