//! Sparse polynomials over F_p in three blocks of n variables.
//!
//! Variable `u_l` stands for the l-th coordinate of `a_x`, `v_l` for `b_y`
//! and `w_l` for `c_z`. The indicator tensor of a triple system is the
//! polynomial
//!
//! ```text
//! f = prod_{l=1..n} (1 - (u_l + v_l + w_l)^(p-1))
//! ```
//!
//! evaluated at `(a_x, b_y, c_z)`. Polynomials are treated as functions on
//! F_p, so exponents are reduced with `x^p = x` and never exceed `p - 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bound::multinomial;
use crate::budget::{checked_pow_within, Budget};
use crate::error::{Error, Result};
use crate::field::{FpScalar, FpVector, PrimeModulus};

/// One of the three variable blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Block {
    U,
    V,
    W,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::U, Block::V, Block::W];

    /// Position of the block in `f(x, y, z)`, 0-based.
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Exponents of all 3n variables, packed as `u_1..u_n, v_1..v_n, w_1..w_n`.
///
/// The derived ordering is lexicographic over the packed layout, which is
/// lexicographic over `(u, v, w)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Box<[u16]>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![0; 3 * n].into_boxed_slice())
    }

    pub fn from_blocks(u: &[u16], v: &[u16], w: &[u16]) -> Result<Self> {
        if u.len() != v.len() || v.len() != w.len() {
            return Err(Error::InvalidInput(format!(
                "exponent blocks have lengths {}, {}, {}",
                u.len(),
                v.len(),
                w.len()
            )));
        }
        let packed: Vec<u16> = u.iter().chain(v).chain(w).copied().collect();
        Ok(ExponentVector(packed.into_boxed_slice()))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.len() / 3
    }

    #[inline]
    pub fn block(&self, b: Block) -> &[u16] {
        let n = self.n();
        &self.0[b.index() * n..(b.index() + 1) * n]
    }

    pub fn u(&self) -> &[u16] {
        self.block(Block::U)
    }

    pub fn v(&self) -> &[u16] {
        self.block(Block::V)
    }

    pub fn w(&self) -> &[u16] {
        self.block(Block::W)
    }

    pub fn block_degree(&self, b: Block) -> u64 {
        self.block(b).iter().map(|&e| e as u64).sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn max_degree(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Product of monomials, reduced with `x^p = x`.
    fn mul(&self, other: &ExponentVector, p: u32) -> ExponentVector {
        let p = p as u16;
        let packed: Vec<u16> = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(&x, &y)| {
                let mut e = x + y;
                while e >= p {
                    e -= p - 1;
                }
                e
            })
            .collect();
        ExponentVector(packed.into_boxed_slice())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{:?} v{:?} w{:?}", self.u(), self.v(), self.w())
    }
}

/// Evaluates the monomial `prod_l x_l^{e_l}` at a point; `0^0 = 1`.
pub fn eval_monomial(exponents: &[u16], point: &FpVector) -> FpScalar {
    let m = point.modulus();
    exponents
        .iter()
        .enumerate()
        .fold(m.one(), |acc, (l, &e)| acc * point.coord(l).pow(e as u64))
}

/// A polynomial in canonical sparse form: no zero coefficients, terms in
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPolynomial {
    modulus: PrimeModulus,
    n: usize,
    terms: BTreeMap<ExponentVector, u32>,
}

impl FpPolynomial {
    pub fn zero(modulus: PrimeModulus, n: usize) -> Self {
        FpPolynomial {
            modulus,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(modulus: PrimeModulus, n: usize, c: FpScalar) -> Self {
        let mut poly = Self::zero(modulus, n);
        poly.add_term(ExponentVector::zero(n), c);
        poly
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> FpScalar {
        self.modulus
            .reduce(self.terms.get(e).copied().unwrap_or(0) as u64)
    }

    /// Terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, FpScalar)> {
        let m = self.modulus;
        self.terms.iter().map(move |(e, &c)| (e, m.reduce(c as u64)))
    }

    /// Adds `c * x^e`, dropping the term if the coefficient cancels.
    pub fn add_term(&mut self, e: ExponentVector, c: FpScalar) {
        debug_assert_eq!(e.n(), self.n);
        if c.is_zero() {
            return;
        }
        let p = self.modulus.get();
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.value());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = (*o.get() + c.value()) % p;
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn mul(&self, other: &FpPolynomial) -> FpPolynomial {
        assert_eq!(self.modulus, other.modulus, "modulus mismatch in product");
        assert_eq!(self.n, other.n, "dimension mismatch in product");
        let p = self.modulus.get();
        let mut out = FpPolynomial::zero(self.modulus, self.n);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let c = self.modulus.reduce(c1 as u64 * c2 as u64);
                out.add_term(e1.mul(e2, p), c);
            }
        }
        out
    }

    /// Substitutes `u = a`, `v = b`, `w = c`.
    pub fn evaluate(&self, a: &FpVector, b: &FpVector, c: &FpVector) -> Result<FpScalar> {
        for (name, vec) in [("a", a), ("b", b), ("c", c)] {
            if vec.dim() != self.n {
                return Err(Error::DimensionMismatch {
                    left: "polynomial".into(),
                    left_dim: self.n,
                    right: format!("point {name}"),
                    right_dim: vec.dim(),
                });
            }
            if vec.modulus() != self.modulus {
                return Err(Error::ModulusMismatch {
                    left: "polynomial".into(),
                    left_p: self.modulus.get(),
                    right: format!("point {name}"),
                    right_p: vec.modulus().get(),
                });
            }
        }
        let mut acc = self.modulus.zero();
        for (e, coeff) in self.terms() {
            acc = acc
                + coeff
                    * eval_monomial(e.u(), a)
                    * eval_monomial(e.v(), b)
                    * eval_monomial(e.w(), c);
        }
        Ok(acc)
    }
}

/// `1 - (u_l + v_l + w_l)^(p-1)` with `l` 1-based.
pub fn factor_expansion(p: PrimeModulus, n: usize, l: usize) -> Result<FpPolynomial> {
    if l == 0 || l > n {
        return Err(Error::InvalidInput(format!(
            "coordinate index {l} outside 1..={n}"
        )));
    }
    let top = p.get() as u16 - 1;
    let mut poly = FpPolynomial::constant(p, n, p.one());
    let mut exps = vec![0u16; 3 * n];
    for i in 0..=top {
        for j in 0..=top - i {
            let k = top - i - j;
            let coeff = multinomial(&[i as usize, j as usize, k as usize]) % p.get();
            let coeff = p.reduce(u64::try_from(coeff).expect("reduced below p"));
            exps[l - 1] = i;
            exps[n + l - 1] = j;
            exps[2 * n + l - 1] = k;
            poly.add_term(ExponentVector(exps.clone().into_boxed_slice()), -coeff);
        }
    }
    Ok(poly)
}

/// Upper bound on the number of terms in [`expand_f`]: each factor has
/// `1 + p(p+1)/2` terms.
pub fn estimated_terms(p: PrimeModulus, n: usize, limit: u64) -> Option<u64> {
    let p = p.get() as u64;
    checked_pow_within(1 + p * (p + 1) / 2, n as u64, limit)
}

fn product_tree(factors: &[FpPolynomial]) -> FpPolynomial {
    match factors {
        [single] => single.clone(),
        _ => {
            let (lo, hi) = factors.split_at(factors.len() / 2);
            let (l, r) = rayon::join(|| product_tree(lo), || product_tree(hi));
            l.mul(&r)
        }
    }
}

/// The fully expanded indicator product over all n coordinates.
pub fn expand_f(p: PrimeModulus, n: usize, budget: &Budget) -> Result<FpPolynomial> {
    let factors = indicator_factors(p, n, budget)?;
    Ok(product_tree(&factors))
}

/// The n factors of the indicator product, after the budget check.
pub fn indicator_factors(p: PrimeModulus, n: usize, budget: &Budget) -> Result<Vec<FpPolynomial>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if estimated_terms(p, n, budget.terms).is_none() {
        let per = 1 + p.get() as u64 * (p.get() as u64 + 1) / 2;
        return Err(Error::BudgetExceeded {
            what: "indicator expansion",
            needed: format!("{per}^{n} terms"),
            budget: budget.terms,
        });
    }
    (1..=n).map(|l| factor_expansion(p, n, l)).collect()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    u: Vec<u16>,
    v: Vec<u16>,
    w: Vec<u16>,
    coeff: u32,
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    p: PrimeModulus,
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for FpPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            p: self.modulus,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, &coeff)| TermJson {
                    u: e.u().to_vec(),
                    v: e.v().to_vec(),
                    w: e.w().to_vec(),
                    coeff,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FpPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PolynomialJson::deserialize(d)?;
        let p = raw.p;
        let mut poly = FpPolynomial::zero(p, raw.n);
        for t in raw.terms {
            if t.u.len() != raw.n {
                return Err(D::Error::custom(format!("term block length {} != n", t.u.len())));
            }
            if t.u.iter().chain(&t.v).chain(&t.w).any(|&e| e as u32 >= p.get()) {
                return Err(D::Error::custom("exponent exceeds p - 1"));
            }
            let e = ExponentVector::from_blocks(&t.u, &t.v, &t.w).map_err(D::Error::custom)?;
            poly.add_term(e, p.scalar(t.coeff as u64).map_err(D::Error::custom)?);
        }
        Ok(poly)
    }
}
