//! The monomial count N behind the `m <= 3N` bound.
//!
//! N counts monomials in n variables where every variable has degree at most
//! `p - 1` and the total degree is at most `(p - 1) n / 3`. It is computed as a
//! sum of multinomial coefficients over degree profiles `(n_0, ..., n_{p-1})`,
//! where `n_e` is the number of variables raised to the power `e`.
//! [`enumerate_monomials`] counts the same set by brute force and serves as an
//! independent check.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::{checked_pow_within, Budget};
use crate::error::{Error, Result};
use crate::field::PrimeModulus;

/// Largest admissible total degree, `floor((p - 1) n / 3)`.
pub fn degree_threshold(p: PrimeModulus, n: usize) -> u64 {
    (p.get() as u64 - 1) * n as u64 / 3
}

/// `3 * degree <= (p - 1) * n`, evaluated in integers.
#[inline]
pub fn within_threshold(p: PrimeModulus, n: usize, degree: u64) -> bool {
    3 * degree as u128 <= (p.get() as u128 - 1) * n as u128
}

/// How many of the n variables carry each exponent `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DegreeProfile(Vec<usize>);

impl DegreeProfile {
    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// `n_1 + 2 n_2 + ... + (p - 1) n_{p-1}`, the total degree of any monomial
    /// with this profile.
    pub fn weight(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(e, &c)| e as u64 * c as u64)
            .sum()
    }

    /// `n! / (n_0! ... n_{p-1}!)`, the number of monomials with this profile.
    pub fn multinomial(&self) -> BigUint {
        multinomial(&self.0)
    }
}

/// `C(n, k)` as a running product; each partial quotient is an integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(Σ parts)! / Π parts!`, built as a product of binomials.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let mut remaining: u64 = parts.iter().map(|&x| x as u64).sum();
    let mut acc = BigUint::one();
    for &k in parts {
        acc *= binomial(remaining, k as u64);
        remaining -= k as u64;
    }
    acc
}

/// Result of [`compute_n`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub p: u32,
    pub n: usize,
    #[serde(rename = "N", serialize_with = "crate::json::biguint_str")]
    pub n_value: BigUint,
    #[serde(rename = "threeN", serialize_with = "crate::json::biguint_str")]
    pub three_n: BigUint,
    pub profile_count: u64,
}

/// Visits every profile of `n` over `p` exponents whose weight is at most
/// `weight_cap`, in lexicographic order of the counts, together with its
/// multinomial coefficient.
fn walk_profiles<F: FnMut(&[usize], &BigUint)>(
    p: usize,
    weight_cap: Option<u64>,
    prefix: &mut Vec<usize>,
    remaining: usize,
    weight: u64,
    coeff: &BigUint,
    visit: &mut F,
) {
    let e = prefix.len();
    if e + 1 == p {
        // last exponent takes everything left
        let w = weight + e as u64 * remaining as u64;
        if weight_cap.is_none_or(|cap| w <= cap) {
            prefix.push(remaining);
            visit(prefix, coeff);
            prefix.pop();
        }
        return;
    }
    for take in 0..=remaining {
        let w = weight + e as u64 * take as u64;
        let rest = (remaining - take) as u64;
        // everything left goes to exponents > e, each adding at least e + 1
        if let Some(cap) = weight_cap {
            if w + (e as u64 + 1) * rest > cap {
                continue;
            }
        }
        let next = coeff * binomial(remaining as u64, take as u64);
        prefix.push(take);
        walk_profiles(p, weight_cap, prefix, remaining - take, w, &next, visit);
        prefix.pop();
    }
}

/// Sum of multinomial coefficients and number of profiles with weight at
/// most `weight_cap` (all profiles when `None`). Parallel over `n_0`.
pub fn sum_over_profiles(p: PrimeModulus, n: usize, weight_cap: Option<u64>) -> (BigUint, u64) {
    let pu = p.get() as usize;
    let partials: Vec<(BigUint, u64)> = (0..=n)
        .into_par_iter()
        .map(|n0| {
            let mut sum = BigUint::zero();
            let mut count = 0u64;
            let rest = n - n0;
            if let Some(cap) = weight_cap {
                if rest as u64 > cap {
                    return (sum, count);
                }
            }
            let coeff = binomial(n as u64, n0 as u64);
            let mut prefix = vec![n0];
            let mut visit = |_: &[usize], c: &BigUint| {
                sum += c;
                count += 1;
            };
            walk_profiles(pu, weight_cap, &mut prefix, rest, 0, &coeff, &mut visit);
            (sum, count)
        })
        .collect();
    partials
        .into_iter()
        .fold((BigUint::zero(), 0), |(s, c), (ps, pc)| (s + ps, c + pc))
}

/// Admissible degree profiles in lexicographic order.
pub fn admissible_profiles(p: PrimeModulus, n: usize) -> Vec<DegreeProfile> {
    let mut out = Vec::new();
    let cap = degree_threshold(p, n);
    let mut prefix = Vec::new();
    let mut visit = |profile: &[usize], _: &BigUint| out.push(DegreeProfile(profile.to_vec()));
    walk_profiles(
        p.get() as usize,
        Some(cap),
        &mut prefix,
        n,
        0,
        &BigUint::one(),
        &mut visit,
    );
    out
}

/// Computes N and 3N exactly.
pub fn compute_n(p: PrimeModulus, n: usize) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let (n_value, profile_count) = sum_over_profiles(p, n, Some(degree_threshold(p, n)));
    Ok(BoundReport {
        p: p.get(),
        n,
        three_n: &n_value * 3u32,
        n_value,
        profile_count,
    })
}

/// Counts exponent tuples in `{0..p-1}^n` with sum at most the threshold by
/// walking all `p^n` of them.
pub fn enumerate_monomials(p: PrimeModulus, n: usize, budget: &Budget) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let pu = p.get() as u64;
    if checked_pow_within(pu, n as u64, budget.enumeration).is_none() {
        return Err(Error::BudgetExceeded {
            what: "monomial enumeration",
            needed: format!("{pu}^{n} tuples"),
            budget: budget.enumeration,
        });
    }
    let cap = degree_threshold(p, n);
    let top = p.get() - 1;
    let mut digits = vec![0u32; n];
    let mut sum = 0u64;
    let mut count = 0u64;
    loop {
        if sum <= cap {
            count += 1;
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(BigUint::from(count));
            }
            if digits[i] < top {
                digits[i] += 1;
                sum += 1;
                break;
            }
            sum -= top as u64;
            digits[i] = 0;
            i += 1;
        }
    }
}

/// One row of [`growth_sequence`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    #[serde(rename = "N", serialize_with = "crate::json::biguint_str")]
    pub n_value: BigUint,
    /// `N^(1/n)`, approximate.
    #[serde(rename = "approxRoot", serialize_with = "crate::json::f64_12")]
    pub approx_root: f64,
}

/// Natural log of a big integer, accurate to f64 precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact N for `n = 1..=n_max` together with the approximate n-th root.
pub fn growth_sequence(p: PrimeModulus, n_max: usize) -> Result<Vec<GrowthRow>> {
    (1..=n_max)
        .map(|n| {
            let report = compute_n(p, n)?;
            let approx_root = (ln_biguint(&report.n_value) / n as f64).exp();
            Ok(GrowthRow {
                n,
                n_value: report.n_value,
                approx_root,
            })
        })
        .collect()
}
