//! Explicit slice decomposition of a system's indicator tensor.
//!
//! For a system with `m` triples, `A = {1..m}` and
//! `f(x, y, z) = [a_x + b_y + c_z = 0]`, which is the indicator polynomial
//! evaluated at `(a_x, b_y, c_z)`. Every monomial of that polynomial has
//! total degree at most `(p - 1) n`, so at least one of its three blocks has
//! degree at most `d = floor((p - 1) n / 3)`. Monomials go to the first such
//! block in the order u, v, w. Within a block, monomials sharing the same
//! low-degree part form one slice: `h` is that part evaluated on the block's
//! own point and `g` is the sum of the remaining parts. The number of
//! possible low-degree parts per block is exactly N, so there are at most 3N
//! slices.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bound::{compute_n, within_threshold};
use crate::budget::{checked_pow_within, Budget};
use crate::error::{Error, Result};
use crate::field::{FpScalar, FpVector, PrimeModulus};
use crate::poly::{eval_monomial, expand_f, Block, ExponentVector};
use crate::sumfree::TripleSystem;
use crate::tensor::{FpTensor, Slice, SliceDecomposition};

type Term<'a> = (&'a ExponentVector, FpScalar);

/// Result of [`decompose`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecomposeOutcome {
    /// Number of monomial groups, one slice each.
    pub slice_count: usize,
    /// Groups per block `[u, v, w]`.
    pub block_counts: [usize; 3],
    #[serde(rename = "bound3N", serialize_with = "crate::json::biguint_str")]
    pub bound_3n: BigUint,
    /// The emitted slices sum to the indicator tensor at every point of `A^3`.
    pub pointwise_verified: bool,
    /// The decomposition with slices that vanish on `A` removed.
    #[serde(skip)]
    pub decomposition: SliceDecomposition,
}

impl DecomposeOutcome {
    /// Slices that are not identically zero on `A`.
    pub fn nonvanishing_count(&self) -> usize {
        self.decomposition.slices.len()
    }
}

/// `[a_x + b_y + c_z = 0]` built directly from the vectors.
pub fn indicator_tensor(system: &TripleSystem, budget: &Budget) -> Result<FpTensor> {
    let m = system.m();
    check_domain(m, budget)?;
    let p = system.modulus();
    let t = system.triples();
    FpTensor::from_fn(p, 3, m, |i| {
        let s = t[i[0]].a.add_unchecked(&t[i[1]].b).add_unchecked(&t[i[2]].c);
        if s.is_zero() {
            p.one()
        } else {
            p.zero()
        }
    })
}

fn check_domain(m: usize, budget: &Budget) -> Result<()> {
    if checked_pow_within(m as u64, 3, budget.terms).is_none() {
        return Err(Error::BudgetExceeded {
            what: "indicator tensor",
            needed: format!("{m}^3 entries"),
            budget: budget.terms,
        });
    }
    Ok(())
}

/// Block a monomial is collected into: the first block whose degree is within
/// the threshold.
pub fn assign_block(p: PrimeModulus, n: usize, e: &ExponentVector) -> Option<Block> {
    Block::ALL
        .into_iter()
        .find(|&b| within_threshold(p, n, e.block_degree(b)))
}

fn block_points(system: &TripleSystem, b: Block) -> Vec<&FpVector> {
    system
        .triples()
        .iter()
        .map(|t| match b {
            Block::U => &t.a,
            Block::V => &t.b,
            Block::W => &t.c,
        })
        .collect()
}

/// Builds the slice decomposition and checks it against the indicator tensor.
pub fn decompose(system: &TripleSystem, budget: &Budget) -> Result<DecomposeOutcome> {
    let p = system.modulus();
    let n = system.n();
    let m = system.m();
    let bound_3n = compute_n(p, n)?.three_n;
    let target = indicator_tensor(system, budget)?;

    if m == 0 {
        return Ok(DecomposeOutcome {
            slice_count: 0,
            block_counts: [0; 3],
            bound_3n,
            pointwise_verified: target.is_zero(),
            decomposition: SliceDecomposition {
                slices: Vec::new(),
                target,
            },
        });
    }

    let f = expand_f(p, n, budget)?;
    let mut groups: BTreeMap<(Block, Vec<u16>), Vec<Term<'_>>> = BTreeMap::new();
    for (e, coeff) in f.terms() {
        let block = assign_block(p, n, e).ok_or_else(|| {
            Error::Invariant(format!("monomial {e:?} has every block above the threshold"))
        })?;
        groups
            .entry((block, e.block(block).to_vec()))
            .or_default()
            .push((e, coeff));
    }

    let points = [
        block_points(system, Block::U),
        block_points(system, Block::V),
        block_points(system, Block::W),
    ];
    let mut block_counts = [0usize; 3];
    let mut slices = Vec::with_capacity(groups.len());
    for ((block, low), terms) in &groups {
        block_counts[block.index()] += 1;
        let own = &points[block.index()];
        let h: Vec<u32> = own.iter().map(|pt| eval_monomial(low, pt).value()).collect();

        // g runs over the other two blocks in order
        let others: Vec<Block> = Block::ALL.into_iter().filter(|b| b != block).collect();
        let (first, second) = (&points[others[0].index()], &points[others[1].index()]);
        let mut g = vec![p.zero(); m * m];
        for (e, coeff) in terms {
            let left: Vec<FpScalar> = first.iter().map(|pt| eval_monomial(e.block(others[0]), pt)).collect();
            let right: Vec<FpScalar> = second.iter().map(|pt| eval_monomial(e.block(others[1]), pt)).collect();
            for (x, &lx) in left.iter().enumerate() {
                if lx.is_zero() {
                    continue;
                }
                let lc = lx * *coeff;
                for (y, &ry) in right.iter().enumerate() {
                    g[x * m + y] = g[x * m + y] + lc * ry;
                }
            }
        }
        let slice = Slice {
            axis: block.index() + 1,
            h,
            g: g.into_iter().map(FpScalar::value).collect(),
        };
        if slice.is_nonvanishing() {
            slices.push(slice);
        }
    }

    let decomposition = SliceDecomposition { slices, target };
    Ok(DecomposeOutcome {
        slice_count: groups.len(),
        block_counts,
        bound_3n,
        pointwise_verified: decomposition.reproduces_target(),
        decomposition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::expand_f;
    use crate::search::{search_exhaustive, search_greedy};

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn single_zero_triple(p: u64, n: usize) -> TripleSystem {
        let m = fp(p);
        let z = FpVector::zero(m, n);
        TripleSystem::from_pairs(m, n, [(z.clone(), z)]).unwrap()
    }

    #[test]
    fn single_triple_f2() {
        let out = decompose(&single_zero_triple(2, 1), &Budget::default()).unwrap();
        // u-block {1, v, w}, v-block {u}
        assert_eq!(out.slice_count, 2);
        assert_eq!(out.block_counts, [1, 1, 0]);
        assert_eq!(out.bound_3n, BigUint::from(3u32));
        assert!(out.pointwise_verified);
        // g of the v-block slice is a_x = 0 on this domain
        assert_eq!(out.nonvanishing_count(), 1);
    }

    #[test]
    fn empty_system() {
        let sys = TripleSystem::empty(fp(3), 2).unwrap();
        let out = decompose(&sys, &Budget::default()).unwrap();
        assert_eq!(out.slice_count, 0);
        assert!(out.pointwise_verified);
    }

    #[test]
    fn partition_is_total() {
        for (p, n) in [(2u64, 1usize), (2, 3), (3, 2), (5, 2), (7, 1)] {
            let f = expand_f(fp(p), n, &Budget::default()).unwrap();
            for (e, _) in f.terms() {
                assert!(assign_block(fp(p), n, e).is_some(), "{e:?}");
            }
        }
    }

    #[test]
    fn group_count_never_exceeds_3n() {
        // distinct low parts per block are monomials counted by N
        for (p, n) in [(2u64, 2usize), (3, 2), (3, 3), (5, 2)] {
            let sys = search_greedy(fp(p), n, 1).unwrap();
            let out = decompose(&sys, &Budget::default()).unwrap();
            let n_value = compute_n(fp(p), n).unwrap().n_value;
            for count in out.block_counts {
                assert!(BigUint::from(count) <= n_value);
            }
            assert!(out.pointwise_verified, "p={p} n={n}");
        }
    }

    #[test]
    fn witnesses_decompose() {
        for (p, n) in [(2u64, 1usize), (2, 2), (3, 1)] {
            let w = search_exhaustive(fp(p), n, None, &Budget::default()).unwrap().witness;
            let out = decompose(&w, &Budget::default()).unwrap();
            assert!(out.pointwise_verified);
            assert!(BigUint::from(out.slice_count) <= out.bound_3n);
        }
    }

    #[test]
    fn invalid_systems_still_decompose() {
        // the decomposition does not rely on the ordering condition
        let m = fp(3);
        let v = |c: u32| FpVector::new(m, vec![c]).unwrap();
        let sys = TripleSystem::from_pairs(m, 1, [(v(0), v(0)), (v(0), v(0)), (v(1), v(2))]).unwrap();
        let out = decompose(&sys, &Budget::default()).unwrap();
        assert!(out.pointwise_verified);
    }

    #[test]
    fn tensor_budget() {
        let b = Budget {
            terms: 7,
            ..Budget::default()
        };
        let sys = search_greedy(fp(3), 1, 0).unwrap();
        assert!(sys.m() >= 2);
        assert!(matches!(decompose(&sys, &b), Err(Error::BudgetExceeded { .. })));
    }
}
