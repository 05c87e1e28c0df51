//! Property tests against brute-force oracles.

use proptest::prelude::*;
use slicerank::decompose::decompose;
use slicerank::field::{FpVector, PrimeModulus};
use slicerank::poly::expand_f;
use slicerank::sumfree::{find_violation, TripleSystem};
use slicerank::tensor::{rank_mod_p, FpTensor};
use slicerank::Budget;

/// Lexicographically first `(i, j, k)` with a zero cross-sum that breaks
/// `i <= j <= k`, by scanning all triples of indices.
fn naive_violation(sys: &TripleSystem) -> Option<[usize; 3]> {
    let t = sys.triples();
    let m = t.len();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let zero = t[i].a.add(&t[j].b).unwrap().add(&t[k].c).unwrap().is_zero();
                if zero && !(i <= j && j <= k) {
                    return Some([i + 1, j + 1, k + 1]);
                }
            }
        }
    }
    None
}

fn system_strategy() -> impl Strategy<Value = TripleSystem> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3)
        .prop_flat_map(|(p, n)| {
            let coord = 0..p as u32;
            let vec = prop::collection::vec(coord, n);
            (Just(p), Just(n), prop::collection::vec((vec.clone(), vec), 0..=12))
        })
        .prop_map(|(p, n, pairs)| {
            let m = PrimeModulus::new(p).unwrap();
            TripleSystem::from_pairs(
                m,
                n,
                pairs
                    .into_iter()
                    .map(|(a, b)| (FpVector::new(m, a).unwrap(), FpVector::new(m, b).unwrap())),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verifier_matches_naive_scan(sys in system_strategy()) {
        prop_assert_eq!(find_violation(&sys), naive_violation(&sys));
    }

    #[test]
    fn decomposition_reproduces_indicator(sys in system_strategy()) {
        let out = decompose(&sys, &Budget::default()).unwrap();
        prop_assert!(out.pointwise_verified);
        prop_assert!(num_bigint::BigUint::from(out.slice_count) <= out.bound_3n);
    }

    #[test]
    fn indicator_polynomial_at_random_points(
        coords in prop::collection::vec(0u32..5, 9),
    ) {
        let m = PrimeModulus::new(5).unwrap();
        let f = expand_f(m, 3, &Budget::default()).unwrap();
        let a = FpVector::new(m, coords[0..3].to_vec()).unwrap();
        let b = FpVector::new(m, coords[3..6].to_vec()).unwrap();
        let c = FpVector::new(m, coords[6..9].to_vec()).unwrap();
        let expected = u32::from(a.add(&b).unwrap().add(&c).unwrap().is_zero());
        prop_assert_eq!(f.evaluate(&a, &b, &c).unwrap().value(), expected);
    }

    #[test]
    fn rank_invariant_under_row_operations(
        rows in prop::collection::vec(prop::collection::vec(0u32..7, 4), 4),
        scale in 1u32..7,
        from in 0usize..4,
        to in 0usize..4,
    ) {
        let p = PrimeModulus::new(7).unwrap();
        let base = rank_mod_p(&rows, p);
        let mut moved = rows.clone();
        if from != to {
            for col in 0..4 {
                moved[to][col] = (moved[to][col] + scale * rows[from][col]) % 7;
            }
        }
        moved.swap(0, 3);
        prop_assert_eq!(rank_mod_p(&moved, p), base);
        let t = FpTensor::from_rows(p, &rows).unwrap();
        let transposed: Vec<Vec<u32>> =
            (0..4).map(|j| (0..4).map(|i| rows[i][j]).collect()).collect();
        prop_assert_eq!(slicerank::tensor::matrix_rank(&t).unwrap(), rank_mod_p(&transposed, p));
    }
}
