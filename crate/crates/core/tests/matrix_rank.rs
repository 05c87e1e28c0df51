//! For k = 2 a slice is an outer product h(x) g(y), so slice rank is matrix
//! rank. Both are checked against independent brute-force oracles.

use std::collections::HashSet;

use slicerank::field::PrimeModulus;
use slicerank::tensor::{matrix_rank, FpTensor};

fn det(m: &[Vec<i64>], p: i64) -> i64 {
    if m.len() == 1 {
        return m[0][0].rem_euclid(p);
    }
    (0..m.len())
        .map(|col| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &v)| v).collect())
                .collect();
            let sign = if col % 2 == 0 { 1 } else { -1 };
            sign * m[0][col] * det(&minor, p)
        })
        .sum::<i64>()
        .rem_euclid(p)
}

fn minor_rank(rows: &[Vec<u32>], p: u32) -> usize {
    let n = rows.len();
    let subsets = |r: usize| -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == r)
            .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
            .collect()
    };
    (1..=n)
        .rev()
        .find(|&r| {
            subsets(r).iter().any(|rs| {
                subsets(r).iter().any(|cs| {
                    let sub: Vec<Vec<i64>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| i64::from(rows[i][j])).collect()).collect();
                    det(&sub, i64::from(p)) != 0
                })
            })
        })
        .unwrap_or(0)
}

fn all_matrices(p: u32, n: usize) -> impl Iterator<Item = Vec<Vec<u32>>> {
    let count = p.pow((n * n) as u32);
    (0..count).map(move |mut code| {
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let v = code % p;
                        code /= p;
                        v
                    })
                    .collect()
            })
            .collect()
    })
}

#[test]
fn matches_minor_expansion_exhaustively() {
    for p in [2u32, 3] {
        let modulus = PrimeModulus::new(u64::from(p)).unwrap();
        for n in [2, 3] {
            for rows in all_matrices(p, n) {
                let t = FpTensor::from_rows(modulus, &rows).unwrap();
                assert_eq!(matrix_rank(&t).unwrap(), minor_rank(&rows, p), "p={p} {rows:?}");
            }
        }
    }
}

/// Least number of outer products summing to each 2x2 matrix, by closing the
/// set of outer products under addition.
fn outer_product_ranks(p: u32) -> Vec<usize> {
    let encode = |m: [u32; 4]| m.iter().fold(0usize, |acc, &v| acc * p as usize + v as usize);
    let size = (p as usize).pow(4);
    let mut ones = HashSet::new();
    for h in 0..p * p {
        for g in 0..p * p {
            let (h0, h1, g0, g1) = (h / p, h % p, g / p, g % p);
            ones.insert(encode([h0 * g0 % p, h0 * g1 % p, h1 * g0 % p, h1 * g1 % p]));
        }
    }
    let decode = |mut c: usize| {
        let mut m = [0u32; 4];
        for v in m.iter_mut().rev() {
            *v = (c % p as usize) as u32;
            c /= p as usize;
        }
        m
    };
    let mut rank = vec![usize::MAX; size];
    rank[0] = 0;
    let mut frontier = vec![0usize];
    let mut r = 0;
    while !frontier.is_empty() {
        r += 1;
        let mut next = Vec::new();
        for &f in &frontier {
            for &o in &ones {
                let (a, b) = (decode(f), decode(o));
                let s = encode([0, 1, 2, 3].map(|i| (a[i] + b[i]) % p));
                if rank[s] == usize::MAX {
                    rank[s] = r;
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    rank
}

#[test]
fn slice_rank_equals_matrix_rank_for_k2() {
    for p in [2u32, 3] {
        let modulus = PrimeModulus::new(u64::from(p)).unwrap();
        let ranks = outer_product_ranks(p);
        for rows in all_matrices(p, 2) {
            let code = rows.iter().flatten().fold(0usize, |acc, &v| acc * p as usize + v as usize);
            let t = FpTensor::from_rows(modulus, &rows).unwrap();
            assert_eq!(matrix_rank(&t).unwrap(), ranks[code], "p={p} {rows:?}");
        }
    }
}
