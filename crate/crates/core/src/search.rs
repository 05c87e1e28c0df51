//! Searches for large tricolored ordered sum-free sets.
//!
//! Vectors are handled as base-p codes in `0..p^n`. A candidate triple is a
//! pair `(a, b)` with `c = -(a + b)`, and candidates are ordered
//! lexicographically by `(a, b)`.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bound::compute_n;
use crate::budget::{checked_pow_within, Budget};
use crate::error::{Error, Result};
use crate::field::{FpVector, PrimeModulus};
use crate::sumfree::TripleSystem;

/// Largest `p^(2n)` for which the pair table is built.
pub const MAX_PAIRS: u64 = 1 << 26;
const MAX_CODES: u64 = 1 << 13;

/// Precomputed arithmetic on vector codes.
struct CodeSpace {
    modulus: PrimeModulus,
    n: usize,
    size: usize,
    /// `neg_sum[x * size + y]` is the code of `-(x + y)`.
    neg_sum: Vec<u32>,
}

impl CodeSpace {
    fn new(modulus: PrimeModulus, n: usize) -> Result<Self> {
        let p = modulus.get() as u64;
        let size = checked_pow_within(p, n as u64, MAX_CODES)
            .filter(|&s| s * s <= MAX_PAIRS)
            .ok_or(Error::BudgetExceeded {
                what: "candidate triple table",
                needed: format!("{p}^{} pairs", 2 * n),
                budget: MAX_PAIRS,
            })? as usize;
        let vectors: Vec<FpVector> = (0..size as u64)
            .map(|c| FpVector::from_code(modulus, n, c))
            .collect();
        let mut neg_sum = vec![0u32; size * size];
        for (x, vx) in vectors.iter().enumerate() {
            for (y, vy) in vectors.iter().enumerate() {
                neg_sum[x * size + y] = vx.add_unchecked(vy).neg().code() as u32;
            }
        }
        Ok(CodeSpace {
            modulus,
            n,
            size,
            neg_sum,
        })
    }

    #[inline]
    fn neg_sum(&self, x: u32, y: u32) -> u32 {
        self.neg_sum[x as usize * self.size + y as usize]
    }

    fn candidates(&self) -> Vec<(u32, u32)> {
        let s = self.size as u32;
        (0..s).flat_map(|a| (0..s).map(move |b| (a, b))).collect()
    }

    fn to_system(&self, triples: &[(u32, u32, u32)]) -> TripleSystem {
        let v = |c: u32| FpVector::from_code(self.modulus, self.n, c as u64);
        TripleSystem::from_pairs(self.modulus, self.n, triples.iter().map(|&(a, b, _)| (v(a), v(b))))
            .expect("codes decode to zero-sum triples")
    }
}

/// A valid system under construction with O(m) append checks.
///
/// In a valid system the `a`, `b` and `c` values are pairwise distinct (a
/// repeat always produces a cross-sum that breaks the ordering), so one
/// position per value is enough.
struct Incremental<'s> {
    space: &'s CodeSpace,
    triples: Vec<(u32, u32, u32)>,
    a_pos: Vec<Option<usize>>,
    c_pos: Vec<Option<usize>>,
}

impl<'s> Incremental<'s> {
    fn new(space: &'s CodeSpace) -> Self {
        Incremental {
            space,
            triples: Vec::new(),
            a_pos: vec![None; space.size],
            c_pos: vec![None; space.size],
        }
    }

    /// Whether appending `(a, b, c)` at index `t = m` keeps the ordering
    /// condition. Only sums involving index t are new.
    fn can_push(&self, a: u32, b: u32, c: u32) -> bool {
        let s = self.space;
        // c_t must not repeat an earlier c (covers i = j = t, k < t)
        if self.c_pos[c as usize].is_some() {
            return false;
        }
        for (j, &(_, bj, _)) in self.triples.iter().enumerate() {
            // i = t, j < t: no k at all may complete a_t + b_j
            let need_c = s.neg_sum(a, bj);
            if need_c == c || self.c_pos[need_c as usize].is_some() {
                return false;
            }
            // k = t, i, j < t: needs i <= j
            let need_a = s.neg_sum(bj, c);
            if let Some(i) = self.a_pos[need_a as usize] {
                if i > j {
                    return false;
                }
            }
        }
        // j = t, i < t: only k = t allowed
        for &(ai, _, _) in &self.triples {
            if self.c_pos[s.neg_sum(ai, b) as usize].is_some() {
                return false;
            }
        }
        true
    }

    fn push(&mut self, a: u32, b: u32, c: u32) {
        let t = self.triples.len();
        self.a_pos[a as usize] = Some(t);
        self.c_pos[c as usize] = Some(t);
        self.triples.push((a, b, c));
    }

    fn pop(&mut self) {
        if let Some((a, _, c)) = self.triples.pop() {
            self.a_pos[a as usize] = None;
            self.c_pos[c as usize] = None;
        }
    }
}

/// Outcome of a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOutcome {
    pub m: usize,
    pub witness: TripleSystem,
    /// False when the node budget ran out before the tree was exhausted.
    pub complete: bool,
    pub nodes: u64,
    #[serde(rename = "bound3N", serialize_with = "crate::json::biguint_str")]
    pub bound_3n: BigUint,
}

struct Dfs<'s> {
    state: Incremental<'s>,
    candidates: &'s [(u32, u32)],
    cap: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<(u32, u32, u32)>,
}

impl Dfs<'_> {
    /// Returns false to abort the whole search.
    fn run(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return false;
        }
        if self.state.triples.len() > self.best.len() {
            self.best = self.state.triples.clone();
        }
        if self.best.len() >= self.cap {
            return false;
        }
        for &(a, b) in self.candidates {
            let c = self.state.space.neg_sum(a, b);
            if self.state.can_push(a, b, c) {
                self.state.push(a, b, c);
                let go_on = self.run();
                self.state.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

type Branch = (Vec<(u32, u32, u32)>, u64, bool);

/// Depth-first search over ordered sequences of zero-sum triples, keeping
/// only prefixes that satisfy the ordering condition.
///
/// The work is split by first triple; each branch gets an equal share of
/// `budget.nodes`. The answer is the longest sequence found, ties going to
/// the lexicographically first branch, so it does not depend on scheduling.
/// `m_cap` stops a branch once it reaches that length.
pub fn search_exhaustive(
    p: PrimeModulus,
    n: usize,
    m_cap: Option<usize>,
    budget: &Budget,
) -> Result<SearchOutcome> {
    let space = CodeSpace::new(p, n)?;
    let candidates = space.candidates();
    let cap = m_cap.unwrap_or(usize::MAX);
    let share = (budget.nodes / candidates.len() as u64).max(1);

    // (best sequence, nodes used, budget exhausted) per branch
    let branches: Vec<Branch> = if cap == 0 {
        vec![(Vec::new(), 1, false)]
    } else {
        candidates
            .par_iter()
            .map(|&(a, b)| {
                let mut dfs = Dfs {
                    state: Incremental::new(&space),
                    candidates: &candidates,
                    cap,
                    budget: share,
                    nodes: 0,
                    exhausted: false,
                    best: Vec::new(),
                };
                let c = space.neg_sum(a, b);
                dfs.state.push(a, b, c);
                dfs.run();
                (dfs.best, dfs.nodes.min(share), dfs.exhausted)
            })
            .collect()
    };

    let mut best: &[(u32, u32, u32)] = &[];
    let mut nodes = 0;
    let mut complete = true;
    for (seq, used, exhausted) in &branches {
        nodes += used;
        complete &= !exhausted;
        if seq.len() > best.len() {
            best = seq;
        }
    }
    let witness = space.to_system(best);
    Ok(SearchOutcome {
        m: witness.m(),
        witness,
        complete,
        nodes,
        bound_3n: compute_n(p, n)?.three_n,
    })
}

/// Appends candidates in a seeded shuffled order whenever the system stays
/// valid.
pub fn search_greedy(p: PrimeModulus, n: usize, seed: u64) -> Result<TripleSystem> {
    let space = CodeSpace::new(p, n)?;
    let mut candidates = space.candidates();
    candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut state = Incremental::new(&space);
    for (a, b) in candidates {
        let c = space.neg_sum(a, b);
        if state.can_push(a, b, c) {
            state.push(a, b, c);
        }
    }
    Ok(space.to_system(&state.triples))
}
