//! Tricolored ordered sum-free sets in F_p^n.
//!
//! A system `(a_i, b_i, c_i)`, `i = 1..m`, qualifies when every triple sums
//! to zero and any zero cross-sum `a_i + b_j + c_k = 0` has `i <= j <= k`.
//! Indices in reports are 1-based.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::bound::compute_n;
use crate::error::{Error, Result};
use crate::field::{FpVector, PrimeModulus};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub a: FpVector,
    pub b: FpVector,
    pub c: FpVector,
}

/// An indexed collection of zero-sum triples sharing one modulus and
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    modulus: PrimeModulus,
    n: usize,
    triples: Vec<Triple>,
}

impl TripleSystem {
    pub fn empty(modulus: PrimeModulus, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        Ok(TripleSystem {
            modulus,
            n,
            triples: Vec::new(),
        })
    }

    pub fn new(modulus: PrimeModulus, n: usize, triples: Vec<Triple>) -> Result<Self> {
        let mut sys = Self::empty(modulus, n)?;
        for t in triples {
            sys.push(t)?;
        }
        Ok(sys)
    }

    /// Builds triples from `(a, b)` pairs with `c = -(a + b)`.
    pub fn from_pairs(
        modulus: PrimeModulus,
        n: usize,
        pairs: impl IntoIterator<Item = (FpVector, FpVector)>,
    ) -> Result<Self> {
        let mut sys = Self::empty(modulus, n)?;
        for (a, b) in pairs {
            let c = a.add(&b)?.neg();
            sys.push(Triple { a, b, c })?;
        }
        Ok(sys)
    }

    /// Appends a triple after checking shape and `a + b + c = 0`.
    pub fn push(&mut self, t: Triple) -> Result<()> {
        let index = self.triples.len() + 1;
        for (name, v) in [("a", &t.a), ("b", &t.b), ("c", &t.c)] {
            if v.modulus() != self.modulus {
                return Err(Error::ModulusMismatch {
                    left: "system".into(),
                    left_p: self.modulus.get(),
                    right: format!("{name}_{index}"),
                    right_p: v.modulus().get(),
                });
            }
            if v.dim() != self.n {
                return Err(Error::DimensionMismatch {
                    left: "system".into(),
                    left_dim: self.n,
                    right: format!("{name}_{index}"),
                    right_dim: v.dim(),
                });
            }
        }
        if !t.a.add_unchecked(&t.b).add_unchecked(&t.c).is_zero() {
            return Err(Error::NotZeroSum { index });
        }
        self.triples.push(t);
        Ok(())
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.triples.len()
    }

    #[inline]
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }
}

#[derive(Serialize, Deserialize)]
struct TripleJson {
    a: Vec<u32>,
    b: Vec<u32>,
    c: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    p: PrimeModulus,
    n: usize,
    triples: Vec<TripleJson>,
}

impl Serialize for TripleSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemJson {
            p: self.modulus,
            n: self.n,
            triples: self
                .triples
                .iter()
                .map(|t| TripleJson {
                    a: t.a.coords().to_vec(),
                    b: t.b.coords().to_vec(),
                    c: t.c.coords().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TripleSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SystemJson::deserialize(d)?;
        let p = raw.p;
        let mut sys = TripleSystem::empty(p, raw.n).map_err(D::Error::custom)?;
        for t in raw.triples {
            let vec = |c: Vec<u32>| FpVector::new(p, c).map_err(D::Error::custom);
            sys.push(Triple {
                a: vec(t.a)?,
                b: vec(t.b)?,
                c: vec(t.c)?,
            })
            .map_err(D::Error::custom)?;
        }
        Ok(sys)
    }
}

/// Result of [`verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub valid: bool,
    /// Lexicographically smallest `(i, j, k)` with a zero cross-sum and not
    /// `i <= j <= k`.
    pub violation: Option<[usize; 3]>,
    pub m: usize,
    #[serde(rename = "bound3N", serialize_with = "crate::json::biguint_str")]
    pub bound_3n: BigUint,
    /// `3N - m`.
    #[serde(serialize_with = "crate::json::bigint_str")]
    pub slack: BigInt,
}

/// Finds the smallest violation of the ordering condition, 1-based.
///
/// Uses a map from each `c` value to its sorted index list, so the scan is
/// `O(m^2 n)` expected.
pub fn find_violation(system: &TripleSystem) -> Option<[usize; 3]> {
    let mut by_c: HashMap<&[u32], Vec<usize>> = HashMap::new();
    for (k, t) in system.triples.iter().enumerate() {
        by_c.entry(t.c.coords()).or_default().push(k);
    }
    for (i, ti) in system.triples.iter().enumerate() {
        for (j, tj) in system.triples.iter().enumerate() {
            let need = ti.a.add_unchecked(&tj.b).neg();
            let Some(ks) = by_c.get(need.coords()) else {
                continue;
            };
            // ks is sorted and nonempty; its minimum is the smallest bad k
            let k = ks[0];
            if i > j || k < j {
                return Some([i + 1, j + 1, k + 1]);
            }
        }
    }
    None
}

/// Checks the ordering condition and compares `m` with `3N`.
pub fn verify(system: &TripleSystem) -> VerificationReport {
    let violation = find_violation(system);
    let bound_3n = compute_n(system.modulus, system.n)
        .expect("system dimension is at least 1")
        .three_n;
    let m = system.m();
    VerificationReport {
        valid: violation.is_none(),
        violation,
        m,
        slack: BigInt::from(bound_3n.clone()) - BigInt::from(m),
        bound_3n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn sys(p: u64, pairs: &[(&[u32], &[u32])]) -> TripleSystem {
        let m = fp(p);
        let n = pairs.first().map_or(1, |(a, _)| a.len());
        TripleSystem::from_pairs(
            m,
            n,
            pairs.iter().map(|(a, b)| {
                (
                    FpVector::new(m, a.to_vec()).unwrap(),
                    FpVector::new(m, b.to_vec()).unwrap(),
                )
            }),
        )
        .unwrap()
    }

    #[test]
    fn single_triple_is_valid() {
        let r = verify(&sys(2, &[(&[0], &[0])]));
        assert!(r.valid);
        assert_eq!(r.m, 1);
        assert_eq!(r.bound_3n, BigUint::from(3u32));
        assert_eq!(r.slack, BigInt::from(2));
    }

    #[test]
    fn two_triples_in_f2() {
        // (0,0,0), (0,1,1): a_2 + b_1 + c_1 = 0 with 2 > 1
        let r = verify(&sys(2, &[(&[0], &[0]), (&[0], &[1])]));
        assert!(!r.valid);
        assert_eq!(r.violation, Some([2, 1, 1]));
    }

    #[test]
    fn sum_free_set_is_ordered_sum_free() {
        // a_i + b_j + c_k = 0 only for i = j = k
        let s = sys(3, &[(&[1, 0], &[0, 0]), (&[0, 1], &[1, 1])]);
        for (i, ti) in s.triples().iter().enumerate() {
            for (j, tj) in s.triples().iter().enumerate() {
                for (k, tk) in s.triples().iter().enumerate() {
                    let zero = ti.a.add(&tj.b).unwrap().add(&tk.c).unwrap().is_zero();
                    assert_eq!(zero, i == j && j == k);
                }
            }
        }
        assert!(verify(&s).valid);
    }

    #[test]
    fn repeated_b_value_violates() {
        let r = verify(&sys(3, &[(&[1, 0], &[0, 0]), (&[0, 1], &[0, 0])]));
        assert_eq!(r.violation, Some([1, 2, 1]));
    }

    #[test]
    fn duplicates_always_flagged() {
        let r = verify(&sys(5, &[(&[1, 2], &[3, 4]), (&[0, 0], &[1, 1]), (&[1, 2], &[3, 4])]));
        assert!(!r.valid);
    }

    #[test]
    fn zero_sum_enforced() {
        let m = fp(3);
        let v = |c: u32| FpVector::new(m, vec![c]).unwrap();
        let err = TripleSystem::new(m, 1, vec![Triple { a: v(1), b: v(1), c: v(0) }]).unwrap_err();
        assert_eq!(err, Error::NotZeroSum { index: 1 });
        let bad = r#"{"p":3,"n":1,"triples":[{"a":[1],"b":[1],"c":[0]}]}"#;
        assert!(serde_json::from_str::<TripleSystem>(bad).is_err());
    }

    #[test]
    fn shape_enforced() {
        let m = fp(3);
        let err = TripleSystem::new(
            m,
            2,
            vec![Triple {
                a: FpVector::zero(m, 1),
                b: FpVector::zero(m, 1),
                c: FpVector::zero(m, 1),
            }],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn json_round_trip() {
        let s = sys(3, &[(&[1, 0], &[0, 0]), (&[0, 1], &[1, 1])]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"p":3,"n":2,"triples":[{"a":[1,0],"b":[0,0],"c":[2,0]},{"a":[0,1],"b":[1,1],"c":[2,1]}]}"#
        );
        assert_eq!(serde_json::from_str::<TripleSystem>(&text).unwrap(), s);
    }

    #[test]
    fn report_json() {
        let r = verify(&sys(2, &[(&[0], &[0]), (&[0], &[1])]));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"valid":false,"violation":[2,1,1],"m":2,"bound3N":"3","slack":"1"}"#
        );
    }
}
