//! Bucketed empirical laws of permutation windows and total-variation
//! distances between them.
//!
//! The limit objects charge infinity, so distributional comparison happens
//! on the finite partition `{1..M} u {LARGE}` per window coordinate: finite
//! values above the bucket cap `M` and infinite values share the `LARGE`
//! bucket.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::Error;
use crate::extnat::ExtendedNat;

/// One bucketed window coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bucket {
    /// A value in `1..=M`.
    Value(u64),
    /// Anything above the cap, including infinity.
    Large,
}

impl Serialize for Bucket {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Bucket::Value(v) => serializer.serialize_u64(*v),
            Bucket::Large => serializer.serialize_str("LARGE"),
        }
    }
}

impl<'de> Deserialize<'de> for Bucket {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct BucketVisitor;

        impl Visitor<'_> for BucketVisitor {
            type Value = Bucket;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a positive integer or the string \"LARGE\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Bucket, E> {
                Ok(Bucket::Value(v))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Bucket, E> {
                if s == "LARGE" {
                    Ok(Bucket::Large)
                } else {
                    Err(E::custom("expected \"LARGE\""))
                }
            }
        }

        deserializer.deserialize_any(BucketVisitor)
    }
}

/// The empirical law of a bucketed window of length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LawRepr", into = "LawRepr")]
pub struct PrefixLaw {
    k: usize,
    bucket_cap: u64,
    counts: BTreeMap<Vec<Bucket>, u64>,
    total: u64,
}

/// Wire form: counts as sorted `(window, count)` pairs.
#[derive(Serialize, Deserialize, Clone)]
struct LawRepr {
    k: usize,
    bucket_cap: u64,
    total: u64,
    counts: Vec<(Vec<Bucket>, u64)>,
}

impl From<PrefixLaw> for LawRepr {
    fn from(law: PrefixLaw) -> LawRepr {
        LawRepr {
            k: law.k,
            bucket_cap: law.bucket_cap,
            total: law.total,
            counts: law.counts.into_iter().collect(),
        }
    }
}

impl TryFrom<LawRepr> for PrefixLaw {
    type Error = Error;

    fn try_from(repr: LawRepr) -> Result<PrefixLaw, Error> {
        let mut counts = BTreeMap::new();
        let mut total = 0u64;
        for (window, count) in repr.counts {
            if window.len() != repr.k {
                return Err(Error::BadEncoding("window length mismatch"));
            }
            for b in &window {
                if let Bucket::Value(v) = b {
                    if *v == 0 || *v > repr.bucket_cap {
                        return Err(Error::BadEncoding("bucket value out of range"));
                    }
                }
            }
            total += count;
            if counts.insert(window, count).is_some() {
                return Err(Error::BadEncoding("duplicate window"));
            }
        }
        if total != repr.total {
            return Err(Error::BadEncoding("counts do not sum to total"));
        }
        Ok(PrefixLaw {
            k: repr.k,
            bucket_cap: repr.bucket_cap,
            counts,
            total,
        })
    }
}

impl PrefixLaw {
    pub fn new(k: usize, bucket_cap: u64) -> Self {
        assert!(k >= 1 && bucket_cap >= 1);
        PrefixLaw {
            k,
            bucket_cap,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn bucket_cap(&self) -> u64 {
        self.bucket_cap
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<Vec<Bucket>, u64> {
        &self.counts
    }

    pub fn bucket(&self, value: ExtendedNat) -> Bucket {
        match value {
            ExtendedNat::Finite(v) if v >= 1 && v <= self.bucket_cap => Bucket::Value(v),
            _ => Bucket::Large,
        }
    }

    /// Records one window of finite values.
    pub fn add_finite(&mut self, values: &[u64]) {
        let window: Vec<Bucket> = values
            .iter()
            .map(|&v| self.bucket(ExtendedNat::Finite(v)))
            .collect();
        self.add_window(window);
    }

    /// Records one window of extended values.
    pub fn add_extended(&mut self, values: &[ExtendedNat]) {
        let window: Vec<Bucket> = values.iter().map(|&v| self.bucket(v)).collect();
        self.add_window(window);
    }

    fn add_window(&mut self, window: Vec<Bucket>) {
        assert_eq!(window.len(), self.k);
        *self.counts.entry(window).or_insert(0) += 1;
        self.total += 1;
    }

    /// Exact count-wise merge of two laws over the same window space.
    pub fn merge(mut self, other: PrefixLaw) -> PrefixLaw {
        assert_eq!(self.k, other.k);
        assert_eq!(self.bucket_cap, other.bucket_cap);
        for (window, count) in other.counts {
            *self.counts.entry(window).or_insert(0) += count;
        }
        self.total += other.total;
        self
    }

    pub fn frequency(&self, window: &[Bucket]) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        *self.counts.get(window).unwrap_or(&0) as f64 / self.total as f64
    }

    /// Probability that every coordinate of the window is `LARGE`.
    pub fn all_large_frequency(&self) -> f64 {
        self.frequency(&vec![Bucket::Large; self.k])
    }

    /// Total-variation distance between the two empirical laws, with a
    /// Monte Carlo standard error.
    ///
    /// TV equals `p(S) - q(S)` for the maximizing set `S = {w : p(w) > q(w)}`;
    /// holding `S` fixed, the estimator is a difference of two independent
    /// binomial proportions, whose standard error is reported.
    pub fn tv_distance(&self, other: &PrefixLaw) -> (f64, f64) {
        assert_eq!(self.k, other.k, "window lengths must match");
        assert_eq!(self.bucket_cap, other.bucket_cap, "bucket caps must match");
        assert!(self.total > 0 && other.total > 0, "laws must be nonempty");
        let mut p_s = 0.0;
        let mut q_s = 0.0;
        for (window, &count) in &self.counts {
            let p = count as f64 / self.total as f64;
            let q = other.frequency(window);
            if p > q {
                p_s += p;
                q_s += q;
            }
        }
        let tv = p_s - q_s;
        let var = p_s * (1.0 - p_s) / self.total as f64
            + q_s * (1.0 - q_s) / other.total as f64;
        (tv, var.max(0.0).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buckets_cap_and_infinity() {
        let law = PrefixLaw::new(2, 30);
        assert_eq!(law.bucket(ExtendedNat::Finite(1)), Bucket::Value(1));
        assert_eq!(law.bucket(ExtendedNat::Finite(30)), Bucket::Value(30));
        assert_eq!(law.bucket(ExtendedNat::Finite(31)), Bucket::Large);
        assert_eq!(law.bucket(ExtendedNat::Infinite), Bucket::Large);
    }

    #[test]
    fn counts_sum_to_total() {
        let mut law = PrefixLaw::new(2, 10);
        law.add_finite(&[1, 2]);
        law.add_finite(&[1, 2]);
        law.add_finite(&[11, 2]);
        law.add_extended(&[ExtendedNat::Infinite, ExtendedNat::Finite(3)]);
        assert_eq!(law.total(), 4);
        assert_eq!(law.counts().values().sum::<u64>(), law.total());
        assert_eq!(
            law.frequency(&[Bucket::Value(1), Bucket::Value(2)]),
            0.5
        );
        assert_eq!(law.frequency(&[Bucket::Large, Bucket::Value(2)]), 0.25);
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = PrefixLaw::new(1, 5);
        a.add_finite(&[1]);
        a.add_finite(&[2]);
        let mut b = PrefixLaw::new(1, 5);
        b.add_finite(&[2]);
        let merged = a.merge(b);
        assert_eq!(merged.total(), 3);
        assert_eq!(merged.frequency(&[Bucket::Value(2)]), 2.0 / 3.0);
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let mut law = PrefixLaw::new(2, 3);
        law.add_finite(&[1, 3]);
        law.add_finite(&[4, 1]);
        law.add_extended(&[ExtendedNat::Infinite, ExtendedNat::Infinite]);
        let json = serde_json::to_string(&law).unwrap();
        let back: PrefixLaw = serde_json::from_str(&json).unwrap();
        assert_eq!(back, law);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        assert!(json.contains("\"LARGE\""));
    }

    #[test]
    fn bad_serializations_rejected() {
        let json = r#"{"k":1,"bucket_cap":5,"total":3,"counts":[[[1],2]]}"#;
        assert!(serde_json::from_str::<PrefixLaw>(json).is_err());
        let json = r#"{"k":1,"bucket_cap":5,"total":2,"counts":[[[9],2]]}"#;
        assert!(serde_json::from_str::<PrefixLaw>(json).is_err());
    }

    #[test]
    fn tv_distance_simple() {
        let mut a = PrefixLaw::new(1, 4);
        let mut b = PrefixLaw::new(1, 4);
        for _ in 0..50 {
            a.add_finite(&[1]);
            b.add_finite(&[2]);
        }
        for _ in 0..50 {
            a.add_finite(&[3]);
            b.add_finite(&[3]);
        }
        let (tv, se) = a.tv_distance(&b);
        assert!((tv - 0.5).abs() < 1e-12);
        assert!(se > 0.0 && se < 0.1);
        let (tv_self, _) = a.tv_distance(&a);
        assert_eq!(tv_self, 0.0);
        // symmetry
        let (tv_ba, _) = b.tv_distance(&a);
        assert!((tv - tv_ba).abs() < 1e-12);
    }
}
