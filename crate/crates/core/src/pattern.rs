//! Brute-force pattern containment and avoidance classes.
//!
//! Containment is decided by an exhaustive scan over index triples, so this
//! module is deliberately slow and obviously correct; it is the ground truth
//! the bijections are checked against.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One of the six permutations of {1,2,3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pattern {
    #[serde(rename = "123")]
    P123,
    #[serde(rename = "132")]
    P132,
    #[serde(rename = "213")]
    P213,
    #[serde(rename = "231")]
    P231,
    #[serde(rename = "312")]
    P312,
    #[serde(rename = "321")]
    P321,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::P123,
        Pattern::P132,
        Pattern::P213,
        Pattern::P231,
        Pattern::P312,
        Pattern::P321,
    ];

    pub fn values(self) -> [u32; 3] {
        match self {
            Pattern::P123 => [1, 2, 3],
            Pattern::P132 => [1, 3, 2],
            Pattern::P213 => [2, 1, 3],
            Pattern::P231 => [2, 3, 1],
            Pattern::P312 => [3, 1, 2],
            Pattern::P321 => [3, 2, 1],
        }
    }

    pub fn as_permutation(self) -> Permutation {
        Permutation::new(self.values().to_vec()).expect("pattern is a permutation")
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.values();
        write!(f, "{a}{b}{c}")
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "123" => Ok(Pattern::P123),
            "132" => Ok(Pattern::P132),
            "213" => Ok(Pattern::P213),
            "231" => Ok(Pattern::P231),
            "312" => Ok(Pattern::P312),
            "321" => Ok(Pattern::P321),
            _ => Err(Error::BadInput(format!("unknown pattern {s:?}"))),
        }
    }
}

/// Largest `n` accepted by [`enumerate_avoiders`].
pub const ENUMERATION_BOUND: usize = 12;

/// True iff some index triple of `pi` realizes the order pattern of `sigma`.
pub fn contains(pi: &Permutation, sigma: Pattern) -> bool {
    let vals = pi.values();
    let n = vals.len();
    let [s1, s2, s3] = sigma.values();
    for i in 0..n {
        for j in (i + 1)..n {
            if (vals[i] < vals[j]) != (s1 < s2) {
                continue;
            }
            for k in (j + 1)..n {
                if (vals[i] < vals[k]) == (s1 < s3) && (vals[j] < vals[k]) == (s2 < s3) {
                    return true;
                }
            }
        }
    }
    false
}

/// All permutations of `[n]` avoiding `sigma`, in lexicographic order.
///
/// Uses avoidance-pruned backtracking: containment is monotone under prefix
/// extension, so a prefix that already realizes `sigma` is abandoned.
pub fn enumerate_avoiders(n: usize, sigma: Pattern) -> Result<Vec<Permutation>> {
    if n == 0 || n > ENUMERATION_BOUND {
        return Err(Error::ExhaustionBound {
            requested: n,
            max: ENUMERATION_BOUND,
        });
    }
    let mut out = Vec::new();
    let mut prefix: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    backtrack(n, sigma, &mut prefix, &mut used, &mut out);
    Ok(out)
}

fn backtrack(
    n: usize,
    sigma: Pattern,
    prefix: &mut Vec<u32>,
    used: &mut [bool],
    out: &mut Vec<Permutation>,
) {
    if prefix.len() == n {
        out.push(Permutation::new(prefix.clone()).expect("backtracking builds permutations"));
        return;
    }
    for v in 1..=n as u32 {
        if used[v as usize] {
            continue;
        }
        if extends_to_pattern(prefix, v, sigma) {
            continue;
        }
        used[v as usize] = true;
        prefix.push(v);
        backtrack(n, sigma, prefix, used, out);
        prefix.pop();
        used[v as usize] = false;
    }
}

/// Would appending `v` to `prefix` create an occurrence of `sigma` ending at
/// the new position?
fn extends_to_pattern(prefix: &[u32], v: u32, sigma: Pattern) -> bool {
    let [s1, s2, s3] = sigma.values();
    let m = prefix.len();
    for i in 0..m {
        if (prefix[i] < v) != (s1 < s3) {
            continue;
        }
        for j in (i + 1)..m {
            if (prefix[i] < prefix[j]) == (s1 < s2) && (prefix[j] < v) == (s2 < s3) {
                return true;
            }
        }
    }
    false
}

/// 1-based indices `m` with `pi(m) > pi(j)` for all `j < m`.
pub fn ltr_maxima_indices(pi: &Permutation) -> Vec<usize> {
    let mut out = Vec::new();
    let mut best = 0;
    for (i, &v) in pi.values().iter().enumerate() {
        if v > best {
            out.push(i + 1);
            best = v;
        }
    }
    out
}

/// The `n`-th Catalan number via the convolution recurrence.
pub fn catalan(n: usize) -> u64 {
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for m in 1..=n {
        for i in 0..m {
            c[m] += c[i] * c[m - 1 - i];
        }
    }
    c[n]
}
