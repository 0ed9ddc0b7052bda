//! Permutations in one-line notation, 1-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `[n]` in one-line notation. `values[i]` is the image of
/// `i + 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::BadPermutation("empty"));
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::BadPermutation("value out of range"));
            }
            if std::mem::replace(&mut seen[v as usize - 1], true) {
                return Err(Error::BadPermutation("repeated value"));
            }
        }
        Ok(Permutation(values))
    }

    /// Shorthand for tests and small literals. Panics on invalid input.
    pub fn from_slice(values: &[u32]) -> Self {
        Permutation::new(values.to_vec()).expect("valid permutation")
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    /// Image of the 1-based index `i`.
    pub fn get(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    /// The reverse-value permutation `i -> n + 1 - pi(i)`.
    pub fn complement(&self) -> Self {
        let n = self.0.len() as u32;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Permutation::new(vec![2, 1, 3]).is_ok());
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }

    #[test]
    fn complement_is_involution() {
        let p = Permutation::from_slice(&[3, 1, 4, 2]);
        assert_eq!(p.complement(), Permutation::from_slice(&[2, 4, 1, 3]));
        assert_eq!(p.complement().complement(), p);
    }
}
