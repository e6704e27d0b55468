//! Sequences over a finite alphabet and their mixed-radix indices.
//!
//! Index convention: the first letter is the most significant digit, so
//! lexicographic order on sequences equals numeric order on indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A length-n string of alphabet indices tagged with its axis name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sequence {
    pub axis: String,
    pub letters: Vec<usize>,
}

impl Sequence {
    pub fn new(axis: impl Into<String>, letters: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParameter(
                "sequence length must be positive".into(),
            ));
        }
        if let Some(&bad) = letters.iter().find(|&&l| l >= alphabet_size) {
            return Err(Error::InvalidParameter(format!(
                "letter {bad} out of range for alphabet of size {alphabet_size}"
            )));
        }
        Ok(Sequence {
            axis: axis.into(),
            letters,
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Constant sequence of `letter`.
    pub fn constant(axis: impl Into<String>, letter: usize, n: usize) -> Self {
        Sequence {
            axis: axis.into(),
            letters: vec![letter; n],
        }
    }
}

/// Index of `letters` in the product alphabet of size `k^n`.
pub fn encode(letters: &[usize], k: usize) -> usize {
    letters.iter().fold(0, |acc, &l| acc * k + l)
}

/// Inverse of [`encode`].
pub fn decode(mut idx: usize, k: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % k;
        idx /= k;
    }
    out
}

/// `k^n`, or an error if it overflows `usize`.
pub fn count(k: usize, n: usize) -> Result<usize> {
    u32::try_from(n)
        .ok()
        .and_then(|n| k.checked_pow(n))
        .ok_or_else(|| Error::InvalidParameter(format!("{k}^{n} overflows")))
}

/// Flat joint-cell indices of parallel sequences over a table with the given
/// per-axis sizes (row-major, last axis fastest).
pub fn joint_cells(seqs: &[&[usize]], sizes: &[usize]) -> Result<Vec<usize>> {
    if seqs.len() != sizes.len() {
        return Err(Error::LengthMismatch(format!(
            "{} sequences for {} axes",
            seqs.len(),
            sizes.len()
        )));
    }
    let n = seqs.first().map_or(0, |s| s.len());
    if seqs.iter().any(|s| s.len() != n) {
        return Err(Error::LengthMismatch(format!(
            "parallel sequences have lengths {:?}",
            seqs.iter().map(|s| s.len()).collect::<Vec<_>>()
        )));
    }
    Ok((0..n)
        .map(|i| {
            seqs.iter()
                .zip(sizes)
                .fold(0, |acc, (s, &k)| acc * k + s[i])
        })
        .collect())
}
