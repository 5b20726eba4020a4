//! Regular and partial string similarity.
//!
//! Regular similarity is `200 * LCS(a, b) / (|a| + |b|)` rounded half-up to
//! an integer percent. That is the normalized form of the edit distance in
//! which an insertion or deletion costs 1 and a substitution costs 2.
//! Partial similarity slides the shorter string over every equal-length
//! window of the longer one and keeps the best regular score. Comparisons
//! are case-sensitive and count characters, not bytes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::SimilarityError;

/// Integer percentage in `0..=100`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimilarityScore(u8);

impl SimilarityScore {
    pub const MAX: SimilarityScore = SimilarityScore(100);

    pub fn new(value: u8) -> Option<Self> {
        (value <= 100).then_some(SimilarityScore(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for SimilarityScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}%", self.0)
    }
}

fn lcs_chars(a: &[char], b: &[char]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut row = vec![0usize; b.len() + 1];
    for &ca in a {
        let mut diag = 0;
        for (j, &cb) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if ca == cb { diag + 1 } else { up.max(row[j]) };
            diag = up;
        }
    }
    row[b.len()]
}

/// Length of the longest common subsequence.
pub fn lcs_length(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    lcs_chars(&a, &b)
}

fn ratio(lcs: usize, total: usize) -> SimilarityScore {
    if total == 0 {
        return SimilarityScore::MAX;
    }
    // round(200 * lcs / total), halves rounded up
    SimilarityScore(((400 * lcs + total) / (2 * total)) as u8)
}

fn regular_chars(a: &[char], b: &[char]) -> SimilarityScore {
    ratio(lcs_chars(a, b), a.len() + b.len())
}

/// Regular similarity; two empty strings score 100.
pub fn regular_similarity(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    regular_chars(&a, &b)
}

/// Best regular similarity between the shorter operand and any window of the
/// longer operand with the same length. Operands may come in either order.
pub fn partial_similarity(a: &str, b: &str) -> Result<SimilarityScore, SimilarityError> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    partial_chars(&a, &b)
}

pub(crate) fn partial_chars(a: &[char], b: &[char]) -> Result<SimilarityScore, SimilarityError> {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return Err(SimilarityError::EmptyOperand);
    }
    // no window can share more characters than the two multisets do
    let ceiling = ratio(shared_char_count(short, long), 2 * short.len());
    let mut best = SimilarityScore(0);
    for window in long.windows(short.len()) {
        best = best.max(regular_chars(short, window));
        if best >= ceiling {
            break;
        }
    }
    Ok(best)
}

fn shared_char_count(short: &[char], long: &[char]) -> usize {
    let mut pool: Vec<char> = long.to_vec();
    let mut shared = 0;
    for c in short {
        if let Some(pos) = pool.iter().position(|p| p == c) {
            pool.swap_remove(pos);
            shared += 1;
        }
    }
    shared
}
