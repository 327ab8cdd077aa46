//! Brute-force list sizes for Hamming balls and for partially erased words.

use std::cmp::Reverse;

use rayon::prelude::*;
use serde::Serialize;

use super::erasure::ErasureProfile;
use super::LinearCode;
use crate::error::{ensure, Error, Result};
use crate::geometry::BRUTE_FORCE_BUDGET;

/// How centers are enumerated in [`list_size_max_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterSearch {
    /// Every word of `Σ^n`.
    #[default]
    Exhaustive,
    /// Only words of weight at most `t`. Exact for linear codes: a ball
    /// holding codeword `c` can be translated by `-c` without changing its
    /// count, which moves its center into `B(0, t)`.
    TranslationReduced,
}

/// Where the maximal list was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Witness {
    Center { center: Vec<u8>, radius: usize },
    Revealed { revealed: Vec<usize>, restriction: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ListDecodingCertificate {
    pub list_size: u64,
    pub witness: Witness,
}

impl ListDecodingCertificate {
    /// Recounts the witness against the code.
    pub fn verify(&self, code: &LinearCode) -> Result<bool> {
        let mut count = 0u64;
        match &self.witness {
            Witness::Center { center, radius } => code.for_each_codeword(|c| {
                if distance(c, center) <= *radius {
                    count += 1;
                }
            })?,
            Witness::Revealed { revealed, restriction } => code.for_each_codeword(|c| {
                if revealed.iter().zip(restriction).all(|(&i, &s)| c[i] == s) {
                    count += 1;
                }
            })?,
        }
        Ok(count == self.list_size)
    }
}

fn distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Largest number of codewords in any Hamming ball of radius `t`.
pub fn list_size_max(code: &LinearCode, t: usize) -> Result<ListDecodingCertificate> {
    list_size_max_with(code, t, CenterSearch::Exhaustive)
}

pub fn list_size_max_with(code: &LinearCode, t: usize, search: CenterSearch) -> Result<ListDecodingCertificate> {
    let words = code.codewords()?;
    let (q, n) = (code.q(), code.n());
    let t = t.min(n);
    let count = |y: &[u8]| words.iter().filter(|c| distance(c, y) <= t).count() as u64;
    let (list_size, center) = match search {
        CenterSearch::Exhaustive => {
            let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            let work = total.saturating_mul(words.len() as u128);
            if work > BRUTE_FORCE_BUDGET * 64 || total > BRUTE_FORCE_BUDGET {
                return Err(Error::Budget { what: "list centers", needed: total, limit: BRUTE_FORCE_BUDGET });
            }
            let (size, Reverse(idx)) = (0..total as u64)
                .into_par_iter()
                .map(|idx| (count(&decode(idx, q, n)), Reverse(idx)))
                .max()
                .expect("at least one center");
            (size, decode(idx, q, n))
        }
        CenterSearch::TranslationReduced => {
            let centers = low_weight_words(q, n, t);
            let (size, Reverse(i)) =
                centers.par_iter().enumerate().map(|(i, y)| (count(y), Reverse(i))).max().expect("at least one center");
            (size, centers[i].clone())
        }
    };
    Ok(ListDecodingCertificate { list_size, witness: Witness::Center { center, radius: t } })
}

fn decode(mut idx: u64, q: u64, n: usize) -> Vec<u8> {
    let mut y = vec![0u8; n];
    for s in y.iter_mut().rev() {
        *s = (idx % q) as u8;
        idx /= q;
    }
    y
}

/// All words of weight at most `t`, in a fixed order.
fn low_weight_words(q: u64, n: usize, t: usize) -> Vec<Vec<u8>> {
    fn extend(q: u64, t: usize, pos: usize, word: &mut Vec<u8>, weight: usize, out: &mut Vec<Vec<u8>>) {
        if pos == word.len() {
            out.push(word.clone());
            return;
        }
        extend(q, t, pos + 1, word, weight, out);
        if weight < t {
            for s in 1..q as u8 {
                word[pos] = s;
                extend(q, t, pos + 1, word, weight + 1, out);
            }
            word[pos] = 0;
        }
    }
    let mut out = Vec::new();
    extend(q, t, 0, &mut vec![0u8; n], 0, &mut out);
    out
}

/// Largest number of codewords consistent with a word in which more than
/// `(1 - rho) n` coordinates are revealed.
///
/// When no proper revealed set qualifies (`rho = 0`), all coordinates are
/// revealed and the list has size 1.
pub fn erasure_list_size_max(code: &LinearCode, rho: f64) -> Result<ListDecodingCertificate> {
    ensure((0.0..=1.0).contains(&rho), || format!("rho = {rho} outside [0,1]"))?;
    code.check_budget()?;
    let n = code.n();
    let min_revealed = ((1.0 - rho) * n as f64 + 1e-9).floor() as usize + 1;
    let size = min_revealed.min(n);
    let profile = ErasureProfile::new(code)?;
    let (rank, mask) = profile.min_rank_of_size(size);
    let revealed: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    let list_size = code.q().pow((code.k() - rank) as u32);
    let restriction = vec![0u8; revealed.len()];
    Ok(ListDecodingCertificate { list_size, witness: Witness::Revealed { revealed, restriction } })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_list_examples() {
        let ham = LinearCode::hamming_7_4();
        let c0 = list_size_max(&ham, 0).unwrap();
        assert_eq!(c0.list_size, 1);
        assert_eq!(list_size_max(&ham, 1).unwrap().list_size, 1);
        let all = list_size_max(&ham, 7).unwrap();
        assert_eq!(all.list_size, 16);
        assert!(all.verify(&ham).unwrap());
        let two = list_size_max(&ham, 2).unwrap();
        assert!(two.verify(&ham).unwrap());
        // A center next to codeword c also reaches the three weight-3
        // neighbours of c that cover the flipped position.
        assert_eq!(two.list_size, 4);
    }

    #[test]
    fn translation_reduction_is_exact() {
        let code = LinearCode::new(3, 5, vec![vec![1, 0, 2, 1, 1], vec![0, 1, 1, 2, 0]]).unwrap();
        for t in 0..=5 {
            let a = list_size_max(&code, t).unwrap();
            let b = list_size_max_with(&code, t, CenterSearch::TranslationReduced).unwrap();
            assert_eq!(a.list_size, b.list_size, "t = {t}");
            assert!(b.verify(&code).unwrap());
        }
    }

    #[test]
    fn erasure_list_examples() {
        let ham = LinearCode::hamming_7_4();
        let none = erasure_list_size_max(&ham, 0.0).unwrap();
        assert_eq!(none.list_size, 1);
        assert!(none.verify(&ham).unwrap());
        let one = erasure_list_size_max(&ham, 1.0).unwrap();
        assert_eq!(one.list_size, 8);
        assert!(one.verify(&ham).unwrap());
        // Two erasures are always recoverable (d = 3); three can cover the
        // support of a weight-3 codeword.
        assert_eq!(erasure_list_size_max(&ham, 2.0 / 7.0).unwrap().list_size, 1);
        let three = erasure_list_size_max(&ham, 4.0 / 7.0).unwrap();
        assert_eq!(three.list_size, 2);
        assert!(three.verify(&ham).unwrap());
        assert!(erasure_list_size_max(&ham, 1.5).is_err());
    }

    #[test]
    fn low_weight_enumeration_counts() {
        // |B(0, 2)| in F_3^4 = 1 + 8 + 24
        assert_eq!(low_weight_words(3, 4, 2).len(), 33);
    }
}
