//! Exact erasure-channel statistics from the rank of every column subset.

use rayon::prelude::*;
use serde::Serialize;

use super::LinearCode;
use crate::entropy::unit;
use crate::error::{Error, Result};

/// Largest block length for which all `2^n` erasure patterns are visited.
pub const ERASURE_MAX_N: usize = 24;

/// Rank of the generator restricted to every revealed column set.
#[derive(Debug, Clone)]
pub struct ErasureProfile {
    q: u64,
    n: usize,
    k: usize,
    /// Indexed by the bit mask of revealed coordinates.
    ranks: Vec<u8>,
}

/// Three views of the MAP error on the erasure channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErasureError {
    /// Probability that more than one codeword is consistent with the output.
    pub ambiguity: f64,
    /// Block error with a uniformly random choice among consistent codewords.
    pub map_block: f64,
    /// Average symbol error under the same uniform choice.
    pub bit: f64,
}

impl ErasureProfile {
    pub fn new(code: &LinearCode) -> Result<Self> {
        let n = code.n();
        if n > ERASURE_MAX_N {
            return Err(Error::Budget { what: "erasure patterns", needed: 1u128 << n, limit: 1u128 << ERASURE_MAX_N });
        }
        let ranks = (0..1u64 << n).into_par_iter().map(|mask| code.column_rank(mask) as u8).collect();
        Ok(ErasureProfile { q: code.q(), n, k: code.k(), ranks })
    }

    pub fn rank(&self, revealed_mask: u64) -> usize {
        self.ranks[revealed_mask as usize] as usize
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Probability of a given revealed mask when each symbol is erased
    /// independently with probability `lambda`.
    fn weight(&self, lambda: f64, mask: u64) -> f64 {
        let revealed = mask.count_ones() as i32;
        lambda.powi(self.n as i32 - revealed) * (1.0 - lambda).powi(revealed)
    }

    /// `H(X|Y)` in bits for a uniform codeword sent through the erasure channel.
    pub fn entropy_bits(&self, lambda: f64) -> Result<f64> {
        let lambda = unit(lambda, "lambda")?;
        let log2q = (self.q as f64).log2();
        Ok((0..self.ranks.len() as u64).map(|m| self.weight(lambda, m) * (self.k - self.rank(m)) as f64 * log2q).sum())
    }

    pub fn error(&self, lambda: f64) -> Result<ErasureError> {
        let lambda = unit(lambda, "lambda")?;
        let qf = self.q as f64;
        let mut out = ErasureError { ambiguity: 0.0, map_block: 0.0, bit: 0.0 };
        for m in 0..self.ranks.len() as u64 {
            let w = self.weight(lambda, m);
            let r = self.rank(m);
            if r < self.k {
                out.ambiguity += w;
                out.map_block += w * (1.0 - qf.powi(-((self.k - r) as i32)));
            }
            // Symbol i is undetermined when its column is outside the span
            // of the revealed columns; it is then uniform on the coset.
            let undetermined = (0..self.n).filter(|&i| m >> i & 1 == 0 && self.rank(m | 1 << i) > r).count();
            out.bit += w * undetermined as f64;
        }
        out.bit *= (qf - 1.0) / qf / self.n as f64;
        Ok(out)
    }

    /// Smallest rank over revealed sets of exactly `size` coordinates, with one
    /// set achieving it.
    pub fn min_rank_of_size(&self, size: usize) -> (usize, u64) {
        (0..self.ranks.len() as u64)
            .filter(|m| m.count_ones() as usize == size)
            .map(|m| (self.rank(m), m))
            .min()
            .unwrap_or((self.k, 0))
    }
}

/// `H(X|Y)` in bits.
pub fn erasure_entropy_exact(code: &LinearCode, lambda: f64) -> Result<f64> {
    ErasureProfile::new(code)?.entropy_bits(lambda)
}

pub fn erasure_error_exact(code: &LinearCode, lambda: f64) -> Result<ErasureError> {
    ErasureProfile::new(code)?.error(lambda)
}
