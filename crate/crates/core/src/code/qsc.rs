//! Exact block error of exhaustive decoding on the symmetric channel, and
//! the Gaussian-channel error of repetition codes.

use libm::erfc;
use serde::Serialize;

use super::LinearCode;
use crate::entropy::unit;
use crate::error::{ensure, Error, Result};
use crate::geometry::BRUTE_FORCE_BUDGET;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QscBlockError {
    /// Probability that some other codeword is at least as close as the sent
    /// one (ties counted as errors). The same for every sent codeword.
    pub pessimistic: f64,
    /// Block error when `0^n` is sent and ties go to the lexicographically
    /// smallest codeword (which is `0^n` itself).
    pub zero_lexicographic: f64,
}

/// Exact block error on `qSC_p`, by a breadth-first search over `Σ^n` from
/// the nonzero codewords.
pub fn qsc_block_error_exact(code: &LinearCode, p: f64) -> Result<QscBlockError> {
    let p = unit(p, "p")?;
    let (q, n) = (code.q(), code.n());
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > BRUTE_FORCE_BUDGET {
        return Err(Error::Budget { what: "received words", needed: total, limit: BRUTE_FORCE_BUDGET });
    }
    let total = total as usize;
    let index = |w: &[u8]| w.iter().fold(0usize, |acc, &s| acc * q as usize + s as usize);
    let strides: Vec<usize> = (0..n).map(|i| (q as usize).pow((n - 1 - i) as u32)).collect();

    // dist[y] = distance from y to the nearest nonzero codeword.
    let mut dist = vec![u8::MAX; total];
    let mut frontier = Vec::new();
    code.for_each_codeword(|c| {
        if c.iter().any(|&s| s != 0) {
            let i = index(c);
            dist[i] = 0;
            frontier.push(i);
        }
    })?;
    let mut level = 0u8;
    while !frontier.is_empty() {
        level += 1;
        let mut next = Vec::new();
        for &y in &frontier {
            for &stride in &strides {
                let digit = y / stride % q as usize;
                let base = y - digit * stride;
                for s in 0..q as usize {
                    let z = base + s * stride;
                    if dist[z] == u8::MAX {
                        dist[z] = level;
                        next.push(z);
                    }
                }
            }
        }
        frontier = next;
    }

    let qf = q as f64;
    let per_symbol = p / (qf - 1.0);
    let mut weight_prob = vec![0.0; n + 1];
    for (w, slot) in weight_prob.iter_mut().enumerate() {
        *slot = per_symbol.powi(w as i32) * (1.0 - p).powi((n - w) as i32);
    }
    let mut out = QscBlockError { pessimistic: 0.0, zero_lexicographic: 0.0 };
    for (z, &d) in dist.iter().enumerate() {
        let mut rest = z;
        let mut weight = 0;
        while rest > 0 {
            weight += usize::from(rest % q as usize != 0);
            rest /= q as usize;
        }
        if (d as usize) <= weight {
            out.pessimistic += weight_prob[weight];
            if (d as usize) < weight {
                out.zero_lexicographic += weight_prob[weight];
            }
        }
    }
    Ok(out)
}

/// `Q(√n/σ)`: block error of the length-`n` binary repetition code on the
/// Gaussian channel.
pub fn repetition_bawgn_block_error(n: usize, sigma2: f64) -> Result<f64> {
    ensure(n >= 1, || "block length must be >= 1".into())?;
    ensure(sigma2 > 0.0, || format!("sigma^2 = {sigma2} must be positive"))?;
    let x = (n as f64 / sigma2).sqrt();
    Ok(0.5 * erfc(x / std::f64::consts::SQRT_2))
}
