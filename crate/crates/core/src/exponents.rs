//! Exponents of Hamming ball intersections.
//!
//! `m_binary` and `m_q` give the normalized log-size (base q) of the
//! intersection of two radius-`p n` balls whose centers are `γ n` apart;
//! `f_q` is the gap to the log-size of a single ball.

use serde::Serialize;

use crate::bisect;
use crate::entropy::{check_q, h2, hq, hq_tilde, z_qsc};
use crate::error::{ensure, Result};

const SLACK: f64 = 1e-12;

/// Root of the ζ equation behind `m_q` for `q >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaSolution {
    pub zeta: f64,
    pub beta: f64,
    /// `|γζ/2 + (1-γ)β - (p - γ/2)|`.
    pub residual: f64,
    /// `(q-2)² / (4(q-1))`.
    pub c_q: f64,
}

fn c_q(q: f64) -> f64 {
    (q - 2.0) * (q - 2.0) / (4.0 * (q - 1.0))
}

#[inline]
fn beta_raw(c: f64, zeta: f64) -> f64 {
    if zeta <= 0.0 {
        return 0.0;
    }
    let r = (1.0 - zeta) / zeta;
    1.0 / (1.0 + c * r * r)
}

/// Validated `(γ, p)` for alphabet `q`, with rounding overshoot clamped.
fn point(q: u64, gamma: f64, p: f64) -> Result<(f64, f64)> {
    check_q(q)?;
    let top = 1.0 - 1.0 / q as f64;
    ensure(p.is_finite() && p >= -SLACK && p <= top + SLACK, || format!("p = {p} outside [0, 1 - 1/q] for q = {q}"))?;
    let p = p.clamp(0.0, top);
    let gmax = (2.0 * p).min(1.0);
    ensure(gamma.is_finite() && gamma >= -SLACK && gamma <= gmax + SLACK, || {
        format!("gamma = {gamma} outside [0, min(2p, 1)] for p = {p}")
    })?;
    Ok((gamma.clamp(0.0, gmax), p))
}

/// Binary exponent `γ + (1-γ) h((p - γ/2)/(1-γ))`, extended by `M(1, 1/2) = 1`.
pub fn m_binary(gamma: f64, p: f64) -> Result<f64> {
    let (gamma, p) = point(2, gamma, p)?;
    Ok(m_binary_raw(gamma, p))
}

fn m_binary_raw(gamma: f64, p: f64) -> f64 {
    if gamma >= 1.0 {
        return 1.0;
    }
    let inner = ((p - gamma / 2.0) / (1.0 - gamma)).clamp(0.0, 1.0);
    gamma + (1.0 - gamma) * h2(inner)
}

/// `β(ζ) = 1/(1 + C_q((1-ζ)/ζ)²)` with `β(0) = 0`.
pub fn beta_of_zeta(q: u64, zeta: f64) -> Result<f64> {
    ensure(q >= 3, || format!("beta(zeta) needs q >= 3, got {q}"))?;
    ensure((0.0..=1.0).contains(&zeta), || format!("zeta = {zeta} outside [0,1]"))?;
    Ok(beta_raw(c_q(q as f64), zeta))
}

/// Solves `γζ/2 + (1-γ)β(ζ) = p - γ/2` for `ζ` by bisection.
pub fn solve_zeta(q: u64, gamma: f64, p: f64) -> Result<ZetaSolution> {
    ensure(q >= 3, || format!("zeta equation needs q >= 3, got {q}"))?;
    let (gamma, p) = point(q, gamma, p)?;
    Ok(solve_zeta_raw(q as f64, gamma, p))
}

fn solve_zeta_raw(q: f64, gamma: f64, p: f64) -> ZetaSolution {
    let c = c_q(q);
    let target = p - gamma / 2.0;
    let g = |z: f64| gamma * z / 2.0 + (1.0 - gamma) * beta_raw(c, z);
    let zeta = if target <= 0.0 {
        0.0
    } else {
        let b = bisect::increasing_root(0.0, 1.0, target, 1e-16, g);
        // Keep whichever end of the final bracket fits better.
        if (g(b.lo) - target).abs() < (g(b.hi) - target).abs() {
            b.lo
        } else {
            b.hi
        }
    };
    ZetaSolution { zeta, beta: beta_raw(c, zeta), residual: (g(zeta) - target).abs(), c_q: c }
}

/// q-ary exponent in base q.
pub fn m_q(q: u64, gamma: f64, p: f64) -> Result<f64> {
    let (gamma, p) = point(q, gamma, p)?;
    Ok(m_q_raw(q, gamma, p))
}

pub(crate) fn m_q_raw(q: u64, gamma: f64, p: f64) -> f64 {
    if q == 2 {
        return m_binary_raw(gamma, p);
    }
    let qf = q as f64;
    if gamma <= 0.0 {
        return hq(qf, p);
    }
    if p >= 1.0 - 1.0 / qf {
        return 1.0;
    }
    if p - gamma / 2.0 <= 0.0 {
        return gamma * std::f64::consts::LN_2 / qf.ln();
    }
    if gamma >= 1.0 {
        return hq_tilde(qf, 2.0 * p - 1.0);
    }
    let sol = solve_zeta_raw(qf, gamma, p);
    gamma * hq_tilde(qf, sol.zeta) + (1.0 - gamma) * hq(qf, sol.beta)
}

/// `H_q(p) - m_q(q, γ, p)`.
pub fn f_q(q: u64, gamma: f64, p: f64) -> Result<f64> {
    let (gamma, p) = point(q, gamma, p)?;
    Ok(f_q_raw(q, gamma, p))
}

pub(crate) fn f_q_raw(q: u64, gamma: f64, p: f64) -> f64 {
    hq(q as f64, p) - m_q_raw(q, gamma, p)
}

/// `log_q Z(qSC_p)`, the slope of `γ ↦ m_q(q, γ, p)` at `γ = 0`.
pub fn dm_dgamma0_reference(q: u64, p: f64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    ensure(p > 0.0 && p <= 1.0 - 1.0 / qf + SLACK, || format!("p = {p} outside (0, 1 - 1/q]"))?;
    Ok(z_qsc(qf, p.min(1.0 - 1.0 / qf)).ln() / qf.ln())
}
