//! Scalar thresholds: Johnson radius, erasure-driven crossover thresholds
//! for the symmetric and Gaussian channels, their small-distance limits, and
//! the list-decoding radius bounds built on them.

use serde::Serialize;

use crate::bisect::{self, Bracket};
use crate::entropy::{check_q, h2, q_entropy_inverse, z_qsc};
use crate::error::{ensure, Error, Result};
use crate::exponents::f_q_raw;

/// Default bracket width for every threshold bisection.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Upper cap on the noise-variance bracket.
pub const SIGMA2_CAP: f64 = 1e6;

const SLACK: f64 = 1e-12;

/// Output of a threshold bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub value: f64,
    /// `(lo, hi)`: the defining predicate fails at `lo` and holds at `hi`,
    /// except when `boundary` is set and both equal the left endpoint.
    pub bracket: (f64, f64),
    /// Defining function minus its target, evaluated at `bracket.1`.
    pub residual: f64,
    pub iterations: u32,
    /// The predicate already holds at the left end of the search interval.
    pub boundary: bool,
}

impl ThresholdResult {
    fn at_boundary(x: f64, residual: f64) -> Self {
        ThresholdResult { value: x, bracket: (x, x), residual, iterations: 0, boundary: true }
    }

    fn from_bracket(b: Bracket, residual: f64) -> Self {
        ThresholdResult {
            value: b.midpoint(),
            bracket: (b.lo, b.hi),
            residual,
            iterations: b.iterations,
            boundary: false,
        }
    }
}

fn in_unit(x: f64, what: &str) -> Result<()> {
    ensure(x.is_finite() && (0.0..=1.0).contains(&x), || format!("{what} = {x} outside [0,1]"))
}

/// `(1 - 1/q)(1 - sqrt(1 - qδ/(q-1)))`.
pub fn johnson_radius(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    let top = 1.0 - 1.0 / qf;
    ensure(delta >= 0.0 && delta <= top + SLACK, || format!("delta = {delta} outside [0, 1 - 1/q]"))?;
    let inner = (1.0 - qf * delta / (qf - 1.0)).max(0.0);
    Ok(top * (1.0 - inner.sqrt()))
}

/// `δ log_q((q-1)/(q^λ - 1))`.
fn erasure_target(q: f64, lambda: f64, delta: f64) -> f64 {
    delta * ((q - 1.0) / (q.powf(lambda) - 1.0)).ln() / q.ln()
}

/// Smallest `p ∈ [δ/2, 1 - 1/q]` with `F_q(δ, p) <= δ log_q((q-1)/(q^λ-1))`.
pub fn p_star(q: u64, lambda: f64, delta: f64) -> Result<ThresholdResult> {
    p_star_tol(q, lambda, delta, DEFAULT_TOL)
}

pub fn p_star_tol(q: u64, lambda: f64, delta: f64, tol: f64) -> Result<ThresholdResult> {
    check_q(q)?;
    ensure(lambda > 0.0 && lambda <= 1.0, || format!("lambda = {lambda} outside (0,1]"))?;
    in_unit(delta, "delta")?;
    let qf = q as f64;
    let top = 1.0 - 1.0 / qf;
    ensure(delta / 2.0 <= top, || format!("delta = {delta} too large for q = {q}"))?;
    let target = erasure_target(qf, lambda, delta);
    Ok(decreasing_crossing(delta / 2.0, top, tol, |p| f_q_raw(q, delta, p) - target))
}

/// First point of `[lo, hi]` where a decreasing function drops to `<= 0`.
fn decreasing_crossing<F: Fn(f64) -> f64>(lo: f64, hi: f64, tol: f64, g: F) -> ThresholdResult {
    let at_lo = g(lo);
    if at_lo <= 0.0 {
        return ThresholdResult::at_boundary(lo, at_lo);
    }
    let b = bisect::first_true(lo, hi, tol, |x| g(x) <= 0.0);
    ThresholdResult::from_bracket(b, g(b.hi))
}

/// Solution `p` of `Z(qSC_p) = (q^λ - 1)/(q - 1)`.
pub fn p_star_small_delta_limit(q: u64, lambda: f64) -> Result<f64> {
    check_q(q)?;
    ensure(lambda > 0.0 && lambda <= 1.0, || format!("lambda = {lambda} outside (0,1]"))?;
    let qf = q as f64;
    if q == 2 {
        let u = 2f64.powf(lambda - 1.0);
        return Ok(0.5 - (u * (1.0 - u)).max(0.0).sqrt());
    }
    let top = 1.0 - 1.0 / qf;
    let target = (qf.powf(lambda) - 1.0) / (qf - 1.0);
    if target >= 1.0 {
        return Ok(top);
    }
    Ok(bisect::increasing_root(0.0, top, target, DEFAULT_TOL, |p| z_qsc(qf, p)).midpoint())
}

fn check_dual(lambda: f64, rate: f64) -> Result<()> {
    in_unit(lambda, "lambda")?;
    ensure((0.0..1.0).contains(&rate), || format!("rate {rate} outside [0,1)"))?;
    ensure(lambda <= rate, || format!("lambda = {lambda} exceeds rate {rate}"))
}

/// Piecewise target used by the dual-code threshold.
pub fn g_perp(lambda: f64, rate: f64, gamma: f64) -> Result<f64> {
    check_dual(lambda, rate)?;
    in_unit(gamma, "gamma")?;
    Ok(g_perp_raw(lambda, rate, gamma))
}

fn g_perp_raw(lambda: f64, rate: f64, gamma: f64) -> f64 {
    let m = gamma.min(1.0 - gamma);
    let m0 = 1.0 - 2f64.powf(lambda - 1.0);
    if m < m0 {
        rate - lambda - m * (2f64.powf(1.0 - lambda) - 1.0).log2()
    } else {
        h2(gamma) - (1.0 - rate)
    }
}

/// Smallest `p ∈ [δ/2, 1/2]` with `F(δ, p) <= G⊥_{λ,R}(δ)`.
pub fn p_star_dual(lambda: f64, rate: f64, delta: f64) -> Result<ThresholdResult> {
    p_star_dual_tol(lambda, rate, delta, DEFAULT_TOL)
}

pub fn p_star_dual_tol(lambda: f64, rate: f64, delta: f64, tol: f64) -> Result<ThresholdResult> {
    check_dual(lambda, rate)?;
    in_unit(delta, "delta")?;
    let target = g_perp_raw(lambda, rate, delta);
    Ok(decreasing_crossing(delta / 2.0, 0.5, tol, |p| f_q_raw(2, delta, p) - target))
}

/// `-½ log₂(1 - γ/σ²) + γ log₂(2^λ - 1)`.
pub fn f_bawgn(lambda: f64, gamma: f64, sigma2: f64) -> Result<f64> {
    ensure(lambda > 0.0 && lambda <= 1.0, || format!("lambda = {lambda} outside (0,1]"))?;
    ensure(sigma2 > 0.0 && sigma2.is_finite(), || format!("sigma^2 = {sigma2} must be positive"))?;
    ensure(gamma >= 0.0 && gamma < sigma2, || format!("gamma = {gamma} must lie in [0, sigma^2 = {sigma2})"))?;
    Ok(f_bawgn_raw(lambda, gamma, sigma2))
}

fn f_bawgn_raw(lambda: f64, gamma: f64, sigma2: f64) -> f64 {
    -0.5 * (-gamma / sigma2).ln_1p() / std::f64::consts::LN_2 + gamma * (2f64.powf(lambda) - 1.0).log2()
}

/// Smallest `σ² > δ` with `f_bawgn(λ, δ, σ²) <= 0`.
pub fn sigma2_star(lambda: f64, delta: f64) -> Result<ThresholdResult> {
    ensure(lambda > 0.0 && lambda < 1.0, || format!("lambda = {lambda} outside (0,1)"))?;
    in_unit(delta, "delta")?;
    if delta == 0.0 {
        return Ok(ThresholdResult::at_boundary(0.0, 0.0));
    }
    let g = |s: f64| if s <= delta { f64::INFINITY } else { f_bawgn_raw(lambda, delta, s) };
    let mut hi = delta + 1.0;
    while g(hi) > 0.0 {
        if hi >= SIGMA2_CAP {
            return Err(Error::BracketExhausted(format!(
                "no sigma^2 <= {SIGMA2_CAP} satisfies the condition for lambda = {lambda}, delta = {delta}"
            )));
        }
        hi = (2.0 * hi).min(SIGMA2_CAP);
    }
    let tol = DEFAULT_TOL * hi.max(1.0);
    let b = bisect::first_true(delta, hi, tol, |s| g(s) <= 0.0);
    Ok(ThresholdResult::from_bracket(b, g(b.hi)))
}

/// `-1 / (2 ln(2^λ - 1))`.
pub fn sigma2_star_limit(lambda: f64) -> Result<f64> {
    ensure(lambda > 0.0 && lambda < 1.0, || format!("lambda = {lambda} outside (0,1)"))?;
    Ok(-1.0 / (2.0 * (2f64.powf(lambda) - 1.0).ln()))
}

/// Lower bound on the symmetric-channel radius reachable by linear codes of
/// relative distance `δ`: the erasure threshold at `λ = qδ/(q-1)`.
pub fn lsym_lower_bound(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    let qf = q as f64;
    let top = 1.0 - 1.0 / qf;
    ensure(delta >= 0.0 && delta <= top + SLACK, || format!("delta = {delta} outside [0, 1 - 1/q]"))?;
    let delta = delta.min(top);
    if delta == 0.0 {
        return Ok(0.0);
    }
    let lambda = (qf * delta / (qf - 1.0)).min(1.0);
    Ok(p_star(q, lambda, delta)?.value)
}

/// `δ - ε₀` where `ε₀` solves `h(min(1/2, δ - ε)) = ε log₂(q - 1)`.
pub fn rudra_uurtamo_p0(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    ensure(q > 2, || "the balance equation has no root for q = 2".into())?;
    let qf = q as f64;
    ensure(delta > 0.0 && delta <= 1.0 - 1.0 / qf + SLACK, || format!("delta = {delta} outside (0, 1 - 1/q]"))?;
    let slope = (qf - 1.0).log2();
    let g = |eps: f64| h2((delta - eps).clamp(0.0, 0.5)) - eps * slope;
    let b = bisect::first_true(0.0, delta, DEFAULT_TOL, |eps| g(eps) <= 0.0);
    Ok(delta - b.midpoint())
}

/// Upper bound `H_q^{-1}(δ + 1/(√q - 1))` for square `q`.
pub fn tvz_upper_bound(q: u64, delta: f64) -> Result<f64> {
    check_q(q)?;
    let root = (q as f64).sqrt().round() as u64;
    ensure(root >= 2 && root * root == q, || format!("q = {q} is not a perfect square"))?;
    ensure(delta >= 0.0, || format!("delta = {delta} must be >= 0"))?;
    let arg = delta + 1.0 / (root as f64 - 1.0);
    ensure(arg <= 1.0 + SLACK, || format!("delta + 1/(sqrt(q)-1) = {arg} exceeds 1"))?;
    q_entropy_inverse(q, arg.min(1.0))
}

/// Erasure list-decoding parameters `(ρ, L) = ((q/(q-1) - ε)δ, q/((q-1)ε))`.
pub fn erasure_list_params(q: u64, delta: f64, eps: f64) -> Result<(f64, f64)> {
    check_q(q)?;
    let qf = q as f64;
    ensure(delta >= 0.0 && delta <= 1.0 - 1.0 / qf + SLACK, || format!("delta = {delta} outside [0, 1 - 1/q]"))?;
    ensure(eps > 0.0 && eps.is_finite(), || format!("eps = {eps} must be positive"))?;
    Ok(((qf / (qf - 1.0) - eps) * delta, qf / ((qf - 1.0) * eps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn johnson_examples() {
        assert!((johnson_radius(2, 0.1).unwrap() - 0.052786).abs() < 1e-6);
        assert_eq!(johnson_radius(5, 0.0).unwrap(), 0.0);
        assert!((johnson_radius(9, 8.0 / 9.0).unwrap() - 8.0 / 9.0).abs() < 1e-15);
        assert!(johnson_radius(2, 0.6).is_err());
    }

    #[test]
    fn p_star_reference_point() {
        let r = p_star(2, 0.533, 0.1).unwrap();
        assert!((r.value - 0.077).abs() < 2e-3, "{r:?}");
        assert!(r.bracket.1 - r.bracket.0 <= 1e-12);
        assert!(r.residual <= 0.0);
        assert!(p_star(2, 0.0, 0.1).is_err());
    }

    #[test]
    fn p_star_limits() {
        assert_eq!(p_star_small_delta_limit(2, 1.0).unwrap(), 0.5);
        assert!((p_star_small_delta_limit(2, 0.5).unwrap() - 0.044910).abs() < 1e-6);
        assert!((p_star_small_delta_limit(3, 1.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let lim = p_star_small_delta_limit(2, 0.5).unwrap();
        assert!((p_star(2, 0.5, 1e-4).unwrap().value - lim).abs() < 1e-3);
    }

    #[test]
    fn p_star_at_full_erasure() {
        // λ = 1 makes the target 0, so the threshold is where F first vanishes.
        // F vanishes quadratically at 1/2, so rounding limits accuracy to ~1e-8.
        let r = p_star(2, 1.0, 0.2).unwrap();
        assert!((r.value - 0.5).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn g_perp_examples() {
        assert_eq!(g_perp(0.3, 0.3, 0.0).unwrap(), 0.0);
        assert!((g_perp(0.4, 0.4, 0.5).unwrap() - 0.4).abs() < 1e-15);
        for lambda in [0.1, 0.4, 0.7] {
            let m0 = 1.0 - 2f64.powf(lambda - 1.0);
            let rate = 0.8;
            let left = rate - lambda - m0 * (2f64.powf(1.0 - lambda) - 1.0).log2();
            let right = h2(m0) - (1.0 - rate);
            assert!((left - right).abs() < 1e-12);
        }
        assert!(g_perp(0.5, 0.4, 0.1).is_err());
    }

    #[test]
    fn dual_matches_primal() {
        for rate in [0.3, 0.5, 0.7] {
            let dmax = 1.0 - 2f64.powf(rate - 1.0);
            for i in 1..=10 {
                let delta = dmax * i as f64 / 10.0;
                let a = p_star_dual(rate, rate, delta).unwrap().value;
                let b = p_star(2, 1.0 - rate, delta).unwrap().value;
                assert!((a - b).abs() <= 1e-9, "R={rate} δ={delta}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bawgn_examples() {
        assert_eq!(f_bawgn(0.5, 0.0, 1.0).unwrap(), 0.0);
        let v = f_bawgn(0.5, 0.1, 0.6).unwrap();
        let direct = -0.5 * (5.0f64 / 6.0).log2() + 0.1 * (2f64.sqrt() - 1.0).log2();
        assert!((v - direct).abs() < 1e-14);
        assert!(f_bawgn(0.5, 1.0, 1.0).is_err());
        assert!((sigma2_star_limit(0.5).unwrap() - 0.567296).abs() < 1e-6);
        let s = sigma2_star(0.5, 1e-5).unwrap();
        assert!((s.value - 0.56733).abs() < 1e-3);
        assert!(s.value > 1e-5);
        assert_eq!(sigma2_star(0.5, 0.0).unwrap().value, 0.0);
        assert!(matches!(sigma2_star(0.999_999_9, 0.5), Err(Error::BracketExhausted(_))));
    }

    #[test]
    fn lsym_and_friends() {
        assert_eq!(lsym_lower_bound(4, 0.0).unwrap(), 0.0);
        let d = 8.0 / 9.0 - 1e-3;
        assert!(lsym_lower_bound(9, d).unwrap() > johnson_radius(9, d).unwrap());
        assert!(rudra_uurtamo_p0(2, 0.2).is_err());
        let p0 = rudra_uurtamo_p0(15, 0.5).unwrap();
        assert!(p0 > 0.0 && p0 < 0.5);
        assert!((tvz_upper_bound(49, 0.0).unwrap() - q_entropy_inverse(49, 1.0 / 6.0).unwrap()).abs() < 1e-15);
        assert!(tvz_upper_bound(4, 0.1).is_err());
        assert!(tvz_upper_bound(8, 0.1).is_err());
        let (rho, l) = erasure_list_params(2, 0.3, 0.1).unwrap();
        assert!((rho - 0.57).abs() < 1e-12 && (l - 20.0).abs() < 1e-12);
        assert_eq!(erasure_list_params(3, 0.0, 0.5).unwrap().0, 0.0);
    }
}
