//! Finite-length bounds evaluated on explicit codes and weight distributions.

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::erasure::ErasureProfile;
use super::list::list_size_max;
use super::{LinearCode, WeightDistribution};
use crate::entropy::{bhattacharyya, hq, log_sum_exp, unit, Channel};
use crate::error::{ensure, Error, Result};
use crate::geometry::{euclid_intersection, mu_exact, nu_exact, Count};

/// Relative slack used when comparing a computed bound with its target.
pub const CHECK_SLACK: f64 = 1e-9;

fn tau(q: u64, lambda: f64) -> f64 {
    let qf = q as f64;
    (qf.powf(lambda) - 1.0) / (qf - 1.0)
}

fn holds(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + CHECK_SLACK * rhs.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamorodnitskyCheck {
    /// `Σ A_i τ^i` with `τ = (q^λ - 1)/(q - 1)`.
    pub lhs: f64,
    /// `2^{H(X|Y)}` on the erasure channel.
    pub rhs: f64,
    pub holds: bool,
}

/// Weight-distribution bound by the erasure-channel conditional entropy.
pub fn check_samorodnitsky(code: &LinearCode, lambda: f64) -> Result<SamorodnitskyCheck> {
    let lambda = unit(lambda, "lambda")?;
    let weights = code.weight_distribution()?;
    let profile = ErasureProfile::new(code)?;
    samorodnitsky_from(&weights, &profile, lambda)
}

pub(crate) fn samorodnitsky_from(
    weights: &WeightDistribution,
    profile: &ErasureProfile,
    lambda: f64,
) -> Result<SamorodnitskyCheck> {
    let t = tau(weights.q, lambda);
    let lhs = weights.counts.iter().enumerate().map(|(i, &a)| a as f64 * t.powi(i as i32)).sum();
    let rhs = profile.entropy_bits(lambda)?.exp2();
    Ok(SamorodnitskyCheck { lhs, rhs, holds: holds(lhs, rhs) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualWeightBound {
    pub w: usize,
    pub actual: u64,
    /// `τ^{-w} 2^{H(X|Y)}`.
    pub primal: f64,
    /// `|C| 2^{H(X⊥|Y⊥)}` times the three-branch factor.
    pub dual: f64,
    pub holds: bool,
}

/// Natural log of the three-branch factor in the dual weight bound.
pub fn dual_branch_ln(q: u64, tau: f64, n: usize, w: usize) -> f64 {
    let qf = q as f64;
    let nf = n as f64;
    let gamma = w as f64 / nf;
    let left = (qf - 1.0) / qf * (1.0 - tau);
    let right = (qf - 1.0) / qf * (1.0 + tau);
    if gamma < left {
        -gamma * nf * (1.0 - tau).ln() - (1.0 - gamma) * nf * (1.0 + (qf - 1.0) * tau).ln()
    } else if gamma <= right {
        -nf * (1.0 - hq(qf, gamma)) * qf.ln()
    } else {
        -gamma * nf * (1.0 + tau).ln() - (1.0 - gamma) * nf * (1.0 - (qf - 1.0) * tau).ln()
    }
}

/// Both weight bounds at a single weight `w`.
pub fn dual_weight_bound(code: &LinearCode, lambda: f64, w: usize) -> Result<DualWeightBound> {
    ensure(w <= code.n(), || format!("weight {w} exceeds n = {}", code.n()))?;
    Ok(dual_weight_bounds(code, lambda)?.swap_remove(w))
}

/// Both weight bounds at every weight.
pub fn dual_weight_bounds(code: &LinearCode, lambda: f64) -> Result<Vec<DualWeightBound>> {
    ensure(lambda > 0.0 && lambda <= 1.0, || format!("lambda = {lambda} outside (0,1]"))?;
    let weights = code.weight_distribution()?;
    let h = ErasureProfile::new(code)?.entropy_bits(lambda)?;
    let h_dual = ErasureProfile::new(&code.dual())?.entropy_bits(lambda)?;
    let t = tau(code.q(), lambda);
    let n = code.n();
    let size_ln = code.k() as f64 * (code.q() as f64).ln();
    Ok((0..=n)
        .map(|w| {
            let actual = weights.counts[w];
            let primal = (h * std::f64::consts::LN_2 - w as f64 * t.ln()).exp();
            let dual = (size_ln + h_dual * std::f64::consts::LN_2 + dual_branch_ln(code.q(), t, n, w)).exp();
            let a = actual as f64;
            DualWeightBound { w, actual, primal, dual, holds: holds(a, primal) && holds(a, dual) }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleCountingReport {
    pub t1: usize,
    pub t2: usize,
    pub list_size: u64,
    /// `max_w A_w ν(n,t1,t2,w) - C(n,t1)(q-1)^{t1} L`; at most 0 when the bound holds.
    #[serde(serialize_with = "serialize_display")]
    pub max_violation: BigInt,
    pub worst_w: usize,
}

fn serialize_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl DoubleCountingReport {
    pub fn holds(&self) -> bool {
        self.max_violation <= BigInt::from(0)
    }
}

/// Double-counting bound with the list size measured at radius `t2`.
pub fn check_double_counting(code: &LinearCode, t1: usize, t2: usize) -> Result<DoubleCountingReport> {
    let list = list_size_max(code, t2)?.list_size;
    check_double_counting_with_list(&code.weight_distribution()?, t1, t2, list)
}

/// Double-counting bound for a caller-supplied list size `list`.
pub fn check_double_counting_with_list(
    weights: &WeightDistribution,
    t1: usize,
    t2: usize,
    list: u64,
) -> Result<DoubleCountingReport> {
    let (q, n) = (weights.q, weights.n());
    ensure(t1 <= n && t2 <= n, || format!("radii ({t1},{t2}) exceed n = {n}"))?;
    let sphere = sphere_size(q, n, t1);
    let cap = BigInt::from(sphere) * BigInt::from(list);
    let mut worst = None::<(BigInt, usize)>;
    for (w, &a) in weights.counts.iter().enumerate() {
        let Count::Exact(nu) = nu_exact(q, n, t1, t2, w)? else {
            return Err(Error::Domain(format!("exact counts need n <= 40, got {n}")));
        };
        let v = BigInt::from(a) * BigInt::from(nu) - &cap;
        if worst.as_ref().is_none_or(|(m, _)| v > *m) {
            worst = Some((v, w));
        }
    }
    let (max_violation, worst_w) = worst.expect("n >= 0 gives at least one weight");
    Ok(DoubleCountingReport { t1, t2, list_size: list, max_violation, worst_w })
}

/// `C(n,t)(q-1)^t` exactly.
fn sphere_size(q: u64, n: usize, t: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..t {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c * BigUint::from(q - 1).pow(t as u32)
}

/// Parameters of the symmetric-channel block error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoltyrevParams {
    pub p: f64,
    /// Exponent of the radius slack `n^θ`, in `(1/2, 1)`.
    pub theta: f64,
    /// Weights `1..=w0` use the union term, heavier ones the intersection term.
    pub w0: usize,
}

impl PoltyrevParams {
    pub fn new(p: f64, theta: f64, w0: usize) -> Result<Self> {
        ensure(theta > 0.5 && theta < 1.0, || format!("theta = {theta} outside (1/2, 1)"))?;
        ensure(w0 >= 1, || "w0 must be >= 1".into())?;
        Ok(PoltyrevParams { p, theta, w0 })
    }

    /// `θ = 3/4` and `w0 = ⌈αn⌉ - 1` (at least 1).
    pub fn with_fraction(p: f64, alpha: f64, n: usize) -> Result<Self> {
        ensure(alpha > 0.0 && alpha <= 1.0, || format!("alpha = {alpha} outside (0,1]"))?;
        let w0 = ((alpha * n as f64).ceil() as usize).saturating_sub(1).max(1);
        PoltyrevParams::new(p, 0.75, w0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoltyrevBound {
    pub raw: f64,
    pub clamped: f64,
    /// `2 exp(-2 n^{2θ-1})`.
    pub concentration: f64,
    /// `Σ_{w<=w0} A_w Z^w`.
    pub union: f64,
    /// Ball-intersection term over `w > w0`.
    pub intersection: f64,
}

/// Block error bound on `qSC_p` from a weight distribution.
pub fn poltyrev_bound(weights: &WeightDistribution, params: PoltyrevParams) -> Result<PoltyrevBound> {
    let (q, n) = (weights.q, weights.n());
    let qf = q as f64;
    let p = params.p;
    ensure(p > 0.0 && p <= 1.0 - 1.0 / qf, || format!("p = {p} outside (0, 1 - 1/q]"))?;
    ensure(params.w0 >= 1 && params.w0 <= n, || format!("w0 = {} outside [1, {n}]", params.w0))?;
    let nf = n as f64;
    let slack = nf.powf(params.theta);
    let concentration = 2.0 * (-2.0 * nf.powf(2.0 * params.theta - 1.0)).exp();
    let z = bhattacharyya(&Channel::qsc(q, p)?)?;
    let union = (1..=params.w0).map(|w| weights.counts[w] as f64 * z.powi(w as i32)).sum();
    let t = p * nf + slack;
    let mut terms = Vec::new();
    for w in params.w0 + 1..=n {
        let a = weights.counts[w];
        if a > 0 {
            terms.push((a as f64).ln() + mu_exact(q, n, t, w)?.ln());
        }
    }
    let prefactor = slack * ((1.0 - p) * (qf - 1.0) / p).ln() - nf * hq(qf, p) * qf.ln();
    let intersection = (prefactor + log_sum_exp(terms)).exp();
    let raw = concentration + union + intersection;
    Ok(PoltyrevBound { raw, clamped: raw.min(1.0), concentration, union, intersection })
}

/// Block error bound `c^d/(1-c) · 2^{H(X|Y)}`, `c = Z(W)(q-1)/(q^λ-1)`.
pub fn union_bhattacharyya_bound(code: &LinearCode, channel: &Channel, lambda: f64) -> Result<f64> {
    ensure(lambda > 0.0 && lambda <= 1.0, || format!("lambda = {lambda} outside (0,1]"))?;
    let h = ErasureProfile::new(code)?.entropy_bits(lambda)?;
    union_bhattacharyya_bound_with_entropy(&code.weight_distribution()?, channel, lambda, h)
}

/// Same bound with a caller-supplied entropy `h_bits`.
pub fn union_bhattacharyya_bound_with_entropy(
    weights: &WeightDistribution,
    channel: &Channel,
    lambda: f64,
    h_bits: f64,
) -> Result<f64> {
    ensure(lambda > 0.0 && lambda <= 1.0, || format!("lambda = {lambda} outside (0,1]"))?;
    ensure(channel.alphabet() == weights.q, || {
        format!("channel alphabet {} does not match code alphabet {}", channel.alphabet(), weights.q)
    })?;
    let c = bhattacharyya(channel)? / tau(weights.q, lambda);
    if c >= 1.0 {
        return Err(Error::Inapplicable(format!("c = {c} is not below 1")));
    }
    let Some(d) = weights.min_distance() else {
        return Ok(0.0);
    };
    Ok(c.powi(d as i32) / (1.0 - c) * h_bits.exp2())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereBoundParams {
    pub sigma2: f64,
    /// Shell half-width, in `[0, 4]`.
    pub s: f64,
}

impl SphereBoundParams {
    pub fn new(sigma2: f64, s: f64) -> Result<Self> {
        ensure(sigma2 > 0.0 && sigma2.is_finite(), || format!("sigma^2 = {sigma2} must be positive"))?;
        ensure((0.0..=4.0).contains(&s), || format!("s = {s} outside [0, 4]"))?;
        Ok(SphereBoundParams { sigma2, s })
    }
}

/// Gaussian-channel block error bound for list size `list` (1 for unique
/// decoding) from a binary weight distribution.
pub fn sphere_bound(weights: &WeightDistribution, params: SphereBoundParams, list: u64) -> Result<f64> {
    ensure(weights.q == 2, || format!("sphere bound needs a binary code, got q = {}", weights.q))?;
    ensure(list >= 1, || "list size must be >= 1".into())?;
    let SphereBoundParams { sigma2, s } = SphereBoundParams::new(params.sigma2, params.s)?;
    let n = weights.n();
    let nf = n as f64;
    let sigma = sigma2.sqrt();
    let radius = (1.0 + s) * sigma * nf.sqrt();
    let mut terms = Vec::new();
    for (w, &a) in weights.counts.iter().enumerate().skip(1) {
        if a > 0 {
            terms.push((a as f64).ln() + euclid_intersection(n, radius, 2.0 * (w as f64).sqrt())?);
        }
    }
    let ln_density = -nf / 2.0 + s * nf / 2.0 - nf * ((2.0 * std::f64::consts::PI).sqrt() * sigma).ln();
    let first = (ln_density + log_sum_exp(terms) - (list as f64).ln()).exp();
    Ok(first + 2.0 * (-s * s * nf / 16.0).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samorodnitsky_examples() {
        let full = LinearCode::full_space(2, 6).unwrap();
        let c = check_samorodnitsky(&full, 0.4).unwrap();
        assert!((c.lhs - c.rhs).abs() < 1e-12 * c.rhs);
        assert!(c.holds);
        let zero = LinearCode::zero(2, 5).unwrap();
        let c = check_samorodnitsky(&zero, 0.4).unwrap();
        assert_eq!((c.lhs, c.rhs), (1.0, 1.0));
    }

    #[test]
    fn dual_bound_examples() {
        let ham = LinearCode::hamming_7_4();
        for lambda in [0.2, 0.5, 0.9] {
            let all = dual_weight_bounds(&ham, lambda).unwrap();
            assert!(all[0].primal >= 1.0);
            assert!(all.iter().all(|b| b.holds), "{all:?}");
        }
        assert_eq!(dual_weight_bound(&ham, 0.5, 3).unwrap().actual, 7);
    }

    #[test]
    fn dual_branches_are_continuous() {
        for &(q, lambda) in &[(2u64, 0.3), (2, 0.7), (3, 0.4), (5, 0.2)] {
            let t = tau(q, lambda);
            let qf = q as f64;
            for edge in [(qf - 1.0) / qf * (1.0 - t), (qf - 1.0) / qf * (1.0 + t)] {
                if edge >= 1.0 {
                    continue;
                }
                // Evaluate the per-coordinate exponents on both sides of the edge.
                let n = 1_000_000usize;
                let w = (edge * n as f64) as usize;
                let a = dual_branch_ln(q, t, n, w) / n as f64;
                let b = dual_branch_ln(q, t, n, w + 1) / n as f64;
                assert!((a - b).abs() < 1e-5, "q={q} λ={lambda}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn double_counting_examples() {
        let ham = LinearCode::hamming_7_4();
        let r = check_double_counting(&ham, 1, 1).unwrap();
        assert_eq!(r.list_size, 1);
        assert!(r.holds());
        let zero = LinearCode::zero(2, 6).unwrap();
        let r = check_double_counting(&zero, 2, 2).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn poltyrev_examples() {
        let zero = LinearCode::zero(2, 5).unwrap().weight_distribution().unwrap();
        let b = poltyrev_bound(&zero, PoltyrevParams::new(0.1, 0.75, 2).unwrap()).unwrap();
        let conc = 2.0 * (-2.0 * 5f64.powf(0.5)).exp();
        assert!((b.raw - conc).abs() < 1e-15);
        let rep = LinearCode::repetition(2, 3).unwrap().weight_distribution().unwrap();
        let b = poltyrev_bound(&rep, PoltyrevParams::new(0.1, 0.75, 3).unwrap()).unwrap();
        assert!(b.raw >= 0.028);
        assert!(PoltyrevParams::new(0.1, 0.5, 1).is_err());
        assert!(poltyrev_bound(&rep, PoltyrevParams::new(0.6, 0.75, 1).unwrap()).is_err());
    }

    #[test]
    fn union_bound_examples() {
        let ch = Channel::qsc(2, 0.01).unwrap();
        let mut prev = f64::INFINITY;
        for n in 3..=15 {
            let rep = LinearCode::repetition(2, n).unwrap();
            let b = union_bhattacharyya_bound(&rep, &ch, 0.5).unwrap();
            assert!(b < prev);
            prev = b;
        }
        let noisy = Channel::qsc(2, 0.4).unwrap();
        let rep = LinearCode::repetition(2, 5).unwrap();
        assert!(matches!(union_bhattacharyya_bound(&rep, &noisy, 0.5), Err(Error::Inapplicable(_))));
        let zero = LinearCode::zero(2, 4).unwrap();
        assert_eq!(union_bhattacharyya_bound(&zero, &ch, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn sphere_bound_examples() {
        let zero = LinearCode::zero(2, 8).unwrap().weight_distribution().unwrap();
        let p = SphereBoundParams::new(0.5, 1.0).unwrap();
        let b = sphere_bound(&zero, p, 1).unwrap();
        assert!((b - 2.0 * (-8.0f64 / 16.0).exp()).abs() < 1e-15);
        let rep = LinearCode::repetition(2, 10).unwrap().weight_distribution().unwrap();
        let exact = super::super::repetition_bawgn_block_error(10, 0.5).unwrap();
        for s in [0.2, 0.5, 1.0, 2.0] {
            let b = sphere_bound(&rep, SphereBoundParams::new(0.5, s).unwrap(), 1).unwrap();
            assert!(b >= exact, "s={s}: {b} < {exact}");
        }
        assert!(SphereBoundParams::new(0.5, 4.5).is_err());
    }
}
