//! Hamming ball and sphere intersections, and Euclidean ball intersections.
//!
//! The Hamming counts are taken between the centers `0^n` and
//! `1^w 0^{n-w}`. Real radii are floored before counting.

use libm::lgamma as ln_gamma;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::entropy::{ln_add, log_sum_exp, LnFactorials};
use crate::error::{ensure, Error, Result};

/// Largest `n` for which counts are returned as exact integers.
pub const EXACT_MAX_N: usize = 40;

/// Default enumeration budget for brute-force oracles.
pub const BRUTE_FORCE_BUDGET: u128 = 100_000_000;

/// A non-negative count, exact when small enough.
#[derive(Debug, Clone, PartialEq)]
pub enum Count {
    Exact(BigUint),
    /// Natural log of the count (`-inf` for zero).
    Log(f64),
}

impl Count {
    pub fn ln(&self) -> f64 {
        match self {
            Count::Exact(v) => ln_biguint(v),
            Count::Log(l) => *l,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Count::Exact(v) => v.is_zero(),
            Count::Log(l) => *l == f64::NEG_INFINITY,
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Count::Exact(v) => Some(v),
            Count::Log(_) => None,
        }
    }
}

/// Natural log of a big integer (`-inf` for zero).
pub fn ln_biguint(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Integer radius used for counting: `floor(t)` clamped to `n`.
pub fn counting_radius(n: usize, t: f64) -> Result<usize> {
    ensure(t.is_finite() && t >= 0.0, || format!("radius {t} must be finite and >= 0"))?;
    let r = (t + 1e-9).floor();
    Ok(if r >= n as f64 { n } else { r as usize })
}

fn check_query(q: u64, n: usize, w: usize) -> Result<()> {
    ensure(q >= 2, || format!("alphabet size must be >= 2, got {q}"))?;
    ensure(n >= 1, || "block length must be >= 1".into())?;
    ensure(w <= n, || format!("center distance {w} exceeds n = {n}"))
}

fn big_binomials(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigUint::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

fn big_powers(base: u64, n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigUint::one();
    let b = BigUint::from(base);
    for _ in 0..=n {
        out.push(acc.clone());
        acc *= &b;
    }
    out
}

/// `|B(0^n, t) ∩ B(1^w 0^{n-w}, t)|`.
///
/// Exact for `n <= 40`, natural log otherwise.
pub fn mu_exact(q: u64, n: usize, t: f64, w: usize) -> Result<Count> {
    check_query(q, n, w)?;
    let t = counting_radius(n, t)?;
    if n <= EXACT_MAX_N {
        Ok(Count::Exact(mu_big(q, n, t, w)))
    } else {
        Ok(Count::Log(mu_ln_int(q, n, t, w)))
    }
}

/// Natural log of `mu_exact`, always evaluated in the log domain.
pub fn mu_log(q: u64, n: usize, t: f64, w: usize) -> Result<f64> {
    check_query(q, n, w)?;
    let t = counting_radius(n, t)?;
    Ok(mu_ln_int(q, n, t, w))
}

// y has, among the first w coordinates, `a` zeros, `c` ones and `w-s`
// other symbols (s = a + c), and `b` zeros among the last n - w.
// Then d(y, 0) = n - a - b and d(y, 1^w 0) = n - c - b.
fn mu_big(q: u64, n: usize, t: usize, w: usize) -> BigUint {
    if w > 2 * t {
        return BigUint::zero();
    }
    let binom = big_binomials(n);
    let pow_other = big_powers(q.saturating_sub(2), n);
    let pow_nonzero = big_powers(q - 1, n);
    let mut total = BigUint::zero();
    let s_min = if q == 2 { w } else { 0 };
    for s in s_min..=w {
        // prefix[k] = Σ_{a<k} C(s,a)
        let mut prefix = vec![BigUint::zero(); s + 2];
        for a in 0..=s {
            prefix[a + 1] = &prefix[a] + &binom[s][a];
        }
        let weight_s = &binom[w][s] * &pow_other[w - s];
        let mut inner = BigUint::zero();
        for b in 0..=(n - w) {
            let m = n as i64 - t as i64 - b as i64;
            let lo = m.max(0);
            let hi = (s as i64).min(s as i64 - m);
            if lo > hi {
                continue;
            }
            let range = &prefix[hi as usize + 1] - &prefix[lo as usize];
            inner += range * &binom[n - w][b] * &pow_nonzero[n - w - b];
        }
        total += weight_s * inner;
    }
    total
}

fn mu_ln_int(q: u64, n: usize, t: usize, w: usize) -> f64 {
    if w > 2 * t {
        return f64::NEG_INFINITY;
    }
    let lf = LnFactorials::new(n);
    let ln_other = if q > 2 { ((q - 2) as f64).ln() } else { f64::NEG_INFINITY };
    let ln_nonzero = ((q - 1) as f64).ln();
    let s_min = if q == 2 { w } else { 0 };
    let outer: Vec<f64> = (s_min..=w)
        .into_par_iter()
        .map(|s| {
            // lower[m] = ln Σ_{a=m}^{ceil(s/2)-1} C(s,a), filled downward.
            let half = s.div_ceil(2);
            let mut lower = vec![f64::NEG_INFINITY; half + 1];
            for a in (0..half).rev() {
                lower[a] = ln_add(lower[a + 1], lf.ln_binomial(s, a));
            }
            let middle = if s % 2 == 0 { lf.ln_binomial(s, s / 2) } else { f64::NEG_INFINITY };
            let s_power = if w == s { 0.0 } else { (w - s) as f64 * ln_other };
            let terms = (0..=(n - w)).filter_map(|b| {
                let m = (n as i64 - t as i64 - b as i64).max(0) as usize;
                if 2 * m > s {
                    return None;
                }
                // Σ_{a=m}^{s-m} C(s,a), symmetric about s/2.
                let range = ln_add(std::f64::consts::LN_2 + lower[m], middle);
                let tail = (n - w - b) as f64 * ln_nonzero;
                Some(range + lf.ln_binomial(n - w, b) + tail)
            });
            lf.ln_binomial(w, s) + s_power + log_sum_exp(terms)
        })
        .collect();
    log_sum_exp(outer)
}

/// `|S(0^n, t1) ∩ S(1^w 0^{n-w}, t2)|` for spheres of integer radii.
pub fn nu_exact(q: u64, n: usize, t1: usize, t2: usize, w: usize) -> Result<Count> {
    check_query(q, n, w)?;
    if n <= EXACT_MAX_N {
        Ok(Count::Exact(nu_big(q, n, t1, t2, w)))
    } else {
        Ok(Count::Log(nu_ln(q, n, t1, t2, w)))
    }
}

/// Natural log of `nu_exact`, always in the log domain.
pub fn nu_log(q: u64, n: usize, t1: usize, t2: usize, w: usize) -> Result<f64> {
    check_query(q, n, w)?;
    Ok(nu_ln(q, n, t1, t2, w))
}

// With `b` zeros outside the first w coordinates, the two sphere equations
// fix a = n - b - t1 zeros and c = n - b - t2 ones inside them.
fn nu_terms(q: u64, n: usize, t1: usize, t2: usize, w: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for b in 0..=(n - w) {
        let a = n as i64 - b as i64 - t1 as i64;
        let c = n as i64 - b as i64 - t2 as i64;
        if a < 0 || c < 0 || a + c > w as i64 {
            continue;
        }
        if q == 2 && a + c != w as i64 {
            continue;
        }
        out.push((a as usize, b, c as usize));
    }
    out
}

fn nu_big(q: u64, n: usize, t1: usize, t2: usize, w: usize) -> BigUint {
    let binom = big_binomials(n);
    let pow_other = big_powers(q.saturating_sub(2), n);
    let pow_nonzero = big_powers(q - 1, n);
    let mut total = BigUint::zero();
    for (a, b, c) in nu_terms(q, n, t1, t2, w) {
        total += &binom[w][a] * &binom[w - a][c] * &pow_other[w - a - c] * &binom[n - w][b] * &pow_nonzero[n - w - b];
    }
    total
}

fn nu_ln(q: u64, n: usize, t1: usize, t2: usize, w: usize) -> f64 {
    let lf = LnFactorials::new(n);
    let ln_other = if q > 2 { ((q - 2) as f64).ln() } else { 0.0 };
    let ln_nonzero = ((q - 1) as f64).ln();
    log_sum_exp(nu_terms(q, n, t1, t2, w).into_iter().map(|(a, b, c)| {
        lf.ln_binomial(w, a)
            + lf.ln_binomial(w - a, c)
            + (w - a - c) as f64 * ln_other
            + lf.ln_binomial(n - w, b)
            + (n - w - b) as f64 * ln_nonzero
    }))
}

/// Ball or sphere intersection for the brute-force oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMode {
    Ball,
    Sphere,
}

/// Joint histogram of `(d(y, 0^n), d(y, 1^w 0^{n-w}))` over all words `y`.
#[derive(Debug, Clone)]
pub struct DistancePairHistogram {
    n: usize,
    counts: Vec<u64>,
}

impl DistancePairHistogram {
    /// Enumerates all `q^n` words; fails when that exceeds `budget`.
    pub fn enumerate(q: u64, n: usize, w: usize, budget: u128) -> Result<Self> {
        check_query(q, n, w)?;
        let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::Budget { what: "words", needed: total, limit: budget });
        }
        // Split on a prefix so the work parallelizes, then walk the suffix
        // with an odometer that updates both distances incrementally.
        let mut prefix_len = 0;
        while prefix_len < n && (q as u128).pow(prefix_len as u32) < 256 {
            prefix_len += 1;
        }
        let prefixes = q.pow(prefix_len as u32);
        let side = n + 1;
        let counts = (0..prefixes)
            .into_par_iter()
            .fold(
                || vec![0u64; side * side],
                |mut acc, p| {
                    let mut word = vec![0u64; n];
                    let mut rest = p;
                    for slot in word.iter_mut().take(prefix_len) {
                        *slot = rest % q;
                        rest /= q;
                    }
                    let target = |i: usize| u64::from(i < w);
                    let mut d0: usize = word.iter().filter(|&&s| s != 0).count();
                    let mut d1: usize = word.iter().enumerate().filter(|&(i, &s)| s != target(i)).count();
                    loop {
                        acc[d0 * side + d1] += 1;
                        let mut i = prefix_len;
                        loop {
                            if i == n {
                                return acc;
                            }
                            let old = word[i];
                            let new = if old + 1 == q { 0 } else { old + 1 };
                            word[i] = new;
                            d0 = d0 + usize::from(new != 0) - usize::from(old != 0);
                            d1 = d1 + usize::from(new != target(i)) - usize::from(old != target(i));
                            if new != 0 {
                                break;
                            }
                            i += 1;
                        }
                    }
                },
            )
            .reduce(
                || vec![0u64; side * side],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        Ok(DistancePairHistogram { n, counts })
    }

    pub fn get(&self, d0: usize, d1: usize) -> u64 {
        self.counts[d0 * (self.n + 1) + d1]
    }

    pub fn sphere(&self, t1: usize, t2: usize) -> u64 {
        if t1 > self.n || t2 > self.n {
            return 0;
        }
        self.get(t1, t2)
    }

    pub fn ball(&self, t1: usize, t2: usize) -> u64 {
        let (t1, t2) = (t1.min(self.n), t2.min(self.n));
        let mut total = 0;
        for d0 in 0..=t1 {
            for d1 in 0..=t2 {
                total += self.get(d0, d1);
            }
        }
        total
    }
}

/// Exhaustive intersection count over all of `Σ^n`.
pub fn brute_force_intersection(
    q: u64,
    n: usize,
    t1: usize,
    t2: usize,
    w: usize,
    mode: IntersectionMode,
) -> Result<u64> {
    let hist = DistancePairHistogram::enumerate(q, n, w, BRUTE_FORCE_BUDGET)?;
    Ok(match mode {
        IntersectionMode::Ball => hist.ball(t1, t2),
        IntersectionMode::Sphere => hist.sphere(t1, t2),
    })
}

/// Natural log of `|B(0^n, t)| = Σ_{i<=floor(t)} C(n,i)(q-1)^i`.
pub fn ball_volume_log(q: u64, n: usize, t: f64) -> Result<f64> {
    ensure(q >= 2, || format!("alphabet size must be >= 2, got {q}"))?;
    ensure(t <= n as f64 + 1e-9, || format!("radius {t} exceeds n = {n}"))?;
    let t = counting_radius(n, t)?;
    let lf = LnFactorials::new(n);
    let ln_nonzero = ((q - 1) as f64).ln();
    Ok(log_sum_exp((0..=t).map(|i| lf.ln_binomial(n, i) + i as f64 * ln_nonzero)))
}

/// Natural log of the volume of the intersection of two `n`-dimensional
/// balls of radius `r` whose centers are `d` apart.
pub fn euclid_intersection(n: usize, r: f64, d: f64) -> Result<f64> {
    ensure(n >= 1, || "dimension must be >= 1".into())?;
    ensure(r > 0.0 && r.is_finite(), || format!("radius {r} must be positive"))?;
    ensure(d >= 0.0 && d.is_finite(), || format!("center distance {d} must be >= 0"))?;
    let a = d / (2.0 * r);
    if a >= 1.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let m = (n as f64 - 1.0) / 2.0;
    // Volume = 2 V_{n-1}(1) r^n ∫_a^1 (1 - β²)^m dβ.
    let ln_prefactor = std::f64::consts::LN_2 + m * std::f64::consts::PI.ln() - ln_gamma(m + 1.0) + n as f64 * r.ln();
    Ok(ln_prefactor + ln_cap_integral(m, a))
}

/// `ln ∫_a^1 (1 - β²)^m dβ` for `0 <= a < 1`.
fn ln_cap_integral(m: f64, a: f64) -> f64 {
    if m == 0.0 {
        return (1.0 - a).ln();
    }
    let ln_peak = (1.0 - a * a).ln();
    // Scaled so the integrand equals 1 at β = a and decays towards 1.
    let f = |b: f64| {
        let v = 1.0 - b * b;
        if v <= 0.0 {
            0.0
        } else {
            (m * (v.ln() - ln_peak)).exp()
        }
    };
    let width = 1.0 - a;
    let mut knots = vec![a];
    for k in (1..=60).rev() {
        let x = a + width * 0.5f64.powi(k);
        if x > *knots.last().unwrap() {
            knots.push(x);
        }
    }
    knots.push(1.0);
    let coarse: f64 = knots.windows(2).map(|s| simpson(&f, s[0], s[1])).sum();
    let tol = (coarse.abs() * 1e-13).max(f64::MIN_POSITIVE);
    let mut total = 0.0;
    for s in knots.windows(2) {
        let whole = simpson(&f, s[0], s[1]);
        total += adaptive_simpson(&f, s[0], s[1], whole, tol / knots.len() as f64, 48);
    }
    m * ln_peak + total.ln()
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b))
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let left = simpson(f, a, c);
    let right = simpson(f, c, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, c, left, tol / 2.0, depth - 1) + adaptive_simpson(f, c, b, right, tol / 2.0, depth - 1)
}

/// Log-domain lower and upper bounds on the intersection volume of two
/// balls of radius `zeta·√n` at distance `2·gamma·√n`.
pub fn euclid_intersection_bounds(n: usize, zeta: f64, gamma: f64) -> Result<(f64, f64)> {
    ensure(n >= 1, || "dimension must be >= 1".into())?;
    ensure(zeta > 0.0 && zeta.is_finite(), || format!("zeta = {zeta} must be positive"))?;
    ensure(gamma >= 0.0 && gamma.is_finite(), || format!("gamma = {gamma} must be >= 0"))?;
    if gamma >= zeta {
        return Ok((f64::NEG_INFINITY, f64::NEG_INFINITY));
    }
    let nf = n as f64;
    let common = 0.5 * ((zeta - gamma) / (zeta + gamma)).ln()
        + nf / 2.0 * (2.0 * std::f64::consts::E * std::f64::consts::PI).ln()
        + nf / 2.0 * (zeta * zeta - gamma * gamma).ln();
    let lower = -(80.0 * nf * nf).ln() + common;
    let upper = ((2.0 * std::f64::consts::E).sqrt() / std::f64::consts::PI).ln() + common;
    Ok((lower, upper))
}
