//! Property suites over the whole library, each reporting its worst margin.
//!
//! A margin is how far a case is from violating its property; a case fails
//! when its margin drops below minus the property's tolerance.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::code::{
    check_double_counting_with_list, check_samorodnitsky, corpus, dual_weight_bounds, erasure_error_exact,
    erasure_list_size_max, list_size_max_with, poltyrev_bound, qsc_block_error_exact, random_binary_codes,
    repetition_bawgn_block_error, sphere_bound, union_bhattacharyya_bound, CenterSearch, ErasureProfile, LinearCode,
    PoltyrevParams, SphereBoundParams, CHECK_SLACK, CORPUS_SEED,
};
use crate::entropy::{q_entropy, q_entropy_tilde, Channel};
use crate::error::{Error, Result};
use crate::exponents::{dm_dgamma0_reference, f_q, m_q, solve_zeta};
use crate::figures::open_grid;
use crate::geometry::{mu_exact, mu_log, nu_exact, nu_log, Count, DistancePairHistogram, BRUTE_FORCE_BUDGET};
use crate::montecarlo::{inverse_normal_cdf, point_seed, simulate, wilson_interval, SimulationSpec, TieBreak};
use crate::thresholds::{
    g_perp, johnson_radius, lsym_lower_bound, p_star, p_star_dual, p_star_small_delta_limit, sigma2_star,
    sigma2_star_limit,
};

/// Grid resolution of the concavity and monotonicity sweeps.
pub const RESOLUTION: usize = 1000;

/// Family-wise false alarm rate of each Monte Carlo property.
pub const FAMILY_ALPHA: f64 = 1e-3;

/// Two-sided Bonferroni quantile for `comparisons` intervals at [`FAMILY_ALPHA`].
pub fn family_z(comparisons: usize) -> f64 {
    -inverse_normal_cdf(FAMILY_ALPHA / (2.0 * comparisons.max(1) as f64))
}

const RANDOM_CODE_SEED: u64 = 0x5a_4d_0b_ee;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Geometry,
    Exponents,
    Thresholds,
    Codes,
    Bounds,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Geometry, Suite::Exponents, Suite::Thresholds, Suite::Codes, Suite::Bounds];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Exponents => "exponents",
            Suite::Thresholds => "thresholds",
            Suite::Codes => "codes",
            Suite::Bounds => "bounds",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub suite: Suite,
    pub property: String,
    pub cases: u64,
    pub violations: u64,
    pub tolerance: f64,
    /// Smallest margin seen; `-inf` when a case could not be evaluated.
    pub worst_margin: f64,
    pub worst_case: String,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.cases > 0 && self.violations == 0
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {} cases, {} violations, worst margin {:.3e} at {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.property,
            self.cases,
            self.violations,
            self.worst_margin,
            self.worst_case
        )
    }
}

struct Tracker {
    report: PropertyReport,
}

impl Tracker {
    fn new(suite: Suite, property: &str, tolerance: f64) -> Self {
        Tracker {
            report: PropertyReport {
                suite,
                property: property.to_string(),
                cases: 0,
                violations: 0,
                tolerance,
                worst_margin: f64::INFINITY,
                worst_case: String::from("-"),
            },
        }
    }

    fn record<C: FnOnce() -> String>(&mut self, margin: f64, case: C) {
        let r = &mut self.report;
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        r.cases += 1;
        if margin < -r.tolerance {
            r.violations += 1;
        }
        if margin < r.worst_margin {
            r.worst_margin = margin;
            r.worst_case = case();
        }
    }

    fn record_result<C: FnOnce() -> String>(&mut self, margin: Result<f64>, case: C) {
        match margin {
            Ok(m) => self.record(m, case),
            Err(e) => self.record(f64::NEG_INFINITY, || format!("{} ({e})", case())),
        }
    }

    fn finish(self) -> PropertyReport {
        self.report
    }
}

pub fn run(suite: Suite) -> Vec<PropertyReport> {
    match suite {
        Suite::Geometry => geometry(),
        Suite::Exponents => exponents(),
        Suite::Thresholds => thresholds(),
        Suite::Codes => codes(),
        Suite::Bounds => bounds(),
        Suite::All => Suite::EACH.into_iter().flat_map(run).collect(),
    }
}

fn exact_u64(c: &Count) -> Option<u64> {
    c.exact().and_then(|v| u64::try_from(v).ok())
}

/// Log-size exponent bound check, `ln μ <= 2 ln n + n M ln q`.
fn intersection_upper_margin(q: u64, n: usize, t: usize, w: usize, ln_mu: f64) -> Result<f64> {
    let (nf, qf) = (n as f64, q as f64);
    let m = m_q(q, w as f64 / nf, t as f64 / nf)?;
    Ok(2.0 * nf.ln() + nf * m * qf.ln() - ln_mu)
}

/// `ln ν_2(n,t,t,w) >= n M ln 2 - ln 4n`.
fn intersection_lower_margin(n: usize, t: usize, w: usize, ln_nu: f64) -> Result<f64> {
    let nf = n as f64;
    let m = m_q(2, w as f64 / nf, t as f64 / nf)?;
    Ok(ln_nu - (nf * m * std::f64::consts::LN_2 - (4.0 * nf).ln()))
}

fn geometry() -> Vec<PropertyReport> {
    let s = Suite::Geometry;
    let mut mu = Tracker::new(s, "ball intersection count equals enumeration (q in {2,3}, n <= 10)", 0.0);
    let mut nu = Tracker::new(s, "sphere intersection count equals enumeration (q in {2,3}, n <= 10)", 0.0);
    let mut upper = Tracker::new(s, "ball intersection <= n^2 q^(n M)", 1e-9);
    let mut lower = Tracker::new(s, "binary sphere intersection >= 2^(n M)/(4n), even w <= 2t <= n", 1e-9);
    let mut logs = Tracker::new(s, "log-domain counts agree with exact counts", 1e-9);
    for q in [2u64, 3] {
        for n in 1..=10usize {
            for w in 0..=n {
                let hist = match DistancePairHistogram::enumerate(q, n, w, BRUTE_FORCE_BUDGET) {
                    Ok(h) => h,
                    Err(e) => {
                        mu.record(f64::NEG_INFINITY, || format!("q={q} n={n} w={w}: {e}"));
                        continue;
                    }
                };
                for t in 0..=n {
                    let case = || format!("q={q} n={n} t={t} w={w}");
                    let count = mu_exact(q, n, t as f64, w).ok();
                    let brute = hist.ball(t, t);
                    let got = count.as_ref().and_then(exact_u64);
                    mu.record(if got == Some(brute) { 0.0 } else { -1.0 }, case);
                    if let Some(c) = &count {
                        if let Ok(l) = mu_log(q, n, t as f64, w) {
                            logs.record(log_agreement(c.ln(), l), case);
                        }
                        let top = (q - 1) as f64 / q as f64;
                        if w <= 2 * t && t as f64 <= top * n as f64 + 1e-12 {
                            upper.record_result(intersection_upper_margin(q, n, t, w, c.ln()), case);
                        }
                    }
                    for t2 in 0..=n {
                        let case = || format!("q={q} n={n} t1={t} t2={t2} w={w}");
                        let got = nu_exact(q, n, t, t2, w).ok();
                        let ok = got.as_ref().and_then(exact_u64) == Some(hist.sphere(t, t2));
                        nu.record(if ok { 0.0 } else { -1.0 }, case);
                        if q == 2 && t2 == t && w % 2 == 0 && w <= 2 * t && 2 * t <= n {
                            if let Some(c) = &got {
                                lower.record_result(intersection_lower_margin(n, t, w, c.ln()), case);
                            }
                        }
                    }
                }
            }
        }
    }
    for n in [50usize, 200, 3000] {
        for q in [2u64, 3] {
            for (t, w) in large_grid(q, n) {
                let case = || format!("q={q} n={n} t={t} w={w}");
                upper.record_result(
                    mu_log(q, n, t as f64, w).and_then(|l| intersection_upper_margin(q, n, t, w, l)),
                    case,
                );
                if q == 2 && w % 2 == 0 && 2 * t <= n {
                    lower
                        .record_result(nu_log(2, n, t, t, w).and_then(|l| intersection_lower_margin(n, t, w, l)), case);
                }
            }
        }
    }
    vec![mu.finish(), nu.finish(), upper.finish(), lower.finish(), logs.finish()]
}

fn log_agreement(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        return 0.0;
    }
    -(a - b).abs() / a.abs().max(1.0)
}

/// Radii `t = pn` for `p` in steps of 0.05 up to `1 - 1/q`, and even
/// distances `w = γn` for `γ` in steps of 0.1 up to `min(2p, 1)`.
pub fn large_grid(q: u64, n: usize) -> Vec<(usize, usize)> {
    let top = 1.0 - 1.0 / q as f64;
    let mut out = Vec::new();
    for i in 1..=20 {
        let p = 0.05 * i as f64;
        if p > top + 1e-12 {
            break;
        }
        let t = (p * n as f64).round() as usize;
        for j in 0..=10 {
            let w = 2 * ((0.05 * j as f64 * n as f64).round() as usize);
            if w <= 2 * t && w <= n {
                out.push((t, w));
            }
        }
    }
    out
}

fn exponents() -> Vec<PropertyReport> {
    let s = Suite::Exponents;
    let qs = [2u64, 3, 5];
    let mut concave = Tracker::new(s, "gamma -> M_q(gamma, p) is concave", 1e-9);
    let mut decreasing = Tracker::new(s, "p -> F_q(gamma, p) is strictly decreasing on (gamma/2, 1-1/q)", 0.0);
    let mut derivative = Tracker::new(s, "dM/dgamma at 0 equals log_q Z (step 1e-5)", 1e-3);
    let mut continuity = Tracker::new(s, "M_q moves by <= 1e-4 under a 1e-6 shift", 0.0);
    let mut entropy = Tracker::new(s, "H_q is concave", 1e-12);
    let mut tilde = Tracker::new(s, "H~_q increases up to 1-2/q and decreases after", 0.0);
    let mut zeta = Tracker::new(s, "zeta solutions satisfy their equation", 1e-12);

    let reports: Vec<Vec<PropertyReport>> = qs
        .par_iter()
        .map(|&q| {
            let mut concave = Tracker::new(s, "", concave.report.tolerance);
            let mut decreasing = Tracker::new(s, "", 0.0);
            let mut continuity = Tracker::new(s, "", 0.0);
            let mut zeta = Tracker::new(s, "", zeta.report.tolerance);
            let top = 1.0 - 1.0 / q as f64;
            for p in [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7] {
                if p > top {
                    continue;
                }
                let gmax = (2.0 * p).min(1.0);
                let g: Vec<f64> = (0..=RESOLUTION).map(|i| gmax * i as f64 / RESOLUTION as f64).collect();
                let m: Vec<Result<f64>> = g.iter().map(|&x| m_q(q, x, p)).collect();
                for i in 1..RESOLUTION {
                    let case = || format!("q={q} p={p} gamma={}", g[i]);
                    match (&m[i - 1], &m[i], &m[i + 1]) {
                        (Ok(a), Ok(b), Ok(c)) => concave.record(b - (a + c) / 2.0, case),
                        _ => concave.record(f64::NEG_INFINITY, case),
                    }
                }
                for (i, &x) in g.iter().enumerate().step_by(50) {
                    let case = || format!("q={q} p={p} gamma={x}");
                    if x + 1e-6 <= gmax && i > 0 {
                        let shifted = m_q(q, x + 1e-6, (p + 1e-6).min(top));
                        continuity.record_result(shifted.and_then(|b| Ok(1e-4 - (b - m[i].clone()?).abs())), case);
                    }
                    if q >= 3 && x > 0.0 && x < 1.0 && p - x / 2.0 > 1e-9 {
                        zeta.record_result(solve_zeta(q, x, p).map(|z| -z.residual), case);
                    }
                }
            }
            for gamma in [0.01, 0.1, 0.3, 0.5, 0.8, 1.0] {
                let lo = gamma / 2.0;
                if lo >= top {
                    continue;
                }
                let ps: Vec<f64> = (1..RESOLUTION).map(|i| lo + (top - lo) * i as f64 / RESOLUTION as f64).collect();
                let f: Vec<Result<f64>> = ps.iter().map(|&p| f_q(q, gamma, p)).collect();
                for i in 1..ps.len() {
                    let case = || format!("q={q} gamma={gamma} p={}", ps[i]);
                    match (&f[i - 1], &f[i]) {
                        (Ok(a), Ok(b)) => decreasing.record(if a > b { a - b } else { -(b - a).max(1e-300) }, case),
                        _ => decreasing.record(f64::NEG_INFINITY, case),
                    }
                }
            }
            vec![concave.finish(), decreasing.finish(), continuity.finish(), zeta.finish()]
        })
        .collect();
    for part in reports {
        merge(&mut concave, &part[0]);
        merge(&mut decreasing, &part[1]);
        merge(&mut continuity, &part[2]);
        merge(&mut zeta, &part[3]);
    }

    for q in qs {
        let top = 1.0 - 1.0 / q as f64;
        for p in closed_points(0.1, top - 0.05, 8) {
            let case = || format!("q={q} p={p}");
            let eps = 1e-5;
            let fd = m_q(q, eps, p).and_then(|a| Ok((a - m_q(q, 0.0, p)?) / eps));
            let reference = dm_dgamma0_reference(q, p);
            derivative.record_result(fd.and_then(|d| Ok(-(d - reference?).abs())), case);
        }
    }
    for q in [2u64, 3, 5, 17] {
        let x: Vec<f64> = (0..=RESOLUTION).map(|i| i as f64 / RESOLUTION as f64).collect();
        for i in 1..RESOLUTION {
            let case = || format!("q={q} x={}", x[i]);
            let v = (|| Ok(q_entropy(q, x[i])? - (q_entropy(q, x[i - 1])? + q_entropy(q, x[i + 1])?) / 2.0))();
            entropy.record_result(v, case);
        }
        if q >= 3 {
            let peak = 1.0 - 2.0 / q as f64;
            for i in 0..RESOLUTION {
                let (a, b) = (x[i], x[i + 1]);
                let case = || format!("q={q} x={a}");
                let v = (|| {
                    let d = q_entropy_tilde(q, b)? - q_entropy_tilde(q, a)?;
                    Ok(if b <= peak {
                        d
                    } else if a >= peak {
                        -d
                    } else {
                        0.0
                    })
                })();
                tilde.record_result(v, case);
            }
        }
    }
    vec![
        concave.finish(),
        decreasing.finish(),
        derivative.finish(),
        continuity.finish(),
        entropy.finish(),
        tilde.finish(),
        zeta.finish(),
    ]
}

fn merge(into: &mut Tracker, part: &PropertyReport) {
    let r = &mut into.report;
    r.cases += part.cases;
    r.violations += part.violations;
    if part.worst_margin < r.worst_margin {
        r.worst_margin = part.worst_margin;
        r.worst_case = part.worst_case.clone();
    }
}

fn closed_points(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn thresholds() -> Vec<PropertyReport> {
    let s = Suite::Thresholds;
    let mut values = Tracker::new(s, "reference thresholds: pstar(2,0.533,0.1) = 0.077, J_2(0.1) = 0.0528", 0.0);
    values.record_result(p_star(2, 0.533, 0.1).map(|r| 2e-3 - (r.value - 0.077).abs()), || "pstar".into());
    values.record_result(johnson_radius(2, 0.1).map(|j| 5e-4 - (j - 0.0528).abs()), || "johnson".into());

    let mut limits = Tracker::new(s, "small-distance limits of pstar and sigma2star", 0.0);
    for lambda in [0.25, 0.5, 0.7, 0.8] {
        let v = p_star(2, lambda, 1e-4).and_then(|r| Ok(1e-3 - (r.value - p_star_small_delta_limit(2, lambda)?).abs()));
        limits.record_result(v, || format!("pstar lambda={lambda}"));
    }
    for lambda in [0.3, 0.5, 0.7] {
        let v = sigma2_star(lambda, 1e-6).and_then(|r| Ok(1e-3 - (r.value - sigma2_star_limit(lambda)?).abs()));
        limits.record_result(v, || format!("sigma2star lambda={lambda}"));
    }

    let mut range = Tracker::new(s, "delta/2 <= pstar <= 1-1/q", 1e-12);
    let mut in_delta = Tracker::new(s, "pstar is non-decreasing in delta", 1e-11);
    let mut in_lambda = Tracker::new(s, "pstar is non-decreasing in lambda", 1e-11);
    let deltas = open_grid(0.5, RESOLUTION);
    let cases: Vec<(u64, f64)> = [2u64, 3, 5].into_iter().flat_map(|q| [0.25, 0.5, 0.7, 0.8].map(|l| (q, l))).collect();
    let sweeps: Vec<Vec<Result<f64>>> =
        cases.par_iter().map(|&(q, l)| deltas.iter().map(|&d| p_star(q, l, d).map(|r| r.value)).collect()).collect();
    for (&(q, l), ps) in cases.iter().zip(&sweeps) {
        let top = 1.0 - 1.0 / q as f64;
        for (i, (&d, p)) in deltas.iter().zip(ps).enumerate() {
            let case = || format!("q={q} lambda={l} delta={d}");
            range.record_result(p.clone().map(|p| (p - d / 2.0).min(top - p)), case);
            if i > 0 {
                in_delta.record_result(p.clone().and_then(|b| Ok(b - ps[i - 1].clone()?)), case);
            }
        }
        if let Some(next) = cases.iter().position(|&(q2, l2)| q2 == q && l2 > l) {
            for (i, &d) in deltas.iter().enumerate().step_by(10) {
                let case = || format!("q={q} lambda={l}->{} delta={d}", cases[next].1);
                in_lambda.record_result(sweeps[next][i].clone().and_then(|b| Ok(b - ps[i].clone()?)), case);
            }
        }
    }

    let mut lsym_le_delta = Tracker::new(s, "lsym lower bound <= delta", 1e-12);
    let mut improvement =
        Tracker::new(s, "lsym exceeds Johnson somewhere for q in {4,9,17}, nowhere for q in {2,3}", 0.0);
    for q in [2u64, 3, 4, 9, 17] {
        let top = 1.0 - 1.0 / q as f64;
        let grid = if q == 4 { closed_points(top - 2f64.powi(-10), top, 2048) } else { open_grid(top, 512) };
        let gaps: Vec<Result<(f64, f64)>> = grid
            .par_iter()
            .map(|&d| Ok((lsym_lower_bound(q, d)? - johnson_radius(q, d)?, d - lsym_lower_bound(q, d)?)))
            .collect();
        let mut best = f64::NEG_INFINITY;
        let mut best_delta = 0.0;
        for (&d, g) in grid.iter().zip(&gaps) {
            match g {
                Ok((gap, slack)) => {
                    lsym_le_delta.record(*slack, || format!("q={q} delta={d}"));
                    if *gap > best {
                        best = *gap;
                        best_delta = d;
                    }
                }
                Err(e) => lsym_le_delta.record(f64::NEG_INFINITY, || format!("q={q} delta={d} ({e})")),
            }
        }
        let margin = if q >= 4 { best } else { -best.max(0.0) };
        let margin = if q >= 4 && margin <= 0.0 { f64::NEG_INFINITY } else { margin };
        improvement.record(margin, || format!("q={q} largest lsym - johnson {best:.3e} at delta={best_delta}"));
    }

    let mut dual = Tracker::new(s, "dual threshold at lambda = R equals pstar(2, 1-R, delta)", 1e-9);
    for rate in [0.3, 0.5, 0.7] {
        let top = 1.0 - 2f64.powf(rate - 1.0);
        for d in open_grid(top, 200) {
            let v = p_star_dual(rate, rate, d).and_then(|a| Ok(-(a.value - p_star(2, 1.0 - rate, d)?.value).abs()));
            dual.record_result(v, || format!("R={rate} delta={d}"));
        }
    }

    let mut g_concave = Tracker::new(s, "G_perp is concave on [0,1]", 1e-12);
    let mut g_nonneg = Tracker::new(s, "G_perp is non-negative on [0,1]", 1e-12);
    for (lambda, rate) in [(0.2, 0.3), (0.4, 0.4), (0.4, 0.43), (0.5, 0.7), (0.7, 0.9), (0.1, 0.9)] {
        let x: Vec<f64> = (0..=RESOLUTION).map(|i| i as f64 / RESOLUTION as f64).collect();
        let g: Vec<Result<f64>> = x.iter().map(|&v| g_perp(lambda, rate, v)).collect();
        for i in 0..=RESOLUTION {
            let case = || format!("lambda={lambda} R={rate} gamma={}", x[i]);
            g_nonneg.record_result(g[i].clone(), case);
            if i > 0 && i < RESOLUTION {
                let v = (|| Ok(g[i].clone()? - (g[i - 1].clone()? + g[i + 1].clone()?) / 2.0))();
                g_concave.record_result(v, case);
            }
        }
    }

    let mut sigma_above = Tracker::new(s, "sigma2star > delta", 0.0);
    let mut sigma_increasing = Tracker::new(s, "sigma2star is increasing in delta", 1e-11);
    for lambda in [0.3, 0.5, 0.7] {
        let grid = open_grid(1.0, RESOLUTION);
        let vals: Vec<Result<f64>> = grid.par_iter().map(|&d| sigma2_star(lambda, d).map(|r| r.value)).collect();
        for (i, (&d, v)) in grid.iter().zip(&vals).enumerate() {
            let case = || format!("lambda={lambda} delta={d}");
            sigma_above.record_result(v.clone().map(|v| if v > d { v - d } else { -1.0 }), case);
            if i > 0 {
                sigma_increasing.record_result(v.clone().and_then(|b| Ok(b - vals[i - 1].clone()?)), case);
            }
        }
    }

    vec![
        values.finish(),
        limits.finish(),
        range.finish(),
        in_delta.finish(),
        in_lambda.finish(),
        lsym_le_delta.finish(),
        improvement.finish(),
        dual.finish(),
        g_concave.finish(),
        g_nonneg.finish(),
        sigma_above.finish(),
        sigma_increasing.finish(),
    ]
}

fn codes() -> Vec<PropertyReport> {
    let s = Suite::Codes;
    let corpus = corpus(CORPUS_SEED);
    let mut invariance = Tracker::new(s, "weight distribution is the same from every codeword", 0.0);
    let mut dual_size = Tracker::new(s, "dual code has q^(n-k) words", 0.0);
    let mut entropy = Tracker::new(s, "H(X|Y) <= n lambda log2 q", 1e-12);
    let mut claim = Tracker::new(s, "erasure list size <= q/((q-1) eps) at rho = (q/(q-1) - eps) d/n", 0.0);
    let mut centers = Tracker::new(s, "translation-reduced list search matches exhaustive search", 0.0);
    let mut erasure_mc = Vec::new();
    let mut symmetric_mc = Vec::new();
    let mut translate_mc = Vec::new();

    for (idx, entry) in corpus.iter().enumerate() {
        let code = &entry.code;
        let name = entry.name.as_str();
        let (q, n, k) = (code.q(), code.n(), code.k());
        let words = match code.codewords() {
            Ok(w) => w,
            Err(e) => {
                invariance.record(f64::NEG_INFINITY, || format!("{name}: {e}"));
                continue;
            }
        };
        let base = code.weight_distribution().ok().map(|w| w.counts);
        for x in words.iter().step_by((words.len() / 16).max(1)) {
            let same = code.weight_distribution_from(Some(x)).ok().map(|w| w.counts) == base;
            invariance.record(if same { 0.0 } else { -1.0 }, || format!("{name} x={x:?}"));
        }
        let total = code.dual().weight_distribution().map(|w| w.total() as u128);
        let expected = (q as u128).pow((n - k) as u32);
        dual_size.record_result(total.map(|t| if t == expected { 0.0 } else { -1.0 }), || name.to_string());

        match ErasureProfile::new(code) {
            Ok(profile) => {
                for lambda in [0.1, 0.3, 0.5, 0.7, 0.9] {
                    let cap = n as f64 * lambda * (q as f64).log2();
                    entropy.record_result(profile.entropy_bits(lambda).map(|h| cap - h), || {
                        format!("{name} lambda={lambda}")
                    });
                }
            }
            Err(e) => entropy.record(f64::NEG_INFINITY, || format!("{name}: {e}")),
        }

        if let Ok(Some(d)) = code.min_distance() {
            let qf = q as f64;
            for i in 1..=10 {
                let eps = i as f64 / 10.0;
                let rho = (qf / (qf - 1.0) - eps) * d as f64 / n as f64;
                if rho > 1.0 {
                    continue;
                }
                let cap = qf / ((qf - 1.0) * eps);
                claim.record_result(erasure_list_size_max(code, rho).map(|c| cap - c.list_size as f64), || {
                    format!("{name} eps={eps} rho={rho}")
                });
            }
        }

        if (q as u128).pow(n as u32) <= 1 << 14 {
            for t in 0..=n / 2 {
                let a = list_size_max_with(code, t, CenterSearch::Exhaustive);
                let b = list_size_max_with(code, t, CenterSearch::TranslationReduced);
                let v = match (a, b) {
                    (Ok(a), Ok(b)) if a.list_size == b.list_size && b.verify(code).unwrap_or(false) => 0.0,
                    _ => -1.0,
                };
                centers.record(v, || format!("{name} t={t}"));
            }
        }

        let seed = 1000 + idx as u64;
        if n <= 16 {
            for (j, lambda) in [0.2, 0.5].into_iter().enumerate() {
                let v = (|| {
                    let exact = erasure_error_exact(code, lambda)?.ambiguity;
                    let spec =
                        SimulationSpec::new(code.clone(), Channel::qec(q, lambda)?, MC_TRIALS, point_seed(seed, j));
                    let a = simulate(&spec)?.ambiguity.expect("erasure channel");
                    Ok((a.errors_observed, exact))
                })();
                erasure_mc.push((format!("{name} lambda={lambda}"), v));
            }
        }
        if (q as u128).pow(n as u32) <= 1 << 16 {
            let p = 0.1;
            let v = (|| {
                let exact = qsc_block_error_exact(code, p)?.zero_lexicographic;
                let r = simulate(&SimulationSpec::new(code.clone(), Channel::qsc(q, p)?, MC_TRIALS, seed))?;
                Ok((r.block.errors_observed, exact))
            })();
            symmetric_mc.push((format!("{name} p={p}"), v));
        }
        if let Some(x) = words.last().filter(|_| k > 0) {
            // Lexicographic ties favour the zero word, so only uniform ties are translation invariant.
            let v = (|| {
                let ch = Channel::qsc(q, 0.15)?;
                let base = SimulationSpec::new(code.clone(), ch, MC_TRIALS, seed).with_tie_break(TieBreak::Uniform);
                let a = simulate(&base)?;
                let b = simulate(&SimulationSpec { seed: seed + 1, ..base }.transmitting(x.clone()))?;
                Ok((a.block.errors_observed, b.block.errors_observed))
            })();
            translate_mc.push((format!("{name} x={x:?}"), v));
        }
    }

    let erasure_mc = interval_check(s, "simulated erasure ambiguity matches the exact value", erasure_mc, |e, z| {
        interval_margin(e.0, e.1, z)
    });
    let symmetric_mc =
        interval_check(s, "simulated symmetric-channel error matches the exact value", symmetric_mc, |e, z| {
            interval_margin(e.0, e.1, z)
        });
    let translate_mc =
        interval_check(s, "simulated error is the same for any transmitted codeword", translate_mc, |e, z| {
            let ia = wilson_interval(e.0, MC_TRIALS, z);
            let ib = wilson_interval(e.1, MC_TRIALS, z);
            ia.1.min(ib.1) - ia.0.max(ib.0)
        });

    let mut rep = Tracker::new(s, "repetition-3 block error is 3p^2(1-p) + p^3", 1e-15);
    let rep3 = LinearCode::repetition(2, 3).expect("repetition code");
    for p in [0.01, 0.1, 0.2, 0.3, 0.5] {
        let exact = 3.0 * p * p * (1.0 - p) + p * p * p;
        rep.record_result(qsc_block_error_exact(&rep3, p).map(|e| -(e.zero_lexicographic - exact).abs()), || {
            format!("p={p}")
        });
    }

    vec![
        invariance.finish(),
        dual_size.finish(),
        entropy.finish(),
        claim.finish(),
        centers.finish(),
        rep.finish(),
        erasure_mc,
        symmetric_mc,
        translate_mc,
    ]
}

const MC_TRIALS: u64 = 20_000;

/// Checks every sample at the Bonferroni level for the whole batch.
fn interval_check<T>(
    suite: Suite,
    property: &str,
    samples: Vec<(String, Result<T>)>,
    margin: impl Fn(&T, f64) -> f64,
) -> PropertyReport {
    let z = family_z(samples.len());
    let label = format!("{property} (family-wise 99.9% Wilson, z = {z:.3})");
    let mut t = Tracker::new(suite, &label, 0.0);
    for (case, v) in samples {
        t.record_result(v.map(|v| margin(&v, z)), || case);
    }
    t.finish()
}

/// Distance from `value` to the outside of the Wilson interval (positive inside).
fn interval_margin(errors: u64, value: f64, z: f64) -> f64 {
    let (lo, hi) = wilson_interval(errors, MC_TRIALS, z);
    (value - lo).min(hi - value)
}

pub const SAMORODNITSKY_CODES: usize = 200;
pub const LAMBDAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn bounds() -> Vec<PropertyReport> {
    let s = Suite::Bounds;
    let mut samorodnitsky = Tracker::new(s, "sum A_w tau^w <= 2^H(X|Y) (200 random codes x 9 lambdas)", CHECK_SLACK);
    let mut dual = Tracker::new(s, "weight distribution below both primal and dual entropy bounds", CHECK_SLACK);
    let random = random_binary_codes(SAMORODNITSKY_CODES, 10, RANDOM_CODE_SEED);
    let results: Vec<(String, Result<(f64, f64)>)> = random
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, code)| {
            LAMBDAS.iter().map(move |&lambda| {
                let case = format!("random #{i} (n={}, k={}) lambda={lambda}", code.n(), code.k());
                (case, samorodnitsky_and_dual(code, lambda))
            })
        })
        .collect();
    for (case, r) in results {
        match r {
            Ok((a, b)) => {
                samorodnitsky.record(a, || case.clone());
                dual.record(b, || case.clone());
            }
            Err(e) => {
                samorodnitsky.record(f64::NEG_INFINITY, || format!("{case} ({e})"));
                dual.record(f64::NEG_INFINITY, || format!("{case} ({e})"));
            }
        }
    }

    let corpus = corpus(CORPUS_SEED);
    let mut double = Tracker::new(s, "double counting: A_w nu(n,t1,t2,w) <= C(n,t1)(q-1)^t1 L(t2)", 0.0);
    let mut poltyrev = Tracker::new(s, "Poltyrev bound >= exact block error", 0.0);
    let mut union = Tracker::new(s, "union-Bhattacharyya bound >= exact block error", 0.0);
    let mut sphere = Tracker::new(s, "sphere bound >= simulated Gaussian block error (upper 95% limit)", 0.0);
    let mut sphere_exact = Tracker::new(s, "sphere bound >= exact repetition-code Gaussian error", 0.0);
    for (idx, entry) in corpus.iter().enumerate() {
        let code = &entry.code;
        let name = entry.name.as_str();
        let (q, n) = (code.q(), code.n());
        let weights = match code.weight_distribution() {
            Ok(w) => w,
            Err(e) => {
                double.record(f64::NEG_INFINITY, || format!("{name}: {e}"));
                continue;
            }
        };
        for t2 in 0..=n / 2 {
            match list_size_max_with(code, t2, CenterSearch::TranslationReduced) {
                Ok(cert) => {
                    for t1 in 0..=n / 2 {
                        let v = check_double_counting_with_list(&weights, t1, t2, cert.list_size).map(|r| {
                            if r.holds() {
                                // Negated violation is exact but may not fit f64 losslessly.
                                -r.max_violation.to_string().parse::<f64>().unwrap_or(f64::NEG_INFINITY)
                            } else {
                                -1.0
                            }
                        });
                        double.record_result(v, || format!("{name} t1={t1} t2={t2}"));
                    }
                }
                Err(e) => double.record(f64::NEG_INFINITY, || format!("{name} t2={t2}: {e}")),
            }
        }

        let top = 1.0 - 1.0 / q as f64;
        for p in [0.02, 0.05, 0.1, 0.2] {
            if p > top {
                continue;
            }
            let exact = match qsc_block_error_exact(code, p) {
                Ok(e) => e.pessimistic,
                Err(e) => {
                    poltyrev.record(f64::NEG_INFINITY, || format!("{name} p={p}: {e}"));
                    continue;
                }
            };
            for alpha in [0.25, 0.5, 1.0] {
                let v = PoltyrevParams::with_fraction(p, alpha, n)
                    .and_then(|params| poltyrev_bound(&weights, params))
                    .map(|b| b.raw - exact);
                poltyrev.record_result(v, || format!("{name} p={p} alpha={alpha}"));
            }
            for lambda in LAMBDAS {
                let ch = Channel::qsc(q, p).expect("valid channel");
                match union_bhattacharyya_bound(code, &ch, lambda) {
                    Ok(b) => union.record(b - exact, || format!("{name} p={p} lambda={lambda}")),
                    Err(Error::Inapplicable(_)) => {}
                    Err(e) => union.record(f64::NEG_INFINITY, || format!("{name} p={p} lambda={lambda} ({e})")),
                }
            }
        }

        if q == 2 {
            for (j, sigma2) in [0.25, 0.5, 1.0].into_iter().enumerate() {
                let v = (|| {
                    let spec = SimulationSpec::new(
                        code.clone(),
                        Channel::bawgn(sigma2)?,
                        20_000,
                        5000 + 10 * idx as u64 + j as u64,
                    );
                    let hi = simulate(&spec)?.block.ci95.1;
                    let mut worst = f64::INFINITY;
                    for s in [0.5, 1.0, 2.0] {
                        worst = worst.min(sphere_bound(&weights, SphereBoundParams::new(sigma2, s)?, 1)? - hi);
                    }
                    Ok(worst)
                })();
                sphere.record_result(v, || format!("{name} sigma2={sigma2}"));
            }
        }
    }
    for n in [1usize, 3, 5, 9] {
        let rep = LinearCode::repetition(2, n).expect("repetition code");
        let weights = rep.weight_distribution().expect("small code");
        for sigma2 in [0.25, 0.5, 1.0, 2.0] {
            let v = (|| {
                let exact = repetition_bawgn_block_error(n, sigma2)?;
                let mut worst = f64::INFINITY;
                for s in [0.5, 1.0, 2.0, 4.0] {
                    worst = worst.min(sphere_bound(&weights, SphereBoundParams::new(sigma2, s)?, 1)? - exact);
                }
                Ok(worst)
            })();
            sphere_exact.record_result(v, || format!("n={n} sigma2={sigma2}"));
        }
    }

    vec![
        samorodnitsky.finish(),
        dual.finish(),
        double.finish(),
        poltyrev.finish(),
        union.finish(),
        sphere.finish(),
        sphere_exact.finish(),
    ]
}

/// Relative margins of the entropy weight bound and of both dual bounds.
fn samorodnitsky_and_dual(code: &LinearCode, lambda: f64) -> Result<(f64, f64)> {
    let check = check_samorodnitsky(code, lambda)?;
    let a = (check.rhs - check.lhs) / check.rhs.max(1.0);
    let mut b = f64::INFINITY;
    for d in dual_weight_bounds(code, lambda)? {
        let actual = d.actual as f64;
        let m = ((d.primal - actual) / d.primal.max(1.0)).min((d.dual - actual) / d.dual.max(1.0));
        b = b.min(m);
    }
    Ok((a, b))
}
