//! Curves behind each figure, sampled on uniform grids.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::curve::Curve;
use crate::error::{ensure, Error, Result};
use crate::exponents::f_q;
use crate::thresholds::{
    johnson_radius, lsym_lower_bound, p_star, p_star_dual, p_star_small_delta_limit, rudra_uurtamo_p0, tvz_upper_bound,
};

pub const DEFAULT_POINTS: usize = 512;

/// Crossover probabilities for `F-lambda` when none are given.
pub const DEFAULT_P_LIST: [f64; 5] = [0.1, 0.15, 0.2, 0.25, 0.3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    PstarVsJohnson,
    FLambda,
    PstarVsLambda,
    PstarVsDelta,
    QaryPstar,
    DualCompare,
    RuQ15,
    LargeDeltaZoom,
    AllBoundsQ2pow20,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::PstarVsJohnson,
        FigureId::FLambda,
        FigureId::PstarVsLambda,
        FigureId::PstarVsDelta,
        FigureId::QaryPstar,
        FigureId::DualCompare,
        FigureId::RuQ15,
        FigureId::LargeDeltaZoom,
        FigureId::AllBoundsQ2pow20,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::PstarVsJohnson => "pstar-vs-johnson",
            FigureId::FLambda => "F-lambda",
            FigureId::PstarVsLambda => "pstar-vs-lambda",
            FigureId::PstarVsDelta => "pstar-vs-delta",
            FigureId::QaryPstar => "qary-pstar",
            FigureId::DualCompare => "dual-compare",
            FigureId::RuQ15 => "ru-q15",
            FigureId::LargeDeltaZoom => "large-delta-zoom",
            FigureId::AllBoundsQ2pow20 => "all-bounds-q2pow20",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| {
            let known: Vec<_> = FigureId::ALL.iter().map(|id| id.name()).collect();
            Error::Domain(format!("unknown figure {s:?}; expected one of {}", known.join(", ")))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub points: usize,
    /// Only used by `F-lambda`.
    pub p_list: Vec<f64>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions { points: DEFAULT_POINTS, p_list: DEFAULT_P_LIST.to_vec() }
    }
}

/// `points` values `top * i / points`, `i = 1..=points`.
pub fn open_grid(top: f64, points: usize) -> Vec<f64> {
    (1..=points).map(|i| top * i as f64 / points as f64).collect()
}

/// `points` values spaced evenly over `[lo, hi]`, endpoints included.
pub fn closed_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points).map(|i| lo + (hi - lo) * i as f64 / last).collect()
}

fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

fn pstar_value(q: u64, lambda: f64, delta: f64) -> f64 {
    or_nan(p_star(q, lambda, delta).map(|r| r.value))
}

/// `lsym_lower_bound`, undefined beyond `1 - 1/q`.
fn lsym(q: u64, delta: f64) -> f64 {
    or_nan(lsym_lower_bound(q, delta))
}

fn top(q: u64) -> f64 {
    1.0 - 1.0 / q as f64
}

fn tabulate<F>(curve: &mut Curve, xs: &[f64], row: F) -> Result<()>
where
    F: Fn(f64) -> Vec<f64> + Sync,
{
    let rows: Vec<Vec<f64>> = xs.par_iter().map(|&x| row(x)).collect();
    for r in rows {
        curve.push(r)?;
    }
    Ok(())
}

pub fn figure(id: FigureId, opts: &FigureOptions) -> Result<Curve> {
    ensure(opts.points >= 2, || format!("need at least 2 grid points, got {}", opts.points))?;
    let n = opts.points;
    let start = |columns: &[&str]| -> Result<Curve> {
        Ok(Curve::new(id.name(), columns)?.with_meta("version", env!("CARGO_PKG_VERSION")).with_meta("points", n))
    };
    let curve = match id {
        FigureId::PstarVsJohnson => {
            let mut c = start(&[
                "delta",
                "pstar_q9",
                "johnson_q9",
                "pstar_q17",
                "johnson_q17",
                "upper_delta",
                "lower_half_delta",
            ])?;
            tabulate(&mut c, &open_grid(top(17), n), |d| {
                vec![
                    d,
                    lsym(9, d),
                    or_nan(johnson_radius(9, d)),
                    lsym(17, d),
                    or_nan(johnson_radius(17, d)),
                    d,
                    d / 2.0,
                ]
            })?;
            c
        }
        FigureId::FLambda => {
            ensure(!opts.p_list.is_empty(), || "p list is empty".into())?;
            for &p in &opts.p_list {
                ensure(p > 0.0 && p <= 0.5, || format!("p = {p} outside (0, 1/2]"))?;
            }
            let lambda = 0.5;
            let labels: Vec<String> = opts.p_list.iter().map(|p| format!("F_lambda_p{p}")).collect();
            let mut columns = vec!["gamma"];
            columns.extend(labels.iter().map(String::as_str));
            let mut c = start(&columns)?
                .with_meta("lambda", lambda)
                .with_meta("p_list", opts.p_list.iter().map(f64::to_string).collect::<Vec<_>>().join(" "));
            let gmax = opts.p_list.iter().fold(0.0f64, |m, &p| m.max(2.0 * p)).min(1.0);
            let slope = (2f64.powf(lambda) - 1.0).log2();
            tabulate(&mut c, &closed_grid(0.0, gmax, n), |g| {
                let mut row = vec![g];
                row.extend(opts.p_list.iter().map(|&p| or_nan(f_q(2, g, p)) + g * slope));
                row
            })?;
            c
        }
        FigureId::PstarVsLambda => {
            let deltas = [0.05, 0.1, 0.2, 0.4];
            let mut c = start(&[
                "lambda",
                "pstar_delta0.05",
                "pstar_delta0.1",
                "pstar_delta0.2",
                "pstar_delta0.4",
                "small_delta_limit",
            ])?;
            tabulate(&mut c, &open_grid(1.0, n), |l| {
                let mut row = vec![l];
                row.extend(deltas.iter().map(|&d| pstar_value(2, l, d)));
                row.push(or_nan(p_star_small_delta_limit(2, l)));
                row
            })?;
            c
        }
        FigureId::PstarVsDelta => {
            let lambdas = [0.25, 0.5, 0.7, 0.8];
            let mut c = start(&[
                "delta",
                "pstar_lambda0.25",
                "pstar_lambda0.5",
                "pstar_lambda0.7",
                "pstar_lambda0.8",
                "johnson_q2",
            ])?;
            tabulate(&mut c, &open_grid(0.5, n), |d| {
                let mut row = vec![d];
                row.extend(lambdas.iter().map(|&l| pstar_value(2, l, d)));
                row.push(or_nan(johnson_radius(2, d)));
                row
            })?;
            c
        }
        FigureId::QaryPstar => {
            let qs = [3u64, 5, 7, 16];
            let lambda = 0.6;
            let mut c = start(&["delta", "pstar_q3", "pstar_q5", "pstar_q7", "pstar_q16", "lower_half_delta"])?
                .with_meta("lambda", lambda);
            tabulate(&mut c, &open_grid(top(16), n), |d| {
                let mut row = vec![d];
                row.extend(qs.iter().map(|&q| if d <= top(q) { pstar_value(q, lambda, d) } else { f64::NAN }));
                row.push(d / 2.0);
                row
            })?;
            c
        }
        FigureId::DualCompare => {
            let rates = [0.4, 0.41, 0.42, 0.43];
            let mut c = start(&["delta", "pstar_lambda0.6", "dual_R0.4", "dual_R0.41", "dual_R0.42", "dual_R0.43"])?
                .with_meta("primal_lambda", 0.6)
                .with_meta("dual_lambda", 0.4);
            tabulate(&mut c, &open_grid(0.5, n), |d| {
                let mut row = vec![d, pstar_value(2, 0.6, d)];
                row.extend(rates.iter().map(|&r| or_nan(p_star_dual(0.4, r, d).map(|t| t.value))));
                row
            })?;
            c
        }
        FigureId::RuQ15 => {
            let mut c = start(&["delta", "ru_p0_q15", "johnson_q15", "lower_half_delta"])?;
            tabulate(&mut c, &open_grid(top(15), n), |d| {
                vec![d, or_nan(rudra_uurtamo_p0(15, d)), or_nan(johnson_radius(15, d)), d / 2.0]
            })?;
            c
        }
        FigureId::LargeDeltaZoom => {
            // Each alphabet has its own interval, so rows are indexed by the
            // offset below 1 - 1/q.
            let qs = [3u64, 4, 9, 17];
            let mut c = start(&[
                "delta_offset",
                "pstar_q3",
                "johnson_q3",
                "pstar_q4",
                "johnson_q4",
                "pstar_q9",
                "johnson_q9",
                "pstar_q17",
                "johnson_q17",
            ])?;
            let width = 2f64.powi(-10);
            tabulate(&mut c, &closed_grid(-width, 0.0, n), |u| {
                let mut row = vec![u];
                for &q in &qs {
                    let d = top(q) + u;
                    row.push(lsym(q, d));
                    row.push(or_nan(johnson_radius(q, d)));
                }
                row
            })?;
            c
        }
        FigureId::AllBoundsQ2pow20 => {
            let q = 1u64 << 20;
            let mut c = start(&["delta", "tvz", "ru_p0", "johnson", "lsym", "upper_delta", "lower_half_delta"])?
                .with_meta("q", q);
            tabulate(&mut c, &open_grid(top(q), n), |d| {
                vec![
                    d,
                    or_nan(tvz_upper_bound(q, d)),
                    or_nan(rudra_uurtamo_p0(q, d)),
                    or_nan(johnson_radius(q, d)),
                    lsym(q, d),
                    d,
                    d / 2.0,
                ]
            })?;
            c
        }
    };
    Ok(curve)
}
