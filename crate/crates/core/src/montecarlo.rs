//! Monte Carlo estimates of MAP decoding error for small explicit codes.
//!
//! Trial `i` draws its randomness from ChaCha8 stream `i` keyed by the
//! seed, so results do not depend on how trials are split across threads.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::code::LinearCode;
use crate::curve::Curve;
use crate::entropy::Channel;
use crate::error::{ensure, Error, Result};

/// Largest code simulated (codewords are decoded by exhaustive search).
pub const SIMULATION_BUDGET: u128 = 1 << 20;

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// How the symmetric-channel decoder resolves equidistant codewords.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum TieBreak {
    #[default]
    Lexicographic,
    Uniform,
}

#[derive(Debug, Clone)]
pub struct SimulationSpec {
    pub code: LinearCode,
    pub channel: Channel,
    pub trials: u64,
    pub seed: u64,
    /// Defaults to `0^n`.
    pub transmitted: Option<Vec<u8>>,
    /// Used on the symmetric channel; erasures always pick uniformly among
    /// consistent codewords and the Gaussian decoder has no ties almost surely.
    pub tie_break: TieBreak,
}

impl SimulationSpec {
    pub fn new(code: LinearCode, channel: Channel, trials: u64, seed: u64) -> Self {
        SimulationSpec { code, channel, trials, seed, transmitted: None, tie_break: TieBreak::default() }
    }

    pub fn transmitting(mut self, word: Vec<u8>) -> Self {
        self.transmitted = Some(word);
        self
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEstimate {
    pub p_hat: f64,
    pub ci95: (f64, f64),
    pub trials: u64,
    pub errors_observed: u64,
}

impl ErrorEstimate {
    /// Point estimate with a 95% Wilson score interval.
    pub fn wilson(errors: u64, trials: u64) -> Self {
        ErrorEstimate {
            p_hat: errors as f64 / trials as f64,
            ci95: wilson_interval(errors, trials, Z95),
            trials,
            errors_observed: errors,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci95.0 <= value && value <= self.ci95.1
    }
}

/// Wilson score interval for `errors` successes in `trials` at quantile `z`.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0 && errors <= trials);
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let hi = if errors == trials { 1.0 } else { (center + half).clamp(p, 1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    pub block: ErrorEstimate,
    /// Symbol errors over `trials * n` decoded symbols.
    pub bit: ErrorEstimate,
    /// Erasure channel only: more than one codeword is consistent with the output.
    pub ambiguity: Option<ErrorEstimate>,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    block: u64,
    symbols: u64,
    ambiguous: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            block: self.block + o.block,
            symbols: self.symbols + o.symbols,
            ambiguous: self.ambiguous + o.ambiguous,
        }
    }
}

pub fn simulate(spec: &SimulationSpec) -> Result<SimulationReport> {
    let code = &spec.code;
    ensure(spec.trials >= 1, || "trials must be at least 1".into())?;
    ensure(spec.channel.alphabet() == code.q(), || {
        format!("channel alphabet {} does not match code field size {}", spec.channel.alphabet(), code.q())
    })?;
    if code.size() > SIMULATION_BUDGET {
        return Err(Error::Budget { what: "simulated codewords", needed: code.size(), limit: SIMULATION_BUDGET });
    }
    let n = code.n();
    let sent = match &spec.transmitted {
        Some(x) => {
            ensure(x.len() == n && code.contains(x), || "transmitted word is not a codeword".into())?;
            x.clone()
        }
        None => vec![0u8; n],
    };
    let mut words = code.codewords()?;
    words.sort();

    let base = ChaCha8Rng::seed_from_u64(spec.seed);
    let q = code.q() as u8;
    let tally = match spec.channel {
        Channel::Qsc { p, .. } => {
            let decoder = HammingDecoder { words: &words, tie_break: spec.tie_break };
            run(spec.trials, &base, n, |rng, buf| {
                for (y, &x) in buf.iter_mut().zip(&sent) {
                    *y = if uniform(rng) < p {
                        ((x as u16 + rng.random_range(1..q) as u16) % q as u16) as u8
                    } else {
                        x
                    };
                }
                let decoded = decoder.decode(buf, rng);
                outcome(&sent, decoded, false)
            })
        }
        Channel::Bawgn { sigma2 } => {
            let sigma = sigma2.sqrt();
            let signs: Vec<Vec<f64>> =
                words.iter().map(|c| c.iter().map(|&s| if s == 0 { 1.0 } else { -1.0 }).collect()).collect();
            run(spec.trials, &base, n, |rng, _| {
                let y: Vec<f64> =
                    sent.iter().map(|&s| if s == 0 { 1.0 } else { -1.0 } + sigma * standard_normal(rng)).collect();
                // Nearest embedding = largest correlation; first maximum wins.
                let mut best = (f64::NEG_INFINITY, 0);
                for (j, x) in signs.iter().enumerate() {
                    let corr: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                    if corr > best.0 {
                        best = (corr, j);
                    }
                }
                outcome(&sent, &words[best.1], false)
            })
        }
        Channel::Qec { erasure, .. } => {
            ensure(n <= 64, || "erasure simulation supports n <= 64".into())?;
            // Codewords consistent with the output are `sent + c` for the
            // codewords `c` vanishing on the revealed coordinates.
            let supports: Vec<u64> = words
                .iter()
                .map(|c| c.iter().enumerate().fold(0u64, |m, (i, &s)| if s != 0 { m | 1 << i } else { m }))
                .collect();
            run(spec.trials, &base, n, |rng, buf| {
                let mut revealed = 0u64;
                for i in 0..n {
                    if uniform(rng) >= erasure {
                        revealed |= 1 << i;
                    }
                }
                let consistent: Vec<usize> = (0..words.len()).filter(|&j| supports[j] & revealed == 0).collect();
                let pick = consistent[rng.random_range(0..consistent.len())];
                for ((b, &x), &c) in buf.iter_mut().zip(&sent).zip(&words[pick]) {
                    *b = ((x as u16 + c as u16) % q as u16) as u8;
                }
                outcome(&sent, buf, consistent.len() > 1)
            })
        }
    };
    let symbols = spec.trials.checked_mul(n as u64).ok_or_else(|| Error::Domain("trials * n overflows".into()))?;
    Ok(SimulationReport {
        block: ErrorEstimate::wilson(tally.block, spec.trials),
        bit: ErrorEstimate::wilson(tally.symbols, symbols),
        ambiguity: matches!(spec.channel, Channel::Qec { .. })
            .then(|| ErrorEstimate::wilson(tally.ambiguous, spec.trials)),
    })
}

fn run<F>(trials: u64, base: &ChaCha8Rng, n: usize, trial: F) -> Tally
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<u8>) -> Tally + Sync,
{
    (0..trials)
        .into_par_iter()
        .fold(
            || (Tally::default(), vec![0u8; n]),
            |(acc, mut buf), i| {
                let mut rng = base.clone();
                rng.set_stream(i);
                let t = trial(&mut rng, &mut buf);
                (acc.add(t), buf)
            },
        )
        .map(|(t, _)| t)
        .reduce(Tally::default, Tally::add)
}

fn outcome(sent: &[u8], decoded: &[u8], ambiguous: bool) -> Tally {
    let symbols = sent.iter().zip(decoded).filter(|(a, b)| a != b).count() as u64;
    Tally { block: u64::from(symbols > 0), symbols, ambiguous: u64::from(ambiguous) }
}

struct HammingDecoder<'a> {
    /// Sorted lexicographically.
    words: &'a [Vec<u8>],
    tie_break: TieBreak,
}

impl HammingDecoder<'_> {
    fn decode<R: Rng>(&self, y: &[u8], rng: &mut R) -> &[u8] {
        let mut best = usize::MAX;
        let mut chosen = 0;
        let mut ties = 0u64;
        for (j, c) in self.words.iter().enumerate() {
            let d = c.iter().zip(y).filter(|(a, b)| a != b).count();
            if d < best {
                best = d;
                chosen = j;
                ties = 1;
            } else if d == best && self.tie_break == TieBreak::Uniform {
                // Reservoir sampling over the equidistant codewords.
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    chosen = j;
                }
            }
        }
        &self.words[chosen]
    }
}

/// Uniform on (0, 1) with 53 random bits.
fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn standard_normal<R: RngCore>(rng: &mut R) -> f64 {
    inverse_normal_cdf(uniform(rng))
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error below 1.2e-9 on (0, 1)).
pub fn inverse_normal_cdf(u: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383_577_518_672_69e2,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00, 3.754408661907416e+00];
    const LOW: f64 = 0.02425;
    let tail = |t: f64| {
        let r = libm::sqrt(-2.0 * libm::log(t));
        (((((C[0] * r + C[1]) * r + C[2]) * r + C[3]) * r + C[4]) * r + C[5])
            / ((((D[0] * r + D[1]) * r + D[2]) * r + D[3]) * r + 1.0)
    };
    if u < LOW {
        tail(u)
    } else if u <= 1.0 - LOW {
        let t = u - 0.5;
        let r = t * t;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * t
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(1.0 - u)
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed used for grid point `index` of a sweep.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

/// Replaces the channel parameter of the template by each grid value.
pub fn sweep(template: &SimulationSpec, grid: &[f64]) -> Result<Curve> {
    ensure(!grid.is_empty(), || "sweep grid is empty".into())?;
    let x_label = match template.channel {
        Channel::Qsc { .. } => "p",
        Channel::Qec { .. } => "lambda",
        Channel::Bawgn { .. } => "sigma2",
    };
    let mut columns = vec![x_label, "block", "block_lo", "block_hi", "bit", "bit_lo", "bit_hi"];
    let erasure = matches!(template.channel, Channel::Qec { .. });
    if erasure {
        columns.extend(["ambiguity", "ambiguity_lo", "ambiguity_hi"]);
    }
    let mut curve = Curve::new(format!("simulation-{}", template.channel.name()), &columns)?
        .with_meta("seed", template.seed)
        .with_meta("trials", template.trials);
    for (i, &x) in grid.iter().enumerate() {
        let channel = match template.channel {
            Channel::Qsc { q, .. } => Channel::qsc(q.get(), x)?,
            Channel::Qec { q, .. } => Channel::qec(q.get(), x)?,
            Channel::Bawgn { .. } => Channel::bawgn(x)?,
        };
        let spec = SimulationSpec { channel, seed: point_seed(template.seed, i), ..template.clone() };
        let r = simulate(&spec)?;
        let mut row = vec![x, r.block.p_hat, r.block.ci95.0, r.block.ci95.1, r.bit.p_hat, r.bit.ci95.0, r.bit.ci95.1];
        if let Some(a) = r.ambiguity {
            row.extend([a.p_hat, a.ci95.0, a.ci95.1]);
        }
        curve.push(row)?;
    }
    Ok(curve)
}
