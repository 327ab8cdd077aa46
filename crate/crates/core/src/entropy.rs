//! Entropy functions, their inverse, log-domain binomials and
//! Bhattacharyya coefficients.
//!
//! Everything is evaluated with natural logarithms and converted to the
//! requested base at the end. `0 · log 0` is taken to be `0`.

use libm::lgamma as ln_gamma;
use serde::{Deserialize, Serialize};

use crate::bisect;
use crate::error::{ensure, Error, Result};

/// Slack allowed when a unit-interval argument overshoots by rounding.
const UNIT_SLACK: f64 = 1e-12;

/// Bisection width used by [`q_entropy_inverse`].
pub const INVERSE_TOL: f64 = 1e-12;

/// Size of a finite alphabet, `q >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlphabetSize(u64);

impl AlphabetSize {
    pub fn new(q: u64) -> Result<Self> {
        ensure(q >= 2, || format!("alphabet size must be >= 2, got {q}"))?;
        Ok(AlphabetSize(q))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_prime(self) -> bool {
        is_prime(self.0)
    }
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A memoryless channel with a finite (or binary) input alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Channel {
    /// q-ary symmetric channel with total crossover probability `p`.
    Qsc { q: AlphabetSize, p: f64 },
    /// q-ary erasure channel with erasure probability `erasure`.
    Qec { q: AlphabetSize, erasure: f64 },
    /// Binary-input AWGN with noise variance `sigma2`.
    Bawgn { sigma2: f64 },
}

impl Channel {
    pub fn qsc(q: u64, p: f64) -> Result<Self> {
        let q = AlphabetSize::new(q)?;
        ensure((0.0..=1.0).contains(&p), || format!("crossover probability {p} not in [0,1]"))?;
        Ok(Channel::Qsc { q, p })
    }

    pub fn qec(q: u64, erasure: f64) -> Result<Self> {
        let q = AlphabetSize::new(q)?;
        ensure((0.0..=1.0).contains(&erasure), || format!("erasure probability {erasure} not in [0,1]"))?;
        Ok(Channel::Qec { q, erasure })
    }

    pub fn bawgn(sigma2: f64) -> Result<Self> {
        ensure(sigma2 > 0.0 && sigma2.is_finite(), || {
            format!("noise variance must be positive and finite, got {sigma2}")
        })?;
        Ok(Channel::Bawgn { sigma2 })
    }

    /// Input alphabet size (2 for the Gaussian channel).
    pub fn alphabet(&self) -> u64 {
        match *self {
            Channel::Qsc { q, .. } | Channel::Qec { q, .. } => q.get(),
            Channel::Bawgn { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Channel::Qsc { .. } => "qSC",
            Channel::Qec { .. } => "qEC",
            Channel::Bawgn { .. } => "BAWGN",
        }
    }
}

pub(crate) fn unit(x: f64, what: &str) -> Result<f64> {
    if x.is_nan() || !(-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&x) {
        return Err(Error::Domain(format!("{what} = {x} is outside [0,1]")));
    }
    Ok(x.clamp(0.0, 1.0))
}

pub(crate) fn check_q(q: u64) -> Result<()> {
    ensure(q >= 2, || format!("alphabet size must be >= 2, got {q}"))
}

/// `x ln x` with the convention `0 ln 0 = 0`.
#[inline]
pub(crate) fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Natural-log q-ary entropy, no argument checks.
#[inline]
pub(crate) fn hq_nat(q: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    -xlnx(1.0 - x) - xlnx(x) + x * (q - 1.0).ln()
}

/// Base-q entropy, no argument checks.
#[inline]
pub(crate) fn hq(q: f64, x: f64) -> f64 {
    hq_nat(q, x) / q.ln()
}

/// Base-2 binary entropy, no argument checks.
#[inline]
pub(crate) fn h2(x: f64) -> f64 {
    (-xlnx(x) - xlnx(1.0 - x)) / std::f64::consts::LN_2
}

/// Base-q entropy of `((1-x)/2, (1-x)/2, x/(q-2), ..., x/(q-2))`, no checks.
#[inline]
pub(crate) fn hq_tilde(q: f64, x: f64) -> f64 {
    let a = 1.0 - x;
    let nat = -xlnx(a) + a * std::f64::consts::LN_2 - xlnx(x) + x * (q - 2.0).ln();
    nat / q.ln()
}

/// Binary entropy `h(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let x = unit(x, "x")?;
    Ok(h2(x))
}

/// q-ary entropy `H_q(x)` in base q.
pub fn q_entropy(q: u64, x: f64) -> Result<f64> {
    check_q(q)?;
    let x = unit(x, "x")?;
    Ok(hq(q as f64, x))
}

/// `H̃_q(x)`: base-q entropy of the distribution putting `(1-x)/2` on two
/// symbols and spreading `x` over the remaining `q - 2`. Requires `q >= 3`.
pub fn q_entropy_tilde(q: u64, x: f64) -> Result<f64> {
    ensure(q >= 3, || format!("H̃_q needs q >= 3, got {q}"))?;
    let x = unit(x, "x")?;
    Ok(hq_tilde(q as f64, x))
}

/// Inverse of `H_q` on its increasing branch `[0, 1 - 1/q]`.
pub fn q_entropy_inverse(q: u64, y: f64) -> Result<f64> {
    check_q(q)?;
    let y = unit(y, "y")?;
    let qf = q as f64;
    let top = 1.0 - 1.0 / qf;
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(top);
    }
    Ok(bisect::increasing_root(0.0, top, y, INVERSE_TOL, |x| hq(qf, x)).midpoint())
}

/// Exact `C(n, k)` for `n <= 64` (fits in a u64).
pub fn exact_binomial(n: u64, k: u64) -> Option<u64> {
    if k > n || n > 64 {
        return None;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).ok()
}

/// Natural log of `C(n, k)`.
///
/// Uses the exact integer for `n <= 64` and log-gamma otherwise.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    ensure(k <= n, || format!("binomial C({n},{k}) has k > n"))?;
    if let Some(c) = exact_binomial(n, k) {
        return Ok((c as f64).ln());
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(ln_gamma(nf + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(nf - kf + 1.0))
}

/// Table of `ln k!` for `k <= n`, for fast repeated log-binomials.
#[derive(Debug, Clone)]
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn new(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(0.0);
        for k in 1..=n {
            if k <= 170 {
                let prev: f64 = table[k - 1];
                table.push(prev + (k as f64).ln());
            } else {
                table.push(ln_gamma(k as f64 + 1.0));
            }
        }
        LnFactorials { table }
    }

    /// `ln C(n, k)`; `-inf` when `k > n`.
    #[inline]
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        if k > n {
            f64::NEG_INFINITY
        } else {
            self.table[n] - self.table[k] - self.table[n - k]
        }
    }
}

/// Numerically stable `ln(Σ exp(x_i))`.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let v: Vec<f64> = it.into_iter().filter(|x| *x > f64::NEG_INFINITY).collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln(exp(a) + exp(b))`.
#[inline]
pub fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Bhattacharyya coefficient of `qSC_p`, no checks.
#[inline]
pub(crate) fn z_qsc(q: f64, p: f64) -> f64 {
    (q - 2.0) / (q - 1.0) * p + 2.0 * (p * (1.0 - p) / (q - 1.0)).max(0.0).sqrt()
}

/// Bhattacharyya coefficient `Z(W)` of a symmetric or Gaussian channel.
pub fn bhattacharyya(ch: &Channel) -> Result<f64> {
    match *ch {
        Channel::Qsc { q, p } => {
            let p = unit(p, "p")?;
            Ok(z_qsc(q.get() as f64, p))
        }
        Channel::Bawgn { sigma2 } => {
            ensure(sigma2 > 0.0, || format!("sigma^2 must be positive, got {sigma2}"))?;
            Ok((-1.0 / (2.0 * sigma2)).exp())
        }
        Channel::Qec { .. } => Err(Error::UnsupportedChannel("qEC")),
    }
}
