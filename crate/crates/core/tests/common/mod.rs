#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

/// Table `[w][d0][d1]` of words by distance to `0^n` and to `1^w 0^{n-w}`,
/// built by decoding every index in `0..q^n` into base-q digits.
pub fn distance_table(q: u64, n: usize) -> Vec<Vec<Vec<u64>>> {
    let total = q.pow(n as u32);
    let mut table = vec![vec![vec![0u64; n + 1]; n + 1]; n + 1];
    let mut digits = vec![0u64; n];
    for idx in 0..total {
        let mut r = idx;
        for d in digits.iter_mut() {
            *d = r % q;
            r /= q;
        }
        let d0 = digits.iter().filter(|&&s| s != 0).count();
        for (w, plane) in table.iter_mut().enumerate() {
            let d1 = digits.iter().enumerate().filter(|&(i, &s)| s != u64::from(i < w)).count();
            plane[d0][d1] += 1;
        }
    }
    table
}

/// Words within distance `t` of both centers.
pub fn ball_count(plane: &[Vec<u64>], t: usize) -> u64 {
    (0..=t).flat_map(|a| (0..=t).map(move |b| plane[a][b])).sum()
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 0..k {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

pub fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    (v >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn johnson(q: f64, delta: f64) -> f64 {
    let top = 1.0 - 1.0 / q;
    top * (1.0 - (1.0 - delta / top).sqrt())
}

pub fn h2(x: f64) -> f64 {
    let t = |v: f64| if v <= 0.0 { 0.0 } else { -v * v.log2() };
    t(x) + t(1.0 - x)
}

/// Binary intersection exponent `γ + (1-γ) h((p - γ/2)/(1-γ))`.
pub fn binary_exponent(gamma: f64, p: f64) -> f64 {
    if gamma >= 1.0 {
        return 1.0;
    }
    gamma + (1.0 - gamma) * h2(((p - gamma / 2.0) / (1.0 - gamma)).clamp(0.0, 1.0))
}

/// `log_q Z(qSC_p)`.
pub fn log_bhattacharyya(q: f64, p: f64) -> f64 {
    let z = (q - 2.0) / (q - 1.0) * p + 2.0 * (p * (1.0 - p) / (q - 1.0)).sqrt();
    z.ln() / q.ln()
}

fn ln_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}

/// Natural log of `|B(0^n,t) ∩ B(1^w 0^{n-w},t)|` over `q` symbols.
///
/// A word with `a` zeros and `c` ones among the first `w` coordinates and
/// `b` zeros among the rest is at distance `n-a-b` and `n-c-b` from the two
/// centers; the `b` sum is a tail of a precomputed suffix table.
pub fn ln_ball_intersection(q: u64, n: usize, t: usize, w: usize) -> f64 {
    let mut lf = vec![0.0f64; n + 1];
    for k in 1..=n {
        lf[k] = lf[k - 1] + (k as f64).ln();
    }
    let lc = |a: usize, b: usize| lf[a] - lf[b] - lf[a - b];
    let rest = n - w;
    let ln_q1 = ((q - 1) as f64).ln();
    let mut tail = vec![f64::NEG_INFINITY; rest + 2];
    for b in (0..=rest).rev() {
        tail[b] = ln_add(tail[b + 1], lc(rest, b) + (rest - b) as f64 * ln_q1);
    }
    let ln_other = if q > 2 { ((q - 2) as f64).ln() } else { f64::NEG_INFINITY };
    let mut total = f64::NEG_INFINITY;
    for a in 0..=w {
        for c in 0..=w - a {
            let others = w - a - c;
            if q == 2 && others > 0 {
                continue;
            }
            let b_min = (n.saturating_sub(t + a)).max(n.saturating_sub(t + c));
            if b_min > rest {
                continue;
            }
            let pow = if others == 0 { 0.0 } else { others as f64 * ln_other };
            total = ln_add(total, lc(w, a) + lc(w - a, c) + pow + tail[b_min]);
        }
    }
    total
}

fn inverse_mod(a: u64, q: u64) -> u64 {
    (1..q).find(|&b| a * b % q == 1).expect("prime field")
}

/// Rank over GF(q), q prime, by Gaussian elimination.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, q: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(q)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inverse_mod(rows[rank][col] % q, q);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % q;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (v, &p) in row.iter_mut().zip(&pivot) {
                    *v = (*v + (q - f) * p) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `H(X|Y)` in bits for a uniformly random codeword sent over `qEC_λ`,
/// summing `k - rank` over every set of revealed coordinates.
pub fn erasure_entropy_bits(generator: &[Vec<u8>], q: u64, n: usize, lambda: f64) -> f64 {
    let k = generator.len();
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        let revealed: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let rows = generator.iter().map(|g| revealed.iter().map(|&i| u64::from(g[i])).collect()).collect();
        let rank = if revealed.is_empty() { 0 } else { rank_mod(rows, q) };
        let r = revealed.len() as i32;
        total += (1.0 - lambda).powi(r) * lambda.powi(n as i32 - r) * (k - rank) as f64;
    }
    total * (q as f64).log2()
}

/// Every word of `Σ^n` in base-q counting order.
pub fn all_words(q: u64, n: usize) -> Vec<Vec<u8>> {
    (0..q.pow(n as u32))
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let d = (idx % q) as u8;
                    idx /= q;
                    d
                })
                .collect()
        })
        .collect()
}

pub fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}
