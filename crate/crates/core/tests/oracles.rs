//! Library values against independent reference computations.

#![allow(clippy::needless_range_loop)]

use boundlab::code::{corpus, erasure_error_exact, qsc_block_error_exact, LinearCode, CORPUS_SEED};
use boundlab::entropy::{binary_entropy, log_binomial, q_entropy, q_entropy_inverse, LnFactorials};
use boundlab::geometry::{mu_exact, mu_log, nu_exact, nu_log};
use boundlab::thresholds::johnson_radius;
use num_traits::ToPrimitive;

mod common;
use common::{ball_count, binomial_big, distance_table, ln_ball_intersection, ln_big};

fn big(c: &boundlab::geometry::Count) -> u64 {
    c.exact().expect("exact for small n").to_u64().unwrap()
}

#[test]
fn intersections_match_enumeration() {
    for q in [2u64, 3] {
        for n in 1..=10usize {
            let table = distance_table(q, n);
            for w in 0..=n {
                let plane = &table[w];
                for t1 in 0..=n {
                    for t2 in 0..=n {
                        assert_eq!(big(&nu_exact(q, n, t1, t2, w).unwrap()), plane[t1][t2], "nu q={q} n={n}");
                    }
                    let ball = ball_count(plane, t1);
                    assert_eq!(big(&mu_exact(q, n, t1 as f64, w).unwrap()), ball, "mu q={q} n={n} t={t1} w={w}");
                }
            }
        }
    }
}

#[test]
fn reference_log_count_matches_enumeration() {
    for q in [2u64, 3, 5] {
        for n in 1..=7usize {
            let table = distance_table(q, n);
            for w in 0..=n {
                for t in 0..=n {
                    let want = ball_count(&table[w], t);
                    let got = ln_ball_intersection(q, n, t, w);
                    if want == 0 {
                        assert_eq!(got, f64::NEG_INFINITY);
                    } else {
                        assert!((got - (want as f64).ln()).abs() < 1e-12, "q={q} n={n} t={t} w={w}");
                    }
                }
            }
        }
    }
}

#[test]
fn log_domain_tracks_exact_counts() {
    for q in [2u64, 3, 5] {
        let n = 30;
        for w in [0, 1, 7, 15, 30] {
            for t in [3usize, 10, 15, 22] {
                let exact = mu_exact(q, n, t as f64, w).unwrap();
                let ln = mu_log(q, n, t as f64, w).unwrap();
                if exact.is_zero() {
                    assert_eq!(ln, f64::NEG_INFINITY);
                } else {
                    assert!((exact.ln() - ln).abs() < 1e-10 * exact.ln().abs().max(1.0));
                }
                let exact = nu_exact(q, n, t, 15, w).unwrap();
                let ln = nu_log(q, n, t, 15, w).unwrap();
                if !exact.is_zero() {
                    assert!((exact.ln() - ln).abs() < 1e-10 * exact.ln().abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn log_binomials_match_big_integers() {
    for n in 0..=64u64 {
        for k in 0..=n {
            let want = ln_big(&binomial_big(n, k));
            assert!((log_binomial(n, k).unwrap() - want).abs() <= 1e-12 * want.max(1.0));
        }
    }
    let table = LnFactorials::new(3000);
    for (n, k) in [(3000u64, 900u64), (3000, 1500), (3000, 1), (200, 77), (1000, 333)] {
        let want = ln_big(&binomial_big(n, k));
        let rel = 1e-12 * want;
        assert!((log_binomial(n, k).unwrap() - want).abs() <= rel, "C({n},{k})");
        assert!((table.ln_binomial(n as usize, k as usize) - want).abs() <= rel, "table C({n},{k})");
    }
}

#[test]
fn entropies_match_closed_forms() {
    for i in 1..100 {
        let x = i as f64 / 100.0;
        let h = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((binary_entropy(x).unwrap() - h).abs() < 1e-14);
        for q in [3u64, 5, 16] {
            let qf = q as f64;
            let hq = x * (qf - 1.0).log(qf) - x * x.log(qf) - (1.0 - x) * (1.0 - x).log(qf);
            assert!((q_entropy(q, x).unwrap() - hq).abs() < 1e-14);
        }
    }
    assert!((binary_entropy(0.11).unwrap() - 0.499916).abs() < 1e-6);
    assert!((q_entropy_inverse(2, 0.5).unwrap() - 0.11003).abs() < 1e-5);
    for q in [2u64, 3, 9, 17] {
        assert!((q_entropy(q, 1.0 - 1.0 / q as f64).unwrap() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn johnson_matches_closed_form() {
    assert!((johnson_radius(2, 0.1).unwrap() - 0.5 * (1.0 - 0.8f64.sqrt())).abs() < 1e-15);
    assert!((johnson_radius(2, 0.1).unwrap() - 0.0528).abs() < 5e-4);
    assert_eq!(johnson_radius(2, 0.0).unwrap(), 0.0);
    assert!((johnson_radius(3, 2.0 / 3.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

fn krawtchouk(n: usize, j: usize, i: usize) -> i128 {
    let c = |a: usize, b: usize| -> i128 { binomial_big(a as u64, b as u64).to_i128().unwrap() };
    (0..=j)
        .filter(|&s| s <= i && j - s <= n - i)
        .map(|s| if s % 2 == 0 { 1 } else { -1 } * c(i, s) * c(n - i, j - s))
        .sum()
}

#[test]
fn dual_weights_follow_macwilliams() {
    for entry in corpus(CORPUS_SEED).into_iter().filter(|c| c.code.q() == 2) {
        let code = &entry.code;
        let n = code.n();
        let a = code.weight_distribution().unwrap().counts;
        let b = code.dual().weight_distribution().unwrap().counts;
        let size: i128 = a.iter().map(|&x| x as i128).sum();
        for j in 0..=n {
            let s: i128 = (0..=n).map(|i| a[i] as i128 * krawtchouk(n, j, i)).sum();
            assert_eq!(s % size, 0);
            assert_eq!((s / size) as u64, b[j], "{} weight {j}", entry.name);
        }
    }
}

#[test]
fn exact_errors_of_simple_codes() {
    for p in [0.01, 0.1, 0.25, 0.4] {
        let rep3 = LinearCode::repetition(2, 3).unwrap();
        let e = qsc_block_error_exact(&rep3, p).unwrap();
        let want = 3.0 * p * p * (1.0 - p) + p * p * p;
        assert!((e.zero_lexicographic - want).abs() < 1e-15);
        assert!((e.pessimistic - want).abs() < 1e-15);
    }
    for lambda in [0.1, 0.5, 0.9] {
        for n in [3usize, 6] {
            let full = LinearCode::full_space(2, n).unwrap();
            let want = 1.0 - (1.0f64 - lambda).powi(n as i32);
            assert!((erasure_error_exact(&full, lambda).unwrap().ambiguity - want).abs() < 1e-14);
            let rep = LinearCode::repetition(3, n).unwrap();
            let want = lambda.powi(n as i32);
            assert!((erasure_error_exact(&rep, lambda).unwrap().ambiguity - want).abs() < 1e-14);
        }
    }
}
