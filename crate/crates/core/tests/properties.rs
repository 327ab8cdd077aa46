use boundlab::code::LinearCode;
use boundlab::curve::Curve;
use boundlab::entropy::{q_entropy, q_entropy_inverse};
use boundlab::exponents::{f_q, m_q};
use boundlab::geometry::{mu_exact, nu_exact, Count};
use boundlab::montecarlo::{wilson_interval, Z95};
use boundlab::thresholds::{johnson_radius, lsym_lower_bound, p_star};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exact(c: Count) -> BigUint {
    c.exact().cloned().expect("n <= 40")
}

fn sphere(q: u64, n: usize, t: usize) -> BigUint {
    let mut c = BigUint::from(1u32);
    for i in 0..t {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c * BigUint::from(q - 1).pow(t as u32)
}

proptest! {
    #[test]
    fn entropy_inverse_round_trips(q in 2u64..40, y in 0.0f64..=1.0) {
        let x = q_entropy_inverse(q, y).unwrap();
        prop_assert!(x >= 0.0 && x <= 1.0 - 1.0 / q as f64 + 1e-12);
        prop_assert!((q_entropy(q, x).unwrap() - y).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_bounded(q in 2u64..1000, x in 0.0f64..=1.0) {
        let h = q_entropy(q, x).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&h));
    }

    #[test]
    fn sphere_rows_sum_to_sphere_size(q in 2u64..6, n in 1usize..25, t1 in 0usize..25, w in 0usize..25) {
        prop_assume!(t1 <= n && w <= n);
        let row: BigUint = (0..=n).map(|t2| exact(nu_exact(q, n, t1, t2, w).unwrap())).sum();
        prop_assert_eq!(row, sphere(q, n, t1));
    }

    #[test]
    fn ball_intersection_monotone_in_radius(q in 2u64..6, n in 1usize..30, t in 0usize..30, w in 0usize..30) {
        prop_assume!(t < n && w <= n);
        let a = exact(mu_exact(q, n, t as f64, w).unwrap());
        let b = exact(mu_exact(q, n, (t + 1) as f64, w).unwrap());
        prop_assert!(a <= b);
        let ball: BigUint = (0..=t).map(|i| sphere(q, n, i)).sum();
        prop_assert!(a <= ball.clone());
        prop_assert_eq!(exact(mu_exact(q, n, t as f64, 0).unwrap()), ball);
    }

    #[test]
    fn exponent_between_zero_and_entropy(q in 2u64..20, p_frac in 0.0f64..=1.0, g_frac in 0.0f64..=1.0) {
        let p = p_frac * (1.0 - 1.0 / q as f64);
        let gamma = g_frac * (2.0 * p).min(1.0);
        let m = m_q(q, gamma, p).unwrap();
        let f = f_q(q, gamma, p).unwrap();
        prop_assert!(m >= -1e-12);
        prop_assert!(f >= -1e-9, "F = {f}");
    }

    #[test]
    fn thresholds_stay_in_range(q in prop::sample::select(vec![2u64, 3, 4, 9, 17]), d_frac in 0.001f64..=1.0, lambda in 0.05f64..0.95) {
        let delta = d_frac * (1.0 - 1.0 / q as f64);
        let j = johnson_radius(q, delta).unwrap();
        prop_assert!(j >= delta / 2.0 - 1e-12 && j <= delta + 1e-12);
        let l = lsym_lower_bound(q, delta).unwrap();
        prop_assert!(l >= 0.0 && l <= delta + 1e-12);
        if q == 2 && delta <= 0.5 {
            let r = p_star(q, lambda, delta).unwrap();
            prop_assert!(r.value >= 0.0 && r.value <= 0.5);
            prop_assert!(r.bracket.0 <= r.value && r.value <= r.bracket.1);
        }
    }

    #[test]
    fn codes_have_consistent_weights(q in prop::sample::select(vec![2u64, 3, 5]), n in 2usize..9, k_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let k = 1 + (k_frac * (n - 1) as f64) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = LinearCode::random(q, n, k, &mut rng).unwrap();
        let wd = code.weight_distribution().unwrap();
        prop_assert_eq!(wd.total() as u128, code.size());
        prop_assert_eq!(wd.counts[0], 1);
        prop_assert!(code.dual().dual().same_span(&code));
        let dual = code.dual().weight_distribution().unwrap();
        prop_assert_eq!(dual.total() as u128 * code.size(), (q as u128).pow(n as u32));
        for word in code.codewords().unwrap() {
            prop_assert!(code.contains(&word));
        }
    }

    #[test]
    fn wilson_contains_estimate(trials in 1u64..100_000, frac in 0.0f64..=1.0) {
        let errors = (frac * trials as f64) as u64;
        let (lo, hi) = wilson_interval(errors, trials, Z95);
        let p = errors as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn curves_round_trip(steps in prop::collection::vec(1e-6f64..10.0, 1..40), ys in prop::collection::vec(prop::num::f64::ANY, 40)) {
        let mut curve = Curve::new("prop", &["x", "y"]).unwrap().with_meta("seed", 3);
        let mut x = -5.0;
        for (s, y) in steps.iter().zip(&ys) {
            x += s;
            curve.push(vec![x, *y]).unwrap();
        }
        let back = Curve::read_csv(curve.to_csv_string().as_bytes()).unwrap();
        prop_assert_eq!(&back.columns, &curve.columns);
        prop_assert_eq!(back.rows.len(), curve.rows.len());
        for (a, b) in back.rows.iter().zip(&curve.rows) {
            prop_assert_eq!(a[0], b[0]);
            if b[1].is_finite() {
                prop_assert_eq!(a[1], b[1]);
            } else {
                prop_assert!(a[1].is_nan());
            }
        }
    }
}
