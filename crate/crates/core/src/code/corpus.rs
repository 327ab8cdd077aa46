//! Small named codes used by the verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LinearCode;

pub const CORPUS_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone)]
pub struct NamedCode {
    pub name: String,
    pub code: LinearCode,
}

fn named(name: String, code: LinearCode) -> NamedCode {
    NamedCode { name, code }
}

/// Structured families plus seeded random codes with `q ∈ {2, 3, 5}`.
pub fn corpus(seed: u64) -> Vec<NamedCode> {
    let mut out = vec![
        named("zero(2,5)".into(), LinearCode::zero(2, 5).unwrap()),
        named("full(2,5)".into(), LinearCode::full_space(2, 5).unwrap()),
        named("full(3,3)".into(), LinearCode::full_space(3, 3).unwrap()),
        named("repetition(2,3)".into(), LinearCode::repetition(2, 3).unwrap()),
        named("repetition(2,6)".into(), LinearCode::repetition(2, 6).unwrap()),
        named("repetition(3,4)".into(), LinearCode::repetition(3, 4).unwrap()),
        named("parity(2,6)".into(), LinearCode::single_parity_check(2, 6).unwrap()),
        named("parity(3,4)".into(), LinearCode::single_parity_check(3, 4).unwrap()),
        named("hamming(7,4)".into(), LinearCode::hamming_7_4()),
        named("ext-hamming(8,4)".into(), LinearCode::extended_hamming_8_4()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (q, max_n, count) in [(2u64, 12usize, 4usize), (3, 8, 3), (5, 6, 2)] {
        for i in 0..count {
            let n = rng.random_range(4..=max_n);
            let k = rng.random_range(1..n);
            let code = LinearCode::random(q, n, k, &mut rng).expect("prime field");
            out.push(named(format!("random(q={q},n={n},k={k},#{i})"), code));
        }
    }
    out
}

/// `count` binary codes with `2 <= n <= max_n` and `1 <= k <= n`.
pub fn random_binary_codes(count: usize, max_n: usize, seed: u64) -> Vec<LinearCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_n);
            let k = rng.random_range(1..=n);
            LinearCode::random(2, n, k, &mut rng).expect("binary field")
        })
        .collect()
}
