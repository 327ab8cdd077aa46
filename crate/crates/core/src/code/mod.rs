//! Explicit linear codes over prime fields.

mod bounds;
mod corpus;
mod erasure;
mod list;
mod qsc;

pub use bounds::{
    check_double_counting, check_double_counting_with_list, check_samorodnitsky, dual_branch_ln, dual_weight_bound,
    dual_weight_bounds, poltyrev_bound, sphere_bound, union_bhattacharyya_bound,
    union_bhattacharyya_bound_with_entropy, DoubleCountingReport, DualWeightBound, PoltyrevBound, PoltyrevParams,
    SamorodnitskyCheck, SphereBoundParams, CHECK_SLACK,
};
pub use corpus::{corpus, random_binary_codes, NamedCode, CORPUS_SEED};
pub use erasure::{erasure_entropy_exact, erasure_error_exact, ErasureError, ErasureProfile};
pub use list::{
    erasure_list_size_max, list_size_max, list_size_max_with, CenterSearch, ListDecodingCertificate, Witness,
};
pub use qsc::{qsc_block_error_exact, repetition_bawgn_block_error, QscBlockError};

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::entropy::is_prime;
use crate::error::{ensure, Error, Result};

/// Largest code size `q^k` that codeword enumeration accepts.
pub const CODEWORD_BUDGET: u128 = 1 << 24;

/// Largest alphabet for explicit codes (symbols are stored as bytes).
pub const MAX_FIELD: u64 = 251;

/// Arithmetic in the prime field `Z_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Field {
    q: u32,
}

impl Field {
    pub(crate) fn new(q: u64) -> Self {
        Field { q: q as u32 }
    }

    #[inline]
    pub(crate) fn add(self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.q) as u8
    }

    #[inline]
    pub(crate) fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.q - b as u32) % self.q) as u8
    }

    #[inline]
    pub(crate) fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.q) as u8
    }

    pub(crate) fn inv(self, a: u8) -> u8 {
        debug_assert!(a != 0);
        let mut result = 1u32;
        let mut base = a as u32 % self.q;
        let mut e = self.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.q;
            }
            base = base * base % self.q;
            e >>= 1;
        }
        result as u8
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub(crate) fn rref(self, rows: &mut [Vec<u8>]) -> Vec<usize> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, found);
            let inv = self.inv(rows[r][col]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[col] != 0 {
                    let f = row[col];
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x = self.sub(*x, self.mul(f, p));
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub(crate) fn rank(self, mut rows: Vec<Vec<u8>>) -> usize {
        self.rref(&mut rows).len()
    }
}

/// A linear code given by a full-rank generator matrix over `Z_q`, `q` prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearCode {
    q: u64,
    n: usize,
    generator: Vec<Vec<u8>>,
}

impl LinearCode {
    /// Validates primality, symbol range and full row rank.
    pub fn new(q: u64, n: usize, generator: Vec<Vec<u8>>) -> Result<Self> {
        ensure(is_prime(q), || format!("q = {q} is not prime"))?;
        ensure(q <= MAX_FIELD, || format!("q = {q} exceeds {MAX_FIELD}"))?;
        ensure(n >= 1, || "block length must be >= 1".into())?;
        for (i, row) in generator.iter().enumerate() {
            ensure(row.len() == n, || format!("row {i} has {} entries, expected {n}", row.len()))?;
            if let Some(&bad) = row.iter().find(|&&s| u64::from(s) >= q) {
                return Err(Error::Domain(format!("row {i} has symbol {bad} outside [0,{q})")));
            }
        }
        let rank = Field::new(q).rank(generator.clone());
        if rank < generator.len() {
            return Err(Error::RankDeficient { rank, rows: generator.len() });
        }
        Ok(LinearCode { q, n, generator })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<u8>] {
        &self.generator
    }

    pub(crate) fn field(&self) -> Field {
        Field::new(self.q)
    }

    /// `q^k`, saturating.
    pub fn size(&self) -> u128 {
        (self.q as u128).checked_pow(self.k() as u32).unwrap_or(u128::MAX)
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub(crate) fn check_budget(&self) -> Result<()> {
        let size = self.size();
        if size > CODEWORD_BUDGET {
            return Err(Error::Budget { what: "codewords", needed: size, limit: CODEWORD_BUDGET });
        }
        Ok(())
    }

    /// Visits every codeword once, starting from `0^n`.
    pub fn for_each_codeword<F: FnMut(&[u8])>(&self, mut f: F) -> Result<()> {
        self.check_budget()?;
        let field = self.field();
        let k = self.k();
        let mut msg = vec![0u8; k];
        let mut word = vec![0u8; self.n];
        loop {
            f(&word);
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(());
                }
                // Adding row i once more; after q additions the word is back.
                for (w, g) in word.iter_mut().zip(&self.generator[i]) {
                    *w = field.add(*w, *g);
                }
                msg[i] += 1;
                if u64::from(msg[i]) < self.q {
                    break;
                }
                msg[i] = 0;
                i += 1;
            }
        }
    }

    pub fn codewords(&self) -> Result<Vec<Vec<u8>>> {
        let mut out = Vec::with_capacity(self.size() as usize);
        self.for_each_codeword(|c| out.push(c.to_vec()))?;
        Ok(out)
    }

    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        ensure(message.len() == self.k(), || format!("message has length {}, expected {}", message.len(), self.k()))?;
        let field = self.field();
        let mut word = vec![0u8; self.n];
        for (m, row) in message.iter().zip(&self.generator) {
            for (w, g) in word.iter_mut().zip(row) {
                *w = field.add(*w, field.mul(*m, *g));
            }
        }
        Ok(word)
    }

    /// True when `word` lies in the row span of the generator.
    pub fn contains(&self, word: &[u8]) -> bool {
        if word.len() != self.n || word.iter().any(|&s| u64::from(s) >= self.q) {
            return false;
        }
        let mut rows = self.generator.clone();
        rows.push(word.to_vec());
        self.field().rank(rows) == self.k()
    }

    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        self.weight_distribution_from(None)
    }

    /// Distance distribution of the code from `x` (default `0^n`).
    pub fn weight_distribution_from(&self, x: Option<&[u8]>) -> Result<WeightDistribution> {
        if let Some(x) = x {
            ensure(x.len() == self.n, || format!("reference word has length {}", x.len()))?;
        }
        let mut counts = vec![0u64; self.n + 1];
        self.for_each_codeword(|c| {
            let w = match x {
                None => c.iter().filter(|&&s| s != 0).count(),
                Some(x) => c.iter().zip(x).filter(|(a, b)| a != b).count(),
            };
            counts[w] += 1;
        })?;
        Ok(WeightDistribution { q: self.q, counts, reference: x.map(<[u8]>::to_vec) })
    }

    /// Minimum nonzero weight, `None` for the zero code.
    pub fn min_distance(&self) -> Result<Option<usize>> {
        Ok(self.weight_distribution()?.min_distance())
    }

    /// Generator of the orthogonal complement.
    pub fn dual(&self) -> LinearCode {
        let field = self.field();
        let mut rows = self.generator.clone();
        let pivots = field.rref(&mut rows);
        let mut basis = Vec::with_capacity(self.n - pivots.len());
        for free in (0..self.n).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u8; self.n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.sub(0, rows[r][free]);
            }
            basis.push(v);
        }
        LinearCode { q: self.q, n: self.n, generator: basis }
    }

    /// True when both codes span the same subspace.
    pub fn same_span(&self, other: &LinearCode) -> bool {
        if self.q != other.q || self.n != other.n || self.k() != other.k() {
            return false;
        }
        let mut rows = self.generator.clone();
        rows.extend(other.generator.iter().cloned());
        self.field().rank(rows) == self.k()
    }

    /// Rank of the generator restricted to the columns in `mask`.
    pub(crate) fn column_rank(&self, mask: u64) -> usize {
        let cols: Vec<usize> = (0..self.n).filter(|&j| mask >> j & 1 == 1).collect();
        if cols.is_empty() {
            return 0;
        }
        let rows = self.generator.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
        self.field().rank(rows)
    }

    /// Parses the text format: a `q n k` header, then `k` rows of `n` symbols.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty generator file".into()))?;
        let nums = parse_numbers(header, "header")?;
        let [q, n, k] = nums[..] else {
            return Err(Error::Parse(format!("header must be `q n k`, got `{header}`")));
        };
        let mut rows = Vec::with_capacity(k as usize);
        for i in 0..k {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {i} of {k}")))?;
            let row = parse_numbers(line, "row")?;
            if row.len() != n as usize {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&s| s >= q) {
                return Err(Error::Parse(format!("row {i} has symbol {bad} outside [0,{q})")));
            }
            rows.push(row.into_iter().map(|s| s as u8).collect());
        }
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line `{extra}`")));
        }
        LinearCode::new(q, n as usize, rows)
    }

    pub fn repetition(q: u64, n: usize) -> Result<Self> {
        LinearCode::new(q, n, vec![vec![1; n]])
    }

    pub fn single_parity_check(q: u64, n: usize) -> Result<Self> {
        Ok(LinearCode::repetition(q, n)?.dual())
    }

    pub fn full_space(q: u64, n: usize) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
        LinearCode::new(q, n, rows)
    }

    pub fn zero(q: u64, n: usize) -> Result<Self> {
        LinearCode::new(q, n, Vec::new())
    }

    pub fn hamming_7_4() -> Self {
        let rows = ["1000110", "0100101", "0010011", "0001111"];
        LinearCode::new(2, 7, rows.iter().map(|r| bits(r)).collect()).expect("valid generator")
    }

    pub fn extended_hamming_8_4() -> Self {
        let rows = ["10001101", "01001011", "00100111", "00011110"];
        LinearCode::new(2, 8, rows.iter().map(|r| bits(r)).collect()).expect("valid generator")
    }

    /// Uniformly random full-rank `k × n` generator (by rejection).
    pub fn random<R: Rng + ?Sized>(q: u64, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        ensure(k <= n, || format!("dimension {k} exceeds length {n}"))?;
        ensure(is_prime(q) && q <= MAX_FIELD, || format!("q = {q} must be a prime <= {MAX_FIELD}"))?;
        loop {
            let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..n).map(|_| rng.random_range(0..q) as u8).collect()).collect();
            match LinearCode::new(q, n, rows) {
                Ok(c) => return Ok(c),
                Err(Error::RankDeficient { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
}

fn bits(s: &str) -> Vec<u8> {
    s.bytes().map(|b| b - b'0').collect()
}

fn parse_numbers(line: &str, what: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad {what} entry `{t}`"))))
        .collect()
}

impl fmt::Display for LinearCode {
    /// Writes the text format accepted by [`LinearCode::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.q, self.n, self.k())?;
        for row in &self.generator {
            let cells: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Number of codewords at each distance from a reference word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub q: u64,
    pub counts: Vec<u64>,
    /// `None` means the all-zero word.
    pub reference: Option<Vec<u8>>,
}

impl WeightDistribution {
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Smallest positive weight with a nonzero count.
    pub fn min_distance(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| self.counts[w] > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_distributions() {
        let rep = LinearCode::repetition(2, 3).unwrap();
        assert_eq!(rep.weight_distribution().unwrap().counts, vec![1, 0, 0, 1]);
        let ham = LinearCode::hamming_7_4();
        assert_eq!(ham.weight_distribution().unwrap().counts, vec![1, 0, 0, 7, 7, 0, 0, 1]);
        let full = LinearCode::full_space(2, 5).unwrap();
        assert_eq!(full.weight_distribution().unwrap().counts, vec![1, 5, 10, 10, 5, 1]);
        let ext = LinearCode::extended_hamming_8_4();
        assert_eq!(ext.weight_distribution().unwrap().counts, vec![1, 0, 0, 0, 14, 0, 0, 0, 1]);
    }

    #[test]
    fn duals() {
        let rep = LinearCode::repetition(3, 5).unwrap();
        let d = rep.dual();
        assert_eq!(d.k(), 4);
        assert_eq!(d.weight_distribution().unwrap().total(), 81);
        assert!(d.dual().same_span(&rep));
        let ext = LinearCode::extended_hamming_8_4();
        assert!(ext.dual().same_span(&ext));
        let full = LinearCode::full_space(5, 3).unwrap();
        assert_eq!(full.dual().k(), 0);
        assert_eq!(LinearCode::zero(2, 4).unwrap().dual().k(), 4);
    }

    #[test]
    fn dual_is_orthogonal() {
        let ham = LinearCode::hamming_7_4();
        let f = ham.field();
        for a in ham.generator() {
            for b in ham.dual().generator() {
                let dot = a.iter().zip(b).fold(0u8, |acc, (x, y)| f.add(acc, f.mul(*x, *y)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            LinearCode::new(2, 3, vec![vec![1, 1, 0], vec![1, 1, 0]]),
            Err(Error::RankDeficient { rank: 1, rows: 2 })
        ));
        assert!(LinearCode::new(4, 2, vec![vec![1, 1]]).is_err());
        assert!(LinearCode::new(3, 2, vec![vec![1, 3]]).is_err());
        assert!(LinearCode::new(2, 2, vec![vec![1]]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let ham = LinearCode::hamming_7_4();
        let parsed = LinearCode::parse(&ham.to_string()).unwrap();
        assert_eq!(parsed, ham);
        assert!(LinearCode::parse("2 3 1\n1 1").is_err());
        assert!(LinearCode::parse("2 3\n1 1 1").is_err());
        assert!(matches!(LinearCode::parse("2 2 2\n1 1\n1 1"), Err(Error::RankDeficient { .. })));
        assert!(LinearCode::parse("3 2 1\n1 x").is_err());
    }

    #[test]
    fn translated_distributions_agree() {
        let code = LinearCode::new(3, 4, vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap();
        let base = code.weight_distribution().unwrap().counts;
        for c in code.codewords().unwrap() {
            assert_eq!(code.weight_distribution_from(Some(&c)).unwrap().counts, base);
        }
    }

    #[test]
    fn enumeration_matches_encoding() {
        let code = LinearCode::new(5, 3, vec![vec![1, 2, 3], vec![0, 1, 4]]).unwrap();
        let words = code.codewords().unwrap();
        assert_eq!(words.len(), 25);
        let mut sorted = words.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 25);
        assert!(words.iter().all(|w| code.contains(w)));
        assert_eq!(code.encode(&[2, 3]).unwrap(), vec![2, 2, 3]);
    }
}
