//! Bisection on monotone predicates.

/// Final bracket of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub iterations: u32,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Locates the switch point of a predicate that is `false` on `[lo, x*)` and
/// `true` on `[x*, hi]`.
///
/// The caller guarantees `pred(hi)` holds and `pred(lo)` fails. The returned
/// bracket keeps that invariant and is narrowed to width at most `tol` (or
/// until floating point stops making progress).
pub fn first_true<F>(mut lo: f64, mut hi: f64, tol: f64, pred: F) -> Bracket
where
    F: Fn(f64) -> bool,
{
    let mut iterations = 0;
    while hi - lo > tol && iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Bracket { lo, hi, iterations }
}

/// Root of a continuous increasing function `f` on `[lo, hi]` with
/// `f(lo) <= target <= f(hi)`.
pub fn increasing_root<F>(lo: f64, hi: f64, target: f64, tol: f64, f: F) -> Bracket
where
    F: Fn(f64) -> f64,
{
    first_true(lo, hi, tol, |x| f(x) >= target)
}
