//! Exact integer and rational scalars used throughout the engine.
//!
//! All geometric quantities are polynomials in the scroll parameters with
//! integer coefficients, so the engine works over [`num::BigInt`] end to end
//! and never rounds.  Slopes are the only genuinely rational quantities and
//! use [`num::BigRational`].

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, Signed, Zero};

/// Arbitrary-precision integer scalar.
pub type Int = BigInt;

/// Exact rational scalar (used for slopes).
pub type Rat = BigRational;

/// Shorthand for building an [`Int`] from a machine integer.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Exact division, panicking if `d` does not divide `n`.
///
/// The closed formulas in [`crate::moduli`] contain divisions by 2 and 4
/// that are provably exact for the parity in question; this helper turns a
/// violated parity assumption into a loud failure instead of a silent
/// truncation.
pub fn div_exact(n: &Int, d: i64) -> Int {
    let d = Int::from(d);
    let (q, r) = n.div_rem(&d);
    assert!(r.is_zero(), "non-exact division: {n} / {d}");
    q
}

/// `max(n, 0)` — the positive part, ubiquitous in cohomology counts.
pub fn pos(n: Int) -> Int {
    if n.is_negative() {
        Int::zero()
    } else {
        n
    }
}

/// Exact rational `n / d` with `d != 0`.
pub fn ratio(n: Int, d: Int) -> Rat {
    Rat::new(n, d)
}
