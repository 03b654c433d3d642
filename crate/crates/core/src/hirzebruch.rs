//! Divisor arithmetic and exact line-bundle cohomology on a Hirzebruch
//! surface.
//!
//! The surface `F_e = P(O + O(-e))` (with `e >= 0`) fibres over `P^1` with
//! fibre class `f` and carries a distinguished section `C_e` of
//! self-intersection `-e`.  Numerical classes of divisors form
//!
//! ```text
//!     Num(F_e) = Z<C_e> + Z<f>,
//!     C_e^2 = -e,   C_e . f = 1,   f^2 = 0 ,
//! ```
//!
//! and we write `O(a, b)` for `O(a C_e + b f)`.  The intersection pairing
//! and canonical class are
//!
//! ```text
//!     (a1, b1) . (a2, b2) = -e a1 a2 + a1 b2 + a2 b1 ,
//!     K = (-2, -(e + 2)) .
//! ```
//!
//! Cohomology of a line bundle `O(a, b)` is computed exactly:
//!
//! * `a >= 0`: push forward along `pi: F_e -> P^1`,
//!   `pi_* O(a, b) = O(b) + O(b - e) + ... + O(b - a e)`, and read off
//!   `h^0`, `h^1` from the classical line-bundle counts on `P^1`; `h^2`
//!   vanishes because the dual side has no sections.
//! * `a = -1`: both direct images vanish, so all cohomology vanishes.
//! * `a <= -2`: Serre duality `h^i(D) = h^{2-i}(K - D)` reduces to the
//!   first case.
//!
//! The sums over the pushforward are evaluated in closed form, so the cost
//! is independent of the size of the coefficients.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{Integer, Signed, Zero};

use crate::arith::{div_exact, int, pos, Int};

/// A divisor class `alpha C_e + beta f` on a Hirzebruch surface.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SurfaceDivisor {
    pub alpha: Int,
    pub beta: Int,
}

impl SurfaceDivisor {
    pub fn new(alpha: impl Into<Int>, beta: impl Into<Int>) -> Self {
        SurfaceDivisor {
            alpha: alpha.into(),
            beta: beta.into(),
        }
    }

    /// The zero class.
    pub fn zero() -> Self {
        SurfaceDivisor::new(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// Scalar multiple `n * self`.
    pub fn scale(&self, n: &Int) -> Self {
        SurfaceDivisor::new(&self.alpha * n, &self.beta * n)
    }
}

impl Add for SurfaceDivisor {
    type Output = SurfaceDivisor;
    fn add(self, rhs: SurfaceDivisor) -> SurfaceDivisor {
        SurfaceDivisor::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl<'a> Add<&'a SurfaceDivisor> for SurfaceDivisor {
    type Output = SurfaceDivisor;
    fn add(self, rhs: &'a SurfaceDivisor) -> SurfaceDivisor {
        SurfaceDivisor::new(self.alpha + &rhs.alpha, self.beta + &rhs.beta)
    }
}

impl Sub for SurfaceDivisor {
    type Output = SurfaceDivisor;
    fn sub(self, rhs: SurfaceDivisor) -> SurfaceDivisor {
        SurfaceDivisor::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl<'a> Sub<&'a SurfaceDivisor> for SurfaceDivisor {
    type Output = SurfaceDivisor;
    fn sub(self, rhs: &'a SurfaceDivisor) -> SurfaceDivisor {
        SurfaceDivisor::new(self.alpha - &rhs.alpha, self.beta - &rhs.beta)
    }
}

impl Neg for SurfaceDivisor {
    type Output = SurfaceDivisor;
    fn neg(self) -> SurfaceDivisor {
        SurfaceDivisor::new(-self.alpha, -self.beta)
    }
}

impl fmt::Display for SurfaceDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.beta)
    }
}

/// Exact cohomology of a sheaf on a surface: `(h^0, h^1, h^2)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohVector {
    pub h0: Int,
    pub h1: Int,
    pub h2: Int,
}

impl CohVector {
    pub fn zero() -> Self {
        CohVector {
            h0: Int::zero(),
            h1: Int::zero(),
            h2: Int::zero(),
        }
    }

    pub fn chi(&self) -> Int {
        &self.h0 - &self.h1 + &self.h2
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero() && self.h1.is_zero() && self.h2.is_zero()
    }
}

impl fmt::Display for CohVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.h0, self.h1, self.h2)
    }
}

/// The Hirzebruch surface `F_e`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Surface {
    e: Int,
}

impl Surface {
    /// Builds `F_e`; the invariant `e >= 0` must already hold.
    pub fn new(e: impl Into<Int>) -> Self {
        let e = e.into();
        assert!(!e.is_negative(), "Hirzebruch parameter must satisfy e >= 0");
        Surface { e }
    }

    pub fn e(&self) -> &Int {
        &self.e
    }

    /// Intersection number `D1 . D2 = -e a1 a2 + a1 b2 + a2 b1`.
    pub fn intersect(&self, d1: &SurfaceDivisor, d2: &SurfaceDivisor) -> Int {
        -&self.e * &d1.alpha * &d2.alpha + &d1.alpha * &d2.beta + &d2.alpha * &d1.beta
    }

    /// Canonical class `K = (-2, -(e + 2))`.
    pub fn canonical(&self) -> SurfaceDivisor {
        SurfaceDivisor::new(int(-2), -(&self.e + int(2)))
    }

    /// Serre dual class `K - D`.
    pub fn serre_dual(&self, d: &SurfaceDivisor) -> SurfaceDivisor {
        self.canonical() - d
    }

    /// Euler characteristic of `O(a, b)` by Riemann-Roch:
    ///
    /// ```text
    ///     chi(a, b) = (a + 1)(b + 1) - e a (a + 1) / 2 .
    /// ```
    pub fn chi_line(&self, d: &SurfaceDivisor) -> Int {
        let a = &d.alpha;
        let b = &d.beta;
        (a + 1) * (b + 1) - div_exact(&(&self.e * a * (a + 1)), 2)
    }

    /// Exact `(h^0, h^1, h^2)` of the line bundle `O(a, b)`.
    pub fn cohomology_line(&self, d: &SurfaceDivisor) -> CohVector {
        let minus_two = int(-2);
        if d.alpha >= Int::zero() {
            let (h0, h1) = self.pushforward_counts(&d.alpha, &d.beta);
            let v = CohVector {
                h0,
                h1,
                h2: Int::zero(),
            };
            debug_assert_eq!(v.chi(), self.chi_line(d));
            v
        } else if d.alpha <= minus_two {
            let dual = self.serre_dual(d);
            let (h0, h1) = self.pushforward_counts(&dual.alpha, &dual.beta);
            let v = CohVector {
                h0: Int::zero(),
                h1,
                h2: h0,
            };
            debug_assert_eq!(v.chi(), self.chi_line(d));
            v
        } else {
            // alpha = -1: both direct images under pi vanish.
            CohVector::zero()
        }
    }

    /// `h^0` and `h^1` of `O(a, b)` with `a >= 0`, via the pushforward
    /// `sum_{i=0..a} O(b - i e)` on `P^1`, summed in closed form.
    fn pushforward_counts(&self, a: &Int, b: &Int) -> (Int, Int) {
        debug_assert!(!a.is_negative());
        let e = &self.e;
        if e.is_zero() {
            // F_0 = P^1 x P^1: all a + 1 summands have degree b.
            let copies = a + 1;
            return (&copies * pos(b + 1), copies * pos(-b - 1));
        }
        // h^0: indices with b - i e >= 0, i.e. 0 <= i <= min(a, floor(b / e)).
        let h0 = if b.is_negative() {
            Int::zero()
        } else {
            let m = b.div_floor(e).min(a.clone());
            (&m + 1) * (b + 1) - div_exact(&(e * &m * (&m + 1)), 2)
        };
        // h^1: indices with i e - b - 2 >= 0, i.e. i >= ceil((b + 2) / e).
        let i0 = (b + int(2)).div_ceil(e).max(Int::zero());
        let h1 = if i0 > *a {
            Int::zero()
        } else {
            let count = a - &i0 + 1;
            let index_sum = div_exact(&(a * (a + 1) - (&i0 - 1) * &i0), 2);
            e * index_sum - count * (b + 1)
        };
        (h0, h1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: i64, b: i64) -> SurfaceDivisor {
        SurfaceDivisor::new(a, b)
    }

    #[test]
    fn intersection_pairing_basis_values() {
        let s = Surface::new(2);
        assert_eq!(s.intersect(&d(1, 0), &d(1, 0)), int(-2)); // C^2 = -e
        assert_eq!(s.intersect(&d(0, 1), &d(0, 1)), int(0)); // f^2 = 0
        assert_eq!(s.intersect(&d(1, 0), &d(0, 1)), int(1)); // C . f = 1
    }

    #[test]
    fn canonical_class_squares_to_eight() {
        // K^2 = 8 on every Hirzebruch surface.
        for e in 0..5 {
            let s = Surface::new(e);
            let k = s.canonical();
            assert_eq!(s.intersect(&k, &k), int(8));
        }
    }

    #[test]
    fn structure_sheaf_and_canonical_cohomology() {
        for e in 0..4 {
            let s = Surface::new(e);
            let o = s.cohomology_line(&d(0, 0));
            assert_eq!((o.h0, o.h1, o.h2), (int(1), int(0), int(0)));
            let k = s.cohomology_line(&s.canonical());
            assert_eq!((k.h0, k.h1, k.h2), (int(0), int(0), int(1)));
        }
    }

    #[test]
    fn pushforward_matches_naive_sum() {
        // Closed-form summation against the term-by-term count.
        for e in 0..5i64 {
            let s = Surface::new(e);
            for a in 0..7i64 {
                for b in -15..15i64 {
                    let v = s.cohomology_line(&d(a, b));
                    let mut h0 = 0;
                    let mut h1 = 0;
                    for i in 0..=a {
                        let deg = b - i * e;
                        h0 += (deg + 1).max(0);
                        h1 += (-deg - 1).max(0);
                    }
                    assert_eq!(v.h0, int(h0), "h0 at e={e} ({a},{b})");
                    assert_eq!(v.h1, int(h1), "h1 at e={e} ({a},{b})");
                    assert_eq!(v.h2, int(0));
                }
            }
        }
    }

    #[test]
    fn chi_agrees_with_cohomology_everywhere() {
        for e in 0..4i64 {
            let s = Surface::new(e);
            for a in -8..8i64 {
                for b in -12..12i64 {
                    let dd = d(a, b);
                    assert_eq!(
                        s.cohomology_line(&dd).chi(),
                        s.chi_line(&dd),
                        "chi mismatch at e={e} ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn serre_duality_on_sample_grid() {
        for e in 0..4i64 {
            let s = Surface::new(e);
            for a in -8..8i64 {
                for b in -12..12i64 {
                    let dd = d(a, b);
                    let v = s.cohomology_line(&dd);
                    let w = s.cohomology_line(&s.serre_dual(&dd));
                    assert_eq!(v.h0, w.h2);
                    assert_eq!(v.h1, w.h1);
                    assert_eq!(v.h2, w.h0);
                }
            }
        }
    }

    #[test]
    fn large_coefficients_stay_exact() {
        // (1, b) with huge b: h^0 = (b + 1) + (b - e + 1).
        let s = Surface::new(3);
        let big = Int::from(10u8).pow(30);
        let v = s.cohomology_line(&SurfaceDivisor::new(int(1), big.clone()));
        assert_eq!(v.h0, (&big + 1) + (&big - 3 + 1));
        assert_eq!(v.h1, int(0));
    }

    #[test]
    fn middle_row_vanishes() {
        let s = Surface::new(2);
        for b in -10..10i64 {
            assert!(s.cohomology_line(&d(-1, b)).is_zero());
        }
    }
}
