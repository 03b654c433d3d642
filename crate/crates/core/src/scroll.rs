//! The numerical Chow ring of the threefold scroll `X_e = P(E_e)`.
//!
//! `X_e` is the projectivisation of the rank-2 bundle `E_e` on `F_e` given
//! by an extension
//!
//! ```text
//!     0 -> A -> E_e -> B -> 0,
//!     A = O(2, 2b - k - 2e),   B = O(1, k - b + 2e) ,
//! ```
//!
//! so `c1(E_e) = (3, b)` and `c2(E_e) = k`.  The parameters are subject to
//!
//! ```text
//!     e >= 0,    b >= 3e + 2,    b - e < k < 2b - 4e ,
//! ```
//!
//! which make every bundle with these invariants very ample, so that the
//! tautological class `xi` embeds `X_e` as a scroll of degree `6b - 9e - k`
//! in `P^n`, `n = 4b - k - 6e + 4`.
//!
//! Chow groups used here (numerical equivalence):
//!
//! ```text
//!     A^1(X_e) = Z<xi> + phi^* Num(F_e)
//!     A^2(X_e) = Z<xi phi^* C_e> + Z<xi phi^* f> + Z<F>,   F = phi^*(point)
//! ```
//!
//! with the relation `xi^2 = xi phi^* c1(E_e) - k F` and the pairings
//!
//! ```text
//!     xi . (xi phi^* D) = c1(E_e) . D     xi . F = 1
//!     phi^*D' . (xi phi^* D) = D' . D     phi^*D' . F = 0 .
//! ```
//!
//! Every product is normalised eagerly into these bases, so degrees of
//! triple products and slopes come out as exact integers and rationals.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{Integer, One, Signed, Zero};
use thiserror::Error;

use crate::arith::{div_exact, int, ratio, Int, Rat};
use crate::hirzebruch::{Surface, SurfaceDivisor};

/// A violated scroll-parameter constraint.  Constraints are checked in the
/// order listed here and the first failure is reported.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParamError {
    #[error("invalid parameters: e must be nonnegative (got e = {e})")]
    NegativeE { e: Int },
    #[error("invalid parameters: b must be at least 3e + 2 = {required} (got b = {b})")]
    BaseTooSmall { b: Int, required: Int },
    #[error("invalid parameters: k must exceed b - e = {bound} (got k = {k})")]
    DegreeTooSmall { k: Int, bound: Int },
    #[error("invalid parameters: k must be less than 2b - 4e = {bound} (got k = {k})")]
    DegreeTooLarge { k: Int, bound: Int },
}

/// Validated scroll parameters `(e, b, k)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScrollParams {
    e: Int,
    b: Int,
    k: Int,
}

/// The classical projective invariants of the embedded scroll.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScrollInvariants {
    /// Dimension of the ambient projective space.
    pub n: Int,
    /// Degree `xi^3` of the embedding.
    pub d: Int,
    /// Sectional genus.
    pub g: Int,
}

impl ScrollParams {
    /// Validates `(e, b, k)` and builds the parameter set; the error names
    /// the first violated inequality.
    pub fn new(
        e: impl Into<Int>,
        b: impl Into<Int>,
        k: impl Into<Int>,
    ) -> Result<Self, ParamError> {
        let (e, b, k) = (e.into(), b.into(), k.into());
        if e.is_negative() {
            return Err(ParamError::NegativeE { e });
        }
        let required = &e * 3 + 2;
        if b < required {
            return Err(ParamError::BaseTooSmall { b, required });
        }
        let lower = &b - &e;
        if k <= lower {
            return Err(ParamError::DegreeTooSmall { k, bound: lower });
        }
        let upper = &b * 2 - &e * 4;
        if k >= upper {
            return Err(ParamError::DegreeTooLarge { k, bound: upper });
        }
        Ok(ScrollParams { e, b, k })
    }

    pub fn e(&self) -> &Int {
        &self.e
    }

    pub fn b(&self) -> &Int {
        &self.b
    }

    pub fn k(&self) -> &Int {
        &self.k
    }

    /// The base surface `F_e`.
    pub fn surface(&self) -> Surface {
        Surface::new(self.e.clone())
    }

    /// `c1(E_e) = (3, b)`.
    pub fn c1_e(&self) -> SurfaceDivisor {
        SurfaceDivisor::new(int(3), self.b.clone())
    }

    /// The sub line bundle class `A = (2, 2b - k - 2e)`.
    pub fn class_a(&self) -> SurfaceDivisor {
        SurfaceDivisor::new(int(2), &self.b * 2 - &self.k - &self.e * 2)
    }

    /// The quotient line bundle class `B = (1, k - b + 2e)`.
    pub fn class_b(&self) -> SurfaceDivisor {
        SurfaceDivisor::new(int(1), &self.k - &self.b + &self.e * 2)
    }

    /// `t = k / 3` when `k` is divisible by 3 (the only case in which
    /// divisor classes of fibre degree 2 can satisfy the Ulrich Euler
    /// conditions).
    pub fn t(&self) -> Option<Int> {
        let three = int(3);
        let (q, r) = self.k.div_rem(&three);
        r.is_zero().then_some(q)
    }

    /// Whether `(b, k) = (2t, 3t)` — the locus where the fibre-degree-2
    /// Ulrich pair exists at `e = 0`.
    pub fn is_m_case(&self) -> bool {
        if !self.e.is_zero() || self.b.is_odd() {
            return false;
        }
        &self.k * 2 == &self.b * 3
    }

    /// Ambient dimension, degree and sectional genus of `(X_e, xi)`:
    ///
    /// ```text
    ///     n = 4b - k - 6e + 4,   d = 6b - 9e - k,   g = 2b - 3e - 2 .
    /// ```
    pub fn invariants(&self) -> ScrollInvariants {
        ScrollInvariants {
            n: &self.b * 4 - &self.k - &self.e * 6 + 4,
            d: self.degree_d(),
            g: &self.b * 2 - &self.e * 3 - 2,
        }
    }

    /// The degree `d = xi^3 = c1(E_e)^2 - c2(E_e) = 6b - 9e - k`.
    pub fn degree_d(&self) -> Int {
        &self.b * 6 - &self.e * 9 - &self.k
    }

    /// Canonical class `K_X = -2 xi + phi^*(1, b - e - 2)`.
    pub fn canonical(&self) -> ScrollDivisor {
        // K_X = -2 xi + phi^*(K_F + c1(E_e)).
        let kf = self.surface().canonical();
        ScrollDivisor::new(int(-2), kf + &self.c1_e())
    }

    /// `xi^2` in the codimension-2 basis: `xi phi^* c1(E_e) - k F`.
    pub fn xi_squared(&self) -> CodimTwoClass {
        CodimTwoClass {
            dxi: self.c1_e(),
            m: -self.k.clone(),
        }
    }

    /// Product of two divisor classes, normalised into the
    /// codimension-2 basis:
    ///
    /// ```text
    ///     (a1 xi + phi^*D1)(a2 xi + phi^*D2)
    ///       = xi phi^*(a1 a2 c1(E) + a1 D2 + a2 D1) + (D1.D2 - a1 a2 k) F .
    /// ```
    pub fn mult(&self, x1: &ScrollDivisor, x2: &ScrollDivisor) -> CodimTwoClass {
        let s = self.surface();
        let a1a2 = &x1.a * &x2.a;
        let dxi = self.c1_e().scale(&a1a2) + &x1.d.scale(&x2.a) + &x2.d.scale(&x1.a);
        let m = s.intersect(&x1.d, &x2.d) - a1a2 * &self.k;
        CodimTwoClass { dxi, m }
    }

    /// Degree of the product of a codimension-2 class with a divisor:
    ///
    /// ```text
    ///     (xi phi^*Dc + m F) . (a xi + phi^*D)
    ///       = a (c1(E) . Dc) + a m + D . Dc .
    /// ```
    pub fn degree(&self, c: &CodimTwoClass, x: &ScrollDivisor) -> Int {
        let s = self.surface();
        &x.a * s.intersect(&self.c1_e(), &c.dxi) + &x.a * &c.m + s.intersect(&x.d, &c.dxi)
    }

    /// Degree of a triple product of divisor classes.
    pub fn degree3(&self, x1: &ScrollDivisor, x2: &ScrollDivisor, x3: &ScrollDivisor) -> Int {
        self.degree(&self.mult(x1, x2), x3)
    }

    /// Slope `mu = (c1 . xi^2) / rank` as an exact rational.
    pub fn slope(&self, c1: &ScrollDivisor, rank: &Int) -> Rat {
        assert!(rank.is_positive(), "slope needs positive rank");
        ratio(self.degree(&self.xi_squared(), c1), rank.clone())
    }

    /// The Ulrich dual of a line bundle class: `L* = -L + K_X + 4 xi`.
    ///
    /// Serre duality pairs the Ulrich vanishing of `L` with that of `L*`,
    /// and the map is an involution on divisor classes.
    pub fn ulrich_dual(&self, l: &ScrollDivisor) -> ScrollDivisor {
        self.canonical() + &ScrollDivisor::xi(int(4)) - l
    }

    /// Chern data of an extension of `high` by `low` via the Whitney
    /// formula `c2 = c2' + c2'' + c1' . c1''`.
    pub fn whitney(&self, low: &ChernData, high: &ChernData) -> ChernData {
        ChernData {
            rank: &low.rank + &high.rank,
            c1: low.c1.clone() + &high.c1,
            c2: low.c2.clone() + &high.c2 + &self.mult(&low.c1, &high.c1),
        }
    }

    /// Chern data of `O(xi) (x) phi^* W` for a rank-2 bundle `W` on `F_e`:
    ///
    /// ```text
    ///     c1 = 2 xi + phi^* c1(W)
    ///     c2 = xi^2 + xi phi^* c1(W) + c2(W) F
    ///        = xi phi^*(c1(E) + c1(W)) + (c2(W) - k) F .
    /// ```
    pub fn chern_of_xi_twisted_pullback(&self, w: &SurfaceChern) -> ChernData {
        assert_eq!(w.rank, int(2), "xi-twisted pullback model is rank 2");
        ChernData {
            rank: int(2),
            c1: ScrollDivisor::new(int(2), w.c1.clone()),
            c2: CodimTwoClass {
                dxi: self.c1_e() + &w.c1,
                m: &w.c2 - &self.k,
            },
        }
    }
}

impl fmt::Display for ScrollParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(e, b, k) = ({}, {}, {})", self.e, self.b, self.k)
    }
}

/// A divisor class `a xi + phi^* (alpha, beta)` on the scroll.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ScrollDivisor {
    /// Coefficient of the tautological class `xi`.
    pub a: Int,
    /// Pulled-back surface class.
    pub d: SurfaceDivisor,
}

impl ScrollDivisor {
    pub fn new(a: impl Into<Int>, d: SurfaceDivisor) -> Self {
        ScrollDivisor { a: a.into(), d }
    }

    /// `n xi`.
    pub fn xi(n: impl Into<Int>) -> Self {
        ScrollDivisor::new(n, SurfaceDivisor::zero())
    }

    /// `phi^* D`.
    pub fn pullback(d: SurfaceDivisor) -> Self {
        ScrollDivisor::new(0, d)
    }

    pub fn zero() -> Self {
        ScrollDivisor::xi(0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.d.is_zero()
    }

    pub fn scale(&self, n: &Int) -> Self {
        ScrollDivisor::new(&self.a * n, self.d.scale(n))
    }
}

impl Add for ScrollDivisor {
    type Output = ScrollDivisor;
    fn add(self, rhs: ScrollDivisor) -> ScrollDivisor {
        ScrollDivisor::new(self.a + rhs.a, self.d + rhs.d)
    }
}

impl<'a> Add<&'a ScrollDivisor> for ScrollDivisor {
    type Output = ScrollDivisor;
    fn add(self, rhs: &'a ScrollDivisor) -> ScrollDivisor {
        ScrollDivisor::new(self.a + &rhs.a, self.d + &rhs.d)
    }
}

impl Sub for ScrollDivisor {
    type Output = ScrollDivisor;
    fn sub(self, rhs: ScrollDivisor) -> ScrollDivisor {
        ScrollDivisor::new(self.a - rhs.a, self.d - rhs.d)
    }
}

impl<'a> Sub<&'a ScrollDivisor> for ScrollDivisor {
    type Output = ScrollDivisor;
    fn sub(self, rhs: &'a ScrollDivisor) -> ScrollDivisor {
        ScrollDivisor::new(self.a - &rhs.a, self.d - &rhs.d)
    }
}

impl Neg for ScrollDivisor {
    type Output = ScrollDivisor;
    fn neg(self) -> ScrollDivisor {
        ScrollDivisor::new(-self.a, -self.d)
    }
}

impl fmt::Display for ScrollDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*xi + phi*{}", self.a, self.d)
    }
}

/// A codimension-2 class `xi phi^* dxi + m F` on the scroll.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodimTwoClass {
    /// Surface class paired with `xi`.
    pub dxi: SurfaceDivisor,
    /// Coefficient of the fibre class `F`.
    pub m: Int,
}

impl CodimTwoClass {
    pub fn zero() -> Self {
        CodimTwoClass {
            dxi: SurfaceDivisor::zero(),
            m: Int::zero(),
        }
    }
}

impl Add for CodimTwoClass {
    type Output = CodimTwoClass;
    fn add(self, rhs: CodimTwoClass) -> CodimTwoClass {
        CodimTwoClass {
            dxi: self.dxi + rhs.dxi,
            m: self.m + rhs.m,
        }
    }
}

impl<'a> Add<&'a CodimTwoClass> for CodimTwoClass {
    type Output = CodimTwoClass;
    fn add(self, rhs: &'a CodimTwoClass) -> CodimTwoClass {
        CodimTwoClass {
            dxi: self.dxi + &rhs.dxi,
            m: self.m + &rhs.m,
        }
    }
}

impl fmt::Display for CodimTwoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "xi*phi*{} + {}*F", self.dxi, self.m)
    }
}

/// Chern data `(rank, c1, c2)` of a bundle on the scroll.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChernData {
    pub rank: Int,
    pub c1: ScrollDivisor,
    pub c2: CodimTwoClass,
}

impl ChernData {
    /// Chern data of a line bundle.
    pub fn line(c1: ScrollDivisor) -> Self {
        ChernData {
            rank: Int::one(),
            c1,
            c2: CodimTwoClass::zero(),
        }
    }
}

/// Chern data `(rank, c1, c2)` of a bundle on the base surface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceChern {
    pub rank: Int,
    pub c1: SurfaceDivisor,
    pub c2: Int,
}

impl SurfaceChern {
    /// Chern data after twisting by a line bundle `O(n)`:
    ///
    /// ```text
    ///     c1' = c1 + r n,   c2' = c2 + (r - 1) c1 . n + C(r, 2) n^2 .
    /// ```
    pub fn twist(&self, n: &SurfaceDivisor, s: &Surface) -> SurfaceChern {
        let r = &self.rank;
        let binom = div_exact(&(r * (r - 1)), 2);
        SurfaceChern {
            rank: r.clone(),
            c1: self.c1.clone() + &n.scale(r),
            c2: &self.c2 + (r - 1) * s.intersect(&self.c1, n) + binom * s.intersect(n, n),
        }
    }
}
