//! Rank-`r` Ulrich families: first Chern classes, Euler self-pairings,
//! moduli dimensions, and the strictness of the extension-locus bound.
//!
//! # The towers
//!
//! At `e = 0` the rank-`r` bundle `G_r` is built by alternating extensions
//! of the two Ulrich line bundles `L1 = xi + phi^*(2, -1)` and
//! `L2 = xi + phi^*(-1, b - 1)`: writing `eps(i) = 1` for odd `i` and `2`
//! for even `i`,
//!
//! ```text
//!     0 -> G_{r-1} -> G_r -> L_{eps(r)} -> 0 ,        G_1 = L1 .
//! ```
//!
//! For `e > 0` there are no Ulrich line bundles; the tower is built from
//! the rank-2 bundle `U2` (fibrewise the point-modification construction)
//! and the rank-3 bundle `U3`, stepping by `U2`:
//!
//! ```text
//!     r = 2h     :  h x U2 ,
//!     r = 2h + 1 :  U3 + (h - 1) x U2        (r >= 3).
//! ```
//!
//! # Euler pairings
//!
//! `chi(E (x) F^v)` is additive in both arguments across the blocks, so
//! every self-pairing reduces to the atomic table
//!
//! ```text
//!     chi_22 = 4 + 9e - 6b                (rank-2 self-pairing)
//!     chi_33 = 1 + 2 chi_22               (rank-3 self-pairing)
//!     chi_32 = 15e - 10b + 3              (rank 3 against rank 2)
//!     chi_23 = 12e - 8b - 3               (rank 2 against rank 3)
//! ```
//!
//! computed here from [`chi_rank2_endo_surface`] and the Euler pairing
//! normal form, never transcribed.  Closed forms, block sums, and the
//! stepwise recursions are all implemented and must agree.
//!
//! # Moduli dimensions and the extension locus
//!
//! Simple sheaves give `dim M(r) = h^1(End) = 1 - chi_self(r)`.  Inside
//! `M(r)` the strictly-decomposable-extension locus has dimension at most
//!
//! ```text
//!     dim M(r - s) + dim M(s) + dim Ext^1 - 1
//! ```
//!
//! (`s = 1` at `e = 0`, `s = 2` at `e > 0`), and the bound must be
//! strictly smaller than `dim M(r)` for a generically stable family.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{div_exact, int, Int, Rat};
use crate::cohomology::chi_rank2_endo_surface;
use crate::hirzebruch::SurfaceDivisor;
use crate::scroll::{ScrollDivisor, ScrollParams};
use crate::ulrich::{a3_surface_c1, euler_pair_ulrich_surface, h1_surface_chern, line_l1, line_l2};

/// Errors from the moduli layer.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModuliError {
    #[error("rank {r} out of range; this invariant needs rank >= {min}")]
    RankOutOfRange { r: u64, min: u64 },
    #[error("no rank-1 Ulrich bundles exist for e > 0; the families start at rank 2")]
    NoRankOne,
    #[error("the alternating line-bundle tower exists only at e = 0")]
    TowerRequiresEZero,
}

/// Parity index of the tower: `1` for odd steps, `2` for even steps.
pub fn epsilon(r: u64) -> u64 {
    if r % 2 == 1 {
        1
    } else {
        2
    }
}

fn guard_rank(r: u64, min: u64) -> Result<(), ModuliError> {
    if r < min {
        Err(ModuliError::RankOutOfRange { r, min })
    } else {
        Ok(())
    }
}

fn guard_family(r: u64, p: &ScrollParams) -> Result<(), ModuliError> {
    guard_rank(r, 1)?;
    if r == 1 && p.e().is_positive() {
        return Err(ModuliError::NoRankOne);
    }
    Ok(())
}

/// `6b - 9e - 4`, the quantum of every `e > 0` dimension formula.
fn q_unit(p: &ScrollParams) -> Int {
    p.b() * 6 - p.e() * 9 - 4
}

/// `c1` of the rank-`r` family member, in closed form.
pub fn c1_rank_r(r: u64, p: &ScrollParams) -> Result<ScrollDivisor, ModuliError> {
    guard_family(r, p)?;
    let ri = int(r as i64);
    let step = SurfaceDivisor::new(int(1), p.b() - p.e() - 2);
    let d = if r % 2 == 0 {
        let h = int((r / 2) as i64);
        step.scale(&h)
    } else {
        let h1 = int(((r - 1) / 2) as i64) - 1; // (r - 3) / 2, may be -1 at r = 1
        SurfaceDivisor::new(int(3), p.b() - 3) + &step.scale(&h1)
    };
    Ok(ScrollDivisor::new(ri, d))
}

/// `c1` of the rank-`r` family member, by running the tower recursion.
pub fn c1_rank_r_recursive(r: u64, p: &ScrollParams) -> Result<ScrollDivisor, ModuliError> {
    guard_family(r, p)?;
    if p.e().is_zero() {
        let l = [line_l1(p), line_l2(p)];
        let mut acc = ScrollDivisor::zero();
        for i in 1..=r {
            acc = acc + &l[(epsilon(i) - 1) as usize];
        }
        Ok(acc)
    } else {
        let u2 = ScrollDivisor::new(int(2), SurfaceDivisor::new(int(1), p.b() - p.e() - 2));
        let u3 = ScrollDivisor::new(int(3), SurfaceDivisor::new(int(3), p.b() - 3));
        let mut acc = if r % 2 == 0 {
            ScrollDivisor::zero()
        } else {
            u3
        };
        let steps = if r % 2 == 0 { r / 2 } else { (r - 3) / 2 };
        for _ in 0..steps {
            acc = acc + &u2;
        }
        Ok(acc)
    }
}

/// The rank-2 self-pairing `chi_22 = 4 + 9e - 6b`, from the endomorphism
/// Euler characteristic of the surface construction.
pub fn chi22(p: &ScrollParams) -> Int {
    chi_rank2_endo_surface(p).total
}

/// Atomic Euler pairings between the `e > 0` blocks, keyed by rank.
fn chi_atomic(ri: u64, rj: u64, p: &ScrollParams) -> Int {
    let h1 = h1_surface_chern(p).c1;
    let a3 = a3_surface_c1(p);
    match (ri, rj) {
        (2, 2) => chi22(p),
        (3, 3) => chi22(p) * 2 + 1,
        (3, 2) => euler_pair_ulrich_surface(&int(3), &a3, &int(2), &h1, p),
        (2, 3) => euler_pair_ulrich_surface(&int(2), &h1, &int(3), &a3, p),
        _ => unreachable!("blocks have rank 2 or 3"),
    }
}

/// Block ranks of the rank-`r` member for `e > 0`.
fn blocks(r: u64) -> Vec<u64> {
    if r % 2 == 0 {
        vec![2; (r / 2) as usize]
    } else {
        let mut v = vec![3];
        v.extend(vec![2; ((r - 3) / 2) as usize]);
        v
    }
}

/// `chi(G_r (x) G_r^v)` in closed form.
pub fn chi_self(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_family(r, p)?;
    let b = p.b();
    let e = p.e();
    let ri = int(r as i64);
    Ok(if e.is_zero() {
        let unit = int(4) - b * 6;
        if r % 2 == 1 {
            div_exact(&((&ri * &ri - 1) * &unit), 4) + 1
        } else {
            div_exact(&(&ri * &ri * &unit), 4)
        }
    } else {
        let c22 = chi22(p);
        if r % 2 == 0 {
            let h = int((r / 2) as i64);
            &h * &h * &c22
        } else {
            let h1 = int(((r - 1) / 2) as i64) - 1; // h - 1
            let cross = (e * 3 - b * 2) * 9;
            Int::one() + &h1 * &cross + (&h1 * &h1 + 2) * &c22
        }
    })
}

/// `chi(G_r (x) G_r^v)` as the double sum of atomic block pairings
/// (independent route).
pub fn chi_self_blocks(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_family(r, p)?;
    let s = p.surface();
    if p.e().is_zero() {
        let d = [line_l1(p).d, line_l2(p).d];
        let mut total = Int::zero();
        for i in 1..=r {
            for j in 1..=r {
                let di = &d[(epsilon(i) - 1) as usize];
                let dj = &d[(epsilon(j) - 1) as usize];
                total += s.chi_line(&(di.clone() - dj));
            }
        }
        Ok(total)
    } else {
        let bl = blocks(r);
        let mut total = Int::zero();
        for &ri in &bl {
            for &rj in &bl {
                total += chi_atomic(ri, rj, p);
            }
        }
        Ok(total)
    }
}

/// Closed form for `chi(G_r (x) L_{eps(r+1)}^v)` at `e = 0`.
pub fn chi_gr_ldual_closed(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_family(r, p)?;
    if !p.e().is_zero() {
        return Err(ModuliError::TowerRequiresEZero);
    }
    let b = p.b();
    Ok(if r % 2 == 1 {
        int(((r + 1) / 2) as i64) * (int(5) - b * 4) - 1
    } else {
        int((r / 2) as i64) * (-Int::one() - b * 2)
    })
}

/// Closed form for `chi(L_{eps(r)} (x) G_r^v)` at `e = 0`.
pub fn chi_l_grdual_closed(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_family(r, p)?;
    if !p.e().is_zero() {
        return Err(ModuliError::TowerRequiresEZero);
    }
    let b = p.b();
    Ok(if r % 2 == 1 {
        int(((r - 1) / 2) as i64) * (int(5) - b * 4) + 1
    } else {
        int((r / 2) as i64) * (-Int::one() - b * 2)
    })
}

/// `chi(G_r (x) G_r^v)` by running the stepwise recursion with the closed
/// cross terms (third independent route).
pub fn chi_self_recursive(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_family(r, p)?;
    if p.e().is_zero() {
        let mut acc = Int::one(); // chi(L1 (x) L1^v) = chi(O) = 1
        for q in 2..=r {
            acc += chi_gr_ldual_closed(q - 1, p)? + chi_l_grdual_closed(q, p)?;
        }
        Ok(acc)
    } else {
        let c22 = chi22(p);
        let (base_rank, base) = if r % 2 == 0 {
            (2, chi_atomic(2, 2, p))
        } else {
            guard_rank(r, 3)?;
            (3, chi_atomic(3, 3, p))
        };
        let mut acc = base;
        let mut q = base_rank;
        while q < r {
            q += 2;
            // chi(U_{q-2} (x) U2^v) + chi(U2 (x) U_{q-2}^v) + chi_22,
            // each cross term summed over the blocks of U_{q-2}.
            let mut cross = Int::zero();
            for ri in blocks(q - 2) {
                cross += chi_atomic(ri, 2, p) + chi_atomic(2, ri, p);
            }
            acc += cross + &c22;
        }
        Ok(acc)
    }
}

/// Dimension of the rank-`r` moduli family: `1 - chi_self(r)`.
pub fn moduli_dim(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    Ok(Int::one() - chi_self(r, p)?)
}

/// The same dimensions in the closed forms used on the base surface side
/// (independently coded; must agree with [`moduli_dim`]).
pub fn moduli_dim_surface_route(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_family(r, p)?;
    let ri = int(r as i64);
    Ok(if p.e().is_zero() {
        let unit = p.b() * 6 - 4;
        if r % 2 == 1 {
            div_exact(&((&ri * &ri - 1) * &unit), 4)
        } else {
            div_exact(&(&ri * &ri * &unit), 4) + 1
        }
    } else {
        let q = q_unit(p);
        if r % 2 == 0 {
            let h = int((r / 2) as i64);
            &h * &h * &q + 1
        } else {
            let h1 = int(((r - 1) / 2) as i64) - 1;
            (&h1 * &h1 + 2) * &q + &h1 * ((p.b() * 2 - p.e() * 3) * 9)
        }
    })
}

/// `h^1(G_r (x) L_{eps(r+1)}^v)` at `e = 0`, in closed form.  This is the
/// space of extensions available at the next tower step.
pub fn h1_gr_tensor_ldual(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_rank(r, 1)?;
    if !p.e().is_zero() {
        return Err(ModuliError::TowerRequiresEZero);
    }
    let b = p.b();
    Ok(if r % 2 == 1 {
        (b - 1) * (2 * (r as i64 + 1)) - int(((r - 1) / 2) as i64)
    } else {
        (b + 1) * (r as i64) - int(((r - 2) / 2) as i64)
    })
}

/// The same `h^1` by recursion: a non-split step kills exactly one
/// extension direction, so
/// `h^1(r) = h^1(r - 2) - 1 + h^1(L_{eps(r)} - L_{eps(r+1)})`, seeded by
/// the line-bundle values computed by the surface engine.
pub fn h1_gr_tensor_ldual_recursive(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    guard_rank(r, 1)?;
    if !p.e().is_zero() {
        return Err(ModuliError::TowerRequiresEZero);
    }
    let s = p.surface();
    let d = [line_l1(p).d, line_l2(p).d];
    let h1_diff = |i: u64, j: u64| -> Int {
        let diff = d[(epsilon(i) - 1) as usize].clone() - &d[(epsilon(j) - 1) as usize];
        s.cohomology_line(&diff).h1
    };
    match r {
        1 => Ok(h1_diff(1, 2)),
        2 => Ok(h1_diff(2, 1)), // h^1(O) = 0 contributes nothing
        _ => Ok(h1_gr_tensor_ldual_recursive(r - 2, p)? - 1 + h1_diff(r, r + 1)),
    }
}

/// `h^0(G_{r-1} (x) L_{eps(r)}^v)`: `1` when `r` is odd, `0` when even.
pub fn h0_tower_parity(r: u64) -> Result<Int, ModuliError> {
    guard_rank(r, 2)?;
    Ok(if r % 2 == 1 { Int::one() } else { Int::zero() })
}

/// Lower bound for `h^1(U (x) L^v)` over every rank-`r` member `U` and
/// Ulrich line bundle `L` at `e = 0`: `min(4b - 5, 2b + 1)`.
pub fn h1_ur_lower_bound(p: &ScrollParams) -> Int {
    let x = p.b() * 4 - 5;
    let y = p.b() * 2 + 1;
    if x < y {
        x
    } else {
        y
    }
}

/// Dimension of the Ext^1 space consumed by the induction step that builds
/// the rank-`r` member from the previous one (`s = 1` at `e = 0`,
/// `s = 2` at `e > 0`).
pub fn ext_space_dim(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    if p.e().is_zero() {
        guard_rank(r, 2)?;
        h1_gr_tensor_ldual(r - 1, p)
    } else if r % 2 == 0 {
        guard_rank(r, 4)?;
        let h1 = int((r / 2) as i64) - 1;
        Ok(&h1 * &q_unit(p))
    } else {
        guard_rank(r, 5)?;
        let h2 = int(((r - 1) / 2) as i64) - 2;
        Ok(&h2 * &q_unit(p) + (p.b() * 8 - p.e() * 12 + 3))
    }
}

/// Upper bound for the locus of strictly decomposable extensions inside
/// the rank-`r` family, assembled as
/// `dim M(r - s) + dim M(s) + dim Ext^1 - 1`.
pub fn ext_locus_dim_bound(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    let s = if p.e().is_zero() { 1 } else { 2 };
    guard_rank(r, if p.e().is_zero() { 2 } else { s + 2 })?;
    Ok(moduli_dim(r - s, p)? + moduli_dim(s, p)? + ext_space_dim(r, p)? - 1)
}

/// The same bound in the closed forms the dimension count is usually
/// quoted in (independent route; must agree with [`ext_locus_dim_bound`]).
pub fn ext_locus_bound_closed(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    if p.e().is_zero() {
        guard_rank(r, 2)?;
        Ok(-chi_self(r - 1, p)? + h1_gr_tensor_ldual(r - 1, p)?)
    } else if r % 2 == 0 {
        guard_rank(r, 4)?;
        let h = int((r / 2) as i64);
        Ok((&h * &h - &h + 1) * &q_unit(p) + 1)
    } else {
        guard_rank(r, 5)?;
        let h = int(((r - 1) / 2) as i64);
        Ok((&h * &h - &h * 3 + 4) * &q_unit(p)
            + (&h - 2) * ((p.b() * 2 - p.e() * 3) * 9)
            + (p.b() * 14 - p.e() * 21 - 1))
    }
}

/// `dim M(r) - ext_locus_dim_bound(r)`; strictness requires this to be
/// positive.
pub fn strictness_margin(r: u64, p: &ScrollParams) -> Result<Int, ModuliError> {
    Ok(moduli_dim(r, p)? - ext_locus_dim_bound(r, p)?)
}

/// Whether the decomposable-extension locus is strictly smaller than the
/// family: the generic member is then not an extension drawn from the
/// previous step.
pub fn check_ext_strict(r: u64, p: &ScrollParams) -> Result<bool, ModuliError> {
    Ok(strictness_margin(r, p)?.is_positive())
}

/// Slope `(c1 . xi^2) / r` of the rank-`r` member; constant in `r`.
pub fn slope_rank_r(r: u64, p: &ScrollParams) -> Result<Rat, ModuliError> {
    let c1 = c1_rank_r(r, p)?;
    Ok(p.slope(&c1, &int(r as i64)))
}

/// `c1` of the rank-`r` Ulrich bundle on the base surface corresponding to
/// the scroll family member: surface part of `c1(G_r)` plus `r c1 E`.
pub fn scroll_to_surface_c1(r: u64, p: &ScrollParams) -> Result<SurfaceDivisor, ModuliError> {
    let c1 = c1_rank_r(r, p)?;
    Ok(c1.d + &p.c1_e().scale(&int(r as i64)))
}

/// Everything the reporting layer needs about the rank-`r` family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilyDescriptor {
    pub rank: u64,
    pub parity: &'static str,
    pub c1: ScrollDivisor,
    pub surface_c1: SurfaceDivisor,
    pub chi_self: Int,
    pub moduli_dim: Int,
    pub slope: Rat,
    pub ext_space: Option<Int>,
    pub ext_bound: Option<Int>,
    pub margin: Option<Int>,
    pub strict: Option<bool>,
    pub h1_tower: Option<Int>,
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank {} ({}): c1 = {}, dim = {}, slope = {}",
            self.rank, self.parity, self.c1, self.moduli_dim, self.slope
        )
    }
}

pub fn family_descriptor(r: u64, p: &ScrollParams) -> Result<FamilyDescriptor, ModuliError> {
    let c1 = c1_rank_r(r, p)?;
    Ok(FamilyDescriptor {
        rank: r,
        parity: if r % 2 == 1 { "odd" } else { "even" },
        surface_c1: scroll_to_surface_c1(r, p)?,
        chi_self: chi_self(r, p)?,
        moduli_dim: moduli_dim(r, p)?,
        slope: p.slope(&c1, &int(r as i64)),
        ext_space: ext_space_dim(r, p).ok(),
        ext_bound: ext_locus_dim_bound(r, p).ok(),
        margin: strictness_margin(r, p).ok(),
        strict: check_ext_strict(r, p).ok(),
        h1_tower: h1_gr_tensor_ldual(r, p).ok(),
        c1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn p(e: i64, b: i64, k: i64) -> ScrollParams {
        ScrollParams::new(e, b, k).unwrap()
    }

    fn grid() -> Vec<ScrollParams> {
        vec![
            p(0, 4, 5),
            p(0, 4, 6),
            p(0, 6, 9),
            p(1, 5, 5),
            p(1, 6, 7),
            p(2, 8, 7),
        ]
    }

    #[test]
    fn c1_closed_matches_recursion() {
        for pp in grid() {
            let start = if pp.e().is_zero() { 1 } else { 2 };
            for r in start..=12 {
                assert_eq!(
                    c1_rank_r(r, &pp).unwrap(),
                    c1_rank_r_recursive(r, &pp).unwrap(),
                    "rank {r}"
                );
            }
        }
    }

    #[test]
    fn c1_low_rank_values() {
        let pp = p(0, 4, 5);
        assert_eq!(c1_rank_r(1, &pp).unwrap(), line_l1(&pp));
        assert_eq!(c1_rank_r(2, &pp).unwrap(), line_l1(&pp) + &line_l2(&pp));
        let pq = p(1, 5, 5);
        assert_eq!(
            c1_rank_r(2, &pq).unwrap(),
            ScrollDivisor::new(int(2), SurfaceDivisor::new(1, 2))
        );
        assert_eq!(
            c1_rank_r(3, &pq).unwrap(),
            ScrollDivisor::new(int(3), SurfaceDivisor::new(3, 2))
        );
    }

    #[test]
    fn chi_self_three_routes_agree() {
        for pp in grid() {
            let start = if pp.e().is_zero() { 1 } else { 2 };
            for r in start..=12 {
                let closed = chi_self(r, &pp).unwrap();
                assert_eq!(
                    closed,
                    chi_self_blocks(r, &pp).unwrap(),
                    "blocks at rank {r}"
                );
                assert_eq!(
                    closed,
                    chi_self_recursive(r, &pp).unwrap(),
                    "recursion at rank {r}"
                );
            }
        }
    }

    #[test]
    fn cross_terms_match_block_sums() {
        for pp in [p(0, 4, 5), p(0, 6, 9)] {
            let s = pp.surface();
            let d = [line_l1(&pp).d, line_l2(&pp).d];
            for r in 1..=11u64 {
                let iv: Int = (1..=r)
                    .map(|i| {
                        s.chi_line(
                            &(d[(epsilon(i) - 1) as usize].clone()
                                - &d[(epsilon(r + 1) - 1) as usize]),
                        )
                    })
                    .sum();
                let v: Int = (1..=r)
                    .map(|i| {
                        s.chi_line(
                            &(d[(epsilon(r) - 1) as usize].clone() - &d[(epsilon(i) - 1) as usize]),
                        )
                    })
                    .sum();
                assert_eq!(iv, chi_gr_ldual_closed(r, &pp).unwrap(), "iv at rank {r}");
                assert_eq!(v, chi_l_grdual_closed(r, &pp).unwrap(), "v at rank {r}");
            }
        }
    }

    #[test]
    fn moduli_dims_golden() {
        // e = 0: dim M(1) = 0, dim M(2) = 6b - 3.
        let pp = p(0, 4, 6);
        assert_eq!(moduli_dim(1, &pp).unwrap(), int(0));
        assert_eq!(moduli_dim(2, &pp).unwrap(), int(21));
        // e = 1, b = 5: dim M(4) = 69, dim M(5) = 114.
        let pq = p(1, 5, 5);
        assert_eq!(moduli_dim(2, &pq).unwrap(), int(18));
        assert_eq!(moduli_dim(3, &pq).unwrap(), int(34));
        assert_eq!(moduli_dim(4, &pq).unwrap(), int(69));
        assert_eq!(moduli_dim(5, &pq).unwrap(), int(114));
    }

    #[test]
    fn moduli_dim_matches_surface_route() {
        for pp in grid() {
            let start = if pp.e().is_zero() { 1 } else { 2 };
            for r in start..=12 {
                assert_eq!(
                    moduli_dim(r, &pp).unwrap(),
                    moduli_dim_surface_route(r, &pp).unwrap(),
                    "rank {r}"
                );
            }
        }
    }

    #[test]
    fn rank_one_requires_e_zero() {
        assert!(matches!(
            moduli_dim(1, &p(1, 5, 5)),
            Err(ModuliError::NoRankOne)
        ));
        assert!(matches!(
            c1_rank_r(1, &p(2, 8, 7)),
            Err(ModuliError::NoRankOne)
        ));
        assert!(matches!(
            chi_self(0, &p(0, 4, 5)),
            Err(ModuliError::RankOutOfRange { min: 1, .. })
        ));
    }

    #[test]
    fn tower_h1_closed_matches_recursion() {
        for pp in [p(0, 4, 5), p(0, 6, 9), p(0, 10, 11)] {
            let b = pp.b().clone();
            assert_eq!(h1_gr_tensor_ldual(1, &pp).unwrap(), &b * 4 - 4);
            assert_eq!(h1_gr_tensor_ldual(2, &pp).unwrap(), &b * 2 + 2);
            assert_eq!(h1_gr_tensor_ldual(3, &pp).unwrap(), &b * 8 - 9);
            assert_eq!(h1_gr_tensor_ldual(4, &pp).unwrap(), &b * 4 + 3);
            for r in 1..=12 {
                assert_eq!(
                    h1_gr_tensor_ldual(r, &pp).unwrap(),
                    h1_gr_tensor_ldual_recursive(r, &pp).unwrap(),
                    "rank {r}"
                );
            }
        }
        assert!(matches!(
            h1_gr_tensor_ldual(3, &p(1, 5, 5)),
            Err(ModuliError::TowerRequiresEZero)
        ));
    }

    #[test]
    fn parity_and_lower_bound() {
        assert_eq!(h0_tower_parity(2).unwrap(), int(0));
        assert_eq!(h0_tower_parity(3).unwrap(), int(1));
        assert_eq!(h0_tower_parity(12).unwrap(), int(0));
        assert!(h0_tower_parity(1).is_err());
        assert_eq!(h1_ur_lower_bound(&p(0, 4, 5)), int(9)); // min(11, 9)
    }

    #[test]
    fn ext_space_goldens() {
        // e = 0: the space is the tower h^1 at the previous rank.
        let pp = p(0, 4, 5);
        assert_eq!(ext_space_dim(2, &pp).unwrap(), int(12)); // f(1) = 4b - 4
        assert_eq!(ext_space_dim(3, &pp).unwrap(), int(10)); // f(2) = 2b + 2
                                                             // e = 1, b = 5: even steps (h - 1) Q; odd steps at h = 2 give 31,
                                                             // h = 3 gives 48.
        let pq = p(1, 5, 5);
        assert_eq!(ext_space_dim(4, &pq).unwrap(), int(17));
        assert_eq!(ext_space_dim(5, &pq).unwrap(), int(31));
        assert_eq!(ext_space_dim(7, &pq).unwrap(), int(48));
        assert!(matches!(
            ext_space_dim(3, &pq),
            Err(ModuliError::RankOutOfRange { min: 5, .. })
        ));
    }

    #[test]
    fn ext_bound_assembled_matches_closed() {
        for pp in grid() {
            let start = if pp.e().is_zero() { 2 } else { 4 };
            for r in start..=12 {
                if !pp.e().is_zero() && r % 2 == 1 && r < 5 {
                    continue;
                }
                assert_eq!(
                    ext_locus_dim_bound(r, &pp).unwrap(),
                    ext_locus_bound_closed(r, &pp).unwrap(),
                    "rank {r} at ({}, {}, {})",
                    pp.e(),
                    pp.b(),
                    pp.k()
                );
            }
        }
    }

    #[test]
    fn strictness_margins() {
        // e = 0 closed margins: even rb + 2 + (r-2)/2, odd (r-1)(2b-3) + (r-3)/2.
        let pp = p(0, 4, 5);
        let b = 4i64;
        for r in 2..=12u64 {
            let margin = strictness_margin(r, &pp).unwrap();
            let expected = if r % 2 == 0 {
                int(r as i64 * b + 2 + (r as i64 - 2) / 2)
            } else {
                int((r as i64 - 1) * (2 * b - 3) + (r as i64 - 3) / 2)
            };
            assert_eq!(margin, expected, "rank {r}");
            assert!(check_ext_strict(r, &pp).unwrap());
        }
        // e > 0 margins: even (h-1) Q, odd (h-1) Q + 4b - 6e + 1.
        let pq = p(1, 5, 5);
        let q = 17i64;
        for r in 4..=12u64 {
            if r % 2 == 1 && r < 5 {
                continue;
            }
            let margin = strictness_margin(r, &pq).unwrap();
            let h = (r / 2) as i64;
            let expected = if r % 2 == 0 {
                int((h - 1) * q)
            } else {
                int((h - 1) * q + 4 * 5 - 6 + 1)
            };
            assert_eq!(margin, expected, "rank {r}");
            assert!(check_ext_strict(r, &pq).unwrap());
        }
    }

    #[test]
    fn slope_is_constant_across_ranks() {
        for pp in grid() {
            let expected = ratio(pp.b() * 8 - pp.e() * 12 - pp.k() - 3, Int::one());
            let start = if pp.e().is_zero() { 1 } else { 2 };
            for r in start..=12 {
                assert_eq!(slope_rank_r(r, &pp).unwrap(), expected, "rank {r}");
            }
        }
    }

    #[test]
    fn surface_c1_goldens() {
        let pp = p(0, 4, 5);
        let b = 4;
        assert_eq!(
            scroll_to_surface_c1(1, &pp).unwrap(),
            SurfaceDivisor::new(5, b - 1)
        );
        assert_eq!(
            scroll_to_surface_c1(2, &pp).unwrap(),
            SurfaceDivisor::new(7, 3 * b - 2)
        );
        let pq = p(1, 5, 5);
        assert_eq!(
            scroll_to_surface_c1(3, &pq).unwrap(),
            SurfaceDivisor::new(12, 4 * 5 - 3)
        );
        // Closed forms for the correspondence.
        for pp in grid() {
            let start = if pp.e().is_zero() { 1 } else { 2 };
            for r in start..=12u64 {
                let got = scroll_to_surface_c1(r, &pp).unwrap();
                let ri = r as i64;
                let expected = if r % 2 == 1 {
                    SurfaceDivisor::new(
                        int(3 * (ri + 1) + (ri - 3) / 2),
                        (pp.b() * (ri + 1) - 3) + (pp.b() - pp.e() - 2) * ((ri - 3) / 2),
                    )
                } else {
                    SurfaceDivisor::new(
                        int(3 * ri + ri / 2),
                        pp.b() * ri + (pp.b() - pp.e() - 2) * (ri / 2),
                    )
                };
                assert_eq!(got, expected, "rank {r}");
            }
        }
    }

    #[test]
    fn family_descriptor_populates() {
        let pp = p(1, 5, 5);
        let f = family_descriptor(4, &pp).unwrap();
        assert_eq!(f.rank, 4);
        assert_eq!(f.parity, "even");
        assert_eq!(f.moduli_dim, int(69));
        assert_eq!(f.ext_space, Some(int(17)));
        assert_eq!(f.strict, Some(true));
        assert_eq!(f.h1_tower, None);
        let g = family_descriptor(1, &p(0, 4, 5)).unwrap();
        assert_eq!(g.moduli_dim, int(0));
        assert_eq!(g.ext_space, None);
        assert_eq!(g.h1_tower, Some(int(12)));
    }
}
