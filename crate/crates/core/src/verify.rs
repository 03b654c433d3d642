//! Cross-verification harness.
//!
//! Runs ten independent check families over a parameter grid: golden
//! values, solver-versus-oracle agreement, recursion-versus-closed-form
//! agreement, and exactness/duality regressions.  Every check is
//! deterministic and exact; randomized property tests live with the test
//! suites instead.
//!
//! The harness supports deliberate fault injection ([`Fault`]) so that the
//! failure paths themselves are testable: a fault must flip the affected
//! criterion to failing.

use num::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{int, Int};
use crate::cohomology::{self, BundleExpr};
use crate::hirzebruch::{Surface, SurfaceDivisor};
use crate::moduli;
use crate::scroll::{ChernData, ScrollDivisor, ScrollParams};
use crate::ulrich;

/// Parameter grid swept by the harness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Grid {
    pub e_min: i64,
    pub e_max: i64,
    pub b_min: i64,
    pub b_max: i64,
    pub rank_max: u64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            e_min: 0,
            e_max: 2,
            b_min: 2,
            b_max: 10,
            rank_max: 12,
        }
    }
}

impl Grid {
    /// Every valid `(e, b, k)` inside the requested rectangle.
    pub fn triples(&self) -> Vec<ScrollParams> {
        let mut out = Vec::new();
        for e in self.e_min.max(0)..=self.e_max {
            for b in (3 * e + 2).max(self.b_min)..=self.b_max {
                for k in (b - e + 1)..=(2 * b - 4 * e - 1) {
                    out.push(ScrollParams::new(e, b, k).expect("grid triple is valid"));
                }
            }
        }
        out
    }
}

/// Deliberate faults for testing the harness's failure paths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Fault {
    /// Perturbs one golden extension dimension by one.
    GoldenH1,
    /// Perturbs the brute-force oracle so it disagrees with the solver.
    OracleMiss,
}

/// Result of one criterion: how many checks ran and which failed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: u64,
    pub failures: Vec<String>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Checker {
    checks: u64,
    failures: Vec<String>,
}

impl Checker {
    fn is(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond {
            self.failures.push(msg());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: &T, want: &T, ctx: &str) {
        self.checks += 1;
        if got != want {
            self.failures
                .push(format!("{ctx}: got {got:?}, expected {want:?}"));
        }
    }

    fn merge(&mut self, other: Checker) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    fn outcome(self, id: u32, name: &'static str) -> CriterionOutcome {
        CriterionOutcome {
            id,
            name,
            checks: self.checks,
            failures: self.failures,
        }
    }
}

fn label(p: &ScrollParams) -> String {
    format!("({}, {}, {})", p.e(), p.b(), p.k())
}

/// Whether the parameters admit the candidate family whose verdict
/// depends on the extension class of `E_e`.
fn gap_parameters(p: &ScrollParams) -> bool {
    ulrich::euler_candidates(p)
        .iter()
        .any(|c| ulrich::extension_sensitive_candidate(c, p))
}

/// Criterion 1: the Euler-condition solver and the brute-force grid scan
/// find the same Ulrich line bundles, the definite sets match the known
/// closed-form answer, and indeterminacy occurs only on the
/// extension-sensitive family.
fn criterion_classification(grid: &Grid, fault: Option<Fault>) -> CriterionOutcome {
    let triples = grid.triples();
    let checkers: Vec<Checker> = triples
        .par_iter()
        .map(|p| {
            let mut c = Checker::default();
            let tag = label(p);
            let solver = match ulrich::classify_ulrich_lines(p) {
                Ok(s) => s,
                Err(e) => {
                    c.is(false, || format!("{tag}: solver failed: {e}"));
                    return c;
                }
            };
            let mut brute = match ulrich::brute_scan_ulrich_lines(p, &ulrich::default_scan_bound(p))
            {
                Ok(s) => s,
                Err(e) => {
                    c.is(false, || format!("{tag}: brute scan failed: {e}"));
                    return c;
                }
            };
            if fault == Some(Fault::OracleMiss) {
                if brute.ulrich.is_empty() {
                    brute.ulrich.push(ScrollDivisor::zero());
                } else {
                    brute.ulrich.remove(0);
                }
            }
            c.is(solver.same_bundles(&brute), || {
                format!(
                    "{tag}: solver and oracle disagree (solver {:?} vs oracle {:?})",
                    solver.ulrich, brute.ulrich
                )
            });

            // Definite sets must match the closed-form classification.
            let mut expected = Vec::new();
            if p.e().is_zero() {
                expected.push(ulrich::line_l1(p));
                expected.push(ulrich::line_l2(p));
                if let Some((m1, m2)) = ulrich::line_m_pair(p) {
                    expected.push(m1);
                    expected.push(m2);
                }
                expected.sort();
            }
            c.eq(&solver.ulrich, &expected, &format!("{tag}: definite set"));

            // Indeterminacy is confined to the extension-sensitive family,
            // and occurs exactly when the parameters admit it.
            for u in &solver.undecided {
                c.is(ulrich::extension_sensitive_candidate(&u.bundle, p), || {
                    format!(
                        "{tag}: undecided candidate {} outside the extension-sensitive family",
                        u.bundle
                    )
                });
            }
            let expect_gap = gap_parameters(p);
            c.eq(
                &solver.undecided.len(),
                &(if expect_gap { 2usize } else { 0 }),
                &format!("{tag}: undecided count"),
            );
            c
        })
        .collect();
    let mut total = Checker::default();
    for ch in checkers {
        total.merge(ch);
    }
    total.outcome(1, "line classification vs brute-force oracle")
}

/// Criterion 2: golden extension dimensions between the classified line
/// bundles, including full vanishing of the other degrees.
fn criterion_golden_ext(grid: &Grid, fault: Option<Fault>) -> CriterionOutcome {
    let mut c = Checker::default();
    let mut faulted = fault == Some(Fault::GoldenH1);
    for p in grid.triples() {
        if !p.e().is_zero() {
            continue;
        }
        let tag = label(&p);
        let b = p.b().clone();
        let l1 = ulrich::line_l1(&p);
        let l2 = ulrich::line_l2(&p);
        let (lo, hi) = cohomology::ext1_dim_lines(&l2, &l1, &p).expect("in-model");
        let mut got = lo.clone();
        if faulted {
            got += 1;
            faulted = false; // one perturbed value is enough to fail
        }
        c.eq(&got, &(&b * 4 - 4), &format!("{tag}: ext1(L2, L1)"));
        c.eq(
            &hi,
            &(&b * 4 - 4),
            &format!("{tag}: ext1(L2, L1) exactness"),
        );
        let (lo, _) = cohomology::ext1_dim_lines(&l1, &l2, &p).expect("in-model");
        c.eq(&lo, &(&b * 2 + 2), &format!("{tag}: ext1(L1, L2)"));
        if let Some((m1, m2)) = ulrich::line_m_pair(&p) {
            let t = p.t().expect("m-case");
            // Ext^1(M2, M1): full cohomology of the difference class, with
            // every other degree vanishing.
            let diff = m1.clone() - &m2;
            let v = cohomology::cohomology(&BundleExpr::ScrollLine(diff.a, diff.d), &p)
                .expect("in-model");
            let exact = v.exact();
            c.is(exact.is_some(), || {
                format!("{tag}: ext1(M2, M1) interval did not collapse")
            });
            if let Some(h) = exact {
                c.eq(&h[1], &(&t * 6 - 3), &format!("{tag}: ext1(M2, M1)"));
                c.is(h[0].is_zero() && h[2].is_zero() && h[3].is_zero(), || {
                    format!("{tag}: ext1(M2, M1) companions must vanish, got {v}")
                });
            }
            let (lo, _) = cohomology::ext1_dim_lines(&m1, &m2, &p).expect("in-model");
            c.eq(&lo, &(&b + 1), &format!("{tag}: ext1(M1, M2)"));
            let (lo, _) = cohomology::ext1_dim_lines(&l1, &m1, &p).expect("in-model");
            c.eq(&lo, &Int::one(), &format!("{tag}: ext1(L1, M1)"));
        }
    }
    c.outcome(2, "golden extension dimensions")
}

/// Criterion 3: full Ext tables, including the mixed block and the
/// twist-normalisation guard.
fn criterion_ext_tables(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();
    for p in grid.triples() {
        let tag = label(&p);
        let t = match ulrich::ext1_table(&p) {
            Ok(t) => t,
            Err(e) => {
                c.is(false, || format!("{tag}: ext table failed: {e}"));
                continue;
            }
        };
        if p.e().is_positive() {
            c.is(t.bundles.is_empty(), || {
                format!("{tag}: table must be empty for e > 0")
            });
            continue;
        }
        let b = p.b().clone();
        for (i, row) in t.dims.iter().enumerate() {
            c.is(row[i].is_zero(), || {
                format!("{tag}: diagonal entry {i} must vanish")
            });
        }
        c.eq(&t.dims[1][0], &(&b * 4 - 4), &format!("{tag}: (L2, L1)"));
        c.eq(&t.dims[0][1], &(&b * 2 + 2), &format!("{tag}: (L1, L2)"));
        if t.bundles.len() == 4 {
            c.eq(&t.dims[2][3], &(&b + 1), &format!("{tag}: (M1, M2)"));
            c.eq(&t.dims[3][2], &(&b * 3 - 3), &format!("{tag}: (M2, M1)"));
            let zeros = [(2usize, 0usize), (0, 3), (2, 1), (1, 3)];
            for (i, j) in zeros {
                c.is(t.dims[i][j].is_zero(), || {
                    format!("{tag}: ({}, {}) must vanish", t.labels[i], t.labels[j])
                });
            }
            c.eq(&t.dims[0][2], &Int::one(), &format!("{tag}: (L1, M1)"));
            c.eq(&t.dims[3][0], &(&b * 5 - 5), &format!("{tag}: (M2, L1)"));
            c.eq(&t.dims[1][2], &(&b * 5 - 5), &format!("{tag}: (L2, M1)"));
            c.eq(&t.dims[3][1], &Int::one(), &format!("{tag}: (M2, L2)"));
            // The normalisation guard must detect the wrong twist.
            c.eq(
                &t.cross_checks.len(),
                &1usize,
                &format!("{tag}: guard count"),
            );
            let g = &t.cross_checks[0];
            c.is(g.h1 != g.alt_h1, || {
                format!(
                    "{tag}: twist guard failed to separate {} from {}",
                    g.twist, g.alt_twist
                )
            });
            c.eq(&g.h1, &t.dims[3][0], &format!("{tag}: guard value"));
        }
    }
    c.outcome(3, "ext tables between classified bundles")
}

/// Criterion 4: rank-2 reports across the grid plus two named instances.
fn criterion_rank2(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();
    for p in grid.triples() {
        let tag = label(&p);
        let r = match ulrich::rank2_report(&p) {
            Ok(r) => r,
            Err(e) => {
                c.is(false, || format!("{tag}: rank-2 report failed: {e}"));
                continue;
            }
        };
        let b = p.b().clone();
        let e = p.e().clone();
        let k = p.k().clone();
        c.eq(
            &r.chern.c1,
            &ScrollDivisor::new(int(2), SurfaceDivisor::new(Int::one(), &b - &e - 2)),
            &format!("{tag}: c1"),
        );
        c.eq(
            &r.chern.c2.dxi,
            &SurfaceDivisor::new(int(4), &b * 2 - &e - 2),
            &format!("{tag}: c2 xi-part"),
        );
        c.eq(
            &r.chern.c2.m,
            &(&b * 2 - &e * 3 - &k - 1),
            &format!("{tag}: c2 fibre part"),
        );
        c.is(r.special, || format!("{tag}: c1 must equal K_X + 4 xi"));
        c.eq(
            &r.moduli_dim,
            &(&b * 6 - &e * 9 - 3),
            &format!("{tag}: dim"),
        );
        c.eq(
            &r.slope,
            &crate::arith::ratio(&b * 8 - &e * 12 - &k - 3, Int::one()),
            &format!("{tag}: slope"),
        );
        c.is(r.verdict.is_ulrich(), || {
            format!(
                "{tag}: rank-2 bundle must verify as Ulrich, got {:?}",
                r.verdict.status
            )
        });
    }
    // Named instances.
    let p = ScrollParams::new(0, 3, 4).expect("valid");
    let r = ulrich::rank2_report(&p).expect("report");
    c.eq(&r.moduli_dim, &int(15), "(0, 3, 4): dim");
    c.eq(
        &r.slope,
        &crate::arith::ratio(int(17), Int::one()),
        "(0, 3, 4): slope",
    );
    let p = ScrollParams::new(1, 5, 5).expect("valid");
    let r = ulrich::rank2_report(&p).expect("report");
    c.eq(&r.moduli_dim, &int(18), "(1, 5, 5): dim");
    c.eq(
        &r.slope,
        &crate::arith::ratio(int(20), Int::one()),
        "(1, 5, 5): slope",
    );
    c.outcome(4, "rank-2 reports")
}

/// Criterion 5: Euler pairings between the surface bundles.
fn criterion_euler_pairings(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();
    for p in grid.triples() {
        let tag = label(&p);
        let b = p.b().clone();
        let e = p.e().clone();
        let endo = cohomology::chi_rank2_endo_surface(&p);
        c.eq(
            &endo.total,
            &(int(4) - &b * 6 + &e * 9),
            &format!("{tag}: chi(H (x) H^v)"),
        );
        if p.e().is_zero() {
            continue;
        }
        let a3 = ulrich::a3_surface_c1(&p);
        let h1 = ulrich::h1_surface_chern(&p).c1;
        c.eq(
            &p.surface().intersect(&a3, &h1),
            &(&b * 64 - &e * 96 - 45),
            &format!("{tag}: c1(A3) . c1(H1)"),
        );
        c.eq(
            &ulrich::euler_pair_ulrich_surface(&int(3), &a3, &int(2), &h1, &p),
            &(&e * 15 - &b * 10 + 3),
            &format!("{tag}: chi(A3 (x) H1^v)"),
        );
        c.eq(
            &ulrich::euler_pair_ulrich_surface(&int(2), &h1, &int(3), &a3, &p),
            &(&e * 12 - &b * 8 - 3),
            &format!("{tag}: chi(H1 (x) A3^v)"),
        );
    }
    c.outcome(5, "euler pairings on the base surface")
}

/// Criterion 6: rank-3 resolution data for `e > 0`.
fn criterion_rank3(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();
    for p in grid.triples() {
        if p.e().is_zero() {
            continue;
        }
        let tag = label(&p);
        let r = match ulrich::rank3_resolution_data(&p) {
            Ok(r) => r,
            Err(e) => {
                c.is(false, || format!("{tag}: rank-3 data failed: {e}"));
                continue;
            }
        };
        let b = p.b().clone();
        let e = p.e().clone();
        c.eq(&r.gamma, &(&b - &e * 3 + 3), &format!("{tag}: gamma"));
        c.eq(&r.delta, &(&b - &e * 3), &format!("{tag}: delta"));
        c.eq(&r.tau, &int(6), &format!("{tag}: tau"));
        c.eq(&r.derived_rank, &int(3), &format!("{tag}: rank"));
        c.eq(
            &r.derived_c1,
            &SurfaceDivisor::new(int(12), &b * 4 - 3),
            &format!("{tag}: c1"),
        );
        c.is(r.pair.admissible(), || {
            format!("{tag}: pair must be admissible")
        });
        c.eq(
            &r.c1_scroll,
            &ScrollDivisor::new(int(3), SurfaceDivisor::new(int(3), &b - 3)),
            &format!("{tag}: scroll c1"),
        );
        c.eq(
            &r.moduli_dim,
            &moduli::moduli_dim(3, &p).expect("rank 3 in range"),
            &format!("{tag}: dim M(3)"),
        );
        // Nearby non-examples must be rejected.
        let off = ulrich::admissible_ulrich_pair(&SurfaceDivisor::new(int(12), &b * 4 - 2), &p)
            .expect("e > 0");
        c.is(!off.admissible(), || {
            format!("{tag}: off-degree pair must fail")
        });
    }
    c.outcome(6, "rank-3 resolution data")
}

/// Criterion 7: tower recursions agree with closed forms; moduli
/// dimensions equal `1 - chi_self`; slopes are constant in the rank.
fn criterion_recursions(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();
    for p in grid.triples() {
        let tag = label(&p);
        let start = if p.e().is_zero() { 1 } else { 2 };
        let slope0 = moduli::slope_rank_r(start, &p).expect("in range");
        for r in start..=grid.rank_max {
            let closed = moduli::chi_self(r, &p).expect("in range");
            c.eq(
                &closed,
                &moduli::chi_self_blocks(r, &p).expect("in range"),
                &format!("{tag}: chi blocks at rank {r}"),
            );
            c.eq(
                &closed,
                &moduli::chi_self_recursive(r, &p).expect("in range"),
                &format!("{tag}: chi recursion at rank {r}"),
            );
            c.eq(
                &moduli::c1_rank_r(r, &p).expect("in range"),
                &moduli::c1_rank_r_recursive(r, &p).expect("in range"),
                &format!("{tag}: c1 at rank {r}"),
            );
            c.eq(
                &moduli::moduli_dim(r, &p).expect("in range"),
                &(Int::one() - &closed),
                &format!("{tag}: dim at rank {r}"),
            );
            c.eq(
                &moduli::moduli_dim(r, &p).expect("in range"),
                &moduli::moduli_dim_surface_route(r, &p).expect("in range"),
                &format!("{tag}: surface-route dim at rank {r}"),
            );
            c.eq(
                &moduli::slope_rank_r(r, &p).expect("in range"),
                &slope0,
                &format!("{tag}: slope at rank {r}"),
            );
        }
        if p.e().is_zero() {
            for r in 1..=grid.rank_max {
                c.eq(
                    &moduli::h1_gr_tensor_ldual(r, &p).expect("e = 0"),
                    &moduli::h1_gr_tensor_ldual_recursive(r, &p).expect("e = 0"),
                    &format!("{tag}: tower h1 at rank {r}"),
                );
            }
        }
    }
    // Named value: dim M(4) = 69 at (1, 5, 5).
    let p = ScrollParams::new(1, 5, 5).expect("valid");
    c.eq(
        &moduli::moduli_dim(4, &p).expect("in range"),
        &int(69),
        "(1, 5, 5): dim M(4)",
    );
    c.outcome(7, "rank recursions vs closed forms")
}

/// Criterion 8: the extension-locus bound is strictly below the family
/// dimension, assembled and closed forms agree, the Ext spaces are
/// positive, and the tower parity pattern holds.
fn criterion_ext_strictness(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();
    for p in grid.triples() {
        let tag = label(&p);
        let ranks: Vec<u64> = if p.e().is_zero() {
            (2..=grid.rank_max).collect()
        } else {
            (4..=grid.rank_max)
                .filter(|r| r % 2 == 0 || *r >= 5)
                .collect()
        };
        for r in ranks {
            c.is(moduli::check_ext_strict(r, &p).expect("in range"), || {
                format!("{tag}: strictness fails at rank {r}")
            });
            c.is(
                moduli::strictness_margin(r, &p)
                    .expect("in range")
                    .is_positive(),
                || format!("{tag}: margin not positive at rank {r}"),
            );
            c.eq(
                &moduli::ext_locus_dim_bound(r, &p).expect("in range"),
                &moduli::ext_locus_bound_closed(r, &p).expect("in range"),
                &format!("{tag}: bound closed form at rank {r}"),
            );
            c.is(
                moduli::ext_space_dim(r, &p)
                    .expect("in range")
                    .is_positive(),
                || format!("{tag}: ext space not positive at rank {r}"),
            );
        }
        if p.e().is_zero() {
            for r in 2..=grid.rank_max {
                c.eq(
                    &moduli::h0_tower_parity(r).expect("in range"),
                    &(if r % 2 == 1 { Int::one() } else { Int::zero() }),
                    &format!("{tag}: tower parity at rank {r}"),
                );
            }
            c.is(moduli::h1_ur_lower_bound(&p).is_positive(), || {
                format!("{tag}: tower h1 lower bound not positive")
            });
        }
    }
    c.outcome(8, "extension-locus strictness")
}

/// Criterion 9: the base-surface classification and the rank-r
/// correspondence between scroll and surface bundles.
fn criterion_surface(grid: &Grid) -> CriterionOutcome {
    let triples = grid.triples();
    let checkers: Vec<Checker> = triples
        .par_iter()
        .map(|p| {
            let mut c = Checker::default();
            let tag = label(p);
            let found = ulrich::surface_ulrich_lines(p);
            let expected = if p.e().is_zero() {
                vec![
                    SurfaceDivisor::new(int(2), p.b() * 2 - 1),
                    SurfaceDivisor::new(int(5), p.b() - 1),
                ]
            } else {
                Vec::new()
            };
            c.eq(&found, &expected, &format!("{tag}: surface classification"));
            let brute = ulrich::surface_brute_scan(p, &ulrich::default_scan_bound(p));
            c.eq(&found, &brute, &format!("{tag}: surface oracle"));
            // Rank-r correspondence.
            let start = if p.e().is_zero() { 1 } else { 2 };
            for r in start..=grid.rank_max {
                let surf = moduli::scroll_to_surface_c1(r, p).expect("in range");
                let scroll = moduli::c1_rank_r(r, p).expect("in range");
                c.eq(
                    &surf,
                    &(scroll.d.clone() + &p.c1_e().scale(&int(r as i64))),
                    &format!("{tag}: correspondence at rank {r}"),
                );
            }
            if p.e().is_zero() {
                c.eq(
                    &moduli::scroll_to_surface_c1(1, p).expect("in range"),
                    &SurfaceDivisor::new(int(5), p.b() - 1),
                    &format!("{tag}: rank-1 surface c1"),
                );
                c.eq(
                    &moduli::scroll_to_surface_c1(2, p).expect("in range"),
                    &SurfaceDivisor::new(int(7), p.b() * 3 - 2),
                    &format!("{tag}: rank-2 surface c1"),
                );
            } else {
                c.eq(
                    &moduli::scroll_to_surface_c1(3, p).expect("in range"),
                    &ulrich::a3_surface_c1(p),
                    &format!("{tag}: rank-3 surface c1"),
                );
            }
            c
        })
        .collect();
    let mut total = Checker::default();
    for ch in checkers {
        total.merge(ch);
    }
    total.outcome(9, "surface correspondence")
}

/// Criterion 10: deterministic duality, additivity, and product-formula
/// regressions for the cohomology engine itself.
fn criterion_engine_regressions(grid: &Grid) -> CriterionOutcome {
    let mut c = Checker::default();

    // Surface-level duality: h^i(D) = h^{2-i}(K - D), exact on both sides.
    for e in 0..=3i64 {
        let s = Surface::new(e);
        for alpha in -8..=8i64 {
            for beta in -8..=8i64 {
                let d = SurfaceDivisor::new(alpha, beta);
                let v = s.cohomology_line(&d);
                let w = s.cohomology_line(&s.serre_dual(&d));
                c.is(v.h0 == w.h2 && v.h1 == w.h1 && v.h2 == w.h0, || {
                    format!("surface duality fails at e = {e}, D = {d}")
                });
            }
        }
    }

    // Scroll-level duality: the interval of a xi + phi^* D and the
    // mirrored interval of K_X - L must be compatible, with opposite
    // Euler characteristics, and equal whenever both collapse.
    for p in grid.triples().iter().filter(|p| *p.b() <= int(6)) {
        let tag = label(p);
        for a in -4..=2i64 {
            for alpha in -2..=2i64 {
                for beta in -2..=2i64 {
                    let l = ScrollDivisor::new(a, SurfaceDivisor::new(alpha, beta));
                    let dual = p.canonical() - &l;
                    let v = cohomology::cohomology(
                        &BundleExpr::ScrollLine(l.a.clone(), l.d.clone()),
                        p,
                    )
                    .expect("in-model");
                    let w = cohomology::cohomology(
                        &BundleExpr::ScrollLine(dual.a.clone(), dual.d.clone()),
                        p,
                    )
                    .expect("in-model (dual xi-degree stays in range)")
                    .mirrored();
                    c.is(v.chi == w.chi, || {
                        format!("{tag}: chi not antisymmetric at {l}")
                    });
                    c.is(
                        (0..4).all(|i| v.lo[i] <= w.hi[i] && w.lo[i] <= v.hi[i]),
                        || format!("{tag}: duality intervals incompatible at {l}"),
                    );
                    if v.is_exact() && w.is_exact() {
                        c.is(v == w, || format!("{tag}: exact duality fails at {l}"));
                    }
                }
            }
        }
    }

    // Kuenneth at e = 0: the surface is a product of two lines.
    let s0 = Surface::new(0);
    let line = |n: i64| -> (Int, Int) {
        if n >= 0 {
            (int(n + 1), int(0))
        } else if n == -1 {
            (int(0), int(0))
        } else {
            (int(0), int(-n - 1))
        }
    };
    for alpha in -6..=6i64 {
        for beta in -6..=6i64 {
            let (a0, a1) = line(alpha);
            let (b0, b1) = line(beta);
            let v = s0.cohomology_line(&SurfaceDivisor::new(alpha, beta));
            c.is(
                v.h0 == &a0 * &b0 && v.h1 == &a0 * &b1 + &a1 * &b0 && v.h2 == &a1 * &b1,
                || format!("product formula fails at ({alpha}, {beta})"),
            );
        }
    }

    // Euler additivity across extensions and the ideal-twist chi rule.
    for p in [
        ScrollParams::new(0, 4, 6).expect("valid"),
        ScrollParams::new(1, 5, 5).expect("valid"),
    ] {
        let tag = label(&p);
        let sub = BundleExpr::Line(SurfaceDivisor::new(1, -2));
        let quot = BundleExpr::IdealTwist(SurfaceDivisor::new(int(2), int(1)), int(3));
        let both = BundleExpr::extension(sub.clone(), quot.clone());
        let lhs = cohomology::chi(&both, &p).expect("in-model");
        let rhs = cohomology::chi(&sub, &p).expect("in-model")
            + cohomology::chi(&quot, &p).expect("in-model");
        c.eq(&lhs, &rhs, &format!("{tag}: chi additivity"));
    }

    // Whitney second Chern classes of the six sums of classified line
    // bundles in the four-bundle case.
    for p in grid.triples().iter().filter(|p| p.is_m_case()) {
        let tag = label(p);
        let t = p.t().expect("m-case");
        let t1 = t.clone();
        let l1 = ulrich::line_l1(p);
        let l2 = ulrich::line_l2(p);
        let (m1, m2) = ulrich::line_m_pair(p).expect("m-case");
        let b = p.b().clone();
        let k = p.k().clone();
        let cases: Vec<(&ScrollDivisor, &ScrollDivisor, SurfaceDivisor, Int)> = vec![
            (
                &l1,
                &l2,
                SurfaceDivisor::new(int(4), &b * 2 - 2),
                &b * 2 - &k - 1,
            ),
            (
                &m1,
                &m2,
                SurfaceDivisor::new(int(4), &t1 * 6 - 2),
                -(&t1 * int(5)) - 1,
            ),
            (
                &m1,
                &l1,
                SurfaceDivisor::new(int(9), &t1 * 3 - 3),
                -(&t1 * int(8)) - 1,
            ),
            (
                &l1,
                &m2,
                SurfaceDivisor::new(int(2), &t1 * 3 - 1),
                &t1 * 6 - 4,
            ),
            (
                &m1,
                &l2,
                SurfaceDivisor::new(int(3), &t1 * 7 - 3),
                int(2) - &t1 * int(7),
            ),
            (&l2, &m2, SurfaceDivisor::new(int(2), &t1 * 3 - 1), &t1 - 1),
        ];
        for (x, y, dxi, m) in cases {
            let w = p.whitney(&ChernData::line(x.clone()), &ChernData::line(y.clone()));
            c.eq(&w.c2.dxi, &dxi, &format!("{tag}: c2 xi-part of {x} + {y}"));
            c.eq(&w.c2.m, &m, &format!("{tag}: c2 fibre part of {x} + {y}"));
        }
    }

    // The Ulrich-dual involution squares to the identity.
    for p in grid.triples().iter().take(8) {
        let tag = label(p);
        for a in -2..=2i64 {
            for alpha in -3..=3i64 {
                let l = ScrollDivisor::new(a, SurfaceDivisor::new(alpha, alpha + 1));
                c.eq(
                    &p.ulrich_dual(&p.ulrich_dual(&l)),
                    &l,
                    &format!("{tag}: involution at {l}"),
                );
            }
        }
    }

    c.outcome(10, "engine duality and additivity regressions")
}

/// Runs all ten criteria over the grid, optionally injecting a fault.
pub fn run_all(grid: &Grid, fault: Option<Fault>) -> Vec<CriterionOutcome> {
    vec![
        criterion_classification(grid, fault),
        criterion_golden_ext(grid, fault),
        criterion_ext_tables(grid),
        criterion_rank2(grid),
        criterion_euler_pairings(grid),
        criterion_rank3(grid),
        criterion_recursions(grid),
        criterion_ext_strictness(grid),
        criterion_surface(grid),
        criterion_engine_regressions(grid),
    ]
}
