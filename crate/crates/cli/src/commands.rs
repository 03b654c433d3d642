//! Command implementations: each builds a [`Report`] and an exit code.

use std::fmt;

use num::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use ulrich_scrolls::cohomology::{self, CohError};
use ulrich_scrolls::hirzebruch::SurfaceDivisor;
use ulrich_scrolls::moduli::{self, ModuliError};
use ulrich_scrolls::scroll::{ParamError, ScrollDivisor, ScrollParams};
use ulrich_scrolls::ulrich::{self, Rank2Construction, UlrichError};
use ulrich_scrolls::verify::{self, Fault, Grid};
use ulrich_scrolls::Int;

use crate::exprlang;
use crate::render::{
    jchern, jclassification, jendo, jext_table, jfamily, jint, jinterval, jparams, jrat, jscroll,
    jsurf, jsurface_chern, jverdict, sdegree, sopt, Report, Table,
};

/// A failure with a dedicated process exit code.  Solver/oracle
/// disagreements (exit 5) are not errors here: those commands still print
/// their report and carry the code in [`Outcome::exit`].
#[derive(Clone, Debug)]
pub enum CliError {
    /// Invalid or out-of-range parameters (exit 2).
    Params(String),
    /// Unparsable expression or malformed range/grid syntax (exit 3).
    Parse(String),
    /// The expression is outside the cohomology model (exit 4).
    Model(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Params(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Model(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Params(m) | CliError::Parse(m) | CliError::Model(m) => f.write_str(m),
        }
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Params(e.to_string())
    }
}

impl From<exprlang::ParseError> for CliError {
    fn from(e: exprlang::ParseError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<CohError> for CliError {
    fn from(e: CohError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<UlrichError> for CliError {
    fn from(e: UlrichError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<ModuliError> for CliError {
    fn from(e: ModuliError) -> Self {
        CliError::Params(e.to_string())
    }
}

/// A rendered report plus the exit code it should terminate with.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, exit: 0 }
    }
}

fn params(e: i64, b: i64, k: i64) -> Result<ScrollParams, CliError> {
    Ok(ScrollParams::new(e, b, k)?)
}

pub fn invariants(e: i64, b: i64, k: i64) -> Result<Outcome, CliError> {
    let p = params(e, b, k)?;
    let inv = p.invariants();
    let b_lower: Int = p.e() * 3 + 2;
    let k_lower: Int = p.b() - p.e();
    let k_upper: Int = p.b() * 2 - p.e() * 4;
    let payload = json!({
        "assumptions": {
            "b_lower_bound": jint(&b_lower),
            "k_exclusive_lower": jint(&k_lower),
            "k_exclusive_upper": jint(&k_upper),
        },
        "d": jint(&inv.d),
        "g": jint(&inv.g),
        "n": jint(&inv.n),
    });
    let mut table = Table::new(&["e", "b", "k", "n", "d", "g"]);
    table.push(vec![
        p.e().to_string(),
        p.b().to_string(),
        p.k().to_string(),
        inv.n.to_string(),
        inv.d.to_string(),
        inv.g.to_string(),
    ]);
    table.notes.push(format!(
        "constraints satisfied: b >= {b_lower}, {k_lower} < k < {k_upper}"
    ));
    Ok(Outcome::ok(Report {
        command: "invariants",
        params: jparams(&p),
        payload,
        table,
    }))
}

pub fn coh(e: i64, b: i64, k: i64, expr_text: &str) -> Result<Outcome, CliError> {
    let p = params(e, b, k)?;
    let expr = exprlang::parse(expr_text)?;
    let v = cohomology::cohomology(&expr, &p)?;
    let payload = json!({
        "cohomology": jinterval(&v),
        "expr": expr.to_string(),
    });
    let mut table = Table::new(&["expr", "h0", "h1", "h2", "h3", "chi", "indeterminate"]);
    let mut row = vec![expr.to_string()];
    for i in 0..4 {
        row.push(sdegree(&v.lo[i], &v.hi[i]));
    }
    row.push(v.chi.to_string());
    row.push((!v.is_exact()).to_string());
    table.push(row);
    Ok(Outcome::ok(Report {
        command: "coh",
        params: jparams(&p),
        payload,
        table,
    }))
}

/// Status of a bundle within one classification, for the comparison table.
fn status_of(c: &ulrich::Classification, l: &ScrollDivisor) -> &'static str {
    if c.ulrich.contains(l) {
        "ulrich"
    } else if c.undecided.iter().any(|u| &u.bundle == l) {
        "indeterminate"
    } else {
        "absent"
    }
}

pub fn classify(e: i64, b: i64, k: i64, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let p = params(e, b, k)?;
    if fault == Some(Fault::GoldenH1) {
        return Err(CliError::Params(
            "the golden-h1 fault applies to the verify command".to_string(),
        ));
    }
    let solver = ulrich::classify_ulrich_lines(&p)?;
    let bound = ulrich::default_scan_bound(&p);
    let mut oracle = ulrich::brute_scan_ulrich_lines(&p, &bound)?;
    if fault == Some(Fault::OracleMiss) {
        oracle.ulrich.push(ScrollDivisor::xi(1));
        oracle.ulrich.sort();
        oracle.ulrich.dedup();
    }
    let agreement = solver.same_bundles(&oracle);

    let mut bundles: Vec<ScrollDivisor> = Vec::new();
    for c in [&solver, &oracle] {
        bundles.extend(c.ulrich.iter().cloned());
        bundles.extend(c.undecided.iter().map(|u| u.bundle.clone()));
    }
    bundles.sort();
    bundles.dedup();

    let mut table = Table::new(&["bundle", "solver", "oracle"]);
    for l in &bundles {
        table.push(vec![
            l.to_string(),
            status_of(&solver, l).to_string(),
            status_of(&oracle, l).to_string(),
        ]);
    }
    table.notes.push(format!("scan bound = {bound}"));
    table.notes.push(format!("agreement = {agreement}"));

    let payload = json!({
        "agreement": agreement,
        "oracle": jclassification(&oracle),
        "scan_bound": jint(&bound),
        "solver": jclassification(&solver),
    });
    let report = Report {
        command: "classify",
        params: jparams(&p),
        payload,
        table,
    };
    Ok(Outcome {
        report,
        exit: if agreement { 0 } else { 5 },
    })
}

pub fn ext_table(e: i64, b: i64, k: i64) -> Result<Outcome, CliError> {
    let p = params(e, b, k)?;
    let t = ulrich::ext1_table(&p)?;
    let mut columns = vec!["from\\to".to_string()];
    columns.extend(t.labels.iter().cloned());
    let mut table = Table {
        columns,
        rows: Vec::new(),
        notes: Vec::new(),
    };
    for (i, label) in t.labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(t.dims[i].iter().map(Int::to_string));
        table.push(row);
    }
    for c in &t.cross_checks {
        table.notes.push(format!(
            "cross-check Ext^1({} -> {}): twist {} gives h1 = {}; twist {} gives h1 = {}",
            c.from, c.to, c.twist, c.h1, c.alt_twist, c.alt_h1
        ));
    }
    Ok(Outcome::ok(Report {
        command: "ext-table",
        params: jparams(&p),
        payload: jext_table(&t),
        table,
    }))
}

fn jrank2(p: &ScrollParams) -> Result<Value, CliError> {
    let r = ulrich::rank2_report(p)?;
    let construction = match &r.construction {
        Rank2Construction::LinePair { sub, quot, ext_dim } => json!({
            "ext_dim": jint(ext_dim),
            "kind": "line-pair",
            "quot": jscroll(quot),
            "sub": jscroll(sub),
        }),
        Rank2Construction::PointModification {
            kernel,
            points,
            h0_ideal_twist,
            endo,
            h1_endo,
        } => json!({
            "endo": jendo(endo),
            "h0_ideal_twist": jint(h0_ideal_twist),
            "h1_endo": jint(h1_endo),
            "kernel": jsurface_chern(kernel),
            "kind": "point-modification",
            "points": jint(points),
        }),
    };
    Ok(json!({
        "chern": jchern(&r.chern),
        "construction": construction,
        "moduli_dim": jint(&r.moduli_dim),
        "slope": jrat(&r.slope),
        "special": r.special,
        "verdict": jverdict(&r.verdict),
    }))
}

fn jrank3(p: &ScrollParams) -> Result<Value, CliError> {
    let d = ulrich::rank3_resolution_data(p)?;
    Ok(json!({
        "admissible": d.pair.admissible(),
        "c1_scroll": jscroll(&d.c1_scroll),
        "degree_matches": d.pair.degree_matches,
        "delta": jint(&d.delta),
        "derived_c1": jsurf(&d.derived_c1),
        "derived_rank": jint(&d.derived_rank),
        "gamma": jint(&d.gamma),
        "in_range": d.pair.in_range,
        "integrality": d.pair.integrality,
        "moduli_dim": jint(&d.moduli_dim),
        "tau": jint(&d.tau),
    }))
}

pub fn moduli_cmd(e: i64, b: i64, k: i64, rank: u64) -> Result<Outcome, CliError> {
    let p = params(e, b, k)?;
    let d = moduli::family_descriptor(rank, &p)?;
    let mut payload = json!({ "descriptor": jfamily(&d) });
    let map = payload.as_object_mut().expect("object");
    if rank == 2 {
        map.insert("rank2".to_string(), jrank2(&p)?);
    }
    if rank == 3 && p.e().is_positive() {
        map.insert("rank3".to_string(), jrank3(&p)?);
    }
    let mut table = Table::new(&[
        "rank",
        "parity",
        "c1",
        "surface_c1",
        "chi_self",
        "moduli_dim",
        "slope",
        "ext_space",
        "ext_bound",
        "margin",
        "strict",
        "h1_tower",
    ]);
    table.push(vec![
        d.rank.to_string(),
        d.parity.to_string(),
        d.c1.to_string(),
        d.surface_c1.to_string(),
        d.chi_self.to_string(),
        d.moduli_dim.to_string(),
        d.slope.to_string(),
        sopt(&d.ext_space),
        sopt(&d.ext_bound),
        sopt(&d.margin),
        sopt(&d.strict),
        sopt(&d.h1_tower),
    ]);
    Ok(Outcome::ok(Report {
        command: "moduli",
        params: jparams(&p),
        payload,
        table,
    }))
}

pub fn surface_ulrich(e: i64, b: i64, k: i64) -> Result<Outcome, CliError> {
    let p = params(e, b, k)?;
    let solver = ulrich::surface_ulrich_lines(&p);
    let bound = ulrich::default_scan_bound(&p);
    let oracle = ulrich::surface_brute_scan(&p, &bound);
    let agreement = solver == oracle;

    let mut union: Vec<SurfaceDivisor> = solver.iter().chain(&oracle).cloned().collect();
    union.sort();
    union.dedup();
    let mut table = Table::new(&["divisor", "solver", "oracle"]);
    for d in &union {
        table.push(vec![
            d.to_string(),
            solver.contains(d).to_string(),
            oracle.contains(d).to_string(),
        ]);
    }
    table
        .notes
        .push(format!("hyperplane class = (3, {})", p.b()));
    table.notes.push(format!("agreement = {agreement}"));

    let payload = json!({
        "agreement": agreement,
        "hyperplane": jsurf(&p.c1_e()),
        "oracle": oracle.iter().map(jsurf).collect::<Vec<_>>(),
        "scan_bound": jint(&bound),
        "solver": solver.iter().map(jsurf).collect::<Vec<_>>(),
    });
    let report = Report {
        command: "surface-ulrich",
        params: jparams(&p),
        payload,
        table,
    };
    Ok(Outcome {
        report,
        exit: if agreement { 0 } else { 5 },
    })
}

/// Parses an inclusive range: either `lo..hi` or a single integer.
fn parse_range(text: &str, what: &str) -> Result<(i64, i64), CliError> {
    let bad = || {
        CliError::Parse(format!(
            "invalid {what} range '{text}': expected N or LO..HI"
        ))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n: i64 = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(CliError::Params(format!(
            "empty {what} range '{text}': lower bound exceeds upper bound"
        )));
    }
    Ok((lo, hi))
}

pub fn scan(
    e_range: &str,
    b_range: &str,
    k_range: Option<&str>,
    rank_max: Option<u64>,
) -> Result<Outcome, CliError> {
    let (e_lo, e_hi) = parse_range(e_range, "e")?;
    let (b_lo, b_hi) = parse_range(b_range, "b")?;
    let k_bounds = k_range.map(|t| parse_range(t, "k")).transpose()?;
    if let Some(r) = rank_max {
        if r < 2 {
            return Err(CliError::Params(format!(
                "--rank-max must be at least 2 (got {r})"
            )));
        }
    }

    let mut triples = Vec::new();
    for e in e_lo.max(0)..=e_hi {
        for b in (3 * e + 2).max(b_lo)..=b_hi {
            let (k_lo, k_hi) = match k_bounds {
                Some((lo, hi)) => (lo.max(b - e + 1), hi.min(2 * b - 4 * e - 1)),
                None => (b - e + 1, 2 * b - 4 * e - 1),
            };
            for k in k_lo..=k_hi {
                triples.push(ScrollParams::new(e, b, k).expect("range was clamped to validity"));
            }
        }
    }

    struct RowData {
        p: ScrollParams,
        classification: ulrich::Classification,
        dims: Vec<(u64, Int)>,
    }
    let rows: Result<Vec<RowData>, CliError> = triples
        .into_par_iter()
        .map(|p| {
            let classification = ulrich::classify_ulrich_lines(&p)?;
            let mut dims = Vec::new();
            for r in 2..=rank_max.unwrap_or(2) {
                dims.push((r, moduli::moduli_dim(r, &p)?));
            }
            Ok(RowData {
                p,
                classification,
                dims,
            })
        })
        .collect();
    let rows = rows?;

    let mut columns: Vec<String> = ["e", "b", "k", "n", "d", "g", "lines", "undecided", "slope"]
        .iter()
        .map(|c| c.to_string())
        .collect();
    for r in 2..=rank_max.unwrap_or(2) {
        columns.push(format!("dim_rank{r}"));
    }
    let mut table = Table {
        columns,
        rows: Vec::new(),
        notes: Vec::new(),
    };
    let mut jrows = Vec::new();
    for row in &rows {
        let p = &row.p;
        let inv = p.invariants();
        let slope = moduli::slope_rank_r(2, p)?;
        let mut cells = vec![
            p.e().to_string(),
            p.b().to_string(),
            p.k().to_string(),
            inv.n.to_string(),
            inv.d.to_string(),
            inv.g.to_string(),
            row.classification.ulrich.len().to_string(),
            row.classification.undecided.len().to_string(),
            slope.to_string(),
        ];
        cells.extend(row.dims.iter().map(|(_, d)| d.to_string()));
        table.push(cells);
        jrows.push(json!({
            "b": jint(p.b()),
            "classification": jclassification(&row.classification),
            "d": jint(&inv.d),
            "e": jint(p.e()),
            "g": jint(&inv.g),
            "k": jint(p.k()),
            "moduli_dims": row
                .dims
                .iter()
                .map(|(r, d)| json!({ "dim": jint(d), "rank": r }))
                .collect::<Vec<_>>(),
            "n": jint(&inv.n),
            "slope": jrat(&slope),
        }));
    }
    table.notes.push(format!("{} valid triples", rows.len()));

    let params = json!({
        "b": format!("{b_lo}..{b_hi}"),
        "e": format!("{e_lo}..{e_hi}"),
        "k": k_bounds.map_or("all".to_string(), |(lo, hi)| format!("{lo}..{hi}")),
        "rank_max": rank_max,
    });
    let payload = json!({ "count": rows.len(), "triples": jrows });
    Ok(Outcome::ok(Report {
        command: "scan",
        params,
        payload,
        table,
    }))
}

/// Parses `key=value` grid overrides: `e=LO..HI`, `b=LO..HI`, `rank=N`.
fn parse_grid(text: &str) -> Result<Grid, CliError> {
    let mut grid = Grid::default();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part.split_once('=').ok_or_else(|| {
            CliError::Parse(format!(
                "invalid grid component '{part}': expected key=value"
            ))
        })?;
        match key.trim() {
            "e" => (grid.e_min, grid.e_max) = parse_range(value, "e")?,
            "b" => (grid.b_min, grid.b_max) = parse_range(value, "b")?,
            "rank" => {
                grid.rank_max = value.trim().parse().map_err(|_| {
                    CliError::Parse(format!("invalid rank bound '{value}': expected an integer"))
                })?;
            }
            other => {
                return Err(CliError::Parse(format!(
                    "unknown grid key '{other}' (expected e, b, or rank)"
                )))
            }
        }
    }
    Ok(grid)
}

pub fn verify_cmd(grid_text: Option<&str>, fault: Option<Fault>) -> Result<Outcome, CliError> {
    let grid = match grid_text {
        Some(text) => parse_grid(text)?,
        None => Grid::default(),
    };
    let outcomes = verify::run_all(&grid, fault);
    let passed = outcomes.iter().all(|o| o.passed());

    let mut table = Table::new(&["id", "criterion", "checks", "result", "failures"]);
    let mut jcriteria = Vec::new();
    for o in &outcomes {
        table.push(vec![
            o.id.to_string(),
            o.name.to_string(),
            o.checks.to_string(),
            if o.passed() { "pass" } else { "fail" }.to_string(),
            o.failures.len().to_string(),
        ]);
        for f in &o.failures {
            table.notes.push(format!("criterion {}: {f}", o.id));
        }
        jcriteria.push(json!({
            "checks": o.checks,
            "failures": o.failures,
            "id": o.id,
            "name": o.name,
            "passed": o.passed(),
        }));
    }
    let params = json!({
        "b_max": grid.b_max,
        "b_min": grid.b_min,
        "e_max": grid.e_max,
        "e_min": grid.e_min,
        "rank_max": grid.rank_max,
        "triples": grid.triples().len(),
    });
    let payload = json!({ "criteria": jcriteria, "passed": passed });
    let report = Report {
        command: "verify",
        params,
        payload,
        table,
    };
    Ok(Outcome {
        report,
        exit: if passed { 0 } else { 1 },
    })
}
