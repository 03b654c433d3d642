//! Deterministic report rendering.
//!
//! Every command produces a [`Report`]: a JSON envelope (command name,
//! engine version, parameters, payload) plus a flat tabular view.  The
//! JSON form uses sorted object keys and renders integers whose magnitude
//! exceeds 2^53 as decimal strings so that consumers limited to IEEE
//! doubles never lose precision.  The tabular view drives both the
//! aligned-text and the CSV output; identical invocations produce
//! byte-identical bytes in every format.

use std::io::Write;

use num::ToPrimitive;
use serde_json::{json, Map, Value};

use ulrich_scrolls::cohomology::{CohInterval, RankTwoEndoTrace};
use ulrich_scrolls::hirzebruch::SurfaceDivisor;
use ulrich_scrolls::moduli::FamilyDescriptor;
use ulrich_scrolls::scroll::{ChernData, CodimTwoClass, ScrollDivisor, ScrollParams, SurfaceChern};
use ulrich_scrolls::ulrich::{Classification, ExtTable, UlrichVerdict, Witness};
use ulrich_scrolls::{Int, Rat};

/// Largest integer magnitude rendered as a bare JSON number.
const MAX_SAFE: i64 = 1 << 53;

/// Integers up to 2^53 in magnitude stay numbers; anything larger becomes
/// a decimal string.
pub fn jint(n: &Int) -> Value {
    match n.to_i64() {
        Some(i) if i.checked_abs().is_some_and(|a| a <= MAX_SAFE) => json!(i),
        _ => Value::String(n.to_string()),
    }
}

/// Exact rationals render via their canonical reduced form (`p` or `p/q`).
pub fn jrat(r: &Rat) -> Value {
    Value::String(r.to_string())
}

pub fn jsurf(d: &SurfaceDivisor) -> Value {
    json!({ "alpha": jint(&d.alpha), "beta": jint(&d.beta) })
}

pub fn jscroll(l: &ScrollDivisor) -> Value {
    json!({ "surface": jsurf(&l.d), "xi": jint(&l.a) })
}

pub fn jcodim2(c: &CodimTwoClass) -> Value {
    json!({ "fibre": jint(&c.m), "xi_surface": jsurf(&c.dxi) })
}

pub fn jchern(c: &ChernData) -> Value {
    json!({ "c1": jscroll(&c.c1), "c2": jcodim2(&c.c2), "rank": jint(&c.rank) })
}

pub fn jsurface_chern(c: &SurfaceChern) -> Value {
    json!({ "c1": jsurf(&c.c1), "c2": jint(&c.c2), "rank": jint(&c.rank) })
}

/// One cohomology degree: an exact integer or the string `"lo..hi"`.
pub fn jdegree(lo: &Int, hi: &Int) -> Value {
    if lo == hi {
        jint(lo)
    } else {
        Value::String(format!("{lo}..{hi}"))
    }
}

pub fn jinterval(v: &CohInterval) -> Value {
    let h: Vec<Value> = (0..4).map(|i| jdegree(&v.lo[i], &v.hi[i])).collect();
    json!({ "chi": jint(&v.chi), "h": h, "indeterminate": !v.is_exact() })
}

pub fn jwitness(w: &Witness) -> Value {
    json!({
        "degree": w.degree,
        "hi": jint(&w.hi),
        "lo": jint(&w.lo),
        "twist": w.twist,
    })
}

pub fn jverdict(v: &UlrichVerdict) -> Value {
    json!({
        "status": v.status.to_string(),
        "witnesses": v.witnesses.iter().map(jwitness).collect::<Vec<_>>(),
    })
}

pub fn jclassification(c: &Classification) -> Value {
    json!({
        "ulrich": c.ulrich.iter().map(jscroll).collect::<Vec<_>>(),
        "undecided": c
            .undecided
            .iter()
            .map(|u| json!({ "bundle": jscroll(&u.bundle), "verdict": jverdict(&u.verdict) }))
            .collect::<Vec<_>>(),
    })
}

pub fn jext_table(t: &ExtTable) -> Value {
    json!({
        "bundles": t.bundles.iter().map(jscroll).collect::<Vec<_>>(),
        "cross_checks": t
            .cross_checks
            .iter()
            .map(|c| json!({
                "alt_h1": jint(&c.alt_h1),
                "alt_twist": jsurf(&c.alt_twist),
                "from": c.from,
                "h1": jint(&c.h1),
                "to": c.to,
                "twist": jsurf(&c.twist),
            }))
            .collect::<Vec<_>>(),
        "dims": t
            .dims
            .iter()
            .map(|row| row.iter().map(jint).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "labels": t.labels,
    })
}

pub fn jfamily(d: &FamilyDescriptor) -> Value {
    fn opt_int(v: &Option<Int>) -> Value {
        v.as_ref().map_or(Value::Null, jint)
    }
    json!({
        "c1": jscroll(&d.c1),
        "chi_self": jint(&d.chi_self),
        "ext_bound": opt_int(&d.ext_bound),
        "ext_space": opt_int(&d.ext_space),
        "h1_tower": opt_int(&d.h1_tower),
        "margin": opt_int(&d.margin),
        "moduli_dim": jint(&d.moduli_dim),
        "parity": d.parity,
        "rank": d.rank,
        "slope": jrat(&d.slope),
        "strict": d.strict.map_or(Value::Null, Value::Bool),
        "surface_c1": jsurf(&d.surface_c1),
    })
}

pub fn jendo(e: &RankTwoEndoTrace) -> Value {
    json!({
        "chi_ideal_quot_twist": jint(&e.chi_ideal_quot_twist),
        "chi_sub_twist": jint(&e.chi_sub_twist),
        "total": jint(&e.total),
    })
}

pub fn jparams(p: &ScrollParams) -> Value {
    json!({ "b": jint(p.b()), "e": jint(p.e()), "k": jint(p.k()) })
}

/// Tabular view: one fixed header and a rectangular body.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Extra context lines shown (prefixed with `#`) in table format only.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len(), "ragged table row");
        self.rows.push(row);
    }
}

/// The uniform report emitted by every command.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub payload: Value,
    pub table: Table,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl Report {
    /// The JSON envelope with sorted keys.
    pub fn envelope(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".to_string(), json!(self.command));
        m.insert(
            "engine_version".to_string(),
            json!(env!("CARGO_PKG_VERSION")),
        );
        m.insert("params".to_string(), self.params.clone());
        m.insert("payload".to_string(), self.payload.clone());
        Value::Object(m)
    }

    pub fn write(&self, out: &mut impl Write, format: Format) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.envelope())
                    .expect("report serialization cannot fail");
                writeln!(out, "{text}")
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.table.columns)
                    .expect("csv write to memory");
                for row in &self.table.rows {
                    w.write_record(row).expect("csv write to memory");
                }
                let bytes = w.into_inner().expect("csv flush to memory");
                out.write_all(&bytes)
            }
            Format::Table => {
                writeln!(
                    out,
                    "# command = {}, engine_version = {}",
                    self.command,
                    env!("CARGO_PKG_VERSION")
                )?;
                writeln!(out, "# params = {}", compact(&self.params))?;
                let mut widths: Vec<usize> = self.table.columns.iter().map(String::len).collect();
                for row in &self.table.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.len());
                    }
                }
                write_row(out, &self.table.columns, &widths)?;
                let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                write_row(out, &dashes, &widths)?;
                for row in &self.table.rows {
                    write_row(out, row, &widths)?;
                }
                for note in &self.table.notes {
                    writeln!(out, "# {note}")?;
                }
                Ok(())
            }
        }
    }
}

/// Single-line JSON used in the table preamble.
fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("params serialization cannot fail")
}

fn write_row<S: AsRef<str>>(
    out: &mut impl Write,
    cells: &[S],
    widths: &[usize],
) -> std::io::Result<()> {
    let mut line = String::new();
    for (i, cell) in cells.iter().enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        line.push_str(cell.as_ref());
        if i + 1 < cells.len() {
            for _ in cell.as_ref().len()..widths[i] {
                line.push(' ');
            }
        }
    }
    writeln!(out, "{}", line.trim_end())
}

/// Table-cell form of one cohomology degree.
pub fn sdegree(lo: &Int, hi: &Int) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}..{hi}")
    }
}

pub fn sopt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;
    use ulrich_scrolls::int;

    #[test]
    fn big_integers_become_strings() {
        assert_eq!(jint(&int(7)), json!(7));
        assert_eq!(jint(&int(-(1i64 << 53))), json!(-(1i64 << 53)));
        let big = Int::from_str("9007199254740993").unwrap();
        assert_eq!(jint(&big), json!("9007199254740993"));
        let huge = Int::from_str("-123456789012345678901234567890").unwrap();
        assert_eq!(jint(&huge), json!("-123456789012345678901234567890"));
    }

    #[test]
    fn envelope_keys_are_sorted() {
        let report = Report {
            command: "demo",
            params: json!({"e": 0}),
            payload: json!({"z": 1, "a": 2}),
            table: Table::new(&["x"]),
        };
        let text = serde_json::to_string(&report.envelope()).unwrap();
        let cmd = text.find("\"command\"").unwrap();
        let ver = text.find("\"engine_version\"").unwrap();
        let par = text.find("\"params\"").unwrap();
        let pay = text.find("\"payload\"").unwrap();
        assert!(cmd < ver && ver < par && par < pay);
        let a = text.find("\"a\"").unwrap();
        let z = text.find("\"z\"").unwrap();
        assert!(a < z, "payload keys must be sorted");
    }

    #[test]
    fn table_output_is_aligned() {
        let mut table = Table::new(&["name", "value"]);
        table.push(vec!["n".to_string(), "15".to_string()]);
        table.push(vec!["longer".to_string(), "7".to_string()]);
        let report = Report {
            command: "demo",
            params: json!({}),
            payload: json!({}),
            table,
        };
        let mut buf = Vec::new();
        report.write(&mut buf, Format::Table).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("name    value"));
        assert!(text.contains("n       15"));
    }

    #[test]
    fn csv_quotes_when_needed() {
        let mut table = Table::new(&["a", "b"]);
        table.push(vec!["x,y".to_string(), "plain".to_string()]);
        let report = Report {
            command: "demo",
            params: json!({}),
            payload: json!({}),
            table,
        };
        let mut buf = Vec::new();
        report.write(&mut buf, Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "a,b\n\"x,y\",plain\n");
    }
}
