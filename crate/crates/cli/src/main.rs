//! Command-line interface over the exact Ulrich-bundle engine.
//!
//! Every subcommand prints one deterministic report (aligned table, JSON
//! envelope, or RFC-4180 CSV) and terminates with a contract exit code:
//!
//! * 0 — success
//! * 1 — `verify` found failing checks
//! * 2 — invalid or out-of-range parameters
//! * 3 — unparsable expression / range / grid syntax
//! * 4 — the request falls outside the cohomology model
//! * 5 — solver and brute-force oracle disagree
//!
//! `ULRICH_SCROLLS_THREADS` caps the worker pool used by `scan` and
//! `verify`; output bytes do not depend on the thread count.

mod commands;
mod exprlang;
mod render;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};
use render::Format;
use ulrich_scrolls::verify::Fault;

#[derive(Parser)]
#[command(
    name = "ulrich-scrolls",
    version,
    about = "Exact invariants, cohomology, and Ulrich-bundle reports for \
             threefold scrolls over Hirzebruch surfaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum FaultArg {
    /// Perturb one golden extension dimension (verify must exit 1).
    GoldenH1,
    /// Perturb the brute-force oracle (classify must exit 5).
    OracleMiss,
}

impl From<FaultArg> for Fault {
    fn from(f: FaultArg) -> Fault {
        match f {
            FaultArg::GoldenH1 => Fault::GoldenH1,
            FaultArg::OracleMiss => Fault::OracleMiss,
        }
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Hirzebruch-surface index (e >= 0).
    #[arg(long, allow_negative_numbers = true)]
    e: i64,
    /// Fibre-degree parameter (b >= 3e + 2).
    #[arg(long, allow_negative_numbers = true)]
    b: i64,
    /// Second Chern number of the defining bundle (b - e < k < 2b - 4e).
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Ambient dimension, degree, and sectional genus of the embedded scroll.
    Invariants(ParamArgs),
    /// Cohomology of a bundle expression (see `--help` for the grammar).
    #[command(
        after_help = "EXPRESSIONS:\n    L(a,b)      line bundle on the base surface\n    E(a,b)      the defining rank-2 bundle, twisted\n    S2E(a,b)    its symmetric square, twisted\n    IZ(a,b;l)   ideal sheaf of l general points, twisted\n    ext(s,q)    an extension of q by s\n    xi^a*EXPR   tensor by the a-th power of the tautological class"
    )]
    Coh {
        #[command(flatten)]
        params: ParamArgs,
        /// Bundle expression, e.g. "L(3,-4)" or "xi^-2*E(0,1)".
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Ulrich line bundles: Euler-condition solver vs. brute-force scan.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        /// Deliberately corrupt one side (for testing the failure paths).
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Ext^1 table between the classified Ulrich line bundles.
    ExtTable(ParamArgs),
    /// Rank-r Ulrich family: Chern data, moduli dimension, strictness bounds.
    Moduli {
        #[command(flatten)]
        params: ParamArgs,
        /// Rank of the family member.
        #[arg(long)]
        rank: u64,
    },
    /// Ulrich line bundles on the base surface for the hyperplane class (3, b).
    SurfaceUlrich(ParamArgs),
    /// Sweep parameter ranges and report per-triple summaries.
    Scan {
        /// Inclusive range for e: N or LO..HI.
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        /// Inclusive range for b: N or LO..HI.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Inclusive range for k: N or LO..HI (default: every admissible k).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        /// Also report moduli dimensions for ranks 2..=RANK_MAX.
        #[arg(long)]
        rank_max: Option<u64>,
    },
    /// Replay the full verification suite over a parameter grid.
    Verify {
        /// Grid overrides, e.g. "e=0..0,b=2..6" or "rank=8".
        #[arg(long)]
        grid: Option<String>,
        /// Deliberately corrupt one check (the run must then fail).
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Invariants(p) => commands::invariants(p.e, p.b, p.k),
        Command::Coh { params: p, expr } => commands::coh(p.e, p.b, p.k, &expr),
        Command::Classify {
            params: p,
            inject_fault,
        } => commands::classify(p.e, p.b, p.k, inject_fault.map(Fault::from)),
        Command::ExtTable(p) => commands::ext_table(p.e, p.b, p.k),
        Command::Moduli { params: p, rank } => commands::moduli_cmd(p.e, p.b, p.k, rank),
        Command::SurfaceUlrich(p) => commands::surface_ulrich(p.e, p.b, p.k),
        Command::Scan { e, b, k, rank_max } => commands::scan(&e, &b, k.as_deref(), rank_max),
        Command::Verify { grid, inject_fault } => {
            commands::verify_cmd(grid.as_deref(), inject_fault.map(Fault::from))
        }
    }
}

/// Applies the `ULRICH_SCROLLS_THREADS` cap to the global worker pool.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("ULRICH_SCROLLS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().ok().filter(|n| *n >= 1).ok_or_else(|| {
        CliError::Params(format!(
            "ULRICH_SCROLLS_THREADS must be a positive integer (got '{raw}')"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Params(format!("could not size the worker pool: {e}")))
}

fn fail(e: &CliError) -> ! {
    eprintln!("error: {e}");
    std::process::exit(e.code());
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        fail(&e);
    }
    match run(cli.command) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = outcome.report.write(&mut stdout, cli.format.into()) {
                eprintln!("error: {e}");
                std::process::exit(1);
            }
            std::process::exit(outcome.exit);
        }
        Err(e) => fail(&e),
    }
}
