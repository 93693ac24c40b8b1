//! affusion: fusion rings of affine algebras from the command line.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use affine_fusion::characters::S_TOL;
use affine_fusion::search::DEFAULT_SEARCH_BOUND;
use affine_fusion::FusionError;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{AutosMode, Options};
use report::Report;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "affusion", version, about = "Affine fusion rings: S-matrices, fusion rules, symmetries, isomorphisms")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Where fusion tables are cached (no caching when unset).
    #[arg(long, env = "AFFUSION_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Tolerance for S-matrix unitarity and symmetry.
    #[arg(long, default_value_t = S_TOL, global = true)]
    tol: f64,
    /// Largest |P+| the bijection search will attempt.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND, global = true)]
    search_bound: usize,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List P+ with q-dimensions and orbit tags.
    Pplus { context: String },
    /// The Kac-Peterson matrix with residuals.
    Smatrix { context: String },
    /// Fusion product of two weights (labels such as "L1+L5" or "1 0 0 0 1 0").
    Fusion { context: String, lambda: String, mu: String },
    /// q-dimensions of one weight or of all of P+.
    Qdim { context: String, weight: Option<String> },
    /// Fusion-symmetries: as constructed, by brute force, or both compared.
    Autos {
        context: String,
        #[arg(long, value_enum, default_value = "compare")]
        mode: AutosMode,
    },
    /// Decide whether two fusion rings are isomorphic.
    Iso { a: String, b: String },
    /// Run the full acceptance suite.
    Verify {
        /// Do not print per-criterion progress on stderr.
        #[arg(long)]
        quiet: bool,
    },
}

fn is_usage(e: &FusionError) -> bool {
    matches!(
        e,
        FusionError::Parse(_)
            | FusionError::InvalidRank { .. }
            | FusionError::InvalidLevel(_)
            | FusionError::DimensionMismatch { .. }
            | FusionError::NotInPplus { .. }
            | FusionError::WrongFamily(_)
            | FusionError::SearchBound { .. }
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    let opts = Options { cache_dir: cli.cache_dir.clone(), tol: cli.tol, search_bound: cli.search_bound };
    let mut rep = Report::new(std::env::args().skip(1).collect());
    let start = Instant::now();
    let result = match &cli.cmd {
        Cmd::Pplus { context } => commands::pplus(&mut rep, &opts, context),
        Cmd::Smatrix { context } => commands::smatrix(&mut rep, &opts, context),
        Cmd::Fusion { context, lambda, mu } => commands::fusion(&mut rep, &opts, context, lambda, mu),
        Cmd::Qdim { context, weight } => commands::qdim(&mut rep, &opts, context, weight.as_deref()),
        Cmd::Autos { context, mode } => commands::autos(&mut rep, &opts, context, *mode),
        Cmd::Iso { a, b } => commands::iso(&mut rep, &opts, a, b),
        Cmd::Verify { quiet } => commands::verify(&mut rep, &opts, *quiet),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        return ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_INTERNAL });
    }
    let rep = rep.finish(start.elapsed().as_secs_f64());
    let text = match cli.format {
        Format::Json => rep.to_json() + "\n",
        Format::Csv => rep.to_csv(),
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if rep.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}
