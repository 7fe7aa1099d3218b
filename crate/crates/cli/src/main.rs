//! `nbhd-lab`: batch driver for the neighborhood-space library.
//!
//! Every subcommand prints one JSON report (see `report.schema.json`).
//! Exit status: 0 when the report passes, 1 when a check fails, 2 on usage,
//! validation or I/O errors.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nbhd_core::continuum::{Rat, SecondFactor};
use nbhd_core::ProductMode;

const THREADS_ENV: &str = "NBHD_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "nbhd-lab",
    version,
    about = "Neighborhood spaces on finite carriers, and the R x Q quotient counterexample"
)]
struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact-rational check of every membership claim behind the failure of
    /// Phi = phi x id : R x Q -> R/Z x Q to be a quotient map.
    VerifyPaper {
        /// Base value q of the second coordinate (`p/q` literal).
        #[arg(long, default_value = "0")]
        q: Rat,
        /// Sweep the preimages (z, q) for |z| <= this bound.
        #[arg(long, default_value_t = 1000)]
        z_range: u64,
        /// Use the delta grid {1/k : 1 <= k <= N}.
        #[arg(long, default_value_t = 100)]
        delta_count: u32,
        /// Random neighborhoods U(eps) of the integer class per delta.
        #[arg(long, default_value_t = 100)]
        eps_trials: usize,
        /// Random points for the preimage identity.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Horizontal extent of the random points.
        #[arg(long, default_value = "100")]
        window: Rat,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Second factor: Q, or R (identical computation; all witnesses are rational).
        #[arg(long, default_value = "Q")]
        mode: SecondFactor,
    },
    /// Count (and list) the neighborhood stacks and structures on an n-point carrier.
    Enumerate {
        /// Carrier size, 1 to 5; structures are listed up to size 3.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        size: u8,
    },
    /// Exhaustively check that quotient structures are final lifts.
    CheckUniversal {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
        max_x: u8,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        max_y: u8,
    },
    /// Search small carriers for two quotient maps whose product is not quotient.
    SearchProductQuotient {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
        max_x: u8,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        max_y: u8,
        /// Product convention: cylinder (categorical product) or box.
        #[arg(long, default_value = "cylinder")]
        mode: ProductMode,
    },
    /// Test continuity of a map between two spaces given as JSON files.
    CheckContinuity {
        /// Domain structure: {"label": "[[a],[a,b]]", ...}.
        domain: PathBuf,
        /// Codomain structure.
        codomain: PathBuf,
        /// Map: {"domain label": "codomain label", ...}.
        map: PathBuf,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw.parse().map_err(|_| {
            anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got `{raw}`")
        })?;
        if n == 0 {
            anyhow::bail!("{THREADS_ENV} must be a positive integer");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version exit 0; everything else is a usage error (2).
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = configure_threads().and_then(|()| commands::run(&cli.command));
    let report = match outcome {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(anyhow::anyhow!("cannot write to stdout: {e}"))
            }
            _ => Ok(()),
        },
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
