//! `proreg`: exact Cech / local cohomology tables over graded rings and
//! certification of (weakly) proregular sequences.
//!
//! Exit codes: 0 = pass/complete, 2 = inconclusive (a bounded search or
//! stabilization window was exhausted), 1 = error or refuted check.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Overrides;

#[derive(Parser)]
#[command(
    name = "proreg",
    version,
    about = "Cech and local cohomology via Koszul/Taylor colimits, with proregularity certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem description (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Degree window `lo..hi` (inclusive), overriding the config.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    degrees: Option<(i64, i64)>,
    /// Tower height override.
    #[arg(long)]
    nmax: Option<usize>,
    /// Witness search bound override.
    #[arg(long)]
    mmax: Option<usize>,
    /// Stabilization window override.
    #[arg(long)]
    window: Option<usize>,
    /// Degree bound for zero-map certification.
    #[arg(long = "degree-bound", allow_hyphen_values = true)]
    degree_bound: Option<i64>,
    /// Field modulus override.
    #[arg(long)]
    prime: Option<u64>,
    /// Write the machine-readable JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format.
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Worker threads for degreewise computations.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions of one Koszul homology spot at a fixed power.
    #[command(name = "koszul-homology")]
    KoszulHomology {
        #[command(flatten)]
        common: CommonArgs,
        /// Power of the sequence.
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Homological spot.
        #[arg(long, default_value_t = 1)]
        spot: usize,
    },
    /// Cech cohomology tables (Koszul-tower colimit).
    Cech {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to one spot (default: all).
        #[arg(long)]
        spot: Option<usize>,
    },
    /// Local cohomology tables (Taylor-resolution Ext colimit).
    Localcoh {
        #[command(flatten)]
        common: CommonArgs,
        /// Restrict to one spot (default: all).
        #[arg(long)]
        spot: Option<usize>,
    },
    /// Torsion-submodule dimension table.
    Gamma {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Weak-proregularity witness search on Koszul homology towers.
    #[command(name = "check-wpr")]
    CheckWpr {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Proregularity witness search via colon ideals.
    #[command(name = "check-proregular")]
    CheckProregular {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Long-exact-sequence verification for the tensored SES.
    #[command(name = "les-check")]
    LesCheck {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Weak proregularity plus agreement of both cohomology pipelines.
    Crosscheck {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    Ok((lo, hi))
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            prime: self.prime,
            degrees: self.degrees,
            n_max: self.nmax,
            m_max: self.mmax,
            window: self.window,
            degree_bound: self.degree_bound,
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    let common = match &cli.command {
        Command::KoszulHomology { common, .. }
        | Command::Cech { common, .. }
        | Command::Localcoh { common, .. }
        | Command::Gamma { common }
        | Command::CheckWpr { common }
        | Command::CheckProregular { common }
        | Command::LesCheck { common }
        | Command::Crosscheck { common } => common,
    };
    if common.threads > 0 {
        // ignore the error if a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global();
    }
    let text = std::fs::read_to_string(&common.config)
        .with_context(|| format!("reading {}", common.config.display()))?;
    let cfg = config::parse_config(&text, &common.overrides())?;
    let output = match &cli.command {
        Command::KoszulHomology { n, spot, .. } => commands::koszul_homology(&cfg, *spot, *n)?,
        Command::Cech { spot, .. } => commands::cech(&cfg, *spot)?,
        Command::Localcoh { spot, .. } => commands::localcoh(&cfg, *spot)?,
        Command::Gamma { .. } => commands::gamma(&cfg)?,
        Command::CheckWpr { .. } => commands::check_wpr(&cfg)?,
        Command::CheckProregular { .. } => commands::check_proregular(&cfg)?,
        Command::LesCheck { .. } => commands::les_check(&cfg)?,
        Command::Crosscheck { .. } => commands::crosscheck(&cfg)?,
    };
    commands::emit(
        &output,
        common.out.as_deref(),
        matches!(common.format, Format::Json),
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
