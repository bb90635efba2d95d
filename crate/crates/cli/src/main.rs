use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hiding::{RngSeed, SeeSawConfig};
use hiding_cli::commands::{
    cmd_darwinism, cmd_ratio, cmd_scaling, cmd_xor, to_csv, to_json, DarwinismConfig, Generator, RatioSource,
    ScalingConfig, XorSource, DARWINISM_HEADER, SCALING_HEADER, XOR_HEADER,
};
use hiding_cli::verify::{run_verify, VerifyOptions};
use hiding_cli::{CliError, Result};

#[derive(Parser)]
#[command(name = "hiding", version, about = "Trace norm vs local-measurement norm experiments")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Root seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// See-saw starts per operator (the identity start is one of them).
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    /// Maximum see-saw iterations per start.
    #[arg(long, global = true, default_value_t = 500)]
    max_iters: usize,
    /// Relative improvement below which a see-saw run stops.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Hiding ratio of one operator, from a file or a generator.
    Ratio {
        /// Operator file (JSON with n_a, n_b, re, im).
        #[arg(long, conflicts_with = "generator")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        generator: Option<Generator>,
        /// Local dimension for square systems (sets both n_a and n_b).
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n_a: Option<usize>,
        #[arg(long)]
        n_b: Option<usize>,
    },
    /// Ratio sweep over dimensions and random instances.
    Scaling {
        #[arg(long, value_enum, default_value = "gue")]
        generator: Generator,
        #[arg(long, default_value_t = 2)]
        min_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
        /// Instances per dimension pair.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Sweep all (n_a, n_b) pairs instead of square systems.
        #[arg(long)]
        rectangular: bool,
    },
    /// Joint vs product biases of quantum XOR games.
    Xor {
        /// Game file (JSON with n_a, n_b, states, signs, probs).
        #[arg(long, conflicts_with_all = ["werner", "random"])]
        game: Option<PathBuf>,
        /// Two-question game on the Werner hiding pair of local dimension d.
        #[arg(long, conflicts_with = "random")]
        werner: Option<usize>,
        /// Batch of random games.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 4)]
        questions: usize,
        #[arg(long, default_value_t = 3)]
        n_a: usize,
        #[arg(long, default_value_t = 3)]
        n_b: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Darwinism coefficient table with the diamond-norm bound column.
    Darwinism {
        #[arg(long, default_value_t = 2)]
        da_min: usize,
        #[arg(long, default_value_t = 10)]
        da_max: usize,
        #[arg(long, default_value_t = 1)]
        dr_min: usize,
        #[arg(long, default_value_t = 10)]
        dr_max: usize,
        /// |R|
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// |Q|
        #[arg(long, default_value_t = 100)]
        q: usize,
    },
    /// Run the invariant batteries; exits non-zero if any fails.
    Verify,
}

fn emit(shared: &Shared, text: &str) -> Result<()> {
    match &shared.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let shared = &cli.shared;
    let seesaw = SeeSawConfig {
        restarts: shared.restarts,
        max_iters: shared.max_iters,
        rel_tol: shared.tol,
        seed: RngSeed(shared.seed),
        ..SeeSawConfig::default()
    };
    match cli.command {
        Command::Ratio { input, generator, d, n_a, n_b } => {
            let source = match (input, generator) {
                (Some(path), None) => RatioSource::File(path),
                (None, Some(generator)) => {
                    let (n_a, n_b) = match (d, n_a, n_b) {
                        (Some(d), None, None) => (d, d),
                        (None, Some(a), Some(b)) => (a, b),
                        _ => return Err(CliError::Validation("give either --d or both --n-a and --n-b".into())),
                    };
                    RatioSource::Generated { generator, n_a, n_b }
                }
                _ => return Err(CliError::Validation("give exactly one of --input or --generator".into())),
            };
            let out = cmd_ratio(&source, &seesaw)?;
            if let Some(w) = &out.warning {
                eprintln!("warning: {w}");
            }
            let text = match shared.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&out)?,
                Format::Csv => {
                    let mut w = csv_from_struct(&out)?;
                    w.push('\n');
                    w
                }
            };
            emit(shared, &text)
        }
        Command::Scaling { generator, min_dim, max_dim, samples, rectangular } => {
            let rows = cmd_scaling(&ScalingConfig { generator, min_dim, max_dim, rectangular, samples, seesaw })?;
            let text = match shared.format.unwrap_or(Format::Csv) {
                Format::Csv => to_csv(&SCALING_HEADER, &rows)?,
                Format::Json => to_json(&rows)?,
            };
            emit(shared, &text)
        }
        Command::Xor { game, werner, random, questions, n_a, n_b, samples } => {
            let source = match (game, werner, random) {
                (Some(path), None, false) => XorSource::File(path),
                (None, Some(d), false) => XorSource::Werner(d),
                (None, None, true) => XorSource::Random { questions, n_a, n_b, samples },
                _ => return Err(CliError::Validation("give exactly one of --game, --werner or --random".into())),
            };
            let rows = cmd_xor(&source, &seesaw)?;
            let text = match shared.format.unwrap_or(Format::Json) {
                Format::Csv => to_csv(&XOR_HEADER, &rows)?,
                Format::Json if rows.len() == 1 && !matches!(source, XorSource::Random { .. }) => to_json(&rows[0])?,
                Format::Json => to_json(&rows)?,
            };
            emit(shared, &text)
        }
        Command::Darwinism { da_min, da_max, dr_min, dr_max, r, q } => {
            let rows = cmd_darwinism(&DarwinismConfig {
                d_a_min: da_min,
                d_a_max: da_max,
                d_r_min: dr_min,
                d_r_max: dr_max,
                r_size: r,
                q_size: q,
            })?;
            let text = match shared.format.unwrap_or(Format::Csv) {
                Format::Csv => to_csv(&DARWINISM_HEADER, &rows)?,
                Format::Json => to_json(&rows)?,
            };
            emit(shared, &text)
        }
        Command::Verify => {
            let opts =
                VerifyOptions { seesaw: seesaw.with_restarts(shared.restarts.max(50)), ..VerifyOptions::default() };
            let summary = run_verify(RngSeed(shared.seed), &opts)?;
            emit(shared, &to_json(&summary)?)?;
            if summary.passed {
                Ok(())
            } else {
                let failed: Vec<_> = summary.suites.iter().filter(|s| !s.passed).map(|s| s.name).collect();
                Err(CliError::SuiteFailure(failed.join(", ")))
            }
        }
    }
}

/// Single-record CSV of a flat struct, header taken from its field names.
fn csv_from_struct<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.serialize(value)?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?.trim_end().to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
