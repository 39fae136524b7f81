//! `hsp`: batch front end for the single-query HSP laboratory.

mod commands;
mod output;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Options, Suite};
use scenario::Format;

#[derive(Parser)]
#[command(name = "hsp", version, about = "Single-query hidden subgroup problem laboratory")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Sample this many oracle functions instead of enumerating all of them.
    #[arg(long, global = true)]
    sample: Option<usize>,
    /// Override the tolerance of every check.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario file.
    Run { scenario: PathBuf },
    /// Deutsch's problem with the standard, character and constant slates.
    Deutsch,
    /// Conjugate-family optimum: formula against the brute-force PGM.
    Conjugate {
        #[arg(long)]
        group: String,
        /// Generators of H, as indices or cycles.
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        d: usize,
    },
    /// Conjugate-family optimum of the character and standard queries over a range of D.
    SweepD {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        d_min: usize,
        #[arg(long)]
        d_max: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    if let Some(t) = cli.tolerance {
        if t.is_nan() || t < 0.0 {
            anyhow::bail!("--tolerance must be a nonnegative number, got {t}");
        }
    }
    let mut format = cli.format;
    let mut seed = cli.seed;
    let output = {
        let opts = |seed: Option<u64>| Options {
            seed: seed.unwrap_or(0),
            sample: cli.sample,
            tolerance: cli.tolerance,
        };
        match &cli.command {
            Command::Run { scenario } => {
                let sc = scenario::load(scenario)?;
                format = format.or(sc.format);
                seed = seed.or(sc.seed);
                commands::run(&sc, &opts(seed))?
            }
            Command::Deutsch => commands::deutsch(&opts(seed))?,
            Command::Conjugate { group, subgroup, d } => commands::conjugate(group, subgroup, *d, &opts(seed))?,
            Command::SweepD {
                group,
                subgroup,
                d_min,
                d_max,
            } => commands::sweep_d(group, subgroup, *d_min, *d_max)?,
            Command::Verify { suite } => commands::verify(*suite, &opts(seed))?,
        }
    };
    output::emit(&output, format.unwrap_or(Format::Csv), cli.out.as_deref())?;
    Ok(output.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
