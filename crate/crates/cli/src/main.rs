use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use warpsol_cli::{exit_code, parse_assignment, parse_config, run, Outcome, RawConfig, RunConfig, EXIT_FAILED};

/// Verify, synthesize and classify soliton structures on warped products.
///
/// Settings come from a flat `key = value` file; flags override file keys.
#[derive(Debug, Parser)]
#[command(name = "warpsol", version)]
struct Args {
    /// verify, synthesize, classify-rb, sample or series (overrides `command`).
    command: Option<String>,
    /// Configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog family, or `custom` for synthesize.
    #[arg(long)]
    family: Option<String>,
    /// Output path prefix for `<prefix>.csv` and `<prefix>.json`.
    #[arg(long)]
    out: Option<String>,
    /// Residual tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Override any key, e.g. `--set n=4`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

fn merged_config(args: &Args) -> Result<RawConfig> {
    let mut raw = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text)?
        }
        None => RawConfig::new(),
    };
    for s in &args.sets {
        let (k, v) = parse_assignment(s)?;
        raw.insert(k, v);
    }
    let flags = [
        ("command", &args.command),
        ("family", &args.family),
        ("output", &args.out),
        ("tol", &args.tol),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            raw.insert(key.to_string(), v.clone());
        }
    }
    Ok(raw)
}

fn execute(args: &Args) -> Result<Outcome> {
    let raw = merged_config(args)?;
    let cfg = RunConfig::from_raw(&raw)?;
    run(&cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
