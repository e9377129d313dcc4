use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wellgap::commands::{cmd_bench, cmd_fill, cmd_gaps, cmd_ingest, exit_code, EXIT_CELL_FAILURES};
use wellgap::config::{parse_models, parse_sizes, RunConfig};
use wellgap::ingest::{Curve, NormalizeMode};
use wellgap::{Error, Result};

/// Gap statistics and gap-filling benchmarks for composite well logs.
#[derive(Parser)]
#[command(name = "wellgap", version)]
struct Cli {
    /// key=value config file; command-line flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reject values outside the normalization range (default)
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Clamp values outside the normalization range
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// CSV or LAS files
    inputs: Vec<PathBuf>,
    /// Null marker for the inputs
    #[arg(long, allow_hyphen_values = true)]
    sentinel: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, validate and normalize inputs into a canonical dataset
    Ingest {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Detect gaps, summarize them and write histogram data
    Gaps {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Benchmark models on seeded synthetic gaps in one complete well
    Bench {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated: ols,brr,ransac,rf,ann
        #[arg(long)]
        models: Option<String>,
        /// Gap sizes in points, comma-separated
        #[arg(long)]
        sizes: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        well: Option<String>,
        /// Feature curves, comma-separated
        #[arg(long)]
        features: Option<String>,
    },
    /// Predict the target across the real gaps of one well
    Fill {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        well: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn set_opt<T: ToString>(config: &mut RunConfig, key: &str, value: Option<T>) -> Result<()> {
    match value {
        Some(v) => config.set(key, &v.to_string()),
        None => Ok(()),
    }
}

fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.apply_text(&text)?;
    }
    set_opt(&mut config, "seed", cli.seed)?;
    if let Some(out) = &cli.out {
        config.out_dir = out.clone();
    }
    if cli.lenient {
        config.mode = NormalizeMode::Lenient;
    } else if cli.strict {
        config.mode = NormalizeMode::Strict;
    }
    let inputs = match &cli.command {
        Command::Ingest { inputs } => inputs,
        Command::Gaps { inputs, threshold, bins } => {
            set_opt(&mut config, "threshold", *threshold)?;
            set_opt(&mut config, "bins", *bins)?;
            inputs
        }
        Command::Bench { inputs, models, sizes, trials, well, features } => {
            if let Some(m) = models {
                config.models = parse_models(m)?;
            }
            if let Some(s) = sizes {
                config.plan.gap_sizes = parse_sizes(s)?;
            }
            set_opt(&mut config, "trials", *trials)?;
            set_opt(&mut config, "well", well.as_ref())?;
            if let Some(f) = features {
                config.plan.features = f.split(',').map(|c| c.trim().parse::<Curve>()).collect::<Result<_>>()?;
            }
            inputs
        }
        Command::Fill { inputs, well, model, threshold } => {
            set_opt(&mut config, "well", well.as_ref())?;
            set_opt(&mut config, "fill_model", model.as_ref())?;
            set_opt(&mut config, "threshold", *threshold)?;
            inputs
        }
    };
    if !inputs.inputs.is_empty() {
        config.inputs = inputs.inputs.clone();
    }
    set_opt(&mut config, "sentinel", inputs.sentinel)?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<i32> {
    let config = build_config(cli)?;
    let out = config.out_dir.display();
    match &cli.command {
        Command::Ingest { .. } => {
            let o = cmd_ingest(&config)?;
            println!(
                "ingested {} wells, {} records ({} rows dropped) into {out}",
                o.dataset.len(),
                o.report.accepted,
                o.report.dropped
            );
            if o.clamped > 0 {
                eprintln!("warning: {} values clamped into [0, 1]", o.clamped);
            }
        }
        Command::Gaps { .. } => {
            let o = cmd_gaps(&config)?;
            match &o.stats_block {
                Some(block) => print!("{block}"),
                None => println!("count=0 (no gaps, no histogram written)"),
            }
        }
        Command::Bench { .. } => {
            let run = cmd_bench(&config)?;
            println!(
                "well {}: {} results, {} traces written to {out}",
                run.well_id,
                run.records.len(),
                run.traces.len()
            );
            if !run.dropped_features.is_empty() {
                let names: Vec<_> = run.dropped_features.iter().map(|c| c.key()).collect();
                eprintln!("notice: constant features dropped: {}", names.join(","));
            }
            if run.failures() > 0 {
                eprintln!("{} benchmark cells failed; see results.csv", run.failures());
                return Ok(EXIT_CELL_FAILURES);
            }
        }
        Command::Fill { .. } => {
            let o = cmd_fill(&config)?;
            if o.gaps.is_empty() {
                println!("well {} has no gaps; nothing to fill", o.well_id);
            } else {
                println!("filled {} points across {} gaps of well {} into {out}", o.points.len(), o.gaps.len(), o.well_id);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
