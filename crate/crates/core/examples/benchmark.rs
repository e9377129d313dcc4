//! The full comparison: 3 gap sizes, 30 trials each, 5 models.
//!
//!     cargo run --release --example benchmark [well.csv]

use std::path::PathBuf;

use wellgap::eval::{run_benchmark, summarize, write_summary_csv};
use wellgap::ingest::{read_csv_file, NormalizeMode, ParseOptions};
use wellgap::regress::{ModelConfig, ModelKind};
use wellgap::synth::BenchPlan;

fn main() -> wellgap::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_well.csv"));
    let (dataset, _) = read_csv_file(&path, &ParseOptions::default())?;
    let models: Vec<ModelConfig> = ModelKind::ALL.into_iter().map(ModelConfig::default_for).collect();
    let plan = BenchPlan { seed: 2024, ..BenchPlan::default() };

    let run = run_benchmark(&dataset, &plan, &models, plan.seed, NormalizeMode::Strict)?;
    eprintln!(
        "well {}: {} cells, {} failed, {} traces",
        run.well_id,
        run.records.len(),
        run.failures(),
        run.traces.len()
    );
    write_summary_csv(&summarize(&run.records)?, &[], std::io::stdout())
}
