//! Seeded synthetic gaps on a complete well and the train/test split of one.
//!
//!     cargo run --example synthetic_trials

use wellgap::synth::{generate_trials, make_split, write_trials_csv, BenchPlan};
use wellgap::synthetic::{synthetic_well, Relation};

fn main() -> wellgap::Result<()> {
    let well = synthetic_well("DEMO", 500, Relation::Realistic, 1)?;
    let plan = BenchPlan {
        gap_sizes: vec![16, 66],
        trials_per_size: 3,
        seed: 7,
        ..BenchPlan::default()
    };
    let trials = generate_trials(&well, &plan)?;
    write_trials_csv(&trials, std::io::stdout())?;

    let split = make_split(&well, &trials[0], &plan)?;
    println!(
        "trial 0: {} training rows, {} masked rows, features {:?}, dropped {:?}",
        split.train.indices.len(),
        split.test.indices.len(),
        split.features,
        split.dropped
    );
    Ok(())
}
