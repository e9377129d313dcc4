//! Fill the real gaps of a well with a model trained on the rest of it.
//!
//!     cargo run --example fill_gaps

use wellgap::commands::fill_well;
use wellgap::config::RunConfig;
use wellgap::ingest::Dataset;
use wellgap::regress::ModelKind;
use wellgap::synthetic::{remove_ranges, synthetic_well, Relation};

fn main() -> wellgap::Result<()> {
    let full = synthetic_well("F-1", 600, Relation::Realistic, 9)?;
    let (holed, _) = remove_ranges(&full, &[(120, 126), (400, 440)])?;
    let dataset = Dataset::from_wells(vec![holed.clone()])?;

    // every curve is missing inside a real gap, so features there are
    // interpolated and the error grows with gap length
    let truth = full.records();
    for model in [ModelKind::Ols, ModelKind::Rf] {
        let mut config = RunConfig { fill_model: model, ..RunConfig::default() };
        config.set("model.rf.n_trees", "30")?;
        let out = fill_well(&dataset, &holed, &config)?;
        let err: f64 = out
            .points
            .iter()
            .map(|p| {
                let t = truth.iter().find(|r| (r.depth - p.depth).abs() < 1e-6).map_or(f64::NAN, |r| r.nphi);
                (p.value - t).abs()
            })
            .sum();
        println!(
            "{model}: {} gaps, grid step {:?}, {} points, MAE against the removed rows {:.4}",
            out.gaps.len(),
            out.grid_step,
            out.points.len(),
            err / out.points.len() as f64
        );
    }
    Ok(())
}
