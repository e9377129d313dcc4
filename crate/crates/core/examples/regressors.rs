//! Fit all five backends on the same noisy data and compare training error.
//!
//!     cargo run --release --example regressors

use nalgebra::DMatrix;
use wellgap::eval::mae;
use wellgap::regress::{load_model, save_model, ModelConfig, ModelKind, Predictor};
use wellgap::synthetic::{synthetic_well, Relation};

fn main() -> wellgap::Result<()> {
    let well = synthetic_well("R", 400, Relation::NoisyLinear { sigma: 0.01 }, 3)?;
    let r = well.records();
    let x = DMatrix::from_fn(r.len(), 3, |i, j| {
        // crude scaling to [0, 1]
        [(r[i].rhob - 1.9), (r[i].dt - 50.0) / 100.0, (r[i].gr - 20.0) / 130.0][j]
    });
    let y: Vec<f64> = r.iter().map(|r| r.nphi).collect();

    for kind in ModelKind::ALL {
        let config = ModelConfig::default_for(kind);
        let fitted = config.fit(&x, &y, 42)?;
        let pred = fitted.predict(&x)?;
        println!("{:<7} train MAE {:.5}", kind.name(), mae(&pred, &y)?);

        let reloaded = load_model(&save_model(&fitted)?)?;
        assert_eq!(reloaded.predict(&x)?, pred);
    }
    Ok(())
}
