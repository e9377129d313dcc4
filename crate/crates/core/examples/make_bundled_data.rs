//! Regenerates the files under `data/`.
//!
//!     cargo run --example make_bundled_data

use std::path::Path;

use wellgap::ingest::{write_csv_file, Dataset};
use wellgap::synthetic::{synthetic_well, Relation};

fn main() -> wellgap::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&dir).map_err(|e| wellgap::Error::Config(e.to_string()))?;

    let well = synthetic_well("SYN-01", 1000, Relation::Realistic, 2024)?;
    let path = dir.join("synthetic_well.csv");
    write_csv_file(&Dataset::from_wells(vec![well])?, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
