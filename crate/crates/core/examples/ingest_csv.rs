//! Parse a canonical CSV, fit the dataset-wide normalization and apply it.
//!
//!     cargo run --example ingest_csv [file.csv]

use std::path::PathBuf;

use wellgap::commands::dataset_manifest;
use wellgap::ingest::{apply_normalization, read_csv_file, NormalizeMode, ParseOptions};

fn main() -> wellgap::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_well.csv"));
    let (dataset, report) = read_csv_file(&path, &ParseOptions::default())?;
    println!("{} wells, {} records", dataset.len(), dataset.record_count());
    print!("{}", report.to_key_values());

    // coordinates only enter the manifest when they vary
    let manifest = dataset_manifest(&dataset)?;
    print!("{}", manifest.to_key_values());

    let normalized = apply_normalization(&dataset, &manifest, NormalizeMode::Strict)?;
    let first = normalized.dataset.wells()[0].records()[0];
    println!("first record normalized: {first:?}");
    Ok(())
}
