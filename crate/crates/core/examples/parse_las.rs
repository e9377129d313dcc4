//! Read a LAS 2.0 file into a well and write it back as canonical CSV.
//!
//!     cargo run --example parse_las [file.las]

use std::path::PathBuf;

use wellgap::ingest::{read_las_file, write_csv, Dataset, DEFAULT_SENTINEL};

fn main() -> wellgap::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/f02_02.las"));
    let (well, report) = read_las_file(&path, DEFAULT_SENTINEL)?;
    eprintln!("{}: {} rows kept, {} dropped", well.well_id(), report.accepted, report.dropped);
    write_csv(&Dataset::from_wells(vec![well])?, std::io::stdout())
}
