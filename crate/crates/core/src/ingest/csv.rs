use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{validate_row, Curve, Dataset, ParseOptions, ParseReport, RowVerdict};
use crate::error::{Error, Result};

const WELL_COLUMN: &str = "Well";

/// Parses the canonical CSV schema. Header names are matched
/// case-insensitively and in any order; extra columns (such as a leading row
/// index) are ignored.
pub fn parse_csv<R: Read>(source: R, options: &ParseOptions) -> Result<(Dataset, ParseReport)> {
    let mut reader = ::csv::ReaderBuilder::new()
        .trim(::csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let headers = reader.headers()?.clone();
    if headers.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyInput);
    }
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let well_col = find(WELL_COLUMN)?;
    let mut curve_cols = [0usize; 7];
    for (slot, curve) in curve_cols.iter_mut().zip(Curve::ALL) {
        *slot = find(curve.column())?;
    }

    let mut report = ParseReport::default();
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row?;
        let well = row.get(well_col).unwrap_or("");
        let values = curve_cols.map(|i| row.get(i).and_then(|s| s.parse::<f64>().ok()));
        let verdict = if well.is_empty() {
            RowVerdict::Invalid
        } else {
            validate_row(values, options.sentinel)
        };
        match verdict {
            RowVerdict::Accept(record) => {
                report.accepted += 1;
                rows.push((well.to_string(), record));
            }
            RowVerdict::Sentinel => {
                report.dropped += 1;
                report.dropped_sentinel += 1;
            }
            RowVerdict::Invalid => {
                report.dropped += 1;
                report.dropped_invalid += 1;
            }
        }
    }
    Ok((Dataset::from_rows(rows)?, report))
}

pub fn read_csv_file(path: &Path, options: &ParseOptions) -> Result<(Dataset, ParseReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_csv(file, options)
}

/// Writes the dataset in canonical form: wells by id, rows by depth, floats
/// in shortest round-trip notation.
pub fn write_csv<W: Write>(dataset: &Dataset, sink: W) -> Result<()> {
    let mut writer = ::csv::Writer::from_writer(sink);
    let mut header = vec![WELL_COLUMN];
    header.extend(Curve::ALL.iter().map(|c| c.column()));
    writer.write_record(&header)?;
    for well in dataset.wells() {
        for record in well.records() {
            let mut row = vec![well.well_id().to_string()];
            row.extend(Curve::ALL.iter().map(|c| c.value(record).to_string()));
            writer.write_record(&row)?;
        }
    }
    writer.flush().map_err(|e| Error::io("<csv sink>", e))?;
    Ok(())
}

pub fn write_csv_file(dataset: &Dataset, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(dataset, file)
}
