//! Well-log ingestion: record types, CSV and LAS readers, and min/max
//! normalization.
//!
//! The canonical interchange format is a flat CSV with one row per depth
//! sample (`Well, Depth, RHOB, DT, GR, NPHI, Latitude, Longitude`). LAS files
//! are an import path that produces the same [`WellLog`] values.

mod csv;
mod las;
mod normalize;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::csv::{parse_csv, read_csv_file, write_csv, write_csv_file};
pub use self::las::{parse_las, read_las_file};
pub use self::normalize::{
    apply_normalization, fit_normalization, fit_normalization_for, NormalizationManifest,
    NormalizeMode, Normalized, ValueRange, NORMALIZED_CURVES,
};

/// Conventional LAS null value, used as the default sentinel for both readers.
pub const DEFAULT_SENTINEL: f64 = -999.25;

/// One column of a composite log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Curve {
    Depth,
    Rhob,
    Dt,
    Gr,
    Nphi,
    Latitude,
    Longitude,
}

impl Curve {
    pub const ALL: [Curve; 7] = [
        Curve::Depth,
        Curve::Rhob,
        Curve::Dt,
        Curve::Gr,
        Curve::Nphi,
        Curve::Latitude,
        Curve::Longitude,
    ];

    /// Lowercase identifier used in config files and manifests.
    pub fn key(self) -> &'static str {
        match self {
            Curve::Depth => "depth",
            Curve::Rhob => "rhob",
            Curve::Dt => "dt",
            Curve::Gr => "gr",
            Curve::Nphi => "nphi",
            Curve::Latitude => "latitude",
            Curve::Longitude => "longitude",
        }
    }

    /// Column header used in the canonical CSV.
    pub fn column(self) -> &'static str {
        match self {
            Curve::Depth => "Depth",
            Curve::Rhob => "RHOB",
            Curve::Dt => "DT",
            Curve::Gr => "GR",
            Curve::Nphi => "NPHI",
            Curve::Latitude => "Latitude",
            Curve::Longitude => "Longitude",
        }
    }

    pub fn value(self, record: &LogRecord) -> f64 {
        match self {
            Curve::Depth => record.depth,
            Curve::Rhob => record.rhob,
            Curve::Dt => record.dt,
            Curve::Gr => record.gr,
            Curve::Nphi => record.nphi,
            Curve::Latitude => record.latitude,
            Curve::Longitude => record.longitude,
        }
    }

    pub(crate) fn value_mut(self, record: &mut LogRecord) -> &mut f64 {
        match self {
            Curve::Depth => &mut record.depth,
            Curve::Rhob => &mut record.rhob,
            Curve::Dt => &mut record.dt,
            Curve::Gr => &mut record.gr,
            Curve::Nphi => &mut record.nphi,
            Curve::Latitude => &mut record.latitude,
            Curve::Longitude => &mut record.longitude,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Curve::ALL
            .into_iter()
            .find(|c| c.key() == lower)
            .ok_or_else(|| Error::Parameter(format!("unknown curve `{s}`")))
    }
}

/// A complete sensor reading at one depth. The well id lives on the owning
/// [`WellLog`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub depth: f64,
    pub rhob: f64,
    pub dt: f64,
    pub gr: f64,
    pub nphi: f64,
    pub latitude: f64,
    pub longitude: f64,
}

/// Depth-ordered records for a single well.
///
/// `raw_depths` keeps the physical depths even after the records have been
/// normalized, so gap detection always runs in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct WellLog {
    well_id: String,
    records: Vec<LogRecord>,
    raw_depths: Vec<f64>,
}

impl WellLog {
    /// Builds a well from raw (unnormalized) records in any order. Records are
    /// sorted by depth; a repeated depth is an error.
    pub fn new(well_id: impl Into<String>, mut records: Vec<LogRecord>) -> Result<Self> {
        let well_id = well_id.into();
        if records.is_empty() {
            return Err(Error::EmptyInput);
        }
        records.sort_by(|a, b| a.depth.total_cmp(&b.depth));
        for pair in records.windows(2) {
            if pair[0].depth == pair[1].depth {
                return Err(Error::DuplicateRecord {
                    well: well_id,
                    depth: pair[0].depth,
                });
            }
        }
        let raw_depths = records.iter().map(|r| r.depth).collect();
        Ok(WellLog {
            well_id,
            records,
            raw_depths,
        })
    }

    /// Replaces the records while keeping id and raw depths; used by
    /// normalization, which never reorders rows.
    pub(crate) fn with_records(&self, records: Vec<LogRecord>) -> Self {
        debug_assert_eq!(records.len(), self.raw_depths.len());
        WellLog {
            well_id: self.well_id.clone(),
            records,
            raw_depths: self.raw_depths.clone(),
        }
    }

    pub fn well_id(&self) -> &str {
        &self.well_id
    }

    pub fn records(&self) -> &[LogRecord] {
        &self.records
    }

    pub fn raw_depths(&self) -> &[f64] {
        &self.raw_depths
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Values of one curve, in depth order.
    pub fn curve(&self, curve: Curve) -> Vec<f64> {
        self.records.iter().map(|r| curve.value(r)).collect()
    }
}

/// A collection of wells keyed by id. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    wells: Vec<WellLog>,
}

impl Dataset {
    /// Wells are stored sorted by id; duplicate ids are rejected.
    pub fn from_wells(mut wells: Vec<WellLog>) -> Result<Self> {
        wells.sort_by(|a, b| a.well_id.cmp(&b.well_id));
        for pair in wells.windows(2) {
            if pair[0].well_id == pair[1].well_id {
                return Err(Error::Parameter(format!(
                    "well `{}` appears twice",
                    pair[0].well_id
                )));
            }
        }
        Ok(Dataset { wells })
    }

    /// Groups raw rows by well id and builds each well.
    pub fn from_rows(rows: impl IntoIterator<Item = (String, LogRecord)>) -> Result<Self> {
        let mut grouped: BTreeMap<String, Vec<LogRecord>> = BTreeMap::new();
        for (well, record) in rows {
            grouped.entry(well).or_default().push(record);
        }
        let wells = grouped
            .into_iter()
            .map(|(id, records)| WellLog::new(id, records))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset { wells })
    }

    pub fn wells(&self) -> &[WellLog] {
        &self.wells
    }

    pub fn well(&self, id: &str) -> Option<&WellLog> {
        self.wells
            .binary_search_by(|w| w.well_id.as_str().cmp(id))
            .ok()
            .map(|i| &self.wells[i])
    }

    pub fn len(&self) -> usize {
        self.wells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wells.is_empty()
    }

    pub fn record_count(&self) -> usize {
        self.wells.iter().map(WellLog::len).sum()
    }

    /// Merges several datasets (e.g. one per input file). A well id present in
    /// more than one source is an error.
    pub fn merge(parts: impl IntoIterator<Item = Dataset>) -> Result<Self> {
        Dataset::from_wells(parts.into_iter().flat_map(|d| d.wells).collect())
    }
}

/// Row-level outcome of a parse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub accepted: usize,
    pub dropped: usize,
    /// Rows dropped because a field held the sentinel value.
    pub dropped_sentinel: usize,
    /// Rows dropped because a field was unparseable, non-finite or out of its
    /// physical domain.
    pub dropped_invalid: usize,
}

impl ParseReport {
    pub fn merge(&mut self, other: &ParseReport) {
        self.accepted += other.accepted;
        self.dropped += other.dropped;
        self.dropped_sentinel += other.dropped_sentinel;
        self.dropped_invalid += other.dropped_invalid;
    }

    pub fn to_key_values(&self) -> String {
        format!(
            "accepted={}\ndropped={}\ndropped_sentinel={}\ndropped_invalid={}\n",
            self.accepted, self.dropped, self.dropped_sentinel, self.dropped_invalid
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParseOptions {
    pub sentinel: f64,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            sentinel: DEFAULT_SENTINEL,
        }
    }
}

pub(crate) enum RowVerdict {
    Accept(LogRecord),
    Sentinel,
    Invalid,
}

/// Shared validity rule for both readers. `values` is in [`Curve::ALL`] order;
/// `None` marks an unparseable field.
pub(crate) fn validate_row(values: [Option<f64>; 7], sentinel: f64) -> RowVerdict {
    let mut out = [0.0; 7];
    let mut saw_sentinel = false;
    for (slot, v) in out.iter_mut().zip(values) {
        match v {
            None => return RowVerdict::Invalid,
            Some(x) if x == sentinel => saw_sentinel = true,
            Some(x) if !x.is_finite() => return RowVerdict::Invalid,
            Some(x) => *slot = x,
        }
    }
    if saw_sentinel {
        return RowVerdict::Sentinel;
    }
    let record = LogRecord {
        depth: out[0],
        rhob: out[1],
        dt: out[2],
        gr: out[3],
        nphi: out[4],
        latitude: out[5],
        longitude: out[6],
    };
    if record.depth <= 0.0 || !(0.0..=1.0).contains(&record.nphi) {
        return RowVerdict::Invalid;
    }
    RowVerdict::Accept(record)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::LogRecord;

    pub fn record(depth: f64, gr: f64) -> LogRecord {
        LogRecord {
            depth,
            rhob: 2.3,
            dt: 90.0,
            gr,
            nphi: 0.25,
            latitude: 53.5,
            longitude: 4.1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::record;
    use super::*;

    #[test]
    fn well_sorts_records_and_keeps_raw_depths() {
        let well = WellLog::new("A", vec![record(3.0, 1.0), record(1.0, 2.0)]).unwrap();
        assert_eq!(well.raw_depths(), &[1.0, 3.0]);
        assert_eq!(well.records()[0].gr, 2.0);
    }

    #[test]
    fn duplicate_depth_is_rejected() {
        let err = WellLog::new("A", vec![record(1.0, 1.0), record(1.0, 2.0)]).unwrap_err();
        assert!(matches!(err, Error::DuplicateRecord { ref well, depth } if well == "A" && depth == 1.0));
    }

    #[test]
    fn curve_names_round_trip() {
        for c in Curve::ALL {
            assert_eq!(c.key().parse::<Curve>().unwrap(), c);
            assert_eq!(c.column().parse::<Curve>().unwrap(), c);
        }
        assert!("porosity".parse::<Curve>().is_err());
    }

    #[test]
    fn sentinel_and_non_finite_rows_are_told_apart() {
        let vals = [Some(10.0), Some(2.3), Some(90.0), Some(-999.25), Some(0.2), Some(1.0), Some(1.0)];
        assert!(matches!(validate_row(vals, -999.25), RowVerdict::Sentinel));
        let vals = [Some(10.0), Some(2.3), Some(f64::NAN), Some(40.0), Some(0.2), Some(1.0), Some(1.0)];
        assert!(matches!(validate_row(vals, -999.25), RowVerdict::Invalid));
    }

    #[test]
    fn dataset_lookup_by_id() {
        let ds = Dataset::from_rows(vec![
            ("B".to_string(), record(1.0, 1.0)),
            ("A".to_string(), record(2.0, 1.0)),
        ])
        .unwrap();
        assert_eq!(ds.wells()[0].well_id(), "A");
        assert!(ds.well("B").is_some());
        assert!(ds.well("C").is_none());
    }
}
