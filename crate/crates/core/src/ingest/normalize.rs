use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{write_csv, Curve, Dataset};
use crate::error::{Error, Result};

/// Variables mapped to [0, 1]. Neutron porosity is already a fraction and is
/// carried unchanged.
pub const NORMALIZED_CURVES: [Curve; 6] = [
    Curve::Depth,
    Curve::Rhob,
    Curve::Dt,
    Curve::Gr,
    Curve::Latitude,
    Curve::Longitude,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
}

impl ValueRange {
    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    pub fn denormalize(&self, u: f64) -> f64 {
        u * (self.max - self.min) + self.min
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.min..=self.max).contains(&x)
    }
}

/// Dataset-wide min/max per variable plus a fingerprint of the data it was
/// fitted on.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationManifest {
    ranges: BTreeMap<Curve, ValueRange>,
    fingerprint: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NormalizeMode {
    #[default]
    Strict,
    /// Clamp out-of-range values into [0, 1] and count them.
    Lenient,
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub dataset: Dataset,
    /// Values clamped under [`NormalizeMode::Lenient`].
    pub clamped: usize,
}

/// Fits min/max for every variable in [`NORMALIZED_CURVES`].
pub fn fit_normalization(dataset: &Dataset) -> Result<NormalizationManifest> {
    fit_normalization_for(dataset, &NORMALIZED_CURVES)
}

/// Fits min/max for a subset of variables. Single-well pipelines use this to
/// skip coordinates, which are constant within a well.
pub fn fit_normalization_for(
    dataset: &Dataset,
    curves: &[Curve],
) -> Result<NormalizationManifest> {
    if dataset.record_count() == 0 {
        return Err(Error::EmptyInput);
    }
    let mut ranges = BTreeMap::new();
    for &curve in curves {
        if curve == Curve::Nphi {
            return Err(Error::Parameter("nphi is never normalized".into()));
        }
        let (min, max) = dataset
            .wells()
            .iter()
            .flat_map(|w| w.records())
            .map(|r| curve.value(r))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        if max.is_nan() || min.is_nan() || max <= min {
            return Err(Error::DegenerateVariable(curve.key().to_string()));
        }
        ranges.insert(curve, ValueRange { min, max });
    }
    Ok(NormalizationManifest {
        ranges,
        fingerprint: fingerprint(dataset)?,
    })
}

/// SHA-256 of the canonical CSV serialization, hex encoded.
pub(crate) fn fingerprint(dataset: &Dataset) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(dataset, &mut buf)?;
    let digest = Sha256::digest(&buf);
    let mut hex = String::with_capacity(64);
    for b in digest {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(hex)
}

impl NormalizationManifest {
    /// A manifest built from explicit ranges; the fingerprint is free text.
    pub fn from_ranges(
        ranges: impl IntoIterator<Item = (Curve, ValueRange)>,
        fingerprint: impl Into<String>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (curve, range) in ranges {
            if curve == Curve::Nphi {
                return Err(Error::Parameter("nphi is never normalized".into()));
            }
            if !range.min.is_finite() || !range.max.is_finite() || range.max <= range.min {
                return Err(Error::DegenerateVariable(curve.key().to_string()));
            }
            map.insert(curve, range);
        }
        Ok(NormalizationManifest {
            ranges: map,
            fingerprint: fingerprint.into(),
        })
    }

    pub fn range(&self, curve: Curve) -> Option<ValueRange> {
        self.ranges.get(&curve).copied()
    }

    pub fn curves(&self) -> impl Iterator<Item = Curve> + '_ {
        self.ranges.keys().copied()
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Maps a raw value into [0, 1]. Curves absent from the manifest pass
    /// through unchanged.
    pub fn normalize(&self, curve: Curve, x: f64) -> f64 {
        self.range(curve).map_or(x, |r| r.normalize(x))
    }

    pub fn denormalize(&self, curve: Curve, u: f64) -> f64 {
        self.range(curve).map_or(u, |r| r.denormalize(u))
    }

    /// `fingerprint=...` followed by `<curve>.min=` / `<curve>.max=` lines.
    pub fn to_key_values(&self) -> String {
        let mut out = format!("fingerprint={}\n", self.fingerprint);
        for (curve, r) in &self.ranges {
            let _ = writeln!(out, "{}.min={}", curve.key(), r.min);
            let _ = writeln!(out, "{}.max={}", curve.key(), r.max);
        }
        out
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut fingerprint = None;
        let mut mins = BTreeMap::new();
        let mut maxs = BTreeMap::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Manifest(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "fingerprint" {
                fingerprint = Some(value.to_string());
                continue;
            }
            let (curve, bound) = key
                .rsplit_once('.')
                .ok_or_else(|| Error::Manifest(format!("unknown key `{key}`")))?;
            let curve: Curve = curve
                .parse()
                .map_err(|_| Error::Manifest(format!("unknown variable `{curve}`")))?;
            let v: f64 = value
                .parse()
                .map_err(|_| Error::Manifest(format!("bad number `{value}` for `{key}`")))?;
            match bound {
                "min" => mins.insert(curve, v),
                "max" => maxs.insert(curve, v),
                _ => return Err(Error::Manifest(format!("unknown key `{key}`"))),
            };
        }
        if mins.keys().ne(maxs.keys()) {
            return Err(Error::Manifest("every variable needs both min and max".into()));
        }
        let ranges = mins
            .into_iter()
            .map(|(c, min)| (c, ValueRange { min, max: maxs[&c] }))
            .collect::<Vec<_>>();
        Self::from_ranges(ranges, fingerprint.unwrap_or_default())
    }
}

/// Normalizes every manifest variable of every record. Raw depths on each
/// well are kept as they were.
pub fn apply_normalization(
    dataset: &Dataset,
    manifest: &NormalizationManifest,
    mode: NormalizeMode,
) -> Result<Normalized> {
    let mut clamped = 0;
    let mut wells = Vec::with_capacity(dataset.len());
    for well in dataset.wells() {
        let mut records = well.records().to_vec();
        for record in &mut records {
            for (&curve, range) in &manifest.ranges {
                let slot = curve.value_mut(record);
                if !range.contains(*slot) {
                    match mode {
                        NormalizeMode::Strict => {
                            return Err(Error::OutOfRange {
                                variable: curve.key().to_string(),
                                value: *slot,
                                min: range.min,
                                max: range.max,
                            })
                        }
                        NormalizeMode::Lenient => clamped += 1,
                    }
                }
                *slot = range.normalize(*slot).clamp(0.0, 1.0);
            }
        }
        wells.push(well.with_records(records));
    }
    Ok(Normalized {
        dataset: Dataset::from_wells(wells)?,
        clamped,
    })
}
