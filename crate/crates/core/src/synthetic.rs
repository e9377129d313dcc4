//! Synthetic wells with a known nphi relationship, and multi-well corpora with
//! planted gaps of known length. Used by tests, examples and the bundled data.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::ingest::{Dataset, LogRecord, WellLog};
use crate::seed::{derive_seed, rng};

/// How nphi is generated from the other curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relation {
    /// `nphi = 0.5 * rhob_s + 0.2 * gr_s` with `*_s` the curve scaled to [0, 1].
    Linear,
    /// Two plateaus split at the middle depth: 0.15 above, 0.35 below.
    Plateau,
    /// [`Relation::Linear`] plus Gaussian noise of the given standard deviation.
    NoisyLinear { sigma: f64 },
    /// A mildly nonlinear mix of all three sensors with small noise.
    Realistic,
}

pub const RHOB_RANGE: (f64, f64) = (1.9, 2.9);
pub const DT_RANGE: (f64, f64) = (50.0, 150.0);
pub const GR_RANGE: (f64, f64) = (20.0, 150.0);

fn scale(s: f64, (lo, hi): (f64, f64)) -> f64 {
    lo + s * (hi - lo)
}

/// Scaled value of a raw reading, the inverse of the generator's mapping.
pub fn scaled(raw: f64, (lo, hi): (f64, f64)) -> f64 {
    (raw - lo) / (hi - lo)
}

/// Smooth latent curve in [0.1, 0.9]: three sinusoids with random
/// frequencies and phases.
struct Latent {
    parts: [(f64, f64, f64); 3],
}

impl Latent {
    fn new<R: Rng>(r: &mut R) -> Self {
        let mut part = |lo: f64, hi: f64| (r.random_range(lo..hi), r.random_range(0.0..TAU), r.random_range(0.5..1.0));
        Latent {
            parts: [part(1.0 / 400.0, 1.0 / 150.0), part(1.0 / 90.0, 1.0 / 35.0), part(1.0 / 20.0, 1.0 / 7.0)],
        }
    }

    fn at(&self, i: usize) -> f64 {
        let total: f64 = self.parts.iter().map(|p| p.2).sum();
        let v: f64 = self.parts.iter().map(|&(f, ph, a)| a * (TAU * f * i as f64 + ph).sin()).sum();
        0.5 + 0.4 * v / total
    }
}

/// A gapless well of `n` rows at 0.1 m spacing starting at 1000 m.
pub fn synthetic_well(id: &str, n: usize, relation: Relation, seed: u64) -> Result<WellLog> {
    synthetic_well_with_step(id, n, 0.1, relation, seed)
}

pub fn synthetic_well_with_step(id: &str, n: usize, step: f64, relation: Relation, seed: u64) -> Result<WellLog> {
    if n < 2 {
        return Err(Error::Parameter("a synthetic well needs at least 2 rows".into()));
    }
    let mut r = rng(seed);
    let (lr, ld, lg) = (Latent::new(&mut r), Latent::new(&mut r), Latent::new(&mut r));
    let noise = match relation {
        Relation::NoisyLinear { sigma } => Some(Normal::new(0.0, sigma).map_err(|e| Error::Parameter(e.to_string()))?),
        Relation::Realistic => Some(Normal::new(0.0, 0.005).expect("valid sigma")),
        _ => None,
    };
    let latitude = r.random_range(51.0..55.0);
    let longitude = r.random_range(3.0..7.0);
    let records = (0..n)
        .map(|i| {
            let (rs, ds, gs) = (lr.at(i), ld.at(i), lg.at(i));
            let nphi = match relation {
                Relation::Linear => 0.5 * rs + 0.2 * gs,
                Relation::Plateau => {
                    if i < n / 2 {
                        0.15
                    } else {
                        0.35
                    }
                }
                Relation::NoisyLinear { .. } => 0.5 * rs + 0.2 * gs,
                Relation::Realistic => 0.62 - 0.45 * rs + 0.12 * ds * ds + 0.08 * gs,
            };
            let nphi = match &noise {
                Some(d) => (nphi + d.sample(&mut r)).clamp(0.0, 1.0),
                None => nphi,
            };
            LogRecord {
                depth: 1000.0 + i as f64 * step,
                rhob: scale(rs, RHOB_RANGE),
                dt: scale(ds, DT_RANGE),
                gr: scale(gs, GR_RANGE),
                nphi,
                latitude,
                longitude,
            }
        })
        .collect();
    WellLog::new(id, records)
}

/// A gap removed from a synthetic well, with the depths that bound it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedGap {
    pub well_id: String,
    pub depth_before: f64,
    pub depth_after: f64,
    /// Rows removed.
    pub removed: usize,
}

impl PlantedGap {
    pub fn length(&self) -> f64 {
        self.depth_after - self.depth_before
    }
}

/// Removes the given half-open index ranges from `well`. Ranges must be
/// non-empty, disjoint, sorted, and leave at least one row on each side.
pub fn remove_ranges(well: &WellLog, ranges: &[(usize, usize)]) -> Result<(WellLog, Vec<PlantedGap>)> {
    let n = well.len();
    let mut last_end = 0;
    for (k, &(a, b)) in ranges.iter().enumerate() {
        let first = k == 0;
        if a >= b || b >= n || a == 0 || (!first && a <= last_end) {
            return Err(Error::Parameter(format!("range [{a}, {b}) cannot be removed from a well of {n} rows")));
        }
        last_end = b;
    }
    let depths = well.raw_depths();
    let planted = ranges
        .iter()
        .map(|&(a, b)| PlantedGap {
            well_id: well.well_id().to_string(),
            depth_before: depths[a - 1],
            depth_after: depths[b],
            removed: b - a,
        })
        .collect();
    let keep = well
        .records()
        .iter()
        .enumerate()
        .filter(|(i, _)| !ranges.iter().any(|&(a, b)| (a..b).contains(i)))
        .map(|(_, r)| *r)
        .collect();
    Ok((WellLog::new(well.well_id(), keep)?, planted))
}

/// Options for [`synthetic_corpus`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub wells: usize,
    pub gaps: usize,
    pub rows_per_well: usize,
    /// Every `coarse_every`-th well is sampled at 0.2 m instead of 0.1 m.
    pub coarse_every: usize,
    /// Largest number of rows removed by one gap, at least 2.
    pub max_removed: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            wells: 50,
            gaps: 120,
            rows_per_well: 2000,
            coarse_every: 10,
            max_removed: 400,
        }
    }
}

/// Gapless wells with `spec.gaps` planted gaps spread over them. Removed
/// spans are log-uniform in row count, so lengths cover several decades. At
/// least two rows go per gap: one missing 0.1 m row leaves a 0.2 m step,
/// which is not a gap.
pub fn synthetic_corpus(spec: &CorpusSpec, seed: u64) -> Result<(Dataset, Vec<PlantedGap>)> {
    if spec.wells == 0 {
        return Err(Error::Parameter("corpus needs at least one well".into()));
    }
    let per_well = spec.gaps.div_ceil(spec.wells);
    let slot = spec.rows_per_well / (per_well + 1);
    if per_well > 0 && (spec.max_removed + 2 > slot || spec.max_removed < 2) {
        return Err(Error::Parameter(format!(
            "{} rows per well cannot hold {per_well} gaps of up to {} rows",
            spec.rows_per_well, spec.max_removed
        )));
    }
    let mut wells = Vec::with_capacity(spec.wells);
    let mut planted = Vec::with_capacity(spec.gaps);
    let mut remaining = spec.gaps;
    for w in 0..spec.wells {
        let id = format!("SYN-{w:02}");
        let well_seed = derive_seed(seed, &[w as u64]);
        let step = if spec.coarse_every > 0 && w % spec.coarse_every == spec.coarse_every - 1 { 0.2 } else { 0.1 };
        let well = synthetic_well_with_step(&id, spec.rows_per_well, step, Relation::Realistic, well_seed)?;
        // spread the remainder over the first wells
        let wells_left = spec.wells - w;
        let count = remaining.div_ceil(wells_left).min(per_well);
        remaining -= count;
        let mut r = rng(derive_seed(well_seed, &[1]));
        let ranges: Vec<(usize, usize)> = (0..count)
            .map(|k| {
                let removed = (r.random_range(0.0..(spec.max_removed as f64).ln()).exp().round() as usize).max(2);
                let lo = (k + 1) * slot - slot / 2;
                let start = lo + r.random_range(0..=(slot - removed - 1).min(slot / 2));
                (start, start + removed)
            })
            .collect();
        let (well, gaps) = remove_ranges(&well, &ranges)?;
        wells.push(well);
        planted.extend(gaps);
    }
    Ok((Dataset::from_wells(wells)?, planted))
}
