//! Gap detection on raw depths, the gap census summary and histogram data.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::{Dataset, WellLog};
use crate::stats::Summary;

/// Consecutive records further apart than this (in meters) bound a gap.
pub const DEFAULT_THRESHOLD: f64 = 0.2;

/// Nominal sampling interval used to express gap lengths in points.
pub const NOMINAL_STEP: f64 = 0.1;

/// Depth differences within this many meters of the threshold are treated as
/// equal to it. Depths are decimal values stored in binary floating point, so
/// `10.5 - 10.2` is slightly above 0.3.
pub const DEPTH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    pub well_id: String,
    /// Last record above the gap.
    pub depth_before: f64,
    /// First record below the gap.
    pub depth_after: f64,
    /// `depth_after - depth_before`, in meters.
    pub length: f64,
    /// Length in nominal 0.1 m steps, rounded.
    pub approx_points: u64,
}

/// Finds every consecutive pair of raw depths whose spacing exceeds
/// `threshold`.
pub fn detect_gaps(well: &WellLog, threshold: f64) -> Result<Vec<Gap>> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::Parameter(format!("gap threshold must be >= 0, got {threshold}")));
    }
    let depths = well.raw_depths();
    let mut gaps = Vec::new();
    for pair in depths.windows(2) {
        let (before, after) = (pair[0], pair[1]);
        let diff = after - before;
        if diff.is_nan() || diff <= 0.0 {
            return Err(Error::Ordering(well.well_id().to_string()));
        }
        if diff > threshold + DEPTH_TOLERANCE {
            gaps.push(Gap {
                well_id: well.well_id().to_string(),
                depth_before: before,
                depth_after: after,
                length: diff,
                approx_points: (diff / NOMINAL_STEP).round() as u64,
            });
        }
    }
    Ok(gaps)
}

/// Gaps across all wells, in well-id then depth order.
pub fn detect_all(dataset: &Dataset, threshold: f64) -> Result<Vec<Gap>> {
    let per_well = dataset
        .wells()
        .par_iter()
        .map(|w| detect_gaps(w, threshold))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_well.into_iter().flatten().collect())
}

pub type GapStats = Summary;

/// Count, mean, sample std, min, quartiles and max of gap lengths.
pub fn summarize_gaps(gaps: &[Gap]) -> Result<GapStats> {
    let lengths: Vec<f64> = gaps.iter().map(|g| g.length).collect();
    Summary::of(&lengths)
}

/// Key=value block in the row order of the classic describe() table.
pub fn stats_block(stats: &GapStats) -> String {
    format!(
        "count={}\nmean={}\nstd={}\nmin={}\n25%={}\n50%={}\n75%={}\nmax={}\n",
        stats.count, stats.mean, stats.std, stats.min, stats.q25, stats.q50, stats.q75, stats.max
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `[min, max]` of the gap lengths.
    Full,
    /// `[min, q75]`: the zoom over the first three quartiles.
    UpperQuartile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistogramRequest {
    pub scale: Scale,
    pub bin_count: usize,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSpec {
    pub scale: Scale,
    /// `bin_count + 1` strictly increasing edges, in meters.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl HistogramSpec {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["bin_left", "bin_right", "count"])?;
        for (i, count) in self.counts.iter().enumerate() {
            w.write_record([
                self.bin_edges[i].to_string(),
                self.bin_edges[i + 1].to_string(),
                count.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<histogram sink>", e))?;
        Ok(())
    }
}

/// Bins gap lengths into `bin_count` bins that are uniform in the requested
/// scale. Bins are half-open `[left, right)` except the last, which is closed.
/// Lengths outside the domain are not counted.
pub fn gap_histogram(gaps: &[Gap], request: HistogramRequest) -> Result<HistogramSpec> {
    if request.bin_count == 0 {
        return Err(Error::Parameter("histogram needs at least one bin".into()));
    }
    let stats = summarize_gaps(gaps)?;
    let lo = stats.min;
    let hi = match request.domain {
        Domain::Full => stats.max,
        Domain::UpperQuartile => stats.q75,
    };
    let edges = bin_edges(lo, hi, request.bin_count, request.scale);
    let mut counts = vec![0usize; request.bin_count];
    for gap in gaps {
        if let Some(bin) = bin_index(&edges, gap.length) {
            counts[bin] += 1;
        }
    }
    Ok(HistogramSpec {
        scale: request.scale,
        bin_edges: edges,
        counts,
    })
}

type Transform = fn(f64) -> f64;

fn bin_edges(lo: f64, hi: f64, bins: usize, scale: Scale) -> Vec<f64> {
    let (to, from): (Transform, Transform) = match scale {
        Scale::Linear => (|x| x, |x| x),
        Scale::Log10 => (f64::log10, |x| 10f64.powf(x)),
    };
    let (mut a, mut b) = (to(lo), to(hi));
    let (mut first, mut last) = (lo, hi);
    if b <= a {
        // single-valued domain: widen by half a unit either side
        a -= 0.5;
        b += 0.5;
        first = from(a);
        last = from(b);
    }
    let width = (b - a) / bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| from(a + width * i as f64)).collect();
    // endpoints exact so the extreme lengths land inside the domain
    edges[0] = first;
    edges[bins] = last;
    edges
}

fn bin_index(edges: &[f64], v: f64) -> Option<usize> {
    let bins = edges.len() - 1;
    if v < edges[0] || v > edges[bins] {
        return None;
    }
    if v == edges[bins] {
        return Some(bins - 1);
    }
    Some(edges.partition_point(|&e| e <= v) - 1)
}

/// Gap listing CSV: `well, depth_before, depth_after, length_m, approx_points`.
pub fn write_gap_csv<W: Write>(gaps: &[Gap], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["well", "depth_before", "depth_after", "length_m", "approx_points"])?;
    for g in gaps {
        w.write_record([
            g.well_id.clone(),
            g.depth_before.to_string(),
            g.depth_after.to_string(),
            g.length.to_string(),
            g.approx_points.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<gap sink>", e))?;
    Ok(())
}
