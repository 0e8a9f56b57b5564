//! Reconstruction of approximate courses and synopsis quality metrics.
//!
//! The compression ratio is the number of critical points over the number of
//! clean fixes, and the RMSE is the root mean square Haversine distance
//! between every clean fix and the reconstructed position at the same
//! timestamp. Both are aggregated over all vessels at once, not averaged per
//! vessel.

use rayon::prelude::*;
use serde::Serialize;

use crate::ais::VesselTrack;
use crate::error::{Error, Result};
use crate::geo::{haversine_m, interpolate, LonLat, Located};
use crate::json::fixed6;
use crate::synopsis::{compress_dataset, CriticalPoint, SynopsisConfig};

/// Quality of a set of synopses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    #[serde(serialize_with = "fixed6")]
    pub rmse_m: f64,
    #[serde(serialize_with = "fixed6")]
    pub ratio: f64,
    pub noiseless_count: usize,
    pub critical_count: usize,
}

/// Metrics together with the configuration that produced them.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    #[serde(flatten)]
    pub metrics: Metrics,
    pub config: SynopsisConfig,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Reconstructed position at time `at`.
///
/// Interpolates between the critical points bracketing `at`; before the
/// first or after the last one the nearest end is returned.
pub fn synchronized_position(synopsis: &[CriticalPoint], at: i64) -> Result<LonLat> {
    let (first, last) = match (synopsis.first(), synopsis.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Empty("synopsis")),
    };
    if at <= first.timestamp {
        return Ok(first.position());
    }
    if at >= last.timestamp {
        return Ok(last.position());
    }
    // First critical point strictly after `at`; it has a predecessor.
    let hi = synopsis.partition_point(|cp| cp.timestamp <= at);
    let (a, b) = (&synopsis[hi - 1], &synopsis[hi]);
    if a.timestamp == at {
        return Ok(a.position());
    }
    interpolate(a, b, at)
}

/// Sum of squared reconstruction errors over one track.
fn squared_error_sum(track: &VesselTrack, synopsis: &[CriticalPoint]) -> Result<f64> {
    if track.is_empty() {
        return Ok(0.0);
    }
    if let Some(cp) = synopsis.iter().find(|cp| cp.mmsi != track.mmsi) {
        return Err(Error::InvalidArgument(format!(
            "synopsis for vessel {} paired with track {}",
            cp.mmsi, track.mmsi
        )));
    }
    let mut acc = CompensatedSum::default();
    for p in &track.points {
        let q = synchronized_position(synopsis, p.timestamp)?;
        acc.add(haversine_m(p.position(), q).powi(2));
    }
    Ok(acc.value())
}

/// RMSE and compression ratio of `synopses[i]` against `clean[i]`.
pub fn compute_metrics(clean: &[VesselTrack], synopses: &[Vec<CriticalPoint>]) -> Result<Metrics> {
    if clean.len() != synopses.len() {
        return Err(Error::InvalidArgument(format!(
            "{} tracks but {} synopses",
            clean.len(),
            synopses.len()
        )));
    }
    let noiseless_count: usize = clean.iter().map(VesselTrack::len).sum();
    if noiseless_count == 0 {
        return Err(Error::Empty("dataset"));
    }
    let critical_count: usize = synopses.iter().map(Vec::len).sum();

    let per_vessel: Vec<f64> = clean
        .par_iter()
        .zip(synopses.par_iter())
        .map(|(t, s)| squared_error_sum(t, s))
        .collect::<Result<_>>()?;
    let total: CompensatedSum = per_vessel.into_iter().collect();

    Ok(Metrics {
        rmse_m: (total.value().max(0.0) / noiseless_count as f64).sqrt(),
        ratio: critical_count as f64 / noiseless_count as f64,
        noiseless_count,
        critical_count,
    })
}

/// Compresses every clean track with `cfg` and scores the result.
pub fn evaluate_config(clean: &[VesselTrack], cfg: &SynopsisConfig) -> Result<Metrics> {
    let synopses = compress_dataset(clean, cfg)?;
    compute_metrics(clean, &synopses)
}
