//! Online detection of critical points along vessel trajectories.
//!
//! A [`VesselState`] consumes one vessel's clean fixes in time order and
//! emits the fixes that mark mobility events: communication gaps, stops,
//! slow motion, changes in heading and speed changes. Everything else is
//! dropped; the course in between is recovered by time-based interpolation.

mod annotation;
mod config;
mod engine;

use std::io::{Read, Write};

pub use annotation::{Annotation, AnnotationSet};
pub use config::{SynopsisConfig, PARAMETER_COUNT, PARAMETER_NAMES, PARAMETER_RANGES};
pub use engine::{compress_track, speed_change_exceeds, CriticalPoint, VesselState};

use crate::ais::VesselTrack;
use crate::error::{Error, Result};

/// Compresses every track, keyed in the same order as the input.
pub fn compress_dataset(tracks: &[VesselTrack], cfg: &SynopsisConfig) -> Result<Vec<Vec<CriticalPoint>>> {
    use rayon::prelude::*;
    tracks.par_iter().map(|t| compress_track(t, cfg)).collect()
}

/// Writes critical points as `mmsi,timestamp,lon,lat,annotations`.
pub fn write_synopsis<W: Write>(out: W, points: &[CriticalPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mmsi", "timestamp", "lon", "lat", "annotations"])?;
    for cp in points {
        w.write_record([
            cp.mmsi.to_string(),
            cp.timestamp.to_string(),
            format!("{:.6}", cp.lon),
            format!("{:.6}", cp.lat),
            cp.annotations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the format produced by [`write_synopsis`].
pub fn read_synopsis<R: Read>(input: R) -> Result<Vec<CriticalPoint>> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let bad = |what: &str| Error::InvalidArgument(format!("synopsis row {:?}: invalid {what}", row.position().map(|p| p.line())));
        let field = |i: usize| row.get(i).unwrap_or("");
        out.push(CriticalPoint {
            mmsi: field(0).parse().map_err(|_| bad("mmsi"))?,
            timestamp: field(1).parse().map_err(|_| bad("timestamp"))?,
            lon: field(2).parse().map_err(|_| bad("lon"))?,
            lat: field(3).parse().map_err(|_| bad("lat"))?,
            annotations: AnnotationSet::parse(field(4)).map_err(|_| bad("annotations"))?,
        });
    }
    Ok(out)
}
