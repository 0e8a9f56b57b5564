//! Single-pass rejection of implausible fixes.

use crate::ais::{AisRecord, VesselTrack};
use crate::geo::{haversine_m, Located, METERS_PER_SECOND_PER_KNOT};

/// Coordinate jumps are only checked between fixes closer than this.
pub const JUMP_WINDOW_S: i64 = 10;

/// Lon/lat rectangle, inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingRegion {
    pub min_lon: f64,
    pub min_lat: f64,
    pub max_lon: f64,
    pub max_lat: f64,
}

impl BoundingRegion {
    pub fn contains(&self, r: &AisRecord) -> bool {
        (self.min_lon..=self.max_lon).contains(&r.lon) && (self.min_lat..=self.max_lat).contains(&r.lat)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseFilterConfig {
    pub max_speed_knots: f64,
    pub max_coord_jump_deg: f64,
    pub bounding_region: Option<BoundingRegion>,
}

impl Default for NoiseFilterConfig {
    fn default() -> Self {
        Self { max_speed_knots: 50.0, max_coord_jump_deg: 0.5, bounding_region: None }
    }
}

impl NoiseFilterConfig {
    /// Only the strict time-ordering rule remains active.
    pub fn disabled() -> Self {
        Self {
            max_speed_knots: f64::INFINITY,
            max_coord_jump_deg: f64::INFINITY,
            bounding_region: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.max_speed_knots.is_nan() || self.max_speed_knots <= 0.0 {
            return Err(format!("max_speed_knots must be positive, got {}", self.max_speed_knots));
        }
        if self.max_coord_jump_deg.is_nan() || self.max_coord_jump_deg <= 0.0 {
            return Err(format!("max_coord_jump_deg must be positive, got {}", self.max_coord_jump_deg));
        }
        Ok(())
    }
}

/// Stateful form of the filter, fed one fix at a time.
#[derive(Debug, Clone)]
pub struct NoiseFilter {
    cfg: NoiseFilterConfig,
    last_accepted: Option<AisRecord>,
}

impl NoiseFilter {
    pub fn new(cfg: NoiseFilterConfig) -> Self {
        Self { cfg, last_accepted: None }
    }

    /// Returns whether `p` is accepted. Rejected fixes leave the state untouched.
    pub fn accept(&mut self, p: &AisRecord) -> bool {
        if let Some(region) = &self.cfg.bounding_region {
            if !region.contains(p) {
                return false;
            }
        }
        if let Some(last) = &self.last_accepted {
            let dt = p.timestamp - last.timestamp;
            if dt <= 0 {
                return false;
            }
            let speed = haversine_m(last.position(), p.position()) / dt as f64 / METERS_PER_SECOND_PER_KNOT;
            if speed > self.cfg.max_speed_knots {
                return false;
            }
            let jump = (p.lon - last.lon).abs().max((p.lat - last.lat).abs());
            if dt < JUMP_WINDOW_S && jump > self.cfg.max_coord_jump_deg {
                return false;
            }
        }
        self.last_accepted = Some(p.clone());
        true
    }
}

/// Filters one time-sorted track, returning the clean track and how many
/// fixes were dropped.
pub fn filter_track(track: &VesselTrack, cfg: &NoiseFilterConfig) -> (VesselTrack, usize) {
    let mut filter = NoiseFilter::new(*cfg);
    let points: Vec<AisRecord> = track.points.iter().filter(|p| filter.accept(p)).cloned().collect();
    let rejected = track.points.len() - points.len();
    (
        VesselTrack { mmsi: track.mmsi, vessel_type: track.vessel_type.clone(), points },
        rejected,
    )
}

/// Filters every track; returns the clean tracks and the total rejected.
pub fn filter_dataset(tracks: &[VesselTrack], cfg: &NoiseFilterConfig) -> (Vec<VesselTrack>, usize) {
    let mut rejected = 0;
    let clean = tracks
        .iter()
        .map(|t| {
            let (c, r) = filter_track(t, cfg);
            rejected += r;
            c
        })
        .collect();
    (clean, rejected)
}
