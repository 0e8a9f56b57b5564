use std::collections::VecDeque;

use crate::ais::{AisRecord, VesselTrack};
use crate::error::{Error, Result};
use crate::geo::{circular_difference, haversine_m, mean_velocity, segment_velocity, LonLat, Located, Velocity};

use super::annotation::{Annotation, AnnotationSet};
use super::config::SynopsisConfig;

/// Mean velocities slower than this (knots) carry no usable heading.
const MIN_MEAN_SPEED_KN: f64 = 1e-9;

/// A retained fix and the events it marks.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPoint {
    pub mmsi: u64,
    pub timestamp: i64,
    pub lon: f64,
    pub lat: f64,
    pub annotations: AnnotationSet,
}

impl CriticalPoint {
    fn from_record(r: &AisRecord, annotations: AnnotationSet) -> Self {
        Self { mmsi: r.mmsi, timestamp: r.timestamp, lon: r.lon, lat: r.lat, annotations }
    }
}

impl Located for CriticalPoint {
    fn position(&self) -> LonLat {
        LonLat::new(self.lon, self.lat)
    }
    fn timestamp(&self) -> i64 {
        self.timestamp
    }
}

/// Relative speed deviation test: `|(v_now - v_mean) / v_now| > alpha`.
///
/// Never fires for `v_now == 0`; stationary vessels are the stop rule's concern.
pub fn speed_change_exceeds(v_now: f64, v_mean: f64, alpha: f64) -> bool {
    v_now > 0.0 && ((v_now - v_mean) / v_now).abs() > alpha
}

/// Per-vessel detector state.
///
/// Annotations for a fix can still be added while the next fix is processed
/// (turns, stop and slow-motion ends, gap starts mark the previous fix), so
/// each critical point is emitted one fix late.
#[derive(Debug, Clone, Default)]
pub struct VesselState {
    buffer: VecDeque<AisRecord>,
    last_point: Option<AisRecord>,
    pending: AnnotationSet,
    last_heading: Option<f64>,
    stop_anchor: Option<AisRecord>,
    in_slow_motion: bool,
    in_speed_change: bool,
}

impl VesselState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn in_stop(&self) -> bool {
        self.stop_anchor.is_some()
    }

    pub fn in_slow_motion(&self) -> bool {
        self.in_slow_motion
    }

    pub fn in_speed_change(&self) -> bool {
        self.in_speed_change
    }

    pub fn last_point(&self) -> Option<&AisRecord> {
        self.last_point.as_ref()
    }

    pub fn buffer_len(&self) -> usize {
        self.buffer.len()
    }

    /// Feeds one clean fix. Returns the previous fix as a critical point once
    /// its annotations are final and non-empty.
    pub fn ingest_point(&mut self, p: &AisRecord, cfg: &SynopsisConfig) -> Result<Option<CriticalPoint>> {
        let Some(prev) = self.last_point.take() else {
            self.pending.insert(Annotation::TrackStart);
            self.push_buffer(p.clone(), cfg);
            self.last_point = Some(p.clone());
            return Ok(None);
        };
        if p.timestamp <= prev.timestamp {
            let err = Error::NonMonotonicTime { previous: prev.timestamp, next: p.timestamp };
            self.last_point = Some(prev);
            return Err(err);
        }

        let mut prev_ann = std::mem::take(&mut self.pending);
        let mut cur_ann = AnnotationSet::empty();

        if (p.timestamp - prev.timestamp) as f64 > cfg.gap_period_s {
            prev_ann.insert(Annotation::GapStart);
            cur_ann.insert(Annotation::GapEnd);
            self.close_intervals(&mut prev_ann);
            self.buffer.clear();
            self.last_heading = None;
        } else {
            let v = segment_velocity(&prev, p)?;
            self.detect_motion_events(&prev, p, v, cfg, &mut prev_ann, &mut cur_ann);
        }

        self.push_buffer(p.clone(), cfg);
        self.pending = cur_ann;
        let emitted = (!prev_ann.is_empty()).then(|| CriticalPoint::from_record(&prev, prev_ann));
        self.last_point = Some(p.clone());
        Ok(emitted)
    }

    /// Ends the stream: the last fix is emitted as `trackEnd`, closing any
    /// open stop, slow-motion or speed-change interval.
    pub fn finish(&mut self) -> Option<CriticalPoint> {
        let last = self.last_point.take()?;
        let mut ann = std::mem::take(&mut self.pending);
        ann.insert(Annotation::TrackEnd);
        self.close_intervals(&mut ann);
        self.buffer.clear();
        self.last_heading = None;
        Some(CriticalPoint::from_record(&last, ann))
    }

    fn close_intervals(&mut self, ann: &mut AnnotationSet) {
        if self.stop_anchor.take().is_some() {
            ann.insert(Annotation::StopEnd);
        }
        if std::mem::take(&mut self.in_slow_motion) {
            ann.insert(Annotation::SlowMotionEnd);
        }
        if std::mem::take(&mut self.in_speed_change) {
            ann.insert(Annotation::SpeedChangeEnd);
        }
    }

    fn detect_motion_events(
        &mut self,
        prev: &AisRecord,
        p: &AisRecord,
        v_now: Velocity,
        cfg: &SynopsisConfig,
        prev_ann: &mut AnnotationSet,
        cur_ann: &mut AnnotationSet,
    ) {
        let heading = if v_now.speed_knots > 0.0 {
            Some(v_now.heading_deg)
        } else {
            self.last_heading
        };
        self.last_heading = heading;

        // Stop: while anchored, fixes near the anchor are absorbed.
        if let Some(anchor) = &self.stop_anchor {
            let displacement = haversine_m(anchor.position(), p.position());
            if displacement < cfg.distance_threshold_m && v_now.speed_knots < cfg.no_speed_threshold_kn {
                return;
            }
            prev_ann.insert(Annotation::StopEnd);
            self.stop_anchor = None;
            self.reseed_buffer(prev);
        }
        if v_now.speed_knots < cfg.no_speed_threshold_kn {
            cur_ann.insert(Annotation::StopStart);
            self.stop_anchor = Some(p.clone());
            if std::mem::take(&mut self.in_slow_motion) {
                prev_ann.insert(Annotation::SlowMotionEnd);
            }
            if std::mem::take(&mut self.in_speed_change) {
                cur_ann.insert(Annotation::SpeedChangeEnd);
            }
            return;
        }

        // Slow motion: v_min <= v_now < v_theta.
        if v_now.speed_knots < cfg.low_speed_threshold_kn {
            if !self.in_slow_motion {
                cur_ann.insert(Annotation::SlowMotionStart);
                self.in_slow_motion = true;
            }
        } else if std::mem::take(&mut self.in_slow_motion) {
            prev_ann.insert(Annotation::SlowMotionEnd);
        }

        let v_mean = mean_velocity(&self.buffer, cfg.historical_timespan_s, p.timestamp);

        // Turn: the previous fix is the turning point.
        let mut turned = false;
        if let (Some(vm), Some(h)) = (v_mean, heading) {
            if vm.speed_knots > MIN_MEAN_SPEED_KN
                && circular_difference(vm.heading_deg, h).abs() > cfg.angle_threshold_deg
            {
                prev_ann.insert(Annotation::ChangeInHeading);
                turned = true;
            }
        }

        // Speed change.
        if let Some(vm) = v_mean {
            if v_now.speed_knots > 0.0 {
                let deviates = speed_change_exceeds(v_now.speed_knots, vm.speed_knots, cfg.speed_ratio);
                if deviates && !self.in_speed_change {
                    cur_ann.insert(Annotation::SpeedChangeStart);
                    self.in_speed_change = true;
                } else if !deviates && self.in_speed_change {
                    cur_ann.insert(Annotation::SpeedChangeEnd);
                    self.in_speed_change = false;
                }
            }
        }

        // The mean velocity restarts from a turning point so that one corner
        // is not reported again while the buffer still remembers the old course.
        if turned {
            self.reseed_buffer(prev);
        }
    }

    fn reseed_buffer(&mut self, from: &AisRecord) {
        self.buffer.clear();
        self.buffer.push_back(from.clone());
    }

    fn push_buffer(&mut self, p: AisRecord, cfg: &SynopsisConfig) {
        self.buffer.push_back(p);
        while self.buffer.len() > cfg.buffer_size.max(1) {
            self.buffer.pop_front();
        }
    }
}

/// Compresses one clean track into its time-ordered critical points.
pub fn compress_track(track: &VesselTrack, cfg: &SynopsisConfig) -> Result<Vec<CriticalPoint>> {
    let mut state = VesselState::new();
    let mut out = Vec::new();
    for p in &track.points {
        out.extend(state.ingest_point(p, cfg)?);
    }
    out.extend(state.finish());
    Ok(out)
}
