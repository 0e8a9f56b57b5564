//! Constructed tracks with known motion, used by tests, examples and the guide.
//!
//! Legs advance by a constant lon/lat step, so each straight leg is exactly
//! straight in the plane used for reconstruction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ais::{AisRecord, VesselTrack};
use crate::geo::{EARTH_RADIUS_M, METERS_PER_SECOND_PER_KNOT};

/// 2015-10-01T00:00:00Z, the start of the Brest AIS collection.
pub const EPOCH: i64 = 1_443_657_600;

/// Default origin, in the Iroise Sea off Brest.
pub const ORIGIN: (f64, f64) = (-4.60, 48.30);

/// Builds a track step by step.
#[derive(Debug, Clone)]
pub struct TrackBuilder {
    mmsi: u64,
    vessel_type: String,
    t: i64,
    lon: f64,
    lat: f64,
    points: Vec<AisRecord>,
}

impl TrackBuilder {
    /// Starts a track with one fix at `(lon, lat, t)`.
    pub fn new(mmsi: u64, lon: f64, lat: f64, t: i64) -> Self {
        Self {
            mmsi,
            vessel_type: "unknown".into(),
            t,
            lon,
            lat,
            points: vec![AisRecord::new(mmsi, t, lon, lat)],
        }
    }

    pub fn vessel_type(mut self, label: &str) -> Self {
        self.vessel_type = label.to_string();
        self
    }

    /// Lon/lat step for moving `meters` along `heading_deg` at the current latitude.
    fn step(&self, meters: f64, heading_deg: f64) -> (f64, f64) {
        let h = heading_deg.to_radians();
        let dlat = (meters * h.cos() / EARTH_RADIUS_M).to_degrees();
        let dlon = (meters * h.sin() / (EARTH_RADIUS_M * self.lat.to_radians().cos())).to_degrees();
        (dlon, dlat)
    }

    fn push(&mut self) {
        self.points.push(AisRecord::new(self.mmsi, self.t, self.lon, self.lat));
    }

    /// Appends `count` fixes every `dt` seconds at constant speed and heading.
    pub fn leg(mut self, count: usize, dt: i64, speed_kn: f64, heading_deg: f64) -> Self {
        let (dlon, dlat) = self.step(speed_kn * METERS_PER_SECOND_PER_KNOT * dt as f64, heading_deg);
        for _ in 0..count {
            self.t += dt;
            self.lon += dlon;
            self.lat += dlat;
            self.push();
        }
        self
    }

    /// Appends a turn of `count` fixes whose heading changes by `turn_deg`
    /// per fix, starting from `heading_deg`.
    pub fn arc(mut self, count: usize, dt: i64, speed_kn: f64, heading_deg: f64, turn_deg: f64) -> Self {
        let meters = speed_kn * METERS_PER_SECOND_PER_KNOT * dt as f64;
        for i in 0..count {
            let (dlon, dlat) = self.step(meters, heading_deg + turn_deg * (i + 1) as f64);
            self.t += dt;
            self.lon += dlon;
            self.lat += dlat;
            self.push();
        }
        self
    }

    /// Appends one fix per offset (east, north meters) around the current
    /// position, every `dt` seconds. The position afterwards is the last fix.
    pub fn hold(mut self, dt: i64, offsets_m: &[(f64, f64)]) -> Self {
        let (lon0, lat0) = (self.lon, self.lat);
        for &(e, n) in offsets_m {
            let (dlon_e, _) = self.step(e, 90.0);
            let (_, dlat_n) = self.step(n, 0.0);
            self.t += dt;
            self.lon = lon0 + dlon_e;
            self.lat = lat0 + dlat_n;
            self.push();
        }
        self
    }

    pub fn build(self) -> VesselTrack {
        VesselTrack { mmsi: self.mmsi, vessel_type: self.vessel_type, points: self.points }
    }
}

/// Cruising speed of the constructed fixtures (knots).
pub const CRUISE_KN: f64 = 10.0;
/// Reporting interval of the constructed fixtures (seconds).
pub const REPORT_S: i64 = 60;

/// `n` fixes due east at 10 knots, one per minute.
pub fn straight_track(n: usize) -> VesselTrack {
    TrackBuilder::new(1, ORIGIN.0, ORIGIN.1, EPOCH)
        .leg(n.saturating_sub(1), REPORT_S, CRUISE_KN, 90.0)
        .build()
}

/// Jitter offsets (east, north meters) of the stationary part of
/// [`stop_track`]; consecutive fixes are at most ~13 m apart, below 0.5 kn.
pub const STOP_JITTER_M: [(f64, f64); 10] = [
    (3.0, 2.0),
    (-4.0, 1.0),
    (2.0, -5.0),
    (6.0, 3.0),
    (-2.0, 6.0),
    (-6.0, -3.0),
    (1.0, -4.0),
    (5.0, 2.0),
    (-3.0, 4.0),
    (0.0, -2.0),
];

/// Six fixes east at 10 knots (indices 0..=5), ten stationary fixes jittering
/// a few meters around index 5 (indices 6..=15), then four fixes departing
/// east at 10 knots (indices 16..=19).
pub fn stop_track() -> VesselTrack {
    TrackBuilder::new(2, ORIGIN.0, ORIGIN.1, EPOCH)
        .leg(5, REPORT_S, CRUISE_KN, 90.0)
        .hold(REPORT_S, &STOP_JITTER_M)
        .leg(4, REPORT_S, CRUISE_KN, 90.0)
        .build()
}

/// Ten fixes east (indices 0..=9) then ten fixes north (10..=19), 10 knots.
/// The corner is index 9.
pub fn corner_track() -> VesselTrack {
    TrackBuilder::new(3, ORIGIN.0, ORIGIN.1, EPOCH)
        .leg(9, REPORT_S, CRUISE_KN, 90.0)
        .leg(10, REPORT_S, CRUISE_KN, 0.0)
        .build()
}

/// Five fixes east (0..=4), silence for 2000 s, then five more (5..=9).
pub fn gap_track() -> VesselTrack {
    TrackBuilder::new(4, ORIGIN.0, ORIGIN.1, EPOCH)
        .leg(4, REPORT_S, CRUISE_KN, 90.0)
        .leg(1, 2000, CRUISE_KN, 90.0)
        .leg(4, REPORT_S, CRUISE_KN, 90.0)
        .build()
}

/// Ten fixes at 10 knots (0..=9), eight at 3 knots (10..=17), eight at
/// 10 knots again (18..=25), all due east.
pub fn slow_motion_track() -> VesselTrack {
    TrackBuilder::new(5, ORIGIN.0, ORIGIN.1, EPOCH)
        .leg(9, REPORT_S, CRUISE_KN, 90.0)
        .leg(8, REPORT_S, 3.0, 90.0)
        .leg(8, REPORT_S, CRUISE_KN, 90.0)
        .build()
}

/// A gentle 180° turn: 5 fixes east, 60 fixes turning 3° each, 5 fixes west.
pub fn smooth_curve_track() -> VesselTrack {
    TrackBuilder::new(6, ORIGIN.0, ORIGIN.1, EPOCH)
        .leg(4, REPORT_S, CRUISE_KN, 90.0)
        .arc(60, REPORT_S, CRUISE_KN, 90.0, 3.0)
        .leg(5, REPORT_S, CRUISE_KN, 270.0)
        .build()
}

/// A few hundred fixes covering every event type: cruising, turns, speed
/// changes, slow motion, a stop with jitter and a communication gap, with a
/// little positional noise. Deterministic for a given seed.
pub fn mixed_dataset(seed: u64) -> Vec<VesselTrack> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = |n: usize, amp: f64| -> Vec<(f64, f64)> {
        (0..n).map(|_| (rng.gen_range(-amp..amp), rng.gen_range(-amp..amp))).collect()
    };
    let stop_a = jitter(30, 8.0);
    let stop_b = jitter(20, 8.0);

    let tracks = vec![
        // Harbour departure: stop, slow motion out, speed up, turn to sea.
        TrackBuilder::new(227_000_001, -4.49, 48.38, EPOCH)
            .vessel_type("passenger")
            .hold(REPORT_S, &stop_a)
            .leg(15, REPORT_S, 3.0, 250.0)
            .leg(20, REPORT_S, 8.0, 250.0)
            .arc(10, REPORT_S, 12.0, 250.0, -6.0)
            .leg(25, REPORT_S, 14.0, 190.0)
            .build(),
        // Zig-zag with speed variation.
        TrackBuilder::new(227_000_002, -4.70, 48.20, EPOCH + 600)
            .vessel_type("fishing")
            .leg(12, REPORT_S, 7.0, 30.0)
            .leg(12, REPORT_S, 4.0, 150.0)
            .leg(12, REPORT_S, 7.0, 30.0)
            .leg(12, REPORT_S, 4.5, 150.0)
            .arc(15, REPORT_S, 6.0, 150.0, 12.0)
            .leg(15, REPORT_S, 9.0, 330.0)
            .build(),
        // Transit with a communication gap, then arrival and stop.
        TrackBuilder::new(227_000_003, -5.20, 48.10, EPOCH + 300)
            .vessel_type("cargo")
            .leg(30, REPORT_S, 12.0, 60.0)
            .leg(1, 2400, 12.0, 60.0)
            .leg(25, REPORT_S, 12.0, 60.0)
            .leg(15, REPORT_S, 6.0, 80.0)
            .leg(10, REPORT_S, 2.0, 80.0)
            .hold(REPORT_S, &stop_b)
            .build(),
        // Steady course with a long smooth turn.
        TrackBuilder::new(227_000_004, -4.90, 48.45, EPOCH + 1200)
            .vessel_type("tug")
            .leg(20, REPORT_S, 9.0, 180.0)
            .arc(40, REPORT_S, 9.0, 180.0, 2.5)
            .leg(25, REPORT_S, 9.0, 280.0)
            .build(),
        // Patrol: sprint, loiter slowly, sprint again, come about.
        TrackBuilder::new(227_000_005, -4.80, 48.00, EPOCH + 900)
            .vessel_type("military")
            .leg(30, REPORT_S, 12.0, 300.0)
            .leg(20, REPORT_S, 4.0, 300.0)
            .leg(30, REPORT_S, 15.0, 310.0)
            .arc(20, REPORT_S, 15.0, 310.0, 9.0)
            .leg(29, REPORT_S, 15.0, 130.0)
            .build(),
    ];

    // Small positional noise, well below every stop threshold.
    tracks
        .into_iter()
        .map(|mut t| {
            for p in t.points.iter_mut().skip(1) {
                p.lon += rng.gen_range(-1.5e-5..1.5e-5);
                p.lat += rng.gen_range(-1.0e-5..1.0e-5);
            }
            t
        })
        .collect()
}
