use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::fixed6;

/// Number of tunable compression parameters.
pub const PARAMETER_COUNT: usize = 8;

/// The eight compression parameters.
///
/// Field order matches the gene order used by the tuner:
/// angle, buffer size, gap period, historical timespan, no-speed threshold,
/// low-speed threshold, speed ratio, distance threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynopsisConfig {
    /// Heading deviation from the mean velocity that marks a turn (degrees).
    #[serde(serialize_with = "fixed6")]
    pub angle_threshold_deg: f64,
    /// Number of recent fixes used for the mean velocity.
    pub buffer_size: usize,
    /// Silence longer than this is a communication gap (seconds).
    #[serde(serialize_with = "fixed6")]
    pub gap_period_s: f64,
    /// Fixes older than this are ignored in the mean velocity (seconds).
    #[serde(serialize_with = "fixed6")]
    pub historical_timespan_s: f64,
    /// Below this speed the vessel is stopped (knots).
    #[serde(serialize_with = "fixed6")]
    pub no_speed_threshold_kn: f64,
    /// Below this speed the vessel is in slow motion (knots).
    #[serde(serialize_with = "fixed6")]
    pub low_speed_threshold_kn: f64,
    /// Relative speed deviation that marks a speed change.
    #[serde(serialize_with = "fixed6")]
    pub speed_ratio: f64,
    /// Displacement from the stop anchor that ends a stop (meters).
    #[serde(serialize_with = "fixed6")]
    pub distance_threshold_m: f64,
}

/// Parameter names, in gene order.
pub const PARAMETER_NAMES: [&str; PARAMETER_COUNT] = [
    "angle_threshold_deg",
    "buffer_size",
    "gap_period_s",
    "historical_timespan_s",
    "no_speed_threshold_kn",
    "low_speed_threshold_kn",
    "speed_ratio",
    "distance_threshold_m",
];

/// Admissible `[lower, upper]` range of each parameter, in gene order.
pub const PARAMETER_RANGES: [(f64, f64); PARAMETER_COUNT] = [
    (2.0, 25.0),
    (3.0, 50.0),
    (200.0, 5000.0),
    (300.0, 5000.0),
    (0.05, 2.0),
    (0.05, 8.0),
    (0.01, 0.8),
    (2.0, 100.0),
];

impl Default for SynopsisConfig {
    fn default() -> Self {
        Self {
            angle_threshold_deg: 4.0,
            buffer_size: 5,
            gap_period_s: 1800.0,
            historical_timespan_s: 3600.0,
            no_speed_threshold_kn: 0.5,
            low_speed_threshold_kn: 5.0,
            speed_ratio: 0.25,
            distance_threshold_m: 50.0,
        }
    }
}

impl SynopsisConfig {
    /// Parameters in gene order.
    pub fn to_genes(&self) -> [f64; PARAMETER_COUNT] {
        [
            self.angle_threshold_deg,
            self.buffer_size as f64,
            self.gap_period_s,
            self.historical_timespan_s,
            self.no_speed_threshold_kn,
            self.low_speed_threshold_kn,
            self.speed_ratio,
            self.distance_threshold_m,
        ]
    }

    /// Inverse of [`to_genes`](Self::to_genes); the buffer size is rounded.
    pub fn from_genes(g: &[f64; PARAMETER_COUNT]) -> Self {
        Self {
            angle_threshold_deg: g[0],
            buffer_size: g[1].round().max(0.0) as usize,
            gap_period_s: g[2],
            historical_timespan_s: g[3],
            no_speed_threshold_kn: g[4],
            low_speed_threshold_kn: g[5],
            speed_ratio: g[6],
            distance_threshold_m: g[7],
        }
    }

    /// Checks every parameter against its admissible range.
    pub fn validate(&self) -> Result<()> {
        for ((name, (lo, hi)), v) in PARAMETER_NAMES.iter().zip(PARAMETER_RANGES).zip(self.to_genes()) {
            if !(lo..=hi).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} = {v} outside [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    /// Loads and validates a JSON configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::ConfigNotFound(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        let cfg: Self = serde_json::from_str(&text).map_err(|source| Error::ConfigParse { path: path.to_path_buf(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Pretty JSON with six decimal places.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Values found by a full-scale tuning run on the Brest AIS dataset,
    /// per vessel type. Useful as reference configurations.
    pub fn fine_tuned(vessel_type: &str) -> Option<Self> {
        let (angle, gap, m, omega, vmin, d, alpha, vtheta) = match vessel_type {
            "passenger" => (10.71, 200.0, 50, 2750.0, 2.0, 76.51, 0.63, 4.58),
            "unknown" => (17.58, 400.0, 21, 1500.0, 1.52, 44.45, 0.01, 1.02),
            "fishing" => (18.99, 200.0, 3, 3550.0, 0.41, 23.97, 0.01, 0.61),
            "tug" => (4.96, 450.0, 29, 2300.0, 0.84, 2.0, 0.01, 6.06),
            "cargo" => (17.5, 2500.0, 3, 1750.0, 0.81, 15.12, 0.01, 0.82),
            "military" => (11.68, 2600.0, 3, 4800.0, 0.88, 22.96, 0.01, 0.45),
            _ => return None,
        };
        Some(Self {
            angle_threshold_deg: angle,
            buffer_size: m,
            gap_period_s: gap,
            historical_timespan_s: omega,
            no_speed_threshold_kn: vmin,
            low_speed_threshold_kn: vtheta,
            speed_ratio: alpha,
            distance_threshold_m: d,
        })
    }
}
