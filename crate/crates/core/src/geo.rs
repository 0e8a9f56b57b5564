//! Geodesic and kinematic primitives.
//!
//! Distances are great-circle (Haversine) on a sphere of radius
//! [`EARTH_RADIUS_M`]. Speeds are in knots, headings in degrees clockwise from
//! true north in `[0, 360)`. Interpolation between fixes is linear in
//! longitude/latitude against time, which is how synopses are reconstructed.

use crate::ais::AisRecord;
use crate::error::{Error, Result};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Meters per second in one knot (one nautical mile, 1852 m, per hour).
pub const METERS_PER_SECOND_PER_KNOT: f64 = 1852.0 / 3600.0;

/// A longitude/latitude pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LonLat {
    pub lon: f64,
    pub lat: f64,
}

impl LonLat {
    pub const fn new(lon: f64, lat: f64) -> Self {
        Self { lon, lat }
    }
}

/// Anything with a position and a timestamp.
pub trait Located {
    fn position(&self) -> LonLat;
    fn timestamp(&self) -> i64;
}

impl Located for (LonLat, i64) {
    fn position(&self) -> LonLat {
        self.0
    }
    fn timestamp(&self) -> i64 {
        self.1
    }
}

/// Speed over ground and heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity {
    pub speed_knots: f64,
    pub heading_deg: f64,
}

impl Velocity {
    /// Builds a velocity from east/north components expressed in knots.
    pub fn from_components(east: f64, north: f64) -> Self {
        Self {
            speed_knots: east.hypot(north),
            heading_deg: normalize_deg(east.atan2(north).to_degrees()),
        }
    }

    /// East and north components in knots.
    pub fn components(&self) -> (f64, f64) {
        let h = self.heading_deg.to_radians();
        (self.speed_knots * h.sin(), self.speed_knots * h.cos())
    }
}

/// Maps any angle in degrees onto `[0, 360)`.
pub fn normalize_deg(deg: f64) -> f64 {
    let d = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360.0 for tiny negative inputs.
    if d >= 360.0 {
        0.0
    } else {
        d
    }
}

/// Signed smallest rotation from heading `from` to heading `to`, in `(-180, 180]`.
pub fn circular_difference(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Great-circle distance in meters.
pub fn haversine_m(a: LonLat, b: LonLat) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = (b.lat - a.lat).to_radians();
    let dlambda = (b.lon - a.lon).to_radians();

    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Initial great-circle bearing from `a` to `b` in `[0, 360)`; 0 is north, 90 east.
///
/// Undefined for coincident points (returns 0); callers guard against that.
pub fn bearing_deg(a: LonLat, b: LonLat) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dlambda = (b.lon - a.lon).to_radians();

    let y = dlambda.sin() * phi2.cos();
    let x = phi1.cos() * phi2.sin() - phi1.sin() * phi2.cos() * dlambda.cos();
    normalize_deg(y.atan2(x).to_degrees())
}

/// Velocity of the segment from `a` to `b`.
///
/// Coincident points yield speed 0 and heading 0; the heading is meaningless
/// in that case and callers carry their previous heading instead.
pub fn segment_velocity<A: Located, B: Located>(a: &A, b: &B) -> Result<Velocity> {
    let (ta, tb) = (a.timestamp(), b.timestamp());
    if tb <= ta {
        return Err(Error::NonMonotonicTime { previous: ta, next: tb });
    }
    let (pa, pb) = (a.position(), b.position());
    let dist = haversine_m(pa, pb);
    if dist == 0.0 {
        return Ok(Velocity { speed_knots: 0.0, heading_deg: 0.0 });
    }
    Ok(Velocity {
        speed_knots: dist / (tb - ta) as f64 / METERS_PER_SECOND_PER_KNOT,
        heading_deg: bearing_deg(pa, pb),
    })
}

/// Mean velocity over a time-ordered buffer, ignoring fixes older than
/// `now - horizon_s`.
///
/// Per-segment velocities are averaged as east/north vectors. Returns `None`
/// when fewer than two fixes fall inside the horizon.
pub fn mean_velocity<'a, I>(buffer: I, horizon_s: f64, now: i64) -> Option<Velocity>
where
    I: IntoIterator<Item = &'a AisRecord>,
{
    let cutoff = now as f64 - horizon_s;
    let mut prev: Option<&AisRecord> = None;
    let (mut east, mut north, mut segments) = (0.0, 0.0, 0usize);
    for rec in buffer.into_iter().filter(|r| r.timestamp as f64 >= cutoff) {
        if let Some(p) = prev {
            if let Ok(v) = segment_velocity(p, rec) {
                let (e, n) = v.components();
                east += e;
                north += n;
                segments += 1;
            }
        }
        prev = Some(rec);
    }
    if segments == 0 {
        return None;
    }
    let k = segments as f64;
    Some(Velocity::from_components(east / k, north / k))
}

/// Position at time `at` on the straight lon/lat segment between two fixes.
pub fn interpolate<A: Located, B: Located>(start: &A, end: &B, at: i64) -> Result<LonLat> {
    let (t1, t2) = (start.timestamp(), end.timestamp());
    if t1 == t2 {
        return Err(Error::DegenerateInterval(t1));
    }
    if at < t1 || at > t2 {
        return Err(Error::OutsideInterval { at, start: t1, end: t2 });
    }
    let (p1, p2) = (start.position(), end.position());
    if at == t1 {
        return Ok(p1);
    }
    if at == t2 {
        return Ok(p2);
    }
    let f = (at - t1) as f64 / (t2 - t1) as f64;
    Ok(LonLat {
        lon: p1.lon + (p2.lon - p1.lon) * f,
        lat: p1.lat + (p2.lat - p1.lat) * f,
    })
}
