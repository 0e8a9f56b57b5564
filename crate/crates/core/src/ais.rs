//! AIS positional records: parsing from delimited text, grouping into
//! per-vessel tracks, and splitting datasets into cross-validation folds.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::{LonLat, Located};

/// Label used when a record carries no vessel type.
pub const UNKNOWN_TYPE: &str = "unknown";

/// One decoded AIS position report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AisRecord {
    pub mmsi: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: i64,
    pub lon: f64,
    pub lat: f64,
    pub vessel_type: Option<String>,
}

impl AisRecord {
    pub fn new(mmsi: u64, timestamp: i64, lon: f64, lat: f64) -> Self {
        Self { mmsi, timestamp, lon, lat, vessel_type: None }
    }

    pub fn with_type(mut self, vessel_type: impl Into<String>) -> Self {
        self.vessel_type = Some(normalize_type(&vessel_type.into()));
        self
    }
}

impl Located for AisRecord {
    fn position(&self) -> LonLat {
        LonLat::new(self.lon, self.lat)
    }
    fn timestamp(&self) -> i64 {
        self.timestamp
    }
}

/// Lowercased, trimmed vessel type; blank maps to [`UNKNOWN_TYPE`].
pub fn normalize_type(label: &str) -> String {
    let t = label.trim().to_lowercase();
    if t.is_empty() {
        UNKNOWN_TYPE.to_string()
    } else {
        t
    }
}

/// Time-ordered positions of a single vessel.
#[derive(Debug, Clone, PartialEq)]
pub struct VesselTrack {
    pub mmsi: u64,
    pub vessel_type: String,
    pub points: Vec<AisRecord>,
}

impl VesselTrack {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Which column holds each field (zero-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnMapping {
    pub mmsi: usize,
    pub timestamp: usize,
    pub lon: usize,
    pub lat: usize,
    pub vessel_type: Option<usize>,
}

impl Default for ColumnMapping {
    /// `mmsi,timestamp,lon,lat[,type]`
    fn default() -> Self {
        Self { mmsi: 0, timestamp: 1, lon: 2, lat: 3, vessel_type: Some(4) }
    }
}

const MMSI_NAMES: &[&str] = &["mmsi", "sourcemmsi"];
const TIME_NAMES: &[&str] = &["timestamp", "t", "ts", "time"];
const LON_NAMES: &[&str] = &["lon", "longitude", "lng"];
const LAT_NAMES: &[&str] = &["lat", "latitude"];
const TYPE_NAMES: &[&str] = &["type", "vessel_type", "shiptype", "ship_type"];

impl ColumnMapping {
    /// Resolves columns by (case-insensitive) header names.
    pub fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let find = |names: &[&str]| {
            header
                .iter()
                .position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
        };
        Ok(Self {
            mmsi: find(MMSI_NAMES).ok_or(Error::MissingColumn("mmsi"))?,
            timestamp: find(TIME_NAMES).ok_or(Error::MissingColumn("timestamp"))?,
            lon: find(LON_NAMES).ok_or(Error::MissingColumn("lon"))?,
            lat: find(LAT_NAMES).ok_or(Error::MissingColumn("lat"))?,
            vessel_type: find(TYPE_NAMES),
        })
    }
}

/// Whether the first row is a header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Header if the first row's mmsi field is not an integer.
    #[default]
    Auto,
    Present,
    Absent,
}

/// Layout of a delimited AIS file.
#[derive(Debug, Clone, Default)]
pub struct CsvFormat {
    pub header: HeaderMode,
    /// Explicit positional mapping. When `None`, columns are resolved by
    /// header names if a header is present and by [`ColumnMapping::default`]
    /// otherwise.
    pub columns: Option<ColumnMapping>,
}

/// A rejected input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    /// One-based line number in the input.
    pub line: u64,
    pub reason: String,
}

/// Parsed records plus every row that was rejected.
#[derive(Debug, Clone, Default)]
pub struct ParseReport {
    pub records: Vec<AisRecord>,
    pub errors: Vec<RowError>,
}

impl ParseReport {
    pub fn rejected(&self) -> usize {
        self.errors.len()
    }
}

/// Parses comma-separated AIS records.
///
/// Malformed rows and out-of-range coordinates are tallied in the report
/// with their line numbers. Unreadable input and a header lacking a
/// mandatory column are fatal.
pub fn parse_records<R: Read>(input: R, format: &CsvFormat) -> Result<ParseReport> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let mut report = ParseReport::default();
    let mut rows = reader.records();
    let mut mapping = format.columns.unwrap_or_default();

    let first = match rows.next() {
        None => return Ok(report),
        Some(row) => row?,
    };
    let first_is_header = match format.header {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => first
            .get(mapping.mmsi)
            .is_none_or(|f| f.parse::<u64>().is_err()),
    };
    if first_is_header {
        if format.columns.is_none() {
            mapping = ColumnMapping::from_header(&first)?;
        }
    } else {
        report.push_row(&first, &mapping);
    }

    for row in rows {
        let row = match row {
            Ok(r) => r,
            // A row that the tokenizer rejects (e.g. invalid UTF-8) is a
            // per-row fault; I/O failures are fatal.
            Err(e) if !e.is_io_error() => {
                let line = e.position().map_or(0, |p| p.line());
                report.errors.push(RowError { line, reason: e.to_string() });
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        report.push_row(&row, &mapping);
    }
    Ok(report)
}

impl ParseReport {
    fn push_row(&mut self, row: &csv::StringRecord, mapping: &ColumnMapping) {
        let line = row.position().map_or(0, |p| p.line());
        if row.iter().all(|f| f.is_empty()) {
            return;
        }
        match parse_row(row, mapping) {
            Ok(rec) => self.records.push(rec),
            Err(reason) => self.errors.push(RowError { line, reason }),
        }
    }
}

fn parse_row(row: &csv::StringRecord, m: &ColumnMapping) -> std::result::Result<AisRecord, String> {
    fn field<'r>(row: &'r csv::StringRecord, idx: usize, name: &str) -> std::result::Result<&'r str, String> {
        row.get(idx).ok_or_else(|| format!("missing {name} column {idx}"))
    }
    let mmsi_s = field(row, m.mmsi, "mmsi")?;
    let mmsi = mmsi_s
        .parse::<u64>()
        .map_err(|_| format!("invalid mmsi `{mmsi_s}`"))?;
    let t_s = field(row, m.timestamp, "timestamp")?;
    let timestamp = t_s
        .parse::<i64>()
        .map_err(|_| format!("invalid timestamp `{t_s}`"))?;
    if timestamp < 0 {
        return Err(format!("negative timestamp {timestamp}"));
    }
    let lon_s = field(row, m.lon, "lon")?;
    let lon = lon_s
        .parse::<f64>()
        .map_err(|_| format!("invalid longitude `{lon_s}`"))?;
    let lat_s = field(row, m.lat, "lat")?;
    let lat = lat_s
        .parse::<f64>()
        .map_err(|_| format!("invalid latitude `{lat_s}`"))?;
    if !(-180.0..=180.0).contains(&lon) {
        return Err(format!("longitude {lon} out of range"));
    }
    if !(-90.0..=90.0).contains(&lat) {
        return Err(format!("latitude {lat} out of range"));
    }
    let vessel_type = m
        .vessel_type
        .and_then(|i| row.get(i))
        .map(normalize_type);
    Ok(AisRecord { mmsi, timestamp, lon, lat, vessel_type })
}

/// Writes records as `mmsi,timestamp,lon,lat,type` with a header row.
pub fn write_records<W: Write>(out: W, records: &[AisRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mmsi", "timestamp", "lon", "lat", "type"])?;
    for r in records {
        w.write_record([
            r.mmsi.to_string(),
            r.timestamp.to_string(),
            format!("{:.6}", r.lon),
            format!("{:.6}", r.lat),
            r.vessel_type.clone().unwrap_or_else(|| UNKNOWN_TYPE.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Groups records by vessel, sorted by mmsi, each track in ascending time.
///
/// Repeated `(mmsi, timestamp)` pairs keep their first occurrence.
pub fn partition_tracks<I>(records: I) -> Vec<VesselTrack>
where
    I: IntoIterator<Item = AisRecord>,
{
    let mut by_vessel: BTreeMap<u64, Vec<AisRecord>> = BTreeMap::new();
    for r in records {
        by_vessel.entry(r.mmsi).or_default().push(r);
    }
    by_vessel
        .into_iter()
        .map(|(mmsi, mut points)| {
            // Stable: the first of several equal timestamps stays first.
            points.sort_by_key(|p| p.timestamp);
            points.dedup_by_key(|p| p.timestamp);
            let vessel_type = points
                .iter()
                .find_map(|p| p.vessel_type.clone())
                .unwrap_or_else(|| UNKNOWN_TYPE.to_string());
            VesselTrack { mmsi, vessel_type, points }
        })
        .collect()
}

/// Splits tracks into `k` folds of roughly equal point count.
///
/// Tracks are never split. They are taken longest first (ties by mmsi) and
/// each goes to the fold holding the fewest points so far, so fold sizes
/// differ by at most the longest track.
pub fn split_k_folds(tracks: &[VesselTrack], k: usize) -> Result<Vec<Vec<VesselTrack>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("fold count must be at least 2, got {k}")));
    }
    if tracks.is_empty() {
        return Err(Error::Empty("dataset"));
    }
    if k > tracks.len() {
        return Err(Error::TooManyFolds { folds: k, tracks: tracks.len() });
    }
    let mut order: Vec<&VesselTrack> = tracks.iter().collect();
    order.sort_by(|a, b| b.len().cmp(&a.len()).then(a.mmsi.cmp(&b.mmsi)));

    let mut folds: Vec<Vec<VesselTrack>> = vec![Vec::new(); k];
    let mut sizes = vec![0usize; k];
    for track in order {
        let target = (0..k).min_by_key(|&i| (sizes[i], i)).expect("k >= 2");
        sizes[target] += track.len();
        folds[target].push(track.clone());
    }
    Ok(folds)
}
