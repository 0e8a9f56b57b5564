#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs::File;
use std::path::Path;

use vessel_synopses::ais::{write_records, AisRecord, VesselTrack};
use vessel_synopses::synopsis::{AnnotationSet, CriticalPoint};
use vessel_synopses::synthetic;

/// Writes tracks as a CSV input file, tagging every row with its track type.
pub fn write_dataset(path: &Path, tracks: &[VesselTrack]) {
    let records: Vec<AisRecord> = tracks
        .iter()
        .flat_map(|t| t.points.iter().map(move |p| p.clone().with_type(t.vessel_type.clone())))
        .collect();
    write_records(File::create(path).unwrap(), &records).unwrap();
}

/// Three copies of the mixed dataset with distinct vessel ids, so every
/// vessel type has three tracks.
pub fn tuning_dataset() -> Vec<VesselTrack> {
    (0..3u64)
        .flat_map(|copy| {
            synthetic::mixed_dataset(100 + copy).into_iter().map(move |mut t| {
                t.mmsi += 1000 * copy;
                let mmsi = t.mmsi;
                t.points.iter_mut().for_each(|p| p.mmsi = mmsi);
                t
            })
        })
        .collect()
}

/// Every clean fix kept as a critical point.
pub fn full_retention(track: &VesselTrack) -> Vec<CriticalPoint> {
    track
        .points
        .iter()
        .map(|p| CriticalPoint {
            mmsi: p.mmsi,
            timestamp: p.timestamp,
            lon: p.lon,
            lat: p.lat,
            annotations: AnnotationSet::empty(),
        })
        .collect()
}

/// Relative path -> contents of every file below `root`.
pub fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}
