//! End-to-end commands: load and clean a dataset, compress it, score it,
//! compare configurations and tune parameters with cross-validation.
//!
//! Each command writes its results into an output directory. Outputs carry
//! no timestamps or host details, so a command re-run with the same inputs
//! and seed reproduces its files byte for byte.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::ais::{parse_records, partition_tracks, split_k_folds, CsvFormat, VesselTrack};
use crate::error::{Error, Result};
use crate::evaluation::{compute_metrics, evaluate_config, Metrics, MetricsReport};
use crate::ga::{fitness, history_csv, run_ga, GaHyperParams, GeneSpec, VesselPreset};
use crate::json::fixed6;
use crate::noise::{filter_dataset, NoiseFilterConfig};
use crate::synopsis::{compress_dataset, write_synopsis, SynopsisConfig};

pub const SYNOPSIS_FILE: &str = "synopsis.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const COMPARISON_FILE: &str = "comparison.json";
pub const PLOT_FILE: &str = "plot.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const FOLDS_FILE: &str = "folds.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const BEST_CONFIG_FILE: &str = "best_config.json";
pub const HISTORY_FILE: &str = "history.csv";
pub const FOLD_REPORT_FILE: &str = "report.json";

/// A parsed, partitioned and noise-filtered dataset.
#[derive(Debug, Clone)]
pub struct CleanDataset {
    pub tracks: Vec<VesselTrack>,
    pub raw_count: usize,
    pub malformed_rows: usize,
    pub noisy_count: usize,
}

impl CleanDataset {
    pub fn point_count(&self) -> usize {
        self.tracks.iter().map(VesselTrack::len).sum()
    }

    /// Distinct vessel types, sorted.
    pub fn vessel_types(&self) -> Vec<String> {
        let mut types: Vec<String> = self.tracks.iter().map(|t| t.vessel_type.clone()).collect();
        types.sort();
        types.dedup();
        types
    }
}

/// Reads, partitions and filters an AIS file.
pub fn load_dataset(path: &Path, format: &CsvFormat, noise: &NoiseFilterConfig) -> Result<CleanDataset> {
    if !path.is_file() {
        return Err(Error::InvalidArgument(format!("input file {} does not exist", path.display())));
    }
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let report = parse_records(std::io::BufReader::new(file), format)?;
    let raw_count = report.records.len();
    let malformed_rows = report.rejected();
    let tracks = partition_tracks(report.records);
    let (tracks, noisy_count) = filter_dataset(&tracks, noise);
    let tracks: Vec<VesselTrack> = tracks.into_iter().filter(|t| !t.is_empty()).collect();
    Ok(CleanDataset { tracks, raw_count, malformed_rows, noisy_count })
}

/// Resolves a configuration argument: a JSON file path, `default`, or
/// `tuned:<vessel type>` for the bundled reference configurations.
pub fn resolve_config(arg: Option<&str>) -> Result<SynopsisConfig> {
    match arg {
        None | Some("default") => Ok(SynopsisConfig::default()),
        Some(s) if s.starts_with("tuned:") => {
            let t = &s["tuned:".len()..];
            SynopsisConfig::fine_tuned(t).ok_or_else(|| Error::InvalidConfig(format!("no reference configuration for `{t}`")))
        }
        Some(path) => SynopsisConfig::load(Path::new(path)),
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_file(path, text)
}

/// Compresses a file and writes `synopsis.csv` and `metrics.json` into `out_dir`.
pub fn cmd_compress(input: &Path, config: Option<&str>, out_dir: &Path) -> Result<MetricsReport> {
    let cfg = resolve_config(config)?;
    let data = load_dataset(input, &CsvFormat::default(), &NoiseFilterConfig::default())?;
    let synopses = compress_dataset(&data.tracks, &cfg)?;
    let metrics = compute_metrics(&data.tracks, &synopses)?;

    create_dir(out_dir)?;
    let path = out_dir.join(SYNOPSIS_FILE);
    let file = File::create(&path).map_err(|source| Error::Io { path: path.clone(), source })?;
    let all: Vec<_> = synopses.into_iter().flatten().collect();
    write_synopsis(BufWriter::new(file), &all)?;

    let report = MetricsReport { metrics, config: cfg };
    write_json(&out_dir.join(METRICS_FILE), &report)?;
    Ok(report)
}

/// Scores a configuration on a file without writing anything.
pub fn cmd_eval(input: &Path, config: Option<&str>) -> Result<MetricsReport> {
    let cfg = resolve_config(config)?;
    let data = load_dataset(input, &CsvFormat::default(), &NoiseFilterConfig::default())?;
    let metrics = evaluate_config(&data.tracks, &cfg)?;
    Ok(MetricsReport { metrics, config: cfg })
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    #[serde(serialize_with = "fixed6")]
    pub rmse_a: f64,
    #[serde(serialize_with = "fixed6")]
    pub ratio_a: f64,
    #[serde(serialize_with = "fixed6")]
    pub rmse_b: f64,
    #[serde(serialize_with = "fixed6")]
    pub ratio_b: f64,
    pub noiseless_count: usize,
    pub config_a: SynopsisConfig,
    pub config_b: SynopsisConfig,
}

impl Comparison {
    /// One row per configuration and metric.
    pub fn plot_csv(&self) -> String {
        format!(
            "config,metric,value\nA,rmse_m,{:.6}\nA,ratio,{:.6}\nB,rmse_m,{:.6}\nB,ratio,{:.6}\n",
            self.rmse_a, self.ratio_a, self.rmse_b, self.ratio_b
        )
    }
}

/// Scores two configurations on the same cleaned data.
pub fn cmd_compare(input: &Path, config_a: &str, config_b: &str, out_dir: &Path) -> Result<Comparison> {
    let (cfg_a, cfg_b) = (resolve_config(Some(config_a))?, resolve_config(Some(config_b))?);
    let data = load_dataset(input, &CsvFormat::default(), &NoiseFilterConfig::default())?;
    let a = evaluate_config(&data.tracks, &cfg_a)?;
    let b = evaluate_config(&data.tracks, &cfg_b)?;
    let cmp = Comparison {
        rmse_a: a.rmse_m,
        ratio_a: a.ratio,
        rmse_b: b.rmse_m,
        ratio_b: b.ratio,
        noiseless_count: a.noiseless_count,
        config_a: cfg_a,
        config_b: cfg_b,
    };
    create_dir(out_dir)?;
    write_json(&out_dir.join(COMPARISON_FILE), &cmp)?;
    write_file(&out_dir.join(PLOT_FILE), cmp.plot_csv())?;
    Ok(cmp)
}

/// How the objective hyper-parameters are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    Preset(String),
    Explicit { r: f64, n: f64 },
}

/// Everything needed to reproduce a tuning run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input: PathBuf,
    pub vessel_type: String,
    pub preset: Option<String>,
    pub k: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub hyper_params: GaHyperParams,
}

#[derive(Debug, Clone)]
pub struct TuneRequest {
    pub input: PathBuf,
    pub vessel_type: String,
    pub objective: Objective,
    pub k: usize,
    pub seed: u64,
    pub population_size: usize,
    pub max_generations: usize,
    pub stagnation_limit: usize,
    pub out_dir: PathBuf,
}

impl TuneRequest {
    pub fn new(input: impl Into<PathBuf>, vessel_type: &str, objective: Objective, out_dir: impl Into<PathBuf>) -> Self {
        let hp = GaHyperParams::default();
        Self {
            input: input.into(),
            vessel_type: vessel_type.to_lowercase(),
            objective,
            k: 6,
            seed: 0,
            population_size: hp.population_size,
            max_generations: hp.max_generations,
            stagnation_limit: hp.stagnation_limit,
            out_dir: out_dir.into(),
        }
    }

    fn hyper_params(&self) -> Result<(GaHyperParams, Option<String>)> {
        let base = GaHyperParams {
            population_size: self.population_size,
            max_generations: self.max_generations,
            stagnation_limit: self.stagnation_limit,
            seed: self.seed,
            ..GaHyperParams::default()
        };
        let (hp, preset) = match &self.objective {
            Objective::Preset(name) => {
                let p = VesselPreset::by_name(name)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown preset `{name}`")))?;
                (base.with_preset(p), Some(p.name.to_string()))
            }
            Objective::Explicit { r, n } => (GaHyperParams { r: *r, n: *n, ..base }, None),
        };
        hp.validate()?;
        Ok((hp, preset))
    }
}

/// Result of training on all folds but one and testing on the held-out fold.
#[derive(Debug, Clone, Serialize)]
pub struct FoldReport {
    pub fold: usize,
    pub train_mmsis: Vec<u64>,
    pub test_mmsis: Vec<u64>,
    pub train_points: usize,
    pub test_points: usize,
    #[serde(serialize_with = "fixed6")]
    pub train_fitness: f64,
    #[serde(serialize_with = "fixed6")]
    pub train_rmse: f64,
    #[serde(serialize_with = "fixed6")]
    pub train_ratio: f64,
    #[serde(serialize_with = "fixed6")]
    pub test_fitness: f64,
    #[serde(serialize_with = "fixed6")]
    pub test_rmse: f64,
    #[serde(serialize_with = "fixed6")]
    pub test_ratio: f64,
    pub generations: usize,
    pub config: SynopsisConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoredMetrics {
    #[serde(flatten)]
    pub metrics: Metrics,
    #[serde(serialize_with = "fixed6")]
    pub fitness: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TuneSummary {
    pub vessel_type: String,
    #[serde(serialize_with = "fixed6")]
    pub r: f64,
    #[serde(serialize_with = "fixed6")]
    pub n: f64,
    /// Fold whose configuration scored lowest on its held-out data.
    pub chosen_fold: usize,
    pub config: SynopsisConfig,
    /// Default and chosen configurations scored on every track of the type.
    pub default_on_all: ScoredMetrics,
    pub tuned_on_all: ScoredMetrics,
    #[serde(skip)]
    pub folds: Vec<FoldReport>,
}

fn mmsis(tracks: &[VesselTrack]) -> Vec<u64> {
    let mut ids: Vec<u64> = tracks.iter().map(|t| t.mmsi).collect();
    ids.sort_unstable();
    ids
}

fn scored(m: Metrics, hp: &GaHyperParams) -> ScoredMetrics {
    ScoredMetrics { metrics: m, fitness: fitness(&m, hp.r, hp.n) }
}

/// Per-type k-fold tuning.
pub fn cmd_tune(req: &TuneRequest) -> Result<TuneSummary> {
    let (hp, preset) = req.hyper_params()?;
    if req.k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {}", req.k)));
    }
    let data = load_dataset(&req.input, &CsvFormat::default(), &NoiseFilterConfig::default())?;
    let tracks: Vec<VesselTrack> = data
        .tracks
        .iter()
        .filter(|t| t.vessel_type == req.vessel_type)
        .cloned()
        .collect();
    if tracks.is_empty() {
        return Err(Error::UnknownVesselType {
            requested: req.vessel_type.clone(),
            available: data.vessel_types().join(", "),
        });
    }
    let folds = split_k_folds(&tracks, req.k)?;
    let spec = GeneSpec::default();

    let reports: Vec<FoldReport> = (0..folds.len())
        .into_par_iter()
        .map(|i| {
            let test = &folds[i];
            let train: Vec<VesselTrack> = folds
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, f)| f.iter().cloned())
                .collect();
            let fold_hp = GaHyperParams { seed: hp.seed.wrapping_add(i as u64), ..hp.clone() };
            let outcome = run_ga(&train, &spec, &fold_hp)?;
            let best = &outcome.best;
            let train_m = best.metrics.expect("evaluated");
            let cfg = best.config();
            let test_m = evaluate_config(test, &cfg)?;
            Ok((
                FoldReport {
                    fold: i,
                    train_mmsis: mmsis(&train),
                    test_mmsis: mmsis(test),
                    train_points: train_m.noiseless_count,
                    test_points: test_m.noiseless_count,
                    train_fitness: best.fitness.expect("evaluated"),
                    train_rmse: train_m.rmse_m,
                    train_ratio: train_m.ratio,
                    test_fitness: fitness(&test_m, hp.r, hp.n),
                    test_rmse: test_m.rmse_m,
                    test_ratio: test_m.ratio,
                    generations: outcome.history.len(),
                    config: cfg,
                },
                history_csv(&outcome.history),
            ))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .map(|(report, history)| -> Result<FoldReport> {
            let dir = req.out_dir.join(format!("fold_{}", report.fold));
            create_dir(&dir)?;
            write_file(&dir.join(HISTORY_FILE), history)?;
            write_json(&dir.join(BEST_CONFIG_FILE), &report.config)?;
            write_json(&dir.join(FOLD_REPORT_FILE), &report)?;
            Ok(report)
        })
        .collect::<Result<_>>()?;

    let chosen = reports
        .iter()
        .min_by(|a, b| a.test_fitness.total_cmp(&b.test_fitness).then(a.fold.cmp(&b.fold)))
        .expect("k >= 2 folds");
    let summary = TuneSummary {
        vessel_type: req.vessel_type.clone(),
        r: hp.r,
        n: hp.n,
        chosen_fold: chosen.fold,
        config: chosen.config,
        default_on_all: scored(evaluate_config(&tracks, &SynopsisConfig::default())?, &hp),
        tuned_on_all: scored(evaluate_config(&tracks, &chosen.config)?, &hp),
        folds: reports.clone(),
    };

    let manifest = RunManifest {
        command: "tune".into(),
        input: req.input.clone(),
        vessel_type: req.vessel_type.clone(),
        preset,
        k: req.k,
        seed: req.seed,
        output: req.out_dir.clone(),
        hyper_params: hp,
    };
    write_json(&req.out_dir.join(MANIFEST_FILE), &manifest)?;
    write_file(&req.out_dir.join(FOLDS_FILE), folds_csv(&reports))?;
    write_json(&req.out_dir.join(BEST_CONFIG_FILE), &summary.config)?;
    write_json(&req.out_dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

fn folds_csv(reports: &[FoldReport]) -> String {
    let mut s = String::from(
        "fold,train_points,test_points,train_fitness,train_rmse,train_ratio,test_fitness,test_rmse,test_ratio\n",
    );
    for r in reports {
        s.push_str(&format!(
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            r.fold, r.train_points, r.test_points, r.train_fitness, r.train_rmse, r.train_ratio, r.test_fitness, r.test_rmse, r.test_ratio
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ais::write_records;
    use crate::synthetic;

    fn write_input(dir: &Path, tracks: &[VesselTrack]) -> PathBuf {
        let path = dir.join("input.csv");
        let records: Vec<_> = tracks
            .iter()
            .flat_map(|t| t.points.iter().map(|p| p.clone().with_type(t.vessel_type.clone())))
            .collect();
        write_records(File::create(&path).unwrap(), &records).unwrap();
        path
    }

    #[test]
    fn resolve_config_variants() {
        assert_eq!(resolve_config(None).unwrap(), SynopsisConfig::default());
        assert_eq!(resolve_config(Some("tuned:fishing")).unwrap(), SynopsisConfig::fine_tuned("fishing").unwrap());
        assert!(matches!(resolve_config(Some("tuned:yacht")), Err(Error::InvalidConfig(_))));
        let err = resolve_config(Some("/nonexistent/cfg.json")).unwrap_err();
        assert!(err.is_usage());
        assert!(err.to_string().contains("/nonexistent/cfg.json"));
    }

    #[test]
    fn compress_writes_both_files() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_input(dir.path(), &[synthetic::straight_track(20)]);
        let out = dir.path().join("out");
        let report = cmd_compress(&input, None, &out).unwrap();
        assert_eq!(report.metrics.ratio, 0.1);
        assert!(report.metrics.rmse_m < 0.5);
        let csv = fs::read_to_string(out.join(SYNOPSIS_FILE)).unwrap();
        assert_eq!(csv.lines().count(), 3);
        let json = fs::read_to_string(out.join(METRICS_FILE)).unwrap();
        assert!(json.contains("\"ratio\": 0.100000"), "{json}");
        assert!(json.contains("\"angle_threshold_deg\": 4.000000"), "{json}");
    }

    #[test]
    fn compare_identical_configs() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_input(dir.path(), &synthetic::mixed_dataset(1));
        let cmp = cmd_compare(&input, "default", "default", &dir.path().join("cmp")).unwrap();
        assert_eq!((cmp.rmse_a, cmp.ratio_a), (cmp.rmse_b, cmp.ratio_b));
        assert_eq!(cmp.plot_csv().lines().count(), 5);
    }

    #[test]
    fn tune_reports_unknown_type() {
        let dir = tempfile::tempdir().unwrap();
        let input = write_input(dir.path(), &synthetic::mixed_dataset(1));
        let req = TuneRequest::new(&input, "yacht", Objective::Preset("passenger".into()), dir.path().join("t"));
        match cmd_tune(&req) {
            Err(Error::UnknownVesselType { available, .. }) => assert!(available.contains("fishing")),
            other => panic!("{other:?}"),
        }
    }
}
