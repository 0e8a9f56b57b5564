//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vessel_synopses::ais::{split_k_folds, VesselTrack};
use vessel_synopses::evaluation::{compute_metrics, evaluate_config, Metrics};
use vessel_synopses::ga::{fitness, run_ga, GaHyperParams, GeneSpec, VesselPreset};
use vessel_synopses::geo::{haversine_m, LonLat};
use vessel_synopses::synopsis::{compress_track, speed_change_exceeds, Annotation, AnnotationSet, SynopsisConfig};
use vessel_synopses::synthetic;

type Check = Result<String, String>;
type Oracle = Vec<(usize, &'static [Annotation])>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn metrics(rmse_m: f64, ratio: f64) -> Metrics {
    Metrics { rmse_m, ratio, noiseless_count: 0, critical_count: 0 }
}

fn all_fixtures() -> Vec<VesselTrack> {
    let mut tracks = vec![
        synthetic::straight_track(100),
        synthetic::stop_track(),
        synthetic::corner_track(),
        synthetic::gap_track(),
        synthetic::slow_motion_track(),
        synthetic::smooth_curve_track(),
    ];
    tracks.extend(synthetic::mixed_dataset(2024));
    tracks
}

fn metric_identities() -> Check {
    let tracks = all_fixtures();
    for t in &tracks {
        let m = compute_metrics(std::slice::from_ref(t), &[common::full_retention(t)]).map_err(|e| e.to_string())?;
        ensure(m.rmse_m == 0.0 && m.ratio == 1.0, || format!("vessel {}: {m:?}", t.mmsi))?;
    }
    Ok(format!("{} fixtures", tracks.len()))
}

fn haversine_oracle() -> Check {
    let d = haversine_m(LonLat::new(0.0, 0.0), LonLat::new(1.0, 0.0));
    ensure((d - 111_194.93).abs() <= 0.01, || format!("1 degree arc = {d:.4} m"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut point = || LonLat::new(rng.gen_range(-180.0..180.0), rng.gen_range(-90.0..90.0));
    for _ in 0..10_000 {
        let (a, b, c) = (point(), point(), point());
        let (ab, ba) = (haversine_m(a, b), haversine_m(b, a));
        ensure((ab - ba).abs() <= 1e-6 * ab.max(1.0), || format!("asymmetric {a:?} {b:?}"))?;
        let (ac, bc) = (haversine_m(a, c), haversine_m(b, c));
        ensure(ac <= (ab + bc) * (1.0 + 1e-6), || format!("triangle {a:?} {b:?} {c:?}"))?;
    }
    Ok(format!("1 degree = {d:.4} m, 10000 pairs and triples"))
}

fn event_fixtures() -> Check {
    use Annotation::*;
    let cases: [(&str, VesselTrack, Oracle); 4] = [
        ("straight", synthetic::straight_track(20), vec![(0, &[TrackStart]), (19, &[TrackEnd])]),
        (
            "stop",
            synthetic::stop_track(),
            vec![(0, &[TrackStart]), (6, &[StopStart]), (15, &[StopEnd]), (19, &[TrackEnd])],
        ),
        ("corner", synthetic::corner_track(), vec![(0, &[TrackStart]), (9, &[ChangeInHeading]), (19, &[TrackEnd])]),
        (
            "gap",
            synthetic::gap_track(),
            vec![(0, &[TrackStart]), (4, &[GapStart]), (5, &[GapEnd]), (9, &[TrackEnd])],
        ),
    ];
    let cfg = SynopsisConfig::default();
    for (name, track, oracle) in cases {
        let got: Vec<(i64, AnnotationSet)> = compress_track(&track, &cfg)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|cp| (cp.timestamp, cp.annotations))
            .collect();
        let want: Vec<(i64, AnnotationSet)> = oracle
            .into_iter()
            .map(|(i, a)| (track.points[i].timestamp, a.iter().copied().collect()))
            .collect();
        ensure(got == want, || format!("{name}: got {got:?}, want {want:?}"))?;
    }
    Ok("straight, stop, corner, gap".into())
}

fn speed_change_formula() -> Check {
    // Reference: no change can be measured against a standing vessel.
    fn reference(v_now: f64, v_m: f64, alpha: f64) -> bool {
        if v_now == 0.0 {
            return false;
        }
        (v_now - v_m).abs() > alpha * v_now.abs()
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut zeros = 0;
    for i in 0..100 {
        let v_now = if i % 10 == 0 { 0.0 } else { rng.gen_range(0.0..30.0) };
        let v_m = if i % 7 == 0 { v_now } else { rng.gen_range(0.0..30.0) };
        let alpha = rng.gen_range(0.01..0.99);
        zeros += usize::from(v_now == 0.0);
        let (got, want) = (speed_change_exceeds(v_now, v_m, alpha), reference(v_now, v_m, alpha));
        ensure(got == want, || format!("({v_now}, {v_m}, {alpha}): {got} != {want}"))?;
    }
    Ok(format!("100 triples, {zeros} with v_now = 0"))
}

fn fitness_arithmetic() -> Check {
    let f = fitness(&metrics(13.0, 0.1), 17.0, 0.8);
    ensure((f - 1.5204).abs() <= 1e-3, || format!("fitness = {f}"))?;
    for (rmse, ratio, r) in [(13.0, 0.1, 17.0), (0.0, 0.37, 5.0), (250.0, 0.02, 1.0)] {
        let n0 = fitness(&metrics(rmse, ratio), r, 0.0);
        ensure(n0 == ratio, || format!("n = 0 gives {n0}, want {ratio}"))?;
        let r0 = fitness(&metrics(rmse, ratio), 0.0, 1.3);
        let want = rmse.powf(1.3) * ratio;
        ensure(r0 == want, || format!("r = 0 gives {r0}, want {want}"))?;
    }
    Ok(format!("fitness(13, 0.1, 17, 0.8) = {f:.4}"))
}

fn ga_sanity() -> Check {
    let data = synthetic::mixed_dataset(2024);
    let points: usize = data.iter().map(VesselTrack::len).sum();
    let preset = VesselPreset::by_name("passenger").expect("preset");
    let hp = GaHyperParams {
        population_size: 30,
        max_generations: 15,
        stagnation_limit: 15,
        seed: 7,
        ..GaHyperParams::default()
    }
    .with_preset(preset);
    let outcome = run_ga(&data, &GeneSpec::default(), &hp).map_err(|e| e.to_string())?;
    for w in outcome.history.windows(2) {
        ensure(w[1].best_fitness <= w[0].best_fitness, || {
            format!("best fitness rose at generation {}: {} -> {}", w[1].generation, w[0].best_fitness, w[1].best_fitness)
        })?;
    }
    let default = fitness(&evaluate_config(&data, &SynopsisConfig::default()).map_err(|e| e.to_string())?, hp.r, hp.n);
    let best = outcome.best.fitness.ok_or("best individual unevaluated")?;
    ensure(best <= default, || format!("best {best} > default {default}"))?;
    Ok(format!("{points} points, {} generations, best {best:.4} <= default {default:.4}", outcome.history.len()))
}

fn compression_direction() -> Check {
    let track = synthetic::straight_track(100);
    let cps = compress_track(&track, &SynopsisConfig::default()).map_err(|e| e.to_string())?;
    let ratio = cps.len() as f64 / track.len() as f64;
    ensure(ratio <= 0.05, || format!("kept {} of 100", cps.len()))?;
    Ok(format!("kept {} of {}", cps.len(), track.len()))
}

fn tune_into(input: &std::path::Path, out: &std::path::Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_synopses"))
        .args(["tune", "--type", "fishing", "--k", "3", "--seed", "11"])
        .args(["--population", "10", "--generations", "4"])
        .arg("--input")
        .arg(input)
        .arg("--out")
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || String::from_utf8_lossy(&status.stderr).into_owned())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("ais.csv");
    common::write_dataset(&input, &common::tuning_dataset());
    let out = dir.path().join("tune");

    tune_into(&input, &out)?;
    let first = common::snapshot(&out);
    std::fs::remove_dir_all(&out).map_err(|e| e.to_string())?;
    tune_into(&input, &out)?;
    let second = common::snapshot(&out);

    ensure(!first.is_empty(), || "no output files".into())?;
    let names: Vec<_> = first.keys().collect();
    ensure(names == second.keys().collect::<Vec<_>>(), || "file sets differ".into())?;
    for (name, bytes) in &first {
        ensure(second[name] == *bytes, || format!("{name} differs"))?;
    }
    Ok(format!("{} files identical", first.len()))
}

fn fold_hygiene() -> Check {
    let tracks = common::tuning_dataset();
    let longest = tracks.iter().map(VesselTrack::len).max().unwrap_or(0);
    let mut checked = 0;
    for k in 2..=6 {
        let folds = split_k_folds(&tracks, k).map_err(|e| e.to_string())?;
        let sizes: Vec<usize> = folds.iter().map(|f| f.iter().map(VesselTrack::len).sum()).collect();
        let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();
        ensure(spread <= longest, || format!("k = {k}: fold sizes {sizes:?}, longest track {longest}"))?;
        for (i, test) in folds.iter().enumerate() {
            let train: Vec<u64> = folds.iter().enumerate().filter(|(j, _)| *j != i).flat_map(|(_, f)| f.iter().map(|t| t.mmsi)).collect();
            ensure(test.iter().all(|t| !train.contains(&t.mmsi)), || format!("k = {k}: fold {i} overlaps"))?;
            let covered = train.len() + test.len();
            ensure(covered == tracks.len(), || format!("k = {k}: fold {i} covers {covered} tracks"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} folds over k = 2..=6"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 metric identities", metric_identities, Some(Duration::from_secs(1))),
        ("2 haversine oracle", haversine_oracle, Some(Duration::from_secs(5))),
        ("3 event-detection fixtures", event_fixtures, Some(Duration::from_secs(1))),
        ("4 speed-change formula", speed_change_formula, Some(Duration::from_secs(1))),
        ("5 fitness arithmetic", fitness_arithmetic, None),
        ("6 GA sanity", ga_sanity, Some(Duration::from_secs(120))),
        ("7 compression direction", compression_direction, Some(Duration::from_secs(1))),
        ("8 determinism", determinism, None),
        ("9 cross-validation hygiene", fold_hygiene, None),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
