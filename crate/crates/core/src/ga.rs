//! Genetic-algorithm search over the compression parameters.
//!
//! Candidates are scored by `(rmse + r)^n * ratio` (lower is better), where
//! `r` keeps uncompressed solutions from scoring zero and `n` weighs error
//! against compression. The operators are tournament selection, single-point
//! crossover and clamped Gaussian mutation, with one elite carried over
//! unchanged each generation.

use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::ais::VesselTrack;
use crate::error::{Error, Result};
use crate::evaluation::{evaluate_config, Metrics};
use crate::json::fixed6;
use crate::synopsis::{SynopsisConfig, PARAMETER_COUNT, PARAMETER_NAMES, PARAMETER_RANGES};

/// Genes of one candidate, in [`SynopsisConfig::to_genes`] order.
pub type Genes = [f64; PARAMETER_COUNT];

/// Optimization score; lower is better.
pub fn fitness(metrics: &Metrics, r: f64, n: f64) -> f64 {
    (metrics.rmse_m + r).powf(n) * metrics.ratio
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gene {
    pub name: &'static str,
    pub lower: f64,
    pub upper: f64,
    pub integer: bool,
}

impl Gene {
    fn range(&self) -> f64 {
        self.upper - self.lower
    }

    /// Clamps into bounds, rounding integer genes afterwards.
    pub fn repair(&self, v: f64) -> f64 {
        let v = v.clamp(self.lower, self.upper);
        if self.integer {
            v.round()
        } else {
            v
        }
    }
}

/// Bounds of every gene.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneSpec {
    pub genes: [Gene; PARAMETER_COUNT],
}

impl Default for GeneSpec {
    /// The admissible parameter ranges; the buffer size is the only integer gene.
    fn default() -> Self {
        let genes = std::array::from_fn(|i| Gene {
            name: PARAMETER_NAMES[i],
            lower: PARAMETER_RANGES[i].0,
            upper: PARAMETER_RANGES[i].1,
            integer: i == 1,
        });
        Self { genes }
    }
}

impl GeneSpec {
    pub fn contains(&self, genes: &Genes) -> bool {
        self.genes.iter().zip(genes).all(|(g, &v)| {
            (g.lower..=g.upper).contains(&v) && (!g.integer || v.fract() == 0.0)
        })
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> Genes {
        std::array::from_fn(|i| {
            let g = &self.genes[i];
            g.repair(rng.gen_range(g.lower..=g.upper))
        })
    }
}

/// One candidate configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genes: Genes,
    pub fitness: Option<f64>,
    pub metrics: Option<Metrics>,
}

impl Individual {
    pub fn new(genes: Genes) -> Self {
        Self { genes, fitness: None, metrics: None }
    }

    pub fn config(&self) -> SynopsisConfig {
        SynopsisConfig::from_genes(&self.genes)
    }

    fn evaluate(&mut self, clean: &[VesselTrack], r: f64, n: f64) -> Result<()> {
        let m = evaluate_config(clean, &self.config())?;
        self.fitness = Some(fitness(&m, r, n));
        self.metrics = Some(m);
        Ok(())
    }

    fn invalidate(&mut self) {
        self.fitness = None;
        self.metrics = None;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaHyperParams {
    /// Offset added to the RMSE (meters).
    #[serde(serialize_with = "fixed6")]
    pub r: f64,
    /// Exponent applied to the offset RMSE.
    #[serde(serialize_with = "fixed6")]
    pub n: f64,
    pub population_size: usize,
    pub max_generations: usize,
    /// Stop after this many generations without improvement.
    pub stagnation_limit: usize,
    pub tournament_size: usize,
    #[serde(serialize_with = "fixed6")]
    pub crossover_prob: f64,
    #[serde(serialize_with = "fixed6")]
    pub mutation_prob: f64,
    #[serde(serialize_with = "fixed6")]
    pub per_gene_mutation_prob: f64,
    /// Mutation standard deviation as a fraction of each gene's range.
    #[serde(serialize_with = "fixed6")]
    pub mutation_sigma_fraction: f64,
    pub seed: u64,
}

impl Default for GaHyperParams {
    fn default() -> Self {
        Self {
            r: 10.0,
            n: 1.0,
            population_size: 50,
            max_generations: 30,
            stagnation_limit: 10,
            tournament_size: 3,
            crossover_prob: 0.4,
            mutation_prob: 0.8,
            per_gene_mutation_prob: 0.5,
            mutation_sigma_fraction: 0.1,
            seed: 0,
        }
    }
}

impl GaHyperParams {
    pub fn with_preset(mut self, preset: &VesselPreset) -> Self {
        self.r = preset.r;
        self.n = preset.n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
            ("per_gene_mutation_prob", self.per_gene_mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be positive".into());
        }
        if self.population_size < self.tournament_size {
            return bad(format!(
                "population_size {} smaller than tournament_size {}",
                self.population_size, self.tournament_size
            ));
        }
        if self.max_generations == 0 {
            return bad("max_generations must be positive".into());
        }
        if self.r.is_nan() || self.r < 0.0 || !self.n.is_finite() {
            return bad(format!("invalid objective hyper-parameters r={} n={}", self.r, self.n));
        }
        if self.mutation_sigma_fraction.is_nan() || self.mutation_sigma_fraction < 0.0 {
            return bad("mutation_sigma_fraction must be non-negative".into());
        }
        Ok(())
    }
}

/// Objective hyper-parameters and acceptance thresholds per vessel type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VesselPreset {
    pub name: &'static str,
    pub r: f64,
    pub n: f64,
    pub rmse_threshold_m: f64,
    pub ratio_threshold: f64,
}

pub const PRESETS: [VesselPreset; 6] = [
    VesselPreset { name: "passenger", r: 17.0, n: 0.8, rmse_threshold_m: 30.0, ratio_threshold: 0.10 },
    VesselPreset { name: "unknown", r: 10.0, n: 1.0, rmse_threshold_m: 15.0, ratio_threshold: 0.15 },
    VesselPreset { name: "fishing", r: 17.0, n: 0.7, rmse_threshold_m: 30.0, ratio_threshold: 0.30 },
    VesselPreset { name: "tug", r: 2.0, n: 1.6, rmse_threshold_m: 15.0, ratio_threshold: 0.15 },
    VesselPreset { name: "cargo", r: 13.0, n: 0.8, rmse_threshold_m: 30.0, ratio_threshold: 0.10 },
    VesselPreset { name: "military", r: 10.0, n: 1.4, rmse_threshold_m: 15.0, ratio_threshold: 0.15 },
];

impl VesselPreset {
    pub fn by_name(name: &str) -> Option<&'static VesselPreset> {
        PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
    }
}

/// Picks `size` distinct individuals uniformly and returns the fittest.
pub fn tournament_select<'a, R: Rng>(population: &'a [Individual], size: usize, rng: &mut R) -> Result<&'a Individual> {
    if population.is_empty() {
        return Err(Error::Empty("population"));
    }
    if let Some(i) = population.iter().position(|ind| ind.fitness.is_none()) {
        return Err(Error::Unevaluated(i));
    }
    let k = size.clamp(1, population.len());
    let winner = index::sample(rng, population.len(), k)
        .into_iter()
        .map(|i| &population[i])
        .min_by(|a, b| a.fitness.partial_cmp(&b.fitness).expect("fitness is never NaN"))
        .expect("k >= 1");
    Ok(winner)
}

/// Swaps the tails of two parents after position `cut` (`1..PARAMETER_COUNT`).
pub fn crossover_at(a: &Individual, b: &Individual, cut: usize) -> (Individual, Individual) {
    let mut c1 = a.genes;
    let mut c2 = b.genes;
    c1[cut..].copy_from_slice(&b.genes[cut..]);
    c2[cut..].copy_from_slice(&a.genes[cut..]);
    (Individual::new(c1), Individual::new(c2))
}

/// Single-point crossover with a uniformly drawn cut.
pub fn single_point_crossover<R: Rng>(a: &Individual, b: &Individual, rng: &mut R) -> (Individual, Individual) {
    let cut = rng.gen_range(1..PARAMETER_COUNT);
    crossover_at(a, b, cut)
}

/// Adds clamped Gaussian noise to each gene with `per_gene_mutation_prob`.
pub fn gaussian_mutate<R: Rng>(ind: &Individual, spec: &GeneSpec, hp: &GaHyperParams, rng: &mut R) -> Individual {
    let mut out = ind.clone();
    let mut changed = false;
    for (v, g) in out.genes.iter_mut().zip(&spec.genes) {
        if rng.gen_bool(hp.per_gene_mutation_prob) {
            let sigma = hp.mutation_sigma_fraction * g.range();
            let noise = Normal::new(0.0, sigma).expect("sigma is finite and non-negative").sample(rng);
            *v = g.repair(*v + noise);
            changed = true;
        }
    }
    if changed {
        out.invalidate();
    }
    out
}

/// Summary of one evaluated generation.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_rmse: f64,
    pub best_ratio: f64,
}

#[derive(Debug, Clone)]
pub struct GaOutcome {
    pub best: Individual,
    pub history: Vec<GenerationStats>,
    /// Every evaluated generation, in order.
    pub generations: Vec<Vec<Individual>>,
}

/// Formats a history as CSV with six decimals.
pub fn history_csv(history: &[GenerationStats]) -> String {
    let mut s = String::from("generation,best_fitness,mean_fitness,best_rmse,best_ratio\n");
    for h in history {
        let _ = writeln!(
            s,
            "{},{:.6},{:.6},{:.6},{:.6}",
            h.generation, h.best_fitness, h.mean_fitness, h.best_rmse, h.best_ratio
        );
    }
    s
}

const SELECTION_STREAM: u64 = u32::MAX as u64;
const MUTATION_STREAM: u64 = 1 << 31;

/// Deterministic random stream for one slot of one generation.
fn substream(seed: u64, generation: usize, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((generation as u64) << 32) | slot);
    rng
}

fn fittest(population: &[Individual]) -> &Individual {
    population
        .iter()
        .min_by(|a, b| a.fitness.partial_cmp(&b.fitness).expect("evaluated"))
        .expect("non-empty population")
}

/// Runs the genetic algorithm on a clean dataset.
pub fn run_ga(clean: &[VesselTrack], spec: &GeneSpec, hp: &GaHyperParams) -> Result<GaOutcome> {
    hp.validate()?;
    if clean.iter().all(VesselTrack::is_empty) {
        return Err(Error::Empty("dataset"));
    }

    let mut population: Vec<Individual> = (0..hp.population_size)
        .map(|i| Individual::new(spec.sample(&mut substream(hp.seed, 0, i as u64))))
        .collect();

    let mut history = Vec::new();
    let mut generations = Vec::new();
    let mut best_so_far = f64::INFINITY;
    let mut stale = 0;

    for generation in 0..hp.max_generations {
        population
            .par_iter_mut()
            .filter(|ind| ind.fitness.is_none())
            .try_for_each(|ind| ind.evaluate(clean, hp.r, hp.n))?;

        let best = fittest(&population).clone();
        let best_fitness = best.fitness.expect("evaluated");
        let mean_fitness = population.iter().filter_map(|i| i.fitness).sum::<f64>() / population.len() as f64;
        let m = best.metrics.expect("evaluated");
        history.push(GenerationStats {
            generation,
            best_fitness,
            mean_fitness,
            best_rmse: m.rmse_m,
            best_ratio: m.ratio,
        });
        generations.push(population.clone());

        if best_fitness < best_so_far {
            best_so_far = best_fitness;
            stale = 0;
        } else {
            stale += 1;
        }
        if stale >= hp.stagnation_limit || generation + 1 == hp.max_generations {
            break;
        }
        population = breed(&population, best, spec, hp, generation + 1)?;
    }

    let best = fittest(generations.last().expect("at least one generation")).clone();
    Ok(GaOutcome { best, history, generations })
}

/// Next generation: the elite plus selected, recombined and mutated offspring.
fn breed(
    population: &[Individual],
    elite: Individual,
    spec: &GeneSpec,
    hp: &GaHyperParams,
    generation: usize,
) -> Result<Vec<Individual>> {
    let offspring_count = hp.population_size - 1;
    let mut sel_rng = substream(hp.seed, generation, SELECTION_STREAM);
    let parents: Vec<Individual> = (0..offspring_count)
        .map(|_| tournament_select(population, hp.tournament_size, &mut sel_rng).cloned())
        .collect::<Result<_>>()?;

    let mut offspring = Vec::with_capacity(offspring_count);
    for (pair, chunk) in parents.chunks(2).enumerate() {
        let mut rng = substream(hp.seed, generation, pair as u64);
        match chunk {
            [a, b] if rng.gen_bool(hp.crossover_prob) => {
                let (c1, c2) = single_point_crossover(a, b, &mut rng);
                offspring.push(c1);
                offspring.push(c2);
            }
            _ => offspring.extend(chunk.iter().cloned()),
        }
    }

    let mut next = Vec::with_capacity(hp.population_size);
    next.push(elite);
    for (i, child) in offspring.into_iter().enumerate() {
        let mut rng = substream(hp.seed, generation, MUTATION_STREAM + i as u64);
        if rng.gen_bool(hp.mutation_prob) {
            next.push(gaussian_mutate(&child, spec, hp, &mut rng));
        } else {
            next.push(child);
        }
    }
    Ok(next)
}

/// Candidate offsets for the objective search.
pub const R_GRID: [f64; 7] = [1.0, 2.0, 5.0, 10.0, 13.0, 17.0, 20.0];

/// Candidate exponents for the objective search: 0.6 to 1.6 in steps of 0.1.
pub fn n_grid() -> Vec<f64> {
    (6..=16).map(|i| i as f64 / 10.0).collect()
}

/// Result of a search over objective hyper-parameters.
#[derive(Debug, Clone)]
pub struct ObjectiveChoice {
    pub r: f64,
    pub n: f64,
    pub best: Individual,
}

/// Trains the tuner for each `(r, n)` in grid order and returns the first
/// whose best configuration has RMSE and ratio at or below the thresholds.
pub fn search_objective(
    clean: &[VesselTrack],
    spec: &GeneSpec,
    base: &GaHyperParams,
    rmse_threshold_m: f64,
    ratio_threshold: f64,
    r_grid: &[f64],
    n_grid: &[f64],
) -> Result<Option<ObjectiveChoice>> {
    for &r in r_grid {
        for &n in n_grid {
            let hp = GaHyperParams { r, n, ..base.clone() };
            let outcome = run_ga(clean, spec, &hp)?;
            let m = outcome.best.metrics.expect("evaluated");
            if m.rmse_m <= rmse_threshold_m && m.ratio <= ratio_threshold {
                return Ok(Some(ObjectiveChoice { r, n, best: outcome.best }));
            }
        }
    }
    Ok(None)
}
