//! Bit-string genetic search over `(C, gamma, epsilon)` minimising k-fold CV MSE.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, stream_rng};
use crate::svr::{self, SupervisedSet, SvrParams};
use crate::timeseries::ScalingState;

/// Spacing of a parameter range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange {
    pub low: f64,
    pub high: f64,
    pub scale: RangeScale,
}

impl ParamRange {
    pub const fn linear(low: f64, high: f64) -> Self {
        Self {
            low,
            high,
            scale: RangeScale::Linear,
        }
    }

    pub const fn log(low: f64, high: f64) -> Self {
        Self {
            low,
            high,
            scale: RangeScale::Log,
        }
    }

    /// Maps `frac` in `[0, 1]` onto the range.
    pub fn at(&self, frac: f64) -> f64 {
        match self.scale {
            RangeScale::Linear => self.low + frac * (self.high - self.low),
            RangeScale::Log => {
                let (l, h) = (self.low.ln(), self.high.ln());
                (l + frac * (h - l)).exp()
            }
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !(self.low < self.high) || !self.low.is_finite() || !self.high.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "{name} range requires low < high"
            )));
        }
        if self.scale == RangeScale::Log && self.low <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "{name} log range must be positive"
            )));
        }
        Ok(())
    }
}

/// Fold assignment for cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoldMode {
    /// Seeded shuffle, then contiguous chunks of the shuffled order.
    #[default]
    Random,
    /// Time-ordered contiguous blocks.
    Contiguous,
}

/// How a parameter's bit field maps to its integer grid index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenomeEncoding {
    /// Reflected Gray code: adjacent grid points differ in one bit.
    #[default]
    Gray,
    /// Plain MSB-first binary.
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub bits_per_param: u32,
    pub encoding: GenomeEncoding,
    pub c_range: ParamRange,
    pub gamma_range: ParamRange,
    pub epsilon_range: ParamRange,
    pub folds: usize,
    pub fold_mode: FoldMode,
    pub svr_tol: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 20,
            generations: 200,
            crossover_prob: 0.8,
            mutation_prob: 0.05,
            bits_per_param: 16,
            encoding: GenomeEncoding::default(),
            c_range: ParamRange::log(0.01, 100.0),
            gamma_range: ParamRange::log(0.01, 100.0),
            epsilon_range: ParamRange::linear(0.001, 1.0),
            folds: 5,
            fold_mode: FoldMode::Random,
            svr_tol: svr::DEFAULT_TOL,
            seed: 0x5EED,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.population < 2 {
            return bad("population must be at least 2");
        }
        if self.generations < 1 {
            return bad("generations must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) || !(0.0..=1.0).contains(&self.mutation_prob)
        {
            return bad("crossover and mutation probabilities must lie in [0, 1]");
        }
        if !(1..=52).contains(&self.bits_per_param) {
            return bad("bits_per_param must lie in 1..=52");
        }
        if self.folds < 2 {
            return bad("folds must be at least 2");
        }
        if !(self.svr_tol > 0.0) {
            return bad("svr_tol must be positive");
        }
        self.c_range.validate("C")?;
        self.gamma_range.validate("gamma")?;
        self.epsilon_range.validate("epsilon")
    }

    pub fn genome_len(&self) -> usize {
        3 * self.bits_per_param as usize
    }

    /// Distance between adjacent decodable values of each parameter near `params`.
    pub fn grid_steps(&self) -> [f64; 3] {
        let levels = ((1u64 << self.bits_per_param) - 1) as f64;
        [self.c_range, self.gamma_range, self.epsilon_range].map(|r| match r.scale {
            RangeScale::Linear => (r.high - r.low) / levels,
            RangeScale::Log => (r.high.ln() - r.low.ln()) / levels,
        })
    }
}

/// Fixed-length bit string: C bits, then gamma bits, then epsilon bits (MSB first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Genome {
    pub bits: Vec<bool>,
}

impl Genome {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    fn random(len: usize, rng: &mut impl Rng) -> Self {
        Self {
            bits: (0..len).map(|_| rng.random_bool(0.5)).collect(),
        }
    }

    fn field(&self, idx: usize, width: usize, encoding: GenomeEncoding) -> u64 {
        let bits = &self.bits[idx * width..(idx + 1) * width];
        match encoding {
            GenomeEncoding::Binary => bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64),
            // binary bit i is the xor of Gray bits 0..=i
            GenomeEncoding::Gray => {
                bits.iter()
                    .fold((0u64, false), |(acc, prev), &g| {
                        let b = prev ^ g;
                        ((acc << 1) | b as u64, b)
                    })
                    .0
            }
        }
    }

    /// Genome whose fields decode to the given grid indices.
    pub fn from_indices(indices: [u64; 3], config: &GaConfig) -> Self {
        let w = config.bits_per_param as usize;
        let mut bits = Vec::with_capacity(3 * w);
        for v in indices {
            let code = match config.encoding {
                GenomeEncoding::Binary => v,
                GenomeEncoding::Gray => v ^ (v >> 1),
            };
            bits.extend((0..w).rev().map(|i| (code >> i) & 1 == 1));
        }
        Self { bits }
    }
}

/// Integer field values of a genome, one per parameter.
pub fn decode_indices(genome: &Genome, config: &GaConfig) -> [u64; 3] {
    let w = config.bits_per_param as usize;
    let e = config.encoding;
    [
        genome.field(0, w, e),
        genome.field(1, w, e),
        genome.field(2, w, e),
    ]
}

pub fn decode(genome: &Genome, config: &GaConfig) -> SvrParams {
    assert_eq!(
        genome.bits.len(),
        config.genome_len(),
        "genome length does not match config"
    );
    let levels = ((1u64 << config.bits_per_param) - 1) as f64;
    let [ci, gi, ei] = decode_indices(genome, config);
    SvrParams {
        c_penalty: config.c_range.at(ci as f64 / levels),
        gamma: config.gamma_range.at(gi as f64 / levels),
        epsilon: config.epsilon_range.at(ei as f64 / levels),
    }
}

/// Fold membership lists for `n` samples.
pub fn fold_indices(n: usize, k: usize, mode: FoldMode, seed: u64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    if mode == FoldMode::Random {
        order.shuffle(&mut stream_rng(seed, 0xF01D));
    }
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        folds.push(order[start..start + size].to_vec());
        start += size;
    }
    folds
}

/// Cross-validation settings beyond the fold count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvOptions {
    pub folds: usize,
    pub mode: FoldMode,
    pub seed: u64,
    pub tol: f64,
}

/// Mean over folds of the out-of-fold MSE, in scaled target units.
pub fn cv_fitness(data: &SupervisedSet, params: SvrParams, k: usize, seed: u64) -> Result<f64> {
    cv_fitness_with(
        data,
        params,
        CvOptions {
            folds: k,
            mode: FoldMode::Random,
            seed,
            tol: svr::DEFAULT_TOL,
        },
    )
}

pub fn cv_fitness_with(data: &SupervisedSet, params: SvrParams, opts: CvOptions) -> Result<f64> {
    let n = data.len();
    if opts.folds < 2 {
        return Err(Error::InvalidArgument(
            "cross-validation needs at least 2 folds".into(),
        ));
    }
    if n < opts.folds {
        return Err(Error::TooShort {
            needed: opts.folds,
            got: n,
        });
    }
    let flat: Vec<f64> = data.inputs.iter().flatten().copied().collect();
    let input_scaling = ScalingState::fit(&flat)?;
    let target_scaling = ScalingState::fit(&data.targets)?;
    let folds = fold_indices(n, opts.folds, opts.mode, opts.seed);

    let mut total = 0.0;
    for (f, held_out) in folds.iter().enumerate() {
        let train_idx: Vec<usize> = folds
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != f)
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        let train = data.subset(&train_idx);
        let model = svr::train_svr_scaled(
            &train,
            params,
            input_scaling,
            target_scaling,
            opts.tol,
            svr::default_max_iter(train.len()),
        )?;
        let mut sse = 0.0;
        for &i in held_out {
            let pred = model.decision_scaled(&model.scale_input(&data.inputs[i]));
            let err = pred - target_scaling.apply(data.targets[i]);
            sse += err * err;
        }
        total += sse / held_out.len() as f64;
    }
    Ok(total / opts.folds as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub best_params: SvrParams,
    pub best_fitness: f64,
    pub best_genome: Genome,
    /// Best-so-far fitness after each generation.
    pub history: Vec<f64>,
}

/// Runs the GA against the SVR cross-validation objective.
pub fn evolve(data: &SupervisedSet, config: &GaConfig) -> Result<GaResult> {
    config.validate()?;
    if data.len() < config.folds {
        return Err(Error::TooShort {
            needed: config.folds,
            got: data.len(),
        });
    }
    let opts = CvOptions {
        folds: config.folds,
        mode: config.fold_mode,
        seed: derive_seed(config.seed, 0xC0_F01D),
        tol: config.svr_tol,
    };
    // a failing evaluation only happens on degenerate data; rank it last
    evolve_with(config, |p| {
        cv_fitness_with(data, *p, opts).unwrap_or(f64::INFINITY)
    })
}

/// Runs the GA against an arbitrary objective over decoded parameters.
///
/// The objective must be a pure function; genomes are evaluated once and cached,
/// and evaluation of a generation may run in parallel without affecting results.
pub fn evolve_with<F>(config: &GaConfig, fitness: F) -> Result<GaResult>
where
    F: Fn(&SvrParams) -> f64 + Sync,
{
    config.validate()?;
    let len = config.genome_len();
    let mut rng = stream_rng(config.seed, 0x6A);
    let mut population: Vec<Genome> = (0..config.population)
        .map(|_| Genome::random(len, &mut rng))
        .collect();
    let mut cache: HashMap<Genome, f64> = HashMap::new();

    let mut best: Option<(Genome, f64)> = None;
    let mut history = Vec::with_capacity(config.generations);

    for gen in 0..config.generations {
        let fresh: Vec<&Genome> = {
            let mut seen = std::collections::HashSet::new();
            population
                .iter()
                .filter(|g| !cache.contains_key(*g) && seen.insert(*g))
                .collect()
        };
        let scores: Vec<f64> = fresh
            .par_iter()
            .map(|g| {
                let v = fitness(&decode(g, config));
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            })
            .collect();
        for (g, s) in fresh.into_iter().zip(scores) {
            cache.insert(g.clone(), s);
        }
        let fit: Vec<f64> = population.iter().map(|g| cache[g]).collect();

        let (gen_best, gen_best_fit) =
            fit.iter()
                .enumerate()
                .fold((0usize, f64::INFINITY), |(bi, bf), (i, &f)| {
                    if f < bf {
                        (i, f)
                    } else {
                        (bi, bf)
                    }
                });
        if best.as_ref().is_none_or(|(_, bf)| gen_best_fit < *bf) {
            best = Some((population[gen_best].clone(), gen_best_fit));
        }
        history.push(best.as_ref().map_or(f64::INFINITY, |(_, f)| *f));

        if gen + 1 == config.generations {
            break;
        }
        population = breed(
            &population,
            &fit,
            best.as_ref().map(|(g, _)| g),
            config,
            &mut rng,
        );
    }

    let (genome, best_fitness) = best.expect("at least one generation is evaluated");
    Ok(GaResult {
        best_params: decode(&genome, config),
        best_fitness,
        best_genome: genome,
        history,
    })
}

fn breed(
    population: &[Genome],
    fit: &[f64],
    elite: Option<&Genome>,
    config: &GaConfig,
    rng: &mut impl Rng,
) -> Vec<Genome> {
    // smaller MSE -> larger weight
    let weights: Vec<f64> = fit
        .iter()
        .map(|&f| {
            if f.is_finite() {
                1.0 / (1.0 + f.max(0.0))
            } else {
                0.0
            }
        })
        .collect();
    let total: f64 = weights.iter().sum();
    let pick = |rng: &mut dyn rand::RngCore| -> usize {
        if !(total > 0.0) {
            return rng.random_range(0..population.len());
        }
        let mut r = rng.random::<f64>() * total;
        for (i, w) in weights.iter().enumerate() {
            r -= w;
            if r < 0.0 {
                return i;
            }
        }
        weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    };

    let len = config.genome_len();
    let mut next = Vec::with_capacity(population.len());
    if let Some(e) = elite {
        next.push(e.clone());
    }
    while next.len() < population.len() {
        let mut a = population[pick(rng)].clone();
        let mut b = population[pick(rng)].clone();
        if rng.random_bool(config.crossover_prob) && len > 1 {
            let cut = rng.random_range(1..len);
            for i in cut..len {
                std::mem::swap(&mut a.bits[i], &mut b.bits[i]);
            }
        }
        for child in [&mut a, &mut b] {
            for bit in child.bits.iter_mut() {
                if rng.random_bool(config.mutation_prob) {
                    *bit = !*bit;
                }
            }
        }
        next.push(a);
        if next.len() < population.len() {
            next.push(b);
        }
    }
    next
}
