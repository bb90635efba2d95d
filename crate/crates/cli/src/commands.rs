//! Experiment commands. Each returns plain rows; rendering to CSV or JSON is
//! separate so the library and the binary share one code path.

use std::path::PathBuf;

use hiding::darwinism::{coefficient_sweep, diamond_bound_rhs, DarwinismParams};
use hiding::states::{random_density_matrix, random_gue_operator, random_state_pair, werner_hiding_pair};
use hiding::{
    error_probability, evaluate_game, hiding_ratio, local_hiding_bound, BipartiteOperator, GameReport, QuantumXorGame,
    RatioReport, RngSeed, SeeSawConfig,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::files::{parse_game_file, parse_operator_file};

/// Restart budget used to re-examine an instance whose ratio exceeds the bound.
pub const ESCALATED_RESTARTS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// Normalized symmetric vs antisymmetric Werner states, `n_a = n_b = d`.
    Werner,
    /// GUE sample normalized to unit trace norm.
    Gue,
    /// Equal-prior difference of two Hilbert–Schmidt random states.
    Induced,
}

impl Generator {
    pub fn name(self) -> &'static str {
        match self {
            Generator::Werner => "werner",
            Generator::Gue => "gue",
            Generator::Induced => "induced",
        }
    }

    fn code(self) -> u64 {
        match self {
            Generator::Werner => 1,
            Generator::Gue => 2,
            Generator::Induced => 3,
        }
    }

    /// Draws one operator; Werner ignores the seed.
    pub fn generate(self, n_a: usize, n_b: usize, seed: RngSeed) -> Result<BipartiteOperator> {
        let mut rng = seed.rng();
        Ok(match self {
            Generator::Werner => {
                if n_a != n_b {
                    return Err(CliError::Validation(format!("werner generator needs n_a = n_b, got {n_a}x{n_b}")));
                }
                werner_hiding_pair(n_a)?.discrimination_operator()
            }
            Generator::Gue => random_gue_operator(n_a, n_b, &mut rng)?,
            Generator::Induced => random_state_pair(n_a, n_b, &mut rng)?.discrimination_operator(),
        })
    }
}

fn check_budget(cfg: &SeeSawConfig) -> Result<()> {
    cfg.validate().map_err(|e| CliError::Validation(e.to_string()))
}

/// [`hiding_ratio`], re-run with [`ESCALATED_RESTARTS`] when the first pass
/// reports a violation. The escalated report is returned in that case.
pub fn ratio_with_escalation(z: &BipartiteOperator, cfg: &SeeSawConfig) -> Result<RatioReport> {
    let first = hiding_ratio(z, cfg)?;
    if first.satisfied || cfg.restarts >= ESCALATED_RESTARTS {
        return Ok(first);
    }
    Ok(hiding_ratio(z, &cfg.with_restarts(ESCALATED_RESTARTS))?)
}

pub fn game_with_escalation(game: &QuantumXorGame, cfg: &SeeSawConfig) -> Result<GameReport> {
    let first = evaluate_game(game, cfg)?;
    if first.satisfied || cfg.restarts >= ESCALATED_RESTARTS {
        return Ok(first);
    }
    Ok(evaluate_game(game, &cfg.with_restarts(ESCALATED_RESTARTS))?)
}

// ---------------------------------------------------------------- ratio

#[derive(Debug, Clone)]
pub enum RatioSource {
    File(PathBuf),
    Generated { generator: Generator, n_a: usize, n_b: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioOutput {
    pub source: String,
    pub n_a: usize,
    pub n_b: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub trace_norm: f64,
    pub eps_estimate: f64,
    pub is_lower_bound: bool,
    pub iterations_used: usize,
    pub converged: bool,
    pub best_restart: usize,
    pub ratio: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub margin: f64,
    /// Error probability of the two-outcome local measurement built from the
    /// witnesses; present when the operator has trace norm at most one.
    pub local_error_probability: Option<f64>,
    /// `(1 − 1/(2√2·min(n_a, n_b)))/2`, the worst case allowed for
    /// orthogonal states.
    pub local_error_probability_cap: f64,
    pub warning: Option<String>,
}

pub fn cmd_ratio(source: &RatioSource, cfg: &SeeSawConfig) -> Result<RatioOutput> {
    check_budget(cfg)?;
    let (z, label, warning) = match source {
        RatioSource::File(path) => {
            let loaded = parse_operator_file(path)?;
            let warning = loaded.warning();
            (loaded.operator, path.display().to_string(), warning)
        }
        RatioSource::Generated { generator, n_a, n_b } => {
            let z = generator.generate(*n_a, *n_b, cfg.seed.derive(&[generator.code()]))?;
            (z, format!("{}:{}x{}", generator.name(), n_a, n_b), None)
        }
    };
    if z.is_zero() {
        return Err(CliError::Degenerate("operator is zero; the hiding ratio is undefined".into()));
    }
    let report = ratio_with_escalation(&z, cfg)?;
    let eps = &report.eps_estimate;
    let local_error_probability =
        if report.trace_norm <= 1.0 + 1e-9 { error_probability(eps.value).ok() } else { None };
    Ok(RatioOutput {
        source: label,
        n_a: z.n_a(),
        n_b: z.n_b(),
        seed: cfg.seed.0,
        restarts: eps.restarts,
        max_iters: cfg.max_iters,
        rel_tol: cfg.rel_tol,
        trace_norm: report.trace_norm,
        eps_estimate: eps.value,
        is_lower_bound: eps.is_lower_bound,
        iterations_used: eps.iterations_used,
        converged: eps.converged,
        best_restart: eps.best_restart,
        ratio: report.ratio,
        bound: report.bound,
        satisfied: report.satisfied,
        margin: report.margin,
        local_error_probability,
        local_error_probability_cap: 0.5 * (1.0 - 1.0 / local_hiding_bound(z.n_a(), z.n_b())),
        warning,
    })
}

// ---------------------------------------------------------------- scaling

pub const SCALING_HEADER: [&str; 11] = [
    "seed",
    "n_a",
    "n_b",
    "generator",
    "trace_norm",
    "eps_estimate",
    "restarts",
    "converged",
    "ratio",
    "bound",
    "margin",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub seed: u64,
    pub n_a: usize,
    pub n_b: usize,
    pub generator: &'static str,
    pub trace_norm: f64,
    pub eps_estimate: f64,
    pub restarts: usize,
    pub converged: bool,
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
}

impl ScalingRow {
    pub fn satisfied(&self) -> bool {
        self.ratio <= self.bound + hiding::hiding::BOUND_TOL
    }
}

#[derive(Debug, Clone)]
pub struct ScalingConfig {
    pub generator: Generator,
    pub min_dim: usize,
    pub max_dim: usize,
    /// All `(n_a, n_b)` pairs in the range instead of square systems only.
    pub rectangular: bool,
    /// Instances per dimension pair; Werner emits one row per `d` when positive.
    pub samples: usize,
    pub seesaw: SeeSawConfig,
}

impl ScalingConfig {
    pub fn validate(&self) -> Result<()> {
        check_budget(&self.seesaw)?;
        if self.min_dim == 0 {
            return Err(CliError::Validation("--min-dim must be at least 1".into()));
        }
        if self.generator == Generator::Werner {
            if self.min_dim < 2 {
                return Err(CliError::Validation("werner sweep needs --min-dim >= 2".into()));
            }
            if self.rectangular {
                return Err(CliError::Validation("werner sweep is square only".into()));
            }
        }
        Ok(())
    }

    fn instances(&self) -> Vec<(usize, usize, usize)> {
        let dims: Vec<(usize, usize)> = if self.rectangular {
            (self.min_dim..=self.max_dim).flat_map(|a| (self.min_dim..=self.max_dim).map(move |b| (a, b))).collect()
        } else {
            (self.min_dim..=self.max_dim).map(|d| (d, d)).collect()
        };
        let per_dim = match self.generator {
            Generator::Werner => self.samples.min(1),
            _ => self.samples,
        };
        dims.into_iter().flat_map(|(a, b)| (0..per_dim).map(move |k| (a, b, k))).collect()
    }
}

/// One row per instance, ordered by dimensions then sample index.
pub fn cmd_scaling(config: &ScalingConfig) -> Result<Vec<ScalingRow>> {
    config.validate()?;
    let g = config.generator;
    config
        .instances()
        .into_par_iter()
        .map(|(n_a, n_b, k)| {
            let seed = config.seesaw.seed.derive(&[g.code(), n_a as u64, n_b as u64, k as u64]);
            let z = g.generate(n_a, n_b, seed)?;
            let report = ratio_with_escalation(&z, &config.seesaw.with_seed(seed))?;
            Ok(ScalingRow {
                seed: seed.0,
                n_a,
                n_b,
                generator: g.name(),
                trace_norm: report.trace_norm,
                eps_estimate: report.eps_estimate.value,
                restarts: report.eps_estimate.restarts,
                converged: report.eps_estimate.converged,
                ratio: report.ratio,
                bound: report.bound,
                margin: report.margin,
            })
        })
        .collect()
}

// ---------------------------------------------------------------- xor

#[derive(Debug, Clone)]
pub enum XorSource {
    File(PathBuf),
    Werner(usize),
    Random { questions: usize, n_a: usize, n_b: usize, samples: usize },
}

pub const XOR_HEADER: [&str; 11] = [
    "sample",
    "seed",
    "n_a",
    "n_b",
    "questions",
    "beta_all",
    "beta_product",
    "restarts",
    "ratio",
    "bound",
    "satisfied",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameRow {
    pub sample: usize,
    pub seed: u64,
    pub n_a: usize,
    pub n_b: usize,
    pub questions: usize,
    pub beta_all: f64,
    pub beta_product: f64,
    pub restarts: usize,
    /// Empty when the game operator vanishes.
    pub ratio: Option<f64>,
    pub bound: f64,
    pub satisfied: bool,
}

/// Game whose two questions are the Werner hiding pair, with signs `(+1, −1)`.
pub fn werner_game(d: usize) -> Result<QuantumXorGame> {
    let w = werner_hiding_pair(d)?;
    Ok(QuantumXorGame::new(d, d, vec![w.rho().clone(), w.sigma().clone()], vec![1, -1], vec![0.5, 0.5])?)
}

/// `questions` Hilbert–Schmidt random states, uniform probabilities and
/// independent uniformly random signs.
pub fn random_game(questions: usize, n_a: usize, n_b: usize, seed: RngSeed) -> Result<QuantumXorGame> {
    if questions == 0 {
        return Err(CliError::Validation("--questions must be at least 1".into()));
    }
    let mut rng = seed.rng();
    let n = n_a * n_b;
    let mut states = Vec::with_capacity(questions);
    let mut signs = Vec::with_capacity(questions);
    for _ in 0..questions {
        states.push(random_density_matrix(n, n, &mut rng)?);
        signs.push(if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    let probs = vec![1.0 / questions as f64; questions];
    Ok(QuantumXorGame::new(n_a, n_b, states, signs, probs)?)
}

fn game_row(sample: usize, seed: RngSeed, game: &QuantumXorGame, cfg: &SeeSawConfig) -> Result<GameRow> {
    let report = game_with_escalation(game, &cfg.with_seed(seed))?;
    let (n_a, n_b) = game.dims();
    Ok(GameRow {
        sample,
        seed: seed.0,
        n_a,
        n_b,
        questions: game.len(),
        beta_all: report.beta_all,
        beta_product: report.beta_product.value,
        restarts: report.beta_product.restarts,
        ratio: report.ratio,
        bound: report.bound,
        satisfied: report.satisfied,
    })
}

pub fn cmd_xor(source: &XorSource, cfg: &SeeSawConfig) -> Result<Vec<GameRow>> {
    check_budget(cfg)?;
    match source {
        XorSource::File(path) => {
            let game = parse_game_file(path)?;
            Ok(vec![game_row(0, cfg.seed, &game, cfg)?])
        }
        XorSource::Werner(d) => Ok(vec![game_row(0, cfg.seed, &werner_game(*d)?, cfg)?]),
        XorSource::Random { questions, n_a, n_b, samples } => {
            if *n_a == 0 || *n_b == 0 {
                return Err(CliError::Validation("--n-a and --n-b must be positive".into()));
            }
            if *questions == 0 {
                return Err(CliError::Validation("--questions must be at least 1".into()));
            }
            (0..*samples)
                .into_par_iter()
                .map(|k| {
                    let seed = cfg.seed.derive(&[4, *n_a as u64, *n_b as u64, k as u64]);
                    let game = random_game(*questions, *n_a, *n_b, seed)?;
                    game_row(k, seed, &game, cfg)
                })
                .collect()
        }
    }
}

// ---------------------------------------------------------------- darwinism

pub const DARWINISM_HEADER: [&str; 6] =
    ["d_a", "d_r", "omega_new", "omega_ranard", "improvement_factor", "diamond_bound"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DarwinismRow {
    pub d_a: usize,
    pub d_r: usize,
    pub omega_new: f64,
    pub omega_ranard: f64,
    pub improvement_factor: f64,
    pub diamond_bound: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct DarwinismConfig {
    pub d_a_min: usize,
    pub d_a_max: usize,
    pub d_r_min: usize,
    pub d_r_max: usize,
    pub r_size: usize,
    pub q_size: usize,
}

pub fn cmd_darwinism(config: &DarwinismConfig) -> Result<Vec<DarwinismRow>> {
    let c = config;
    if c.d_a_min <= c.d_a_max && c.d_a_min < 2 {
        return Err(CliError::Validation(format!("d_a range {}..={} includes d_a < 2", c.d_a_min, c.d_a_max)));
    }
    if c.d_r_min <= c.d_r_max && c.d_r_min < 1 {
        return Err(CliError::Validation("d_r range includes 0".into()));
    }
    if c.r_size == 0 || c.q_size == 0 {
        return Err(CliError::Validation("--r and --q must be positive".into()));
    }
    coefficient_sweep(c.d_a_min..=c.d_a_max, c.d_r_min..=c.d_r_max)?
        .into_iter()
        .map(|row| {
            let diamond_bound =
                diamond_bound_rhs(&DarwinismParams { d_a: row.d_a, d_r: row.d_r, r_size: c.r_size, q_size: c.q_size })?;
            Ok(DarwinismRow {
                d_a: row.d_a,
                d_r: row.d_r,
                omega_new: row.omega_new,
                omega_ranard: row.omega_ranard,
                improvement_factor: row.improvement_factor,
                diamond_bound,
            })
        })
        .collect()
}

// ---------------------------------------------------------------- rendering

/// CSV with a fixed header line; an empty `rows` gives the header alone.
pub fn to_csv<T: Serialize>(header: &[&str], rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
