//! Epsilon (injective) tensor norm of a bipartite operator by see-saw
//! maximization of `|tr((f⊗g)·z)|` over local contractions `f`, `g`.
//!
//! With `g` fixed the best `f` is available in closed form: writing
//! `tr((f⊗g)·z) = tr(f·M_A)` with `M_A = tr_B(z·(1⊗g))`, the optimum is the
//! sign of `M_A` (selfadjoint contractions) or the adjoint polar factor of
//! `M_A` (all contractions), and the optimal value is `‖M_A‖₁`. Alternating
//! the two sides therefore never decreases the objective. Every value returned
//! is attained by explicit witnesses, so it is a lower bound on the norm.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_sign, hermitian_sign_with_norm, operator_norm, optimal_contraction_with_norm, BipartiteOperator,
    ComplexMatrix, HermitianMatrix, C64,
};
use crate::states::{gue_hermitian, haar_unitary, RngSeed};

/// Which unit ball the local witnesses range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    /// Selfadjoint contractions; requires a Hermitian operator.
    Hermitian,
    /// Arbitrary complex contractions.
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeeSawConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: RngSeed,
    pub field: Field,
}

impl Default for SeeSawConfig {
    fn default() -> Self {
        SeeSawConfig { restarts: 32, max_iters: 500, rel_tol: 1e-10, seed: RngSeed(0), field: Field::Hermitian }
    }
}

impl SeeSawConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: RngSeed) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_field(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Domain("max_iters must be positive".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Domain(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        Ok(())
    }
}

/// A norm value together with the contractions that attain it.
#[derive(Debug, Clone)]
pub struct NormEstimate {
    pub value: f64,
    /// Always `true`: the value is attained by `best_f ⊗ best_g`.
    pub is_lower_bound: bool,
    /// Full see-saw iterations (one update of each side) of the winning run.
    pub iterations_used: usize,
    pub converged: bool,
    pub best_f: ComplexMatrix,
    pub best_g: ComplexMatrix,
    /// Objective after every half-step of the winning run.
    pub history: Vec<f64>,
    /// Number of starts tried.
    pub restarts: usize,
    /// Index of the winning start (0 is the identity start).
    pub best_restart: usize,
}

impl NormEstimate {
    fn trivial(value: f64, f: ComplexMatrix, g: ComplexMatrix) -> Self {
        NormEstimate {
            value,
            is_lower_bound: true,
            iterations_used: 1,
            converged: true,
            best_f: f,
            best_g: g,
            history: vec![value],
            restarts: 1,
            best_restart: 0,
        }
    }

    /// `|tr((best_f ⊗ best_g)·z)|`, recomputed from the witnesses.
    pub fn witness_value(&self, z: &BipartiteOperator) -> f64 {
        z.pairing(&self.best_f, &self.best_g).norm()
    }
}

/// Where a see-saw run starts.
#[derive(Debug, Clone)]
pub enum Start {
    /// Contraction on A; the first update is on B.
    OnA(ComplexMatrix),
    /// Contraction on B; the first update is on A.
    OnB(ComplexMatrix),
}

/// `M_A = tr_B(z·(1⊗g))`, so that `tr((f⊗g)·z) = tr(f·M_A)`.
pub fn reduce_onto_a(z: &BipartiteOperator, g: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (z.n_a(), z.n_b());
    let m = z.matrix();
    let mut out = ComplexMatrix::zeros(na, na);
    for x in 0..na {
        for y in 0..na {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..nb {
                for b2 in 0..nb {
                    acc += g[(b, b2)] * m[(x * nb + b2, y * nb + b)];
                }
            }
            out[(x, y)] = acc;
        }
    }
    out
}

/// `M_B = tr_A(z·(f⊗1))`, so that `tr((f⊗g)·z) = tr(g·M_B)`.
pub fn reduce_onto_b(z: &BipartiteOperator, f: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (z.n_a(), z.n_b());
    let m = z.matrix();
    let mut out = ComplexMatrix::zeros(nb, nb);
    for x in 0..nb {
        for y in 0..nb {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..na {
                for a2 in 0..na {
                    acc += f[(a, a2)] * m[(a2 * nb + x, a * nb + y)];
                }
            }
            out[(x, y)] = acc;
        }
    }
    out
}

fn best_response(reduced: ComplexMatrix, field: Field) -> Result<(ComplexMatrix, f64)> {
    match field {
        Field::Hermitian => {
            let (s, v) = hermitian_sign_with_norm(&HermitianMatrix::new(reduced)?);
            Ok((s.into_inner(), v))
        }
        Field::Complex => optimal_contraction_with_norm(&reduced),
    }
}

fn check_field(z: &BipartiteOperator, field: Field) -> Result<()> {
    if field == Field::Hermitian && !z.is_hermitian() {
        return Err(Error::Contract("hermitian field requires a Hermitian operator".into()));
    }
    Ok(())
}

fn check_start(m: &ComplexMatrix, dim: usize, field: Field) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Dimension(format!(
            "initial contraction is {}x{}, expected {dim}x{dim}",
            m.nrows(),
            m.ncols()
        )));
    }
    if field == Field::Hermitian && crate::linalg::max_asymmetry(m) > 1e-9 {
        return Err(Error::Contract("initial contraction must be selfadjoint".into()));
    }
    let op = operator_norm(m);
    if op > 1.0 + 1e-9 {
        return Err(Error::Contract(format!("initial contraction has operator norm {op} > 1")));
    }
    Ok(())
}

/// One see-saw run from `g0` on subsystem B.
pub fn seesaw_run(z: &BipartiteOperator, g0: &ComplexMatrix, config: &SeeSawConfig) -> Result<NormEstimate> {
    seesaw_from(z, Start::OnB(g0.clone()), config)
}

/// One see-saw run from an explicit start on either side.
pub fn seesaw_from(z: &BipartiteOperator, start: Start, config: &SeeSawConfig) -> Result<NormEstimate> {
    config.validate()?;
    check_field(z, config.field)?;
    let (na, nb) = (z.n_a(), z.n_b());
    match &start {
        Start::OnA(f0) => check_start(f0, na, config.field)?,
        Start::OnB(g0) => check_start(g0, nb, config.field)?,
    }
    if z.is_zero() {
        return Ok(NormEstimate::trivial(0.0, ComplexMatrix::identity(na, na), ComplexMatrix::identity(nb, nb)));
    }

    let start_on_b = matches!(start, Start::OnB(_));
    let (mut f, mut g) = match start {
        Start::OnA(f0) => (f0, ComplexMatrix::identity(nb, nb)),
        Start::OnB(g0) => (ComplexMatrix::identity(na, na), g0),
    };
    let mut history = Vec::with_capacity(2 * config.max_iters.min(64));
    let mut converged = false;
    let mut iterations = 0;
    let mut previous = f64::NEG_INFINITY;

    for iter in 1..=config.max_iters {
        iterations = iter;
        if start_on_b {
            let (nf, v) = best_response(reduce_onto_a(z, &g), config.field)?;
            f = nf;
            history.push(v);
            let (ng, v) = best_response(reduce_onto_b(z, &f), config.field)?;
            g = ng;
            history.push(v);
        } else {
            let (ng, v) = best_response(reduce_onto_b(z, &f), config.field)?;
            g = ng;
            history.push(v);
            let (nf, v) = best_response(reduce_onto_a(z, &g), config.field)?;
            f = nf;
            history.push(v);
        }
        let current = *history.last().expect("pushed above");
        if current - previous <= config.rel_tol * current.abs().max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        previous = current;
    }

    Ok(NormEstimate {
        value: *history.last().expect("max_iters >= 1"),
        is_lower_bound: true,
        iterations_used: iterations,
        converged,
        best_f: f,
        best_g: g,
        history,
        restarts: 1,
        best_restart: 0,
    })
}

/// Initial contraction on B for restart `index`: the identity for index 0,
/// otherwise the sign of a GUE sample (Hermitian field) or a Haar unitary
/// (complex field) drawn from stream `index` of the seed.
pub fn initial_contraction(nb: usize, index: usize, config: &SeeSawConfig) -> Result<ComplexMatrix> {
    if index == 0 {
        return Ok(ComplexMatrix::identity(nb, nb));
    }
    let mut rng = config.seed.stream(index as u64);
    match config.field {
        Field::Hermitian => Ok(hermitian_sign(&gue_hermitian(nb, &mut rng)?).into_inner()),
        Field::Complex => haar_unitary(nb, &mut rng),
    }
}

/// Multistart see-saw estimate of the epsilon tensor norm.
///
/// Runs `config.restarts` starts (identity first) and keeps the largest value,
/// preferring the lowest restart index on ties. The result does not depend on
/// thread scheduling.
pub fn epsilon_norm(z: &BipartiteOperator, config: &SeeSawConfig) -> Result<NormEstimate> {
    config.validate()?;
    check_field(z, config.field)?;
    let (na, nb) = (z.n_a(), z.n_b());
    if z.is_zero() {
        return Ok(NormEstimate::trivial(0.0, ComplexMatrix::identity(na, na), ComplexMatrix::identity(nb, nb)));
    }
    if na == 1 || nb == 1 {
        let (w, value) = best_response(z.matrix().clone(), config.field)?;
        let one = ComplexMatrix::identity(1, 1);
        let (f, g) = if na == 1 { (one, w) } else { (w, one) };
        return Ok(NormEstimate::trivial(value, f, g));
    }

    let runs: Vec<NormEstimate> = (0..config.restarts)
        .into_par_iter()
        .map(|k| {
            let g0 = initial_contraction(nb, k, config)?;
            let mut est = seesaw_run(z, &g0, config)?;
            est.best_restart = k;
            Ok(est)
        })
        .collect::<Result<_>>()?;

    let mut best =
        runs.into_iter().reduce(|best, next| if next.value > best.value { next } else { best }).expect("restarts >= 1");
    best.restarts = config.restarts;
    Ok(best)
}

/// Lower bound on the local-operations distinguishability norm: the Hermitian
/// epsilon norm, whose witnesses `f`, `g` define the two-outcome local
/// measurement `(1 ± f⊗g)/2`.
pub fn lo_norm_lower(z: &BipartiteOperator, config: &SeeSawConfig) -> Result<NormEstimate> {
    epsilon_norm(z, &config.with_field(Field::Hermitian))
}
