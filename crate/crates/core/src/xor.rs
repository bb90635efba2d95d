//! Quantum XOR games.
//!
//! A referee sends state `ρ_x` with probability `p_x`; the players answer ±1
//! and win when the product of their answers equals `c_x`. With the game
//! operator `G = Σ c_x p_x ρ_x`, the best bias over all joint strategies is
//! `‖G‖₁` and the best bias over product strategies is the Hermitian epsilon
//! norm of `G`.

use crate::error::{Error, Result};
use crate::hiding::{local_hiding_bound, BOUND_TOL};
use crate::linalg::{BipartiteOperator, ComplexMatrix, HermitianMatrix};
use crate::seesaw::{epsilon_norm, Field, NormEstimate, SeeSawConfig};
use crate::states::check_density;

const PROB_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct QuantumXorGame {
    n_a: usize,
    n_b: usize,
    states: Vec<HermitianMatrix>,
    signs: Vec<i8>,
    probs: Vec<f64>,
}

impl QuantumXorGame {
    pub fn new(n_a: usize, n_b: usize, states: Vec<HermitianMatrix>, signs: Vec<i8>, probs: Vec<f64>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::Contract("a game needs at least one question".into()));
        }
        if signs.len() != n || probs.len() != n {
            return Err(Error::Contract(format!(
                "{} states, {} signs, {} probs: lengths must agree",
                n,
                signs.len(),
                probs.len()
            )));
        }
        if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Contract(format!("sign {s} is not +1 or -1")));
        }
        if let Some(p) = probs.iter().find(|&&p| !(p >= 0.0 && p.is_finite())) {
            return Err(Error::Contract(format!("probability {p} is negative or not finite")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::Contract(format!("probabilities sum to {total} (deviation {:e})", total - 1.0)));
        }
        let dim = n_a * n_b;
        for (k, s) in states.iter().enumerate() {
            if s.dim() != dim {
                return Err(Error::Dimension(format!("state {k} is {}x{}, expected {dim}x{dim}", s.dim(), s.dim())));
            }
            check_density(s, &format!("state {k}"))?;
        }
        Ok(QuantumXorGame { n_a, n_b, states, signs, probs })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_a, self.n_b)
    }

    pub fn states(&self) -> &[HermitianMatrix] {
        &self.states
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The same game with every sign flipped.
    pub fn negated(&self) -> Self {
        QuantumXorGame { signs: self.signs.iter().map(|s| -s).collect(), ..self.clone() }
    }

    /// `G = Σ c_x p_x ρ_x`.
    pub fn game_operator(&self) -> BipartiteOperator {
        let dim = self.n_a * self.n_b;
        let mut g = ComplexMatrix::zeros(dim, dim);
        for ((rho, &c), &p) in self.states.iter().zip(&self.signs).zip(&self.probs) {
            g += rho.as_matrix().scale(c as f64 * p);
        }
        BipartiteOperator::hermitian(self.n_a, self.n_b, HermitianMatrix::new(g).expect("finite"))
            .expect("dimensions checked at construction")
    }
}

#[derive(Debug, Clone)]
pub struct GameReport {
    pub beta_all: f64,
    pub beta_product: NormEstimate,
    /// `None` when `G = 0` and the ratio is undefined.
    pub ratio: Option<f64>,
    pub bound: f64,
    pub satisfied: bool,
}

/// Biases of the best joint and the best product strategy.
pub fn evaluate_game(game: &QuantumXorGame, config: &SeeSawConfig) -> Result<GameReport> {
    let g = game.game_operator();
    let beta_all = if g.is_zero() { 0.0 } else { g.trace_norm() };
    let beta_product = epsilon_norm(&g, &config.with_field(Field::Hermitian))?;
    let bound = local_hiding_bound(g.n_a(), g.n_b());
    let ratio = if g.is_zero() {
        None
    } else if beta_product.value > 0.0 {
        Some(beta_all / beta_product.value)
    } else {
        Some(f64::INFINITY)
    };
    let satisfied = ratio.is_none_or(|r| r <= bound + BOUND_TOL);
    Ok(GameReport { beta_all, beta_product, ratio, bound, satisfied })
}
