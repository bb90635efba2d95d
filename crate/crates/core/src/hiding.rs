//! Error probabilities and data-hiding ratios built on the see-saw estimate.

use crate::error::{Error, Result};
use crate::linalg::BipartiteOperator;
use crate::seesaw::{epsilon_norm, Field, NormEstimate, SeeSawConfig};

/// Slack allowed on `ratio <= bound` before a report counts as a violation.
pub const BOUND_TOL: f64 = 1e-6;

/// `2√2·min(n_a, n_b)`: the largest possible ratio of trace norm to local
/// (product-witness) norm on an `n_a × n_b` system.
pub fn local_hiding_bound(n_a: usize, n_b: usize) -> f64 {
    2.0 * std::f64::consts::SQRT_2 * n_a.min(n_b) as f64
}

/// Optimal error probability `(1 − ‖z‖)/2` for a distinguishability-norm value.
pub fn error_probability(norm_value: f64) -> Result<f64> {
    const SLACK: f64 = 1e-9;
    if !norm_value.is_finite() || !(-SLACK..=1.0 + SLACK).contains(&norm_value) {
        return Err(Error::Domain(format!("distinguishability norm {norm_value} outside [0, 1]")));
    }
    Ok(((1.0 - norm_value.clamp(0.0, 1.0)) / 2.0).clamp(0.0, 0.5))
}

/// Trace norm against the product-witness lower bound for one operator.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub trace_norm: f64,
    pub eps_estimate: NormEstimate,
    pub ratio: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub margin: f64,
}

impl RatioReport {
    pub fn from_parts(trace_norm: f64, eps_estimate: NormEstimate, n_a: usize, n_b: usize) -> Self {
        let bound = local_hiding_bound(n_a, n_b);
        let ratio = if eps_estimate.value > 0.0 { trace_norm / eps_estimate.value } else { f64::INFINITY };
        RatioReport {
            trace_norm,
            eps_estimate,
            ratio,
            bound,
            satisfied: ratio <= bound + BOUND_TOL,
            margin: bound - ratio,
        }
    }
}

/// Data-hiding ratio estimate `‖z‖₁ / ‖z‖_ε` with the Hermitian field.
///
/// Because the denominator is a lower bound, the ratio is an upper bound on
/// the true ratio; a report with `satisfied == false` is therefore a
/// candidate violation that deserves more restarts, not a proof.
pub fn hiding_ratio(z: &BipartiteOperator, config: &SeeSawConfig) -> Result<RatioReport> {
    if z.is_zero() {
        return Err(Error::Degenerate("ratio undefined for the zero operator".into()));
    }
    let eps = epsilon_norm(z, &config.with_field(Field::Hermitian))?;
    Ok(RatioReport::from_parts(z.trace_norm(), eps, z.n_a(), z.n_b()))
}

#[derive(Debug, Clone)]
pub struct FieldComparison {
    pub complex: NormEstimate,
    pub hermitian: NormEstimate,
    /// `complex.value / hermitian.value`; NaN when both are zero.
    pub ratio: f64,
}

/// Runs the complex and Hermitian fields with the same budget and seed.
pub fn complex_vs_hermitian_check(z: &BipartiteOperator, config: &SeeSawConfig) -> Result<FieldComparison> {
    if !z.is_hermitian() {
        return Err(Error::Contract("comparison requires a Hermitian operator".into()));
    }
    let complex = epsilon_norm(z, &config.with_field(Field::Complex))?;
    let hermitian = epsilon_norm(z, &config.with_field(Field::Hermitian))?;
    let ratio = if hermitian.value > 0.0 {
        complex.value / hermitian.value
    } else if complex.value == 0.0 {
        f64::NAN
    } else {
        f64::INFINITY
    };
    Ok(FieldComparison { complex, hermitian, ratio })
}
