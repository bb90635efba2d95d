//! Dimensional coefficients for quantum Darwinism bounds.
//!
//! Formula evaluation only; no channels are constructed.

use serde::Serialize;

use crate::error::{Error, Result};

fn check_dims(d_a: usize, d_r: usize) -> Result<()> {
    if d_a < 2 {
        return Err(Error::Domain(format!("d_a must be at least 2, got {d_a}")));
    }
    if d_r < 1 {
        return Err(Error::Domain("d_r must be at least 1".into()));
    }
    Ok(())
}

/// `min(2√2·d_a, 2·d_r − 1)`, with `2√2·d_a` replaced by 4 for a qubit.
pub fn omega_new(d_a: usize, d_r: usize) -> Result<f64> {
    check_dims(d_a, d_r)?;
    let local = if d_a == 2 { 4.0 } else { 2.0 * std::f64::consts::SQRT_2 * d_a as f64 };
    Ok(local.min(2.0 * d_r as f64 - 1.0))
}

/// `min(d_a², 4·d_a^{3/2}, 4·d_r^{3/2}, √(153·d_a·d_r), 2·d_r − 1)`.
pub fn omega_ranard(d_a: usize, d_r: usize) -> Result<f64> {
    check_dims(d_a, d_r)?;
    let (a, r) = (d_a as f64, d_r as f64);
    Ok([a * a, 4.0 * a.powf(1.5), 4.0 * r.powf(1.5), (153.0 * a * r).sqrt(), 2.0 * r - 1.0]
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

/// System dimension, observer dimension and fragment sizes `|R|`, `|Q|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DarwinismParams {
    pub d_a: usize,
    pub d_r: usize,
    pub r_size: usize,
    pub q_size: usize,
}

/// `d_a · omega_new(d_a, d_r) · √(2·ln(d_a)·|R|/|Q|)`.
pub fn diamond_bound_rhs(params: &DarwinismParams) -> Result<f64> {
    if params.r_size == 0 || params.q_size == 0 {
        return Err(Error::Domain("|R| and |Q| must be positive".into()));
    }
    let omega = omega_new(params.d_a, params.d_r)?;
    let d_a = params.d_a as f64;
    Ok(d_a * omega * (2.0 * d_a.ln() * params.r_size as f64 / params.q_size as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub d_a: usize,
    pub d_r: usize,
    pub omega_new: f64,
    pub omega_ranard: f64,
    pub improvement_factor: f64,
}

/// One row per `(d_a, d_r)` pair, `d_a` outermost. Empty ranges give no rows.
pub fn coefficient_sweep(
    d_a_range: impl IntoIterator<Item = usize>,
    d_r_range: impl IntoIterator<Item = usize> + Clone,
) -> Result<Vec<CoefficientRow>> {
    let mut rows = Vec::new();
    for d_a in d_a_range {
        for d_r in d_r_range.clone() {
            let new = omega_new(d_a, d_r)?;
            let old = omega_ranard(d_a, d_r)?;
            rows.push(CoefficientRow { d_a, d_r, omega_new: new, omega_ranard: old, improvement_factor: old / new });
        }
    }
    Ok(rows)
}
