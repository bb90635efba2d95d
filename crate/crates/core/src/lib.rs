//! Numerical tools for comparing global and local distinguishability of
//! bipartite quantum states.
//!
//! The global (unrestricted) distinguishability norm of `z = pρ − (1−p)σ` is
//! its trace norm. Local measurements without communication are bounded below
//! by the Hermitian epsilon tensor norm, which is estimated here by multistart
//! see-saw. Their ratio never exceeds `2√2·min(n_A, n_B)`; the [`hiding`]
//! module reports that check for individual operators and [`xor`] does the
//! same for quantum XOR games.
//!
//! - [`linalg`]: Hermitian eigendecomposition, trace norm, optimal local
//!   contractions and partial traces.
//! - [`states`]: seeded Haar, GUE and induced-measure generators and the Werner
//!   hiding pair.
//! - [`seesaw`]: the epsilon-norm estimator.
//! - [`darwinism`]: dimensional coefficients for quantum Darwinism bounds.

#![forbid(unsafe_code)]

pub mod darwinism;
pub mod error;
pub mod hiding;
pub mod linalg;
pub mod seesaw;
pub mod states;
pub mod xor;

pub use error::{Error, Result};
pub use hiding::{complex_vs_hermitian_check, error_probability, hiding_ratio, local_hiding_bound, RatioReport};
pub use linalg::{BipartiteOperator, ComplexMatrix, HermitianMatrix, Subsystem, C64};
pub use seesaw::{epsilon_norm, lo_norm_lower, seesaw_run, Field, NormEstimate, SeeSawConfig};
pub use states::{DiscriminationInstance, RngSeed};
pub use xor::{evaluate_game, GameReport, QuantumXorGame};
