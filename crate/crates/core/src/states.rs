//! Seeded generators for random and structured bipartite operators.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BipartiteOperator, ComplexMatrix, HermitianMatrix, C64};

/// Eigenvalue floor and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;

/// Root seed for every random draw.
///
/// Independent streams are obtained with [`RngSeed::stream`]; stream `k` of a
/// seed never depends on how many other streams were consumed, so restarts can
/// run in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha20Rng {
        self.stream(0)
    }

    pub fn stream(self, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }

    /// A child seed keyed by `labels`, for per-instance seeding in sweeps.
    pub fn derive(self, labels: &[u64]) -> RngSeed {
        let mut h = splitmix64(self.0);
        for &l in labels {
            h = splitmix64(h ^ splitmix64(l.wrapping_add(0x632b_e59b_d9b4_e019)));
        }
        RngSeed(h)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian entries with `E|g|² = 1`.
fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(rows, cols);
    // column-major fill order is part of the reproducibility contract
    for j in 0..cols {
        for i in 0..rows {
            let re = normal(rng) * s;
            let im = normal(rng) * s;
            m[(i, j)] = C64::new(re, im);
        }
    }
    m
}

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::Dimension(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    require_positive(n, "unitary dimension")?;
    let g = ginibre(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    Ok(q)
}

/// GUE sample: real standard normal diagonal, off-diagonal real and imaginary
/// parts of variance 1/2.
pub fn gue_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix> {
    require_positive(n, "GUE dimension")?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(normal(rng), 0.0);
        for j in (i + 1)..n {
            let z = C64::new(normal(rng) * s, normal(rng) * s);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::new(m)
}

/// `G·G†/tr(G·G†)` for an `n × env` Ginibre `G` (induced measure; `env = n`
/// is Hilbert–Schmidt).
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, env: usize, rng: &mut R) -> Result<HermitianMatrix> {
    require_positive(n, "state dimension")?;
    require_positive(env, "environment dimension")?;
    let g = ginibre(n, env, rng);
    let w = &g * g.adjoint();
    let t = w.trace().re;
    HermitianMatrix::new(w.unscale(t))
}

/// Checks the density-matrix contract: PSD up to `-DENSITY_TOL`, unit trace.
pub fn check_density(m: &HermitianMatrix, label: &str) -> Result<()> {
    let tr = m.trace();
    if (tr - 1.0).abs() > DENSITY_TOL {
        return Err(Error::InvalidState(format!("{label}: trace {tr} is not 1")));
    }
    let min = m.eigen().values.last().copied().unwrap_or(0.0);
    if min < -DENSITY_TOL {
        return Err(Error::InvalidState(format!("{label}: minimum eigenvalue {min} is negative")));
    }
    Ok(())
}

/// Two states `rho`, `sigma` on `C^{n_a} ⊗ C^{n_b}` with prior `p` on `rho`.
#[derive(Debug, Clone)]
pub struct DiscriminationInstance {
    n_a: usize,
    n_b: usize,
    rho: HermitianMatrix,
    sigma: HermitianMatrix,
    p: f64,
}

impl DiscriminationInstance {
    pub fn new(n_a: usize, n_b: usize, rho: HermitianMatrix, sigma: HermitianMatrix, p: f64) -> Result<Self> {
        let n = n_a * n_b;
        if n == 0 || rho.dim() != n || sigma.dim() != n {
            return Err(Error::Dimension(format!(
                "states are {}x{} and {}x{}, expected {n}x{n}",
                rho.dim(),
                rho.dim(),
                sigma.dim(),
                sigma.dim()
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("prior p = {p} outside [0, 1]")));
        }
        check_density(&rho, "rho")?;
        check_density(&sigma, "sigma")?;
        Ok(DiscriminationInstance { n_a, n_b, rho, sigma, p })
    }

    pub fn rho(&self) -> &HermitianMatrix {
        &self.rho
    }

    pub fn sigma(&self) -> &HermitianMatrix {
        &self.sigma
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_a, self.n_b)
    }

    /// `z = p·rho − (1−p)·sigma`.
    pub fn discrimination_operator(&self) -> BipartiteOperator {
        let z = self.rho.as_matrix().scale(self.p) - self.sigma.as_matrix().scale(1.0 - self.p);
        BipartiteOperator::hermitian(self.n_a, self.n_b, HermitianMatrix::new(z).expect("finite"))
            .expect("dimensions checked at construction")
    }
}

/// The swap operator `F|a⟩|b⟩ = |b⟩|a⟩` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            f[(b * d + a, a * d + b)] = C64::new(1.0, 0.0);
        }
    }
    f
}

/// Symmetric and antisymmetric projectors `(I ± F)/2` on `C^d ⊗ C^d`.
pub fn symmetric_projectors(d: usize) -> (ComplexMatrix, ComplexMatrix) {
    let f = swap_operator(d);
    let id = ComplexMatrix::identity(d * d, d * d);
    ((&id + &f).scale(0.5), (&id - &f).scale(0.5))
}

/// Normalized symmetric vs antisymmetric Werner states at prior 1/2.
pub fn werner_hiding_pair(d: usize) -> Result<DiscriminationInstance> {
    if d < 2 {
        return Err(Error::Domain(format!("Werner pair needs d >= 2 (antisymmetric subspace is empty at d = {d})")));
    }
    let (sym, asym) = symmetric_projectors(d);
    let df = d as f64;
    let rho = HermitianMatrix::new(sym.scale(2.0 / (df * (df + 1.0))))?;
    let sigma = HermitianMatrix::new(asym.scale(2.0 / (df * (df - 1.0))))?;
    DiscriminationInstance::new(d, d, rho, sigma, 0.5)
}

/// `(1/2)·rho − (1/2)·sigma` for two independent induced-measure states.
pub fn random_state_pair<R: Rng + ?Sized>(n_a: usize, n_b: usize, rng: &mut R) -> Result<DiscriminationInstance> {
    let n = n_a * n_b;
    let rho = random_density_matrix(n, n, rng)?;
    let sigma = random_density_matrix(n, n, rng)?;
    DiscriminationInstance::new(n_a, n_b, rho, sigma, 0.5)
}

/// A GUE sample on `C^{n_a} ⊗ C^{n_b}` scaled to unit trace norm, i.e. the
/// discrimination operator of its normalized positive and negative parts.
pub fn random_gue_operator<R: Rng + ?Sized>(n_a: usize, n_b: usize, rng: &mut R) -> Result<BipartiteOperator> {
    let h = gue_hermitian(n_a * n_b, rng)?;
    let t = h.trace_norm();
    BipartiteOperator::hermitian(n_a, n_b, h.scaled(1.0 / t))
}

/// Diagonal density matrix with the given weights.
pub fn diagonal_state(weights: &[f64]) -> Result<HermitianMatrix> {
    let v: Vec<C64> = weights.iter().map(|&w| C64::new(w, 0.0)).collect();
    HermitianMatrix::new(ComplexMatrix::from_diagonal(&DVector::from_vec(v)))
}
