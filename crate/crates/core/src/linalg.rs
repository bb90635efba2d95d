//! Dense complex linear algebra on small bipartite systems.
//!
//! Everything here works on `nalgebra::DMatrix<Complex<f64>>`. Bipartite
//! operators use the product basis `|a⟩⊗|b⟩ ↦ a·n_b + b`.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Asymmetry above this is reported by [`HermitianMatrix::new_reporting`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Largest `|m_ij − conj(m_ji)|` over all entries.
pub fn max_asymmetry(m: &ComplexMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `max_ij |m_ij|`.
pub fn max_abs_entry(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols())));
    }
    if m.nrows() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }
    Ok(m.nrows())
}

fn check_finite(m: &ComplexMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// A selfadjoint matrix. The constructor replaces its input by `(m + m†)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::new_reporting(m).map(|(h, _)| h)
    }

    /// Like [`HermitianMatrix::new`], also returning the asymmetry that was
    /// removed so callers can warn when it exceeds [`SYMMETRY_TOL`].
    pub fn new_reporting(m: ComplexMatrix) -> Result<(Self, f64)> {
        check_square(&m)?;
        check_finite(&m)?;
        let asym = max_asymmetry(&m);
        let sym = (&m + m.adjoint()).scale(0.5);
        Ok((HermitianMatrix(sym), asym))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let v: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::new(ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(v)))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn eigen(&self) -> Eigen {
        hermitian_eigen(self)
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        self.eigen().values.iter().map(|l| l.abs()).sum()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        HermitianMatrix(self.0.scale(alpha))
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
/// Column `k` of `vectors` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `V·diag(φ(λ))·V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (k, &l) in self.values.iter().enumerate() {
            let w = f(l);
            scaled.column_mut(k).scale_mut(w);
        }
        &scaled * self.vectors.adjoint()
    }
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> Eigen {
    let n = m.dim();
    let se = m.0.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].total_cmp(&se.eigenvalues[i]));
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Eigen { values, vectors }
}

/// Sum of singular values of a square matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    check_square(m)?;
    check_finite(m)?;
    Ok(m.singular_values().iter().sum())
}

/// Largest singular value.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// The selfadjoint unitary `V·diag(sgn λ)·V†`; zero eigenvalues map to `+1`.
///
/// `tr(sign(m)·m) = ‖m‖₁`, so this is the Hermitian contraction maximizing
/// `tr(f·m)`.
pub fn hermitian_sign(m: &HermitianMatrix) -> HermitianMatrix {
    hermitian_sign_with_norm(m).0
}

/// [`hermitian_sign`] together with `‖m‖₁` from the same decomposition.
pub fn hermitian_sign_with_norm(m: &HermitianMatrix) -> (HermitianMatrix, f64) {
    let e = hermitian_eigen(m);
    let s = e.reconstruct_with(|l| if l >= 0.0 { 1.0 } else { -1.0 });
    let norm = e.values.iter().map(|l| l.abs()).sum();
    (HermitianMatrix((&s + s.adjoint()).scale(0.5)), norm)
}

/// Contraction `f` with `tr(f·m) = ‖m‖₁`: for `m = U·Σ·V†` this is `V·U†`.
/// Returns the identity when `m = 0`.
pub fn optimal_contraction_complex(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    optimal_contraction_with_norm(m).map(|(f, _)| f)
}

/// [`optimal_contraction_complex`] together with `‖m‖₁`.
pub fn optimal_contraction_with_norm(m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let n = check_square(m)?;
    check_finite(m)?;
    if m.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Ok((ComplexMatrix::identity(n, n), 0.0));
    }
    let svd = m.clone().svd(true, true);
    let norm = svd.singular_values.iter().sum();
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(Error::Contract("SVD did not return singular vectors".into())),
    };
    Ok((v_t.adjoint() * u.adjoint(), norm))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// An operator on `C^{n_a} ⊗ C^{n_b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    n_a: usize,
    n_b: usize,
    matrix: ComplexMatrix,
    hermitian: bool,
}

impl BipartiteOperator {
    pub fn hermitian(n_a: usize, n_b: usize, m: HermitianMatrix) -> Result<Self> {
        Self::check_dims(n_a, n_b, m.as_matrix())?;
        Ok(BipartiteOperator { n_a, n_b, matrix: m.into_inner(), hermitian: true })
    }

    /// A general (not necessarily selfadjoint) operator.
    pub fn complex(n_a: usize, n_b: usize, m: ComplexMatrix) -> Result<Self> {
        Self::check_dims(n_a, n_b, &m)?;
        check_finite(&m)?;
        Ok(BipartiteOperator { n_a, n_b, matrix: m, hermitian: false })
    }

    fn check_dims(n_a: usize, n_b: usize, m: &ComplexMatrix) -> Result<()> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::Dimension("local dimensions must be positive".into()));
        }
        let n = n_a * n_b;
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::Dimension(format!("matrix is {}x{} but n_a*n_b = {}", m.nrows(), m.ncols(), n)));
        }
        Ok(())
    }

    /// `x ⊗ y` for Hermitian factors.
    pub fn product(x: &HermitianMatrix, y: &HermitianMatrix) -> Self {
        BipartiteOperator { n_a: x.dim(), n_b: y.dim(), matrix: kron(x.as_matrix(), y.as_matrix()), hermitian: true }
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn dim(&self) -> usize {
        self.n_a * self.n_b
    }

    pub fn min_local_dim(&self) -> usize {
        self.n_a.min(self.n_b)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn as_hermitian(&self) -> Option<HermitianMatrix> {
        self.hermitian.then(|| HermitianMatrix(self.matrix.clone()))
    }

    /// `‖z‖₁`; uses eigenvalues on the Hermitian path, singular values otherwise.
    pub fn trace_norm(&self) -> f64 {
        if self.hermitian {
            HermitianMatrix(self.matrix.clone()).trace_norm()
        } else {
            self.matrix.singular_values().iter().sum()
        }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        BipartiteOperator { matrix: self.matrix.scale(alpha), ..self.clone() }
    }

    pub fn partial_trace(&self, keep: Subsystem) -> ComplexMatrix {
        partial_trace(self, keep)
    }

    /// The same operator on `C^{n_b} ⊗ C^{n_a}`.
    pub fn swapped(&self) -> Self {
        let (na, nb) = (self.n_a, self.n_b);
        let perm = |k: usize| {
            let (a, b) = (k / nb, k % nb);
            b * na + a
        };
        let mut m = ComplexMatrix::zeros(na * nb, na * nb);
        for r in 0..na * nb {
            for c in 0..na * nb {
                m[(perm(r), perm(c))] = self.matrix[(r, c)];
            }
        }
        BipartiteOperator { n_a: nb, n_b: na, matrix: m, hermitian: self.hermitian }
    }

    /// `(u⊗v)·z·(u⊗v)†`.
    pub fn conjugated_by_local(&self, u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.n_a || u.ncols() != self.n_a || v.nrows() != self.n_b || v.ncols() != self.n_b {
            return Err(Error::Dimension("local unitaries do not match n_a, n_b".into()));
        }
        let w = kron(u, v);
        let m = &w * &self.matrix * w.adjoint();
        if self.hermitian {
            Self::hermitian(self.n_a, self.n_b, HermitianMatrix::new(m)?)
        } else {
            Self::complex(self.n_a, self.n_b, m)
        }
    }

    /// `tr((f⊗g)·z)`.
    pub fn pairing(&self, f: &ComplexMatrix, g: &ComplexMatrix) -> C64 {
        let (na, nb) = (self.n_a, self.n_b);
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..na {
            for a2 in 0..na {
                let fa = f[(a, a2)];
                if fa == C64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..nb {
                    for b2 in 0..nb {
                        acc += fa * g[(b, b2)] * self.matrix[(a2 * nb + b2, a * nb + b)];
                    }
                }
            }
        }
        acc
    }
}

/// Partial trace keeping the selected factor.
pub fn partial_trace(z: &BipartiteOperator, keep: Subsystem) -> ComplexMatrix {
    let (na, nb) = (z.n_a, z.n_b);
    let m = &z.matrix;
    match keep {
        Subsystem::A => ComplexMatrix::from_fn(na, na, |a, a2| (0..nb).map(|b| m[(a * nb + b, a2 * nb + b)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(nb, nb, |b, b2| (0..na).map(|a| m[(a * nb + b, a * nb + b2)]).sum()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eigen_of_diagonal_is_sorted_permutation() {
        let m = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let e = m.eigen();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        for (k, row) in [0usize, 2, 1].iter().enumerate() {
            assert!((e.vectors[(*row, k)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_of_identity() {
        let e = HermitianMatrix::identity(4).eigen();
        for l in e.values {
            assert!((l - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = ComplexMatrix::identity(2, 2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NonFinite { row: 0, col: 1 })));
    }

    #[test]
    fn constructor_symmetrizes() {
        let mut m = ComplexMatrix::identity(2, 2);
        m[(0, 1)] = C64::new(1.0, 1.0);
        let (h, asym) = HermitianMatrix::new_reporting(m).unwrap();
        assert!((asym - 2.0_f64.sqrt()).abs() < 1e-14);
        assert_eq!(h.as_matrix()[(0, 1)], C64::new(0.5, 0.5));
        assert_eq!(h.as_matrix()[(1, 0)], C64::new(0.5, -0.5));
        assert_eq!(max_asymmetry(h.as_matrix()), 0.0);
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::identity(5, 5)).unwrap() - 5.0).abs() < 1e-12);
        let d = HermitianMatrix::from_real_diagonal(&[1.0, -2.0, 3.0]).unwrap();
        assert!((d.trace_norm() - 6.0).abs() < 1e-12);
        assert!((trace_norm(d.as_matrix()).unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3, 3)).unwrap(), 0.0);
        assert!(matches!(trace_norm(&ComplexMatrix::zeros(2, 3)), Err(Error::Dimension(_))));
    }

    #[test]
    fn sign_tie_breaks_to_plus_one() {
        let m = HermitianMatrix::from_real_diagonal(&[2.0, -3.0, 0.0]).unwrap();
        let s = hermitian_sign(&m);
        let want = HermitianMatrix::from_real_diagonal(&[1.0, -1.0, 1.0]).unwrap();
        assert!((s.as_matrix() - want.as_matrix()).norm() < 1e-14);
        let id = hermitian_sign(&HermitianMatrix::identity(3));
        assert!((id.as_matrix() - ComplexMatrix::identity(3, 3)).norm() < 1e-14);
    }

    #[test]
    fn contraction_of_zero_is_identity() {
        let f = optimal_contraction_complex(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(f, ComplexMatrix::identity(3, 3));
    }

    #[test]
    fn contraction_of_unitary_is_adjoint() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_row_slice(2, 2, &[c(s), C64::new(0.0, s), C64::new(0.0, s), c(s)]);
        let f = optimal_contraction_complex(&u).unwrap();
        assert!((&f - u.adjoint()).norm() < 1e-12);
        assert!(((&f * &u).trace() - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_product() {
        let x = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let y = HermitianMatrix::from_real_diagonal(&[3.0, -1.0, 5.0]).unwrap();
        let z = BipartiteOperator::product(&x, &y);
        let ta = z.partial_trace(Subsystem::A);
        assert!((ta - x.as_matrix().scale(7.0)).norm() < 1e-13);
        let tb = z.partial_trace(Subsystem::B);
        assert!((tb - y.as_matrix().scale(3.0)).norm() < 1e-13);
    }

    #[test]
    fn partial_trace_of_maximally_entangled_projector() {
        let d = 3;
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                m[(i * d + i, j * d + j)] = c(1.0);
            }
        }
        let z = BipartiteOperator::complex(d, d, m).unwrap();
        assert!((z.partial_trace(Subsystem::B) - ComplexMatrix::identity(d, d)).norm() < 1e-14);
    }

    #[test]
    fn swap_is_an_involution_and_swaps_marginals() {
        let x = HermitianMatrix::from_real_diagonal(&[1.0, 2.0]).unwrap();
        let y = HermitianMatrix::from_real_diagonal(&[3.0, -1.0, 5.0]).unwrap();
        let z = BipartiteOperator::product(&x, &y);
        let s = z.swapped();
        assert_eq!((s.n_a(), s.n_b()), (3, 2));
        assert!((s.matrix() - BipartiteOperator::product(&y, &x).matrix()).norm() < 1e-14);
        assert_eq!(s.swapped(), z);
    }

    #[test]
    fn pairing_matches_kron_trace() {
        let x = HermitianMatrix::from_real_diagonal(&[1.0, -2.0]).unwrap();
        let y = HermitianMatrix::from_real_diagonal(&[0.5, 3.0]).unwrap();
        let z = BipartiteOperator::product(&x, &y);
        let f = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let g = ComplexMatrix::identity(2, 2);
        let direct = (kron(&f, &g) * z.matrix()).trace();
        assert!((z.pairing(&f, &g) - direct).norm() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let m = HermitianMatrix::identity(5);
        assert!(matches!(BipartiteOperator::hermitian(2, 3, m), Err(Error::Dimension(_))));
    }
}
