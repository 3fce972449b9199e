//! Hermitian spectral calculus. The eigensolver is the only spectral
//! primitive in the crate; everything else (square roots, positivity,
//! inverse square roots) goes through [`eigh`].

use nalgebra::SymmetricEigen;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermEigen {
    /// Spectral-norm of the decomposed matrix (max |eigenvalue|).
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Rebuilds `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| self.vectors.get(i, k) * fv[k] * self.vectors.get(j, k).conj()).sum()
        })
    }

    /// Rank-one eigenprojector `|v_k><v_k|`.
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        let v = self.vectors.column(k);
        ComplexMatrix::outer(&v, &v)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with `NotHermitian` when `‖m − m†‖_F > tol·max(‖m‖_F, 1)`.
pub fn eigh(m: &ComplexMatrix) -> Result<HermEigen> {
    eigh_with_tol(m, tol::PSD)
}

pub fn eigh_with_tol(m: &ComplexMatrix, tol: f64) -> Result<HermEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("eigh of a {}x{} matrix", m.rows(), m.cols())));
    }
    let defect = m.hermiticity_defect();
    if defect > tol * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { deviation: defect });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermEigen { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = ComplexMatrix::from_fn(n, n, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5);
    let eig = SymmetricEigen::new(sym.to_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermEigen { values, vectors })
}

/// Outcome of a positivity test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

/// Positivity test: PSD iff `λ_min ≥ −tol·max|λ|`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<PsdReport> {
    let eig = eigh_with_tol(m, tol)?;
    let min = eig.min();
    Ok(PsdReport { psd: min >= -tol * eig.norm(), min_eigenvalue: min })
}

/// Minimum eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(eigh(m)?.min())
}

/// PSD square root. Eigenvalues in `[−tol·‖m‖, 0)` are clipped to zero.
pub fn herm_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    if eig.min() < -tol::PSD * eig.norm() {
        return Err(Error::NotPsd { min_eigenvalue: eig.min() });
    }
    Ok(eig.map(|x| x.max(0.0).sqrt()))
}

/// Inverse square root of a strictly positive matrix; `NotFaithful` when
/// the smallest eigenvalue does not exceed `tol·‖m‖`.
pub fn herm_inv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    if eig.min() <= tol::PSD * eig.norm() {
        return Err(Error::NotFaithful { min_eigenvalue: eig.min() });
    }
    Ok(eig.map(|x| 1.0 / x.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::matrix::C64;
    use crate::random::Sampler;

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let i3 = ComplexMatrix::identity(3);
        assert!(herm_sqrt(&i3).unwrap().approx_eq(&i3, 1e-14));
        let d = ComplexMatrix::from_real_diagonal(&[4.0, 9.0]);
        let r = herm_sqrt(&d).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0]), 1e-14));
    }

    #[test]
    fn sqrt_rejects_negative_and_non_hermitian() {
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(herm_sqrt(&x), Err(Error::NotPsd { .. })));
        let skew = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(herm_sqrt(&skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sqrt_clips_roundoff_negatives() {
        let m = ComplexMatrix::from_real_diagonal(&[1.0, -1e-13]);
        let r = herm_sqrt(&m).unwrap();
        assert_eq!(r.get(1, 1), C64::new(0.0, 0.0));
    }

    #[test]
    fn psd_boundary_and_pauli_x() {
        let r = is_psd(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0]), tol::PSD).unwrap();
        assert!(r.psd);
        assert!(r.min_eigenvalue.abs() < 1e-15);
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = is_psd(&x, tol::PSD).unwrap();
        assert!(!r.psd);
        assert!((r.min_eigenvalue + 1.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_squares_back_on_random_psd() {
        let mut s = Sampler::new(11);
        for d in [1, 2, 3, 5, 8, 16] {
            for _ in 0..5 {
                let g = s.gaussian_matrix(d, d);
                let m = &g * &g.adjoint();
                let r = herm_sqrt(&m).unwrap();
                let err = (&r * &r).max_abs_diff(&m);
                let norm = eigh(&m).unwrap().norm();
                assert!(err <= 1e-9 * norm, "d={d} err={err}");
            }
        }
    }

    #[test]
    fn inverse_sqrt_requires_faithful() {
        let m = ComplexMatrix::from_real_diagonal(&[0.25, 4.0]);
        let r = herm_inv_sqrt(&m).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::from_real_diagonal(&[2.0, 0.5]), 1e-14));
        let singular = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(matches!(herm_inv_sqrt(&singular), Err(Error::NotFaithful { .. })));
    }
}
