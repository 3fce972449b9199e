//! Dense complex-matrix substrate: Kronecker products, partial trace and
//! transpose over labelled tensor factors, and Hermitian spectral calculus.

mod factored;
mod matrix;
mod spectral;

pub use factored::{DensityOperator, FactoredOperator};
pub(crate) use factored::{from_digits, to_digits};
pub use matrix::{ComplexMatrix, C64};
pub(crate) use matrix::{ONE, ZERO};
pub use spectral::{
    eigh, eigh_with_tol, herm_inv_sqrt, herm_sqrt, is_psd, min_eigenvalue, HermEigen, PsdReport,
};


/// Kronecker product of two matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Kronecker product of a non-empty list, left to right.
pub fn kron_all<'a>(ms: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    ms.into_iter()
        .fold(None, |acc: Option<ComplexMatrix>, m| Some(match acc {
            None => m.clone(),
            Some(a) => a.kron(m),
        }))
        .unwrap_or_else(|| ComplexMatrix::identity(1))
}
