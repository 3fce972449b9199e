//! Liftings of classical and quantum states into composite systems.
//!
//! The crate is organised bottom-up:
//!
//! - [`matcore`]: dense complex matrices, tensor-factor bookkeeping, Hermitian
//!   spectral calculus.
//! - [`classical`]: probability vectors as diagonal states, stochastic
//!   channels and their Kraus forms, dilation channels, teleportation.
//! - [`clift`]: classical lifting tensors, N-party liftings, Markov states and
//!   transition expectations.
//! - [`qlift`]: quantum conditional probability (QCP) operators, nonlinear
//!   liftings, QCP composition chains and lifting-assisted positive maps.
//! - [`circulant`]: circulant states, the blockwise partial-transpose/PPT
//!   test, circulant and Bell-diagonal liftings.
//! - [`random`] and [`verify`]: seeded samplers and the invariant suites
//!   behind `liftlab verify`.
//!
//! Tensor factors are written left to right as systems `N, …, 1`; see
//! [`matcore::FactoredOperator`].

pub mod circulant;
pub mod classical;
pub mod clift;
mod error;
pub mod matcore;
pub mod qlift;
pub mod random;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, DensityOperator, FactoredOperator, C64};
