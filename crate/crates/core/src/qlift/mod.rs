//! Quantum liftings: linear maps on matrix units, QCP operators, nonlinear
//! liftings and their compositions, and lifting-assisted positive maps.

mod maps;
mod qcp;

pub use maps::{choi_min_eigenvalue, lifting_assisted_map, robertson_map, swap_matrix, CpMap, LinearMap};
pub use qcp::{
    channel_from_compound, compose_qcp, n_compose_qcp, n_nonlinear_lift, nonlinear_lift, ohya_lift, ohya_n_lift,
    product_lifting, reduced_dynamics, QcpOperator,
};
