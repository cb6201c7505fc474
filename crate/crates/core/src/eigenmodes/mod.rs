//! Closed-form eigenfunction families, quadrature grids and normalization.

pub mod families;
pub mod grid;
pub mod legendre;

pub use families::{
    eval_highest_weight, eval_random_wave, eval_torus_wave, highest_weight_constant, Eigenfunction,
    Family,
};
pub use grid::{l2_normalize, EvalGrid, GridLayout};
pub use legendre::{eval_zonal_integral, eval_zonal_legendre, zonal_norm};
