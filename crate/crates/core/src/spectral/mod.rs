//! Small dense matrices, spectral radius and norm, joint spectral radius
//! sandwiches, the Bochi bound, joint translation lengths and the explicit
//! rigidity and geometry constant formulas.

mod bounds;
mod domination;
mod eigen;
mod jsr;
mod jtl;
mod matrix;

pub use bounds::{
    butt_constants, geometry_bounds, rigidity_bound_anosov, rigidity_bound_hyperbolic, BoundReport, ButtConstants,
    ButtInputs, GeometryBounds, GeometryInputs, NamedValue, DEFAULT_K,
};
pub use domination::{domination_profile, DominationReport};
pub use eigen::{eigenvalue_moduli, operator_norm, singular_values, smallest_modulus, spectral_radius, symmetric_eigenvalues};
pub use jsr::{bochi_bound, default_c_m, default_d_m, jsr_estimate, random_matrix_set, BochiReport, MatrixSet, SandwichEstimate};
pub use jtl::joint_translation_length;
pub use matrix::{Matrix, Representation};
