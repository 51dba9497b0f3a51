//! Lattices, Eisenstein series, η and the Weierstraß σ-function.

mod lattice;
mod modular;
mod sigma;

pub use lattice::{
    character_value, lattice_points, lattice_sum, ArgumentChoice, Lattice, LatticePoint,
};
pub use modular::{
    dedekind_eta, eisenstein, eisenstein_estimate, eisenstein_values, eta_log_derivative,
    eta_order, g2_from_eta, g2_iterated, g2_regularized, regularization_basis, LatticeSumEstimate,
    DEFAULT_LATTICE_TOL, MAX_POINTS,
};
pub use sigma::{
    log_sigma_over_z, sigma_direct, sigma_over_z_series_with, sigma_series, sigma_series_with,
    weierstrass_sigma, witten_char_series, witten_char_series_with, zeta_regularized_product,
    LatticeConstants, NumericConstants, SymbolicConstants,
};
