//! Antiholomorphic-sector equivariant localization on elliptic-curve actions,
//! Weierstraß σ regularization and the Witten genus.

pub mod cohom_ring;
pub mod equivariant;
pub mod error;
pub mod lattice_fn;
pub mod quadrature;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
