//! Conic bundles over exact rings: discriminants, the σ and σ′ ideals,
//! fibre classification, local normal forms over truncated power series,
//! surface singularity types, and brute-force smoothness scans.

pub mod error;
pub mod exactalg;
pub mod familyscan;
pub mod fiberlab;
pub mod localforms;
pub mod quadform;
pub mod sampling;

pub use error::{Error, Result};
