//! Eisenstein–Kronecker series of CM lattices, partial Hecke L-values and
//! algebraicity checks.

pub mod lattice;
pub mod mp;
pub mod oracle;
pub mod periods;
pub mod recognize;

pub use lattice::{Engine, KroneckerSum, LatticeC};
pub mod series;

pub use series::{eisenstein_series, full_l, ideal_sum_oracle, partial_l, smoothed_eisenstein, smoothed_kernel, EisensteinValue, LatticeFunction};
