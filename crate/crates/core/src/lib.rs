//! Vector space t-partitions of `F_q^v`, divisible sets of t-subspaces,
//! and the exact bounding machinery around them.
//!
//! The crate is organized bottom-up:
//!
//! - [`field`]: exact arithmetic in `F_q` (`q <= 16`) and extensions up to `2^16`
//! - [`matrix`]: dense matrices and reduced row echelon form
//! - [`counting`]: Gaussian binomial coefficients
//! - [`subspace`]: canonical subspaces, enumeration, lattice operations
//! - [`gabidulin`]: linearized-polynomial codewords for rank-metric codes
//! - [`partition`]: vector space t-partitions and their verification
//! - [`constructions`]: lifted MRD codes, spreads, and the explicit partitions
//! - [`divisibility`]: hyperplane spectra and divisibility bounds
//! - [`bounds`]: closed-form bound calculators and literature fixtures
//! - [`lp`]: exact rational LP/ILP models, solvers, and export
//! - [`format`]: the JSON file formats used by the CLI
//!
//! All values are exact: big integers for counts, rationals for linear
//! programs; no floating point is involved anywhere.

pub mod bounds;
pub mod budget;
pub mod constructions;
pub mod counting;
pub mod divisibility;
pub mod error;
pub mod field;
pub mod format;
pub mod gabidulin;
pub mod lp;
pub mod matrix;
pub mod partition;
pub mod subspace;

pub use budget::Budget;
pub use error::{Error, Result};
