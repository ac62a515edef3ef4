//! Exact and Monte Carlo machinery for checking, at desk scale, how
//! restricted isometry of subsampled character matrices constrains the
//! pairwise distances of random linear codes, and how those distances in
//! turn certify list decodability.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf`]: table-driven GF(p^m) arithmetic for q up to 256.
//! - [`codes`]: generator matrices, codeword enumeration, and exact rational
//!   distance statistics, including the minimum L-subset average distance.
//! - [`simplex`]: the root-of-unity symbol encoding and its distance
//!   identity.
//! - [`bounds`]: closed-form decoding radii (Johnson and relatives) and the
//!   headline rate expression.
//! - [`oracle`]: brute-force list-size ground truth over all centers.
//! - [`rip`]: the finite-field linear-form matrix, row subsampling, and
//!   RIP-2 constants via per-support Gram eigenvalues.
//! - [`chaining`]: the grouped projection seminorm, Maurey sparsification,
//!   exact Rademacher-chaos moments, and a scalar inequality check.
//! - [`harness`]: experiment configs, derived-seed discipline, and CSV/JSON
//!   record emission.

pub mod bounds;
pub mod chaining;
pub mod codes;
pub mod error;
pub mod gf;
pub mod harness;
pub mod jacobi;
pub mod oracle;
pub mod rip;
pub mod seed;
pub mod simplex;

pub use bounds::{BoundKind, ListDecodingBound};
pub use chaining::SparseUnitVector;
pub use codes::{GeneratorMatrix, LinearCode, Rational};
pub use error::{Error, Result};
pub use gf::{FieldElem, FieldId, FieldSpec};
pub use harness::{ExperimentConfig, ExperimentRecord, RunOptions};
pub use oracle::{ListOracleResult, OracleMode};
pub use rip::{RipMethod, RipReport, SampledRows, ScanOptions};
pub use seed::derive_seed;
pub use simplex::{ComplexMatrix, LabelMatrix};
