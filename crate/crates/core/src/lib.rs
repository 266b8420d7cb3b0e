//! Matrix codes over finite fields under the cover metric.
//!
//! The cover weight of a matrix is the least number of rows and columns
//! containing all of its nonzero entries. This crate provides exact field
//! arithmetic, matrix codes, cover weights via bipartite matching, error
//! sampling, a Prange-style generic decoder, cost and bound estimates, and
//! reductions from Hamming-metric problems.

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod cover;
pub mod error;
pub mod field;
pub mod io;
pub mod limits;
pub mod matspace;
pub mod prange;
pub mod reduction;

pub use channel::{ErrorModel, ModelKind, Seed};
pub use cover::{cover_distance, cover_weight, is_unique_minimal_cover, weight, Cover, MinimalCover};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldOp};
pub use limits::EnumCap;
pub use matspace::{InfoBlock, Mat, MatrixCode};
pub use prange::{optimal_split, prange_decode, DecodeOutcome, DecodeStatus, DecodingInstance, SplitChoice};
