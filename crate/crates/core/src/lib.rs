//! Dominating sets (radius-1 covering codes) of the binary hypercube Q_n:
//! word algebra, exhaustive coverage checks, perfect and separated codes,
//! the wedge construction, small exact oracles and an exact bounds ledger.

pub mod bounds;
pub mod codes;
pub mod coverage;
pub mod error;
pub mod oracle;
pub mod vertex_set;
pub mod wedge;
pub mod word;

/// Exact multiplicative gain values.
pub type Chi = num_rational::BigRational;

pub use error::{Error, Result};
pub use vertex_set::VertexSet;
pub use word::Word;
