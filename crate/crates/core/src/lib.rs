//! Exact heights over `Q` and quadratic fields, sparse small-height bases of
//! subspaces, a relative variant for matrices over a quadratic extension, and
//! integer sensing matrices.

pub mod error;
pub mod exec;
pub mod field;
pub mod basis;
pub mod height;
pub mod linalg;
pub mod relative;
pub mod sensing;
pub mod bounds;
pub mod format;
pub mod checks;
pub mod random;
pub mod selftest;

pub use error::{Error, ParseErrorKind, Result};
pub use exec::Exec;
pub use field::{FieldCtx, FieldKind, QNum};
pub use height::ExactHeight;
pub use linalg::{GrassmannVector, IndexSet, QMatrix};
