//! Exhaustive generation of integer partial weighing matrices `PIW(m, n, k)`
//! (integer `m x n` matrices with `M M^T = k I`) up to Hadamard equivalence,
//! and their classification up to transpose-Hadamard equivalence.
//!
//! * [`nsoks`] enumerates sums of squares, the source of all admissible rows.
//! * [`canon`] computes row-lex minimal class representatives.
//! * [`search`] grows minimal prefixes row by row.
//! * [`invariant`] and [`classify`] separate and label the resulting classes.
//! * [`pipeline`] runs everything end to end.

pub mod canon;
pub mod classify;
pub mod error;
pub mod invariant;
pub mod io;
pub mod matrix;
pub mod nsoks;
pub mod pipeline;
pub mod search;

pub use error::{Error, Result};
pub use matrix::{row_lex_compare, HadamardPair, IntegerMatrix, Monomial, RowVector};
