//! Balanced extended non-associative words over `{x, y, z, p}`.
//!
//! Two context-free languages, extended non-associative words ([`recognizers::is_enw`])
//! and balanced words ([`recognizers::is_balanced`]), intersect in the
//! language Ω ([`omega::is_omega`]). Counting the leading `x` run of a word in Ω
//! recovers the logarithm of its number of `z` letters, which turns the
//! dissection of a geometrically growing unary language into the dissection
//! of a constantly growing one ([`dissection`]).

pub mod crossval;
pub mod dissection;
pub mod exec;
pub mod grammar;
pub mod omega;
pub mod recognizers;
pub mod words;

pub use exec::Execution;
pub use words::{Letter, UnaryWord, Word, WordError};
