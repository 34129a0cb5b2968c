//! Exact-arithmetic toolkit for circulant Hadamard matrices.
//!
//! * [`circulant`] holds circulant matrices over exact rationals, stored by
//!   first row, with products computed as cyclic convolutions.
//! * [`hadamard`] has the Hadamard and regularity predicates, the doubly
//!   stochastic matrix `S = (H + J) / (n + sqrt(n))` and the catalog of the
//!   ten known circulant Hadamard matrices.
//! * [`audit`] replays the identity chain built on `S` for a concrete matrix
//!   and reports a verdict per step.
//! * [`search`] enumerates circulant Hadamard first rows and Barker
//!   sequences with pruning and canonicalization.

pub mod audit;
pub mod circulant;
mod error;
pub mod hadamard;
pub mod search;

pub use circulant::{CirculantMatrix, ConstantKind, Rational};
pub use error::{Error, Result};
pub use hadamard::{RegularProfile, Sign, SignVector};
