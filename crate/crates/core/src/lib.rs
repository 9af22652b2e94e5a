//! Exact computer algebra for the quantized coordinate rings `O_q(M(n))` and
//! `O_q(SL_n)`, their root-of-unity Frobenius identities, and numeric
//! evaluation of the classical-limit trace map on stated arcs and knots.

pub mod classical;
pub mod coeff;
pub mod error;
pub mod expr;
pub mod frobenius;
pub mod ncalg;
pub mod qmatrix;
pub mod qsln;
pub mod report;
pub mod skeinconst;

pub use error::{Error, Result};
