//! Numerical workbench for time operators on the ring S¹.
//!
//! Everything lives in a truncated momentum window `l ∈ [-L, L]`. Operators
//! are dense complex matrices over that window; identities that involve the
//! raising operator are exact for states supported away from the window edge
//! (see [`StateVector::is_interior`]).
//!
//! Module map:
//! - [`basis`]: the truncated Hilbert space, momentum and grid views of states.
//! - [`operators`]: matrix representations of π̂, Ĥ, Ŵⁿ, μ̂ₙ, periodic position
//!   operators and the family of ring time operators.
//! - [`algebra`]: commutators, weak Weyl / commutation-relation reports, parity
//!   and PT transforms.
//! - [`spectral`]: biorthogonal eigensystem of the PT-symmetric time operator and
//!   a Jacobi eigensolver for Hermitian diagnostics.
//! - [`dynamics`]: Heisenberg evolution, time-crystal periodicity and the
//!   spin-1/2 Floquet prototype.
//! - [`limits`]: reference line-system operators and infinite-radius sweeps.
//! - [`uncertainty`]: Robertson, Dou–Du and Cauchy–Schwarz type relations.
//! - [`studies`]: canned study runs that produce [`Table`]s for the CLI.

pub mod algebra;
pub mod basis;
pub mod dynamics;
mod error;
pub mod limits;
pub mod linalg;
pub mod operators;
mod precise;
pub mod spectral;
pub mod studies;
pub mod table;
pub mod uncertainty;

pub use basis::{GridFunction, GridProjection, StateVector, TruncatedBasis};
pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use operators::{FourierSymbol, OperatorMatrix, OperatorTags};
pub use table::{Cell, Column, Table};

/// Interior margin used by every commutator suite unless overridden.
pub const DEFAULT_MARGIN: usize = 8;
