//! harder-lab: exact arithmetic for the computational side of Harder-type
//! congruences.
//!
//! The crate computes, over exact coefficient rings (arbitrary-precision
//! rationals, real quadratic fields and small square-root towers):
//!
//! * special values of zeta and Dirichlet L-functions at non-positive
//!   integers ([`special`]),
//! * q-expansions and Hecke eigenforms for level-one elliptic modular forms
//!   ([`qexp`]) and period-free ratios of their critical L-values
//!   ([`lvalue`]),
//! * local Siegel series by brute-force character sums ([`siegel`]) and the
//!   Fourier coefficients of normalized Siegel-Eisenstein series together
//!   with their degree-two Hecke action ([`eisenstein`]),
//! * the bideterminant/SSYT calculus and the symmetric-matrix differential
//!   operator kernels used in pullback formulas ([`diffop`]),
//! * pullback Fourier coefficients, the determinant method, and the
//!   verification drivers for the three worked congruence cases
//!   ([`epsilon`]),
//! * A-parameter bookkeeping for lifts: weight merges, sign conditions and
//!   degree-two spin Euler factors ([`lifts`]).
//!
//! The `harderlab` binary exposes each layer as a CLI subcommand; see the
//! README for usage.

pub mod bigfloat;
pub mod diffop;
pub mod eisenstein;
pub mod epsilon;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod lifts;
pub mod linalg;
pub mod lvalue;
pub mod qexp;
pub mod report;
pub mod siegel;
pub mod special;

pub use error::{Error, Result};
