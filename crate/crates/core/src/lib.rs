//! Exact construction of the Jacobi orthogonal polynomials on the unit
//! circle and identity-by-identity verification of their CMV
//! bispectrality: the five-term CMV recurrence, the Dunkl-type eigenvalue
//! equation, the circle Jacobi algebra, and the Szegő map to the real line.
//!
//! Everything is generic over a [`Scalar`] field. The exact pipeline uses
//! [`Rational`]; floating-point work is confined to [`moments`] quadrature
//! and [`cmv::truncated_spectrum`].

pub mod algebra;
pub mod cmv;
pub mod dunkl;
pub mod error;
pub mod laurent;
pub mod moments;
pub mod opuc;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod szego;

pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use opuc::{JacobiParams, OpucFamily};
pub use report::VerificationReport;
pub use scalar::{parse_rational, Scalar};

/// Exact signed fraction, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;
/// Laurent polynomial with exact rational coefficients.
pub type Laurent = LaurentPoly<Rational>;
pub type Params = JacobiParams<Rational>;
pub type Family = OpucFamily<Rational>;
