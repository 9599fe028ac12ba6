//! Rigidity of the round sphere for conformally natural functionals: K-type
//! spectra of intertwining Hessians, leading symbols and extremality signs,
//! radial Green's functions with their regularized traces, and the Möbius
//! action used to check conformal covariance.

pub mod antiderivative;
pub mod confgroup;
pub mod error;
pub mod exact;
pub mod greens;
pub mod ktypes;
pub mod linalg;
pub mod qcurv;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectrum;
pub mod symbols;

pub use error::{Error, Result};
pub use scalar::{RealScalar, Scalar};

/// Arbitrary-precision rational used for κ, step differences, eigenvalues and
/// symbol coefficients.
pub type ExactScalar = num_rational::BigRational;

pub type SpectrumTableExact = spectrum::SpectrumTable<ExactScalar>;
pub type SpectrumTableF64 = spectrum::SpectrumTable<f64>;
pub type SpectrumTableF32 = spectrum::SpectrumTable<f32>;
pub type PointDataExact = symbols::PointData<ExactScalar>;
pub type PointDataF64 = symbols::PointData<f64>;
pub type MatExact = linalg::Mat<ExactScalar>;
