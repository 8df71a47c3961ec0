//! Numerical library for two regularizations of spectral determinants:
//! the m-th formal logarithmic derivative and the exponential deformation,
//! evaluated both directly from spectra and through their resurgent
//! closed formulas (Stokes sums over theta-series singularities plus
//! asymmetry-part Laplace transforms), together with desk-scale
//! verification of the classical identities they encode: Poisson
//! summation, its deformed version, the Selberg-zeta functional identity,
//! 1-Gevrey asymptotics and the small-deformation limit.
//!
//! ```
//! use resdet_core::{cases, Complex64};
//!
//! // Σ_{n∈Z} ρ/(n²+ρ²) = π/tanh(πρ), summed with an integral tail
//! let residual = cases::psf_identity_residual(Complex64::new(1.0, 0.2), 10_000).unwrap();
//! assert!(residual < 1e-10);
//! ```

pub mod cases;
pub mod error;
pub mod gevrey;
pub mod laplace;
mod quad;
pub mod regularize;
pub mod report;
pub mod resurgence;
pub mod spectral;
pub mod suite;
mod util;

pub use error::{Error, Result};
pub use laplace::{Integrand, QuadratureResult, RayDirection};
pub use num_complex::Complex64;
pub use spectral::{LengthSpectrum, Spectrum, TailBound, ThetaEvaluator};
