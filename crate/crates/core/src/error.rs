use std::fmt;

use num_complex::Complex64;

/// Errors produced by spectral, quadrature and verification routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation point lies outside the holomorphy domain of the series.
    Domain { what: &'static str, detail: String },
    /// The stored spectrum is too short to certify the requested tolerance.
    InsufficientSpectrum { needed: f64, achieved: f64 },
    /// A file could not be parsed.
    Parse { line: usize, detail: String },
    /// A constructed value violates a type invariant.
    Validation {
        invariant: &'static str,
        detail: String,
    },
    /// The Laplace evaluation point is outside the convergence half-plane.
    OutsideHalfPlane {
        rho: Complex64,
        theta: f64,
        margin: f64,
    },
    /// A declared pole lies too close to the integration ray.
    PoleTooClose {
        pole: Complex64,
        distance: f64,
        clearance: f64,
    },
    /// A declared pole lies in the open sector between two rays.
    PoleBetweenRays { pole: Complex64 },
    /// Quadrature finished but could not certify the requested tolerance.
    ToleranceNotMet {
        value: Complex64,
        error_estimate: f64,
        tol: f64,
    },
    /// The evaluation point coincides with a negated eigenvalue.
    PoleHit { z: Complex64, eigenvalue: f64 },
    /// A Stokes residual exceeds what declared singularities can explain.
    MissingSingularity { residual: f64, budget: f64 },
    /// An angle parameter violates its stated constraint.
    AngleConstraint { detail: String },
    /// A Borel sum was requested outside its empirical disc of convergence.
    RadiusExceeded { t_abs: f64, radius: f64 },
    /// No (L, M) pair within the search box satisfies the remainder bound.
    NoFit { best_l: f64, best_m: f64 },
    /// A test function fails one of the summation-formula hypotheses.
    HypothesisViolation {
        hypothesis: &'static str,
        detail: String,
    },
    /// The point sits on the singular lattice of the extended transform.
    OnSingularLattice { rho: Complex64, distance: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, detail } => write!(f, "domain error in {what}: {detail}"),
            Error::InsufficientSpectrum { needed, achieved } => write!(
                f,
                "stored spectrum certifies only {achieved:.3e}, requested {needed:.3e}"
            ),
            Error::Parse { line, detail } => write!(f, "parse error at line {line}: {detail}"),
            Error::Validation { invariant, detail } => {
                write!(f, "invariant `{invariant}` violated: {detail}")
            }
            Error::OutsideHalfPlane { rho, theta, margin } => write!(
                f,
                "rho = {rho} outside half-plane of direction {theta} (margin {margin:.1e})"
            ),
            Error::PoleTooClose { pole, distance, clearance } => write!(
                f,
                "pole {pole} at distance {distance:.3e} from ray, clearance {clearance:.3e}"
            ),
            Error::PoleBetweenRays { pole } => {
                write!(f, "pole {pole} lies between the integration rays")
            }
            Error::ToleranceNotMet { value, error_estimate, tol } => write!(
                f,
                "quadrature reached {error_estimate:.3e} > tol {tol:.3e} (value {value})"
            ),
            Error::PoleHit { z, eigenvalue } => {
                write!(f, "evaluation point {z} hits pole at eigenvalue {eigenvalue}")
            }
            Error::MissingSingularity { residual, budget } => write!(
                f,
                "Stokes residual {residual:.3e} exceeds 10x error budget {budget:.3e}; \
                 an undeclared singularity lies between the rays"
            ),
            Error::AngleConstraint { detail } => write!(f, "angle constraint violated: {detail}"),
            Error::RadiusExceeded { t_abs, radius } => write!(
                f,
                "|t| = {t_abs:.3e} beyond empirical Borel radius {radius:.3e}"
            ),
            Error::NoFit { best_l, best_m } => write!(
                f,
                "no (L, M) <= (1e6, 1e3) satisfies the remainder bound (best L {best_l:.3e} at M {best_m:.3e})"
            ),
            Error::HypothesisViolation { hypothesis, detail } => {
                write!(f, "hypothesis `{hypothesis}` fails: {detail}")
            }
            Error::OnSingularLattice { rho, distance } => write!(
                f,
                "rho = {rho} within {distance:.3e} of the singular lattice i*Z"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
