//! Concrete programs at desk scale: the circle (Poisson summation and its
//! deformation, with the meromorphically extended kernel transform), the
//! sphere counterterm, higher-genus length spectra against the Selberg
//! zeta function, and the small-deformation limit relating the two
//! regularizations.
//!
//! The higher-genus checks run on synthetic length spectra: every identity
//! exercised is a series/quadrature identity valid for any positive length
//! list, so no genuine hyperbolic surface data is required.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laplace::{laplace_ray, Integrand, RayDirection};
use crate::regularize::composite_term;
use crate::resurgence::{
    alien_simple_pole, log_deriv_from_singularities, AsymmetryPart, SingularityDatum, StokesSum,
};
use crate::spectral::LengthSpectrum;
use crate::util::CAccum;

const PI: f64 = std::f64::consts::PI;
const TWO_PI: f64 = 2.0 * PI;
const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

// ---------------------------------------------------------------------------
// circle: Poisson summation
// ---------------------------------------------------------------------------

/// Residual of `Σ_{n∈Z} ρ/(n²+ρ²) = π/tanh(πρ)` with the series summed to
/// `|n| <= n_cut` and completed by an integral tail with Euler-Maclaurin
/// endpoint corrections.
pub fn psf_identity_residual(rho: Complex64, n_cut: usize) -> Result<f64> {
    let k = (rho.im).round();
    if rho.re.abs() < 1e-9 && (rho.im - k).abs() < 1e-9 {
        return Err(Error::PoleHit {
            z: rho,
            eigenvalue: k,
        });
    }
    let mut acc = CAccum::default();
    acc.add(1.0 / rho);
    for n in 1..=n_cut {
        let n2 = (n * n) as f64;
        acc.add(2.0 * rho / (n2 + rho * rho));
    }
    let nf = n_cut as f64;
    // Σ_{n>N} f(n) ≈ ∫_N^∞ f - f(N)/2 - f'(N)/12, f(x) = ρ/(x²+ρ²)
    let integral = HALF_PI - (nf / rho).atan();
    let f_n = rho / (nf * nf + rho * rho);
    let fp_n = -2.0 * nf * rho / (nf * nf + rho * rho).powi(2);
    let tail = integral - f_n / 2.0 - fp_n / 12.0;
    let series = acc.value() + 2.0 * tail;
    let closed = PI / (PI * rho).tanh();
    Ok((series - closed).norm())
}

// ---------------------------------------------------------------------------
// standard integrands
// ---------------------------------------------------------------------------

/// `t · 2/(e^t - 1)`: the lifted circle germ, regular at the origin.
pub fn t_theta_s1_integrand(theta: f64, pole_count: usize) -> Integrand {
    let gamma = if theta.cos() > 0.0 {
        -theta.cos() + 0.1
    } else {
        0.1
    };
    let poles: Vec<Complex64> = (1..=pole_count)
        .flat_map(|k| {
            let w = TWO_PI * k as f64;
            [Complex64::new(0.0, w), Complex64::new(0.0, -w)]
        })
        .collect();
    Integrand::new(
        |t: Complex64| {
            if t.norm() < 1e-8 {
                // t Θ(t) = 2 t/(e^t-1) -> 2 - t + O(t²)
                Complex64::new(2.0, 0.0) - t
            } else {
                2.0 * t / (t.exp() - 1.0)
            }
        },
        0.0,
        RayDirection {
            theta,
            gamma,
            alpha: 120.0,
        },
    )
    .unwrap()
    .with_poles(poles)
}

/// `sinh(s0)/(cosh t - cosh s0)` with poles at ±s0 + 2πik.
pub fn sinh_kernel_integrand(s0: f64, theta: f64) -> Integrand {
    let gamma = -theta.cos().abs();
    let mut poles = Vec::new();
    for k in -8i32..=8 {
        let im = TWO_PI * k as f64;
        poles.push(Complex64::new(s0, im));
        poles.push(Complex64::new(-s0, im));
    }
    let d_min = poles
        .iter()
        .map(|&p| crate::util::distance_to_ray(p, theta))
        .fold(f64::INFINITY, f64::min)
        .max(1e-6);
    let alpha = 8.0 * (1.0 + s0.sinh().abs()) * (theta.cos().abs() * (s0.abs() + 1.0)).exp()
        / d_min.min(1.0);
    Integrand::new(
        move |t: Complex64| s0.sinh() / (t.cosh() - s0.cosh()),
        0.0,
        RayDirection {
            theta,
            gamma,
            alpha,
        },
    )
    .unwrap()
    .with_poles(poles)
}

/// The asymmetry part of the shifted circle germ,
/// `f_{s0}(t) = -2 + 2 sinh(s0)/(cosh t - cosh s0)`.
pub fn f_s0_integrand(s0: f64, theta: f64) -> Integrand {
    let kernel = sinh_kernel_integrand(s0, theta);
    let poles = kernel.poles().to_vec();
    let mut decay = kernel.decay();
    decay.gamma = 0.0; // the constant part dominates at infinity
    decay.alpha += 2.0;
    Integrand::new(
        move |t: Complex64| -2.0 + 2.0 * s0.sinh() / (t.cosh() - s0.cosh()),
        0.0,
        decay,
    )
    .unwrap()
    .with_poles(poles)
}

/// `t² Θ_{S²}(t) = 2 cosh(t/2) (t/2)²/sinh²(t/2)`, regular at the origin,
/// poles on 2πiZ*.
pub fn t2_theta_s2_integrand(theta: f64) -> Integrand {
    let gamma = -theta.cos().abs() / 2.0 + 0.2;
    let poles: Vec<Complex64> = (1..=6i32)
        .flat_map(|k| {
            let w = TWO_PI * k as f64;
            [Complex64::new(0.0, w), Complex64::new(0.0, -w)]
        })
        .collect();
    Integrand::new(
        |t: Complex64| t2_theta_s2(t),
        0.0,
        RayDirection {
            theta,
            gamma,
            alpha: 1500.0,
        },
    )
    .unwrap()
    .with_poles(poles)
}

fn t2_theta_s2(t: Complex64) -> Complex64 {
    let u = t / 2.0;
    if u.norm() < 1e-4 {
        2.0 * (1.0 + u * u / 6.0)
    } else {
        let ratio = u / u.sinh();
        2.0 * u.cosh() * ratio * ratio
    }
}

/// `t² Θ_{S²}(it) = -(it)² Θ_{S²}(it)`, the lifted asymmetry kernel of the
/// surface case; poles on the real axis 2πZ*.
pub fn t2_theta_s2_rotated_integrand(theta: f64, coefficient: f64) -> Integrand {
    let gamma = -theta.sin().abs() / 2.0 + 0.2;
    let poles: Vec<Complex64> = (1..=6i32)
        .flat_map(|k| {
            let w = TWO_PI * k as f64;
            [Complex64::new(w, 0.0), Complex64::new(-w, 0.0)]
        })
        .collect();
    Integrand::new(
        move |t: Complex64| -coefficient * t2_theta_s2(I * t),
        0.0,
        RayDirection {
            theta,
            gamma,
            alpha: 1500.0 * coefficient.abs().max(1.0),
        },
    )
    .unwrap()
    .with_poles(poles)
}

// ---------------------------------------------------------------------------
// circle: closed-formula singularity data
// ---------------------------------------------------------------------------

/// Singularities of `t Θ_{S1}(t)` on the positive imaginary lattice:
/// simple poles at 2πim with residue 4πim.
pub fn s1_stokes_data(eps: f64, count: usize) -> StokesSum {
    let sing: Vec<SingularityDatum> = (1..=count)
        .map(|m| {
            let w = TWO_PI * m as f64;
            alien_simple_pole(Complex64::new(0.0, 2.0 * w), Complex64::new(0.0, w))
        })
        .collect();
    StokesSum::new(sing, HALF_PI - eps)
}

/// Singularities of the shifted circle germ `Θ_{S1}(t-s0)`: simple poles
/// at s0 + 2πim with residue 2.
pub fn s1_shifted_stokes_data(s0: f64, eps: f64, count: usize) -> StokesSum {
    let sing: Vec<SingularityDatum> = (1..=count)
        .map(|m| {
            alien_simple_pole(
                Complex64::new(2.0, 0.0),
                Complex64::new(s0, TWO_PI * m as f64),
            )
        })
        .collect();
    StokesSum::new(sing, HALF_PI - eps)
}

/// The circle asymmetry part lifted by t: `t·(-2)`.
pub fn s1_asymmetry(eps: f64) -> AsymmetryPart {
    let theta = HALF_PI + eps;
    let integrand = Integrand::new(
        |t: Complex64| -2.0 * t,
        1.0,
        RayDirection {
            theta,
            gamma: 0.0,
            alpha: 2.0,
        }
        .with_poly_growth(1),
    )
    .unwrap();
    AsymmetryPart::new(
        integrand,
        RayDirection {
            theta,
            gamma: 0.0,
            alpha: 2.0,
        }
        .with_poly_growth(1),
    )
    .unwrap()
}

/// The shifted-circle asymmetry part `f_{s0}` along π - ε.
pub fn s1_shifted_asymmetry(s0: f64, eps: f64) -> AsymmetryPart {
    let theta = PI - eps;
    let integrand = f_s0_integrand(s0, theta);
    let dir = integrand.decay();
    AsymmetryPart::new(integrand, dir).unwrap()
}

// ---------------------------------------------------------------------------
// circle: deformed Poisson summation
// ---------------------------------------------------------------------------

fn check_deformed_angles(s0: f64, eps: f64, rho: Complex64) -> Result<()> {
    let first_pole_arg = Complex64::new(s0, TWO_PI).arg();
    if !(first_pole_arg < PI - eps && PI - eps < PI) {
        return Err(Error::AngleConstraint {
            detail: format!("need arg(s0+2πi) = {first_pole_arg} < π-ε = {}", PI - eps),
        });
    }
    let arg = rho.arg();
    if !(arg > -HALF_PI + eps && arg < eps) {
        return Err(Error::AngleConstraint {
            detail: format!("arg(rho) = {arg} outside (-π/2+ε, ε)"),
        });
    }
    Ok(())
}

/// Direct series `Σ_{n>=1} 2ρ e^{s0 n}/(n²+ρ²)` with a geometric tail cut
/// at machine precision.
pub fn deformed_psf_series(rho: Complex64, s0: f64) -> Complex64 {
    let mut acc = CAccum::default();
    let cap = ((40.0 / s0.abs()) as usize).clamp(100_000, 50_000_000);
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let term = 2.0 * rho * (s0 * nf).exp() / (nf * nf + rho * rho);
        acc.add(term);
        // remaining terms are dominated by a geometric series in e^{s0}
        if (s0 * nf).exp() * 2.0 * rho.norm() / (nf * nf) / (1.0 - s0.exp()) < 1e-16 || n > cap {
            break;
        }
        n += 1;
    }
    acc.value()
}

/// Closed right-hand side of the deformed summation identity:
/// `e^{is0ρ} π/tanh(πρ) - 1/ρ - i L^{(π-ε)}(sinh s0/(cosh t - cosh s0))(-iρ)
///  - π e^{is0ρ}`.
pub fn deformed_psf_rhs(rho: Complex64, s0: f64, eps: f64, tol: f64) -> Result<Complex64> {
    if s0 >= 0.0 {
        return Err(Error::Validation {
            invariant: "s0 < 0",
            detail: format!("s0 = {s0}"),
        });
    }
    check_deformed_angles(s0, eps, rho)?;
    let kernel = kernel_transform_direct(rho, s0, eps, tol)?;
    let phase = (I * s0 * rho).exp();
    Ok(phase * PI / (PI * rho).tanh() - 1.0 / rho - I * kernel - PI * phase)
}

/// `L^{(π-ε)}(sinh s0/(cosh t - cosh s0))(-iρ)` by direct quadrature.
pub fn kernel_transform_direct(rho: Complex64, s0: f64, eps: f64, tol: f64) -> Result<Complex64> {
    let g = sinh_kernel_integrand(s0, PI - eps);
    Ok(laplace_ray(&g, g.decay(), -I * rho, tol)?.value)
}

/// The same transform continued into the sector ε < arg ρ < π + ε:
/// `L^{(-ε)}(…)(-iρ) - 2πi(e^{is0ρ} - e^{-is0ρ})/(e^{2πρ}-1) + 2πi e^{-is0ρ}`.
pub fn kernel_transform_extended(rho: Complex64, s0: f64, eps: f64, tol: f64) -> Result<Complex64> {
    let g = sinh_kernel_integrand(s0, -eps);
    let base = laplace_ray(&g, g.decay(), -I * rho, tol)?.value;
    let up = (I * s0 * rho).exp();
    let down = (-I * s0 * rho).exp();
    let correction = -TWO_PI * I * (up - down) / ((TWO_PI * rho).exp() - 1.0);
    Ok(base + correction + TWO_PI * I * down)
}

/// Meromorphic extension of the kernel transform, choosing the direct or
/// extended representation from arg(ρ). Errors on the singular lattice
/// iZ_{>=0} of the extension.
pub fn kernel_transform(rho: Complex64, s0: f64, eps: f64, tol: f64) -> Result<Complex64> {
    let n = rho.im.round().max(0.0);
    let dist = (rho - Complex64::new(0.0, n)).norm();
    if dist < 1e-6 {
        return Err(Error::OnSingularLattice {
            rho,
            distance: dist,
        });
    }
    let arg = rho.arg();
    if arg > eps && arg < PI + eps {
        kernel_transform_extended(rho, s0, eps, tol)
    } else {
        kernel_transform_direct(rho, s0, eps, tol)
    }
}

// ---------------------------------------------------------------------------
// deformed summation formula with a test function
// ---------------------------------------------------------------------------

/// An entire test function with declared strip and decay data, plus its
/// Fourier transform in closed form.
#[derive(Clone)]
pub struct TestFunction {
    h: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    fourier: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    /// half-width of the holomorphy strip actually used (|Im ρ| < 2η)
    pub eta: f64,
    /// power-decay exponent toward -∞: |h| = O(|ρ|^{-1-δ})
    pub delta: f64,
    /// exponential-growth allowance toward +∞: |h| = O(e^{δ' |ρ|}), δ' < s0
    pub delta_prime: f64,
}

impl std::fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("eta", &self.eta)
            .field("delta", &self.delta)
            .field("delta_prime", &self.delta_prime)
            .finish()
    }
}

impl TestFunction {
    /// Gaussian `h(ρ) = e^{-aρ²}` with
    /// `ĥ(τ) = e^{-τ²/(4a)} / (2√(πa))`.
    pub fn gaussian(a: f64, eta: f64, delta_prime: f64) -> Result<Self> {
        if a <= 0.0 {
            return Err(Error::Validation {
                invariant: "a > 0",
                detail: format!("a = {a}"),
            });
        }
        Ok(Self {
            h: Arc::new(move |rho: Complex64| (-a * rho * rho).exp()),
            fourier: Arc::new(move |tau: Complex64| {
                (-tau * tau / (4.0 * a)).exp() / (2.0 * (PI * a).sqrt())
            }),
            eta,
            delta: 1.0,
            delta_prime,
        })
    }

    pub fn h(&self, rho: Complex64) -> Complex64 {
        (self.h)(rho)
    }

    pub fn fourier(&self, tau: Complex64) -> Complex64 {
        (self.fourier)(tau)
    }

    /// Samples the declared hypotheses on the strip edges: holomorphy strip
    /// wide enough for the deformation, power decay toward -∞ and
    /// `e^{δ'|ρ|}`-domination toward +∞ with δ' < s0.
    pub fn check_hypotheses(&self, s0: f64) -> Result<()> {
        if self.eta >= s0.abs() {
            return Err(Error::HypothesisViolation {
                hypothesis: "eta < |s0|",
                detail: format!("eta = {}, |s0| = {}", self.eta, s0.abs()),
            });
        }
        if self.delta_prime >= s0 {
            return Err(Error::HypothesisViolation {
                hypothesis: "delta' < s0",
                detail: format!("delta' = {}, s0 = {s0}", self.delta_prime),
            });
        }
        let edges = [2.0 * self.eta, -2.0 * self.eta];
        for edge in edges {
            let mut prev_left = f64::INFINITY;
            let mut prev_right = f64::INFINITY;
            for j in 0..32 {
                let x = 10.0 + 30.0 * j as f64 / 31.0;
                let left = self.h(Complex64::new(-x, edge)).norm() * x.powf(1.0 + self.delta);
                if left > prev_left * 1.1 {
                    return Err(Error::HypothesisViolation {
                        hypothesis: "power decay toward -infinity",
                        detail: format!("|h(-{x}+i{edge})| |ρ|^(1+δ) grows"),
                    });
                }
                prev_left = left.max(1e-300);
                let right = self.h(Complex64::new(x, edge)).norm() * (-self.delta_prime * x).exp();
                if right > prev_right * 1.1 {
                    return Err(Error::HypothesisViolation {
                        hypothesis: "exponential bound toward +infinity",
                        detail: format!("|h({x}+i{edge})| e^(-δ'ρ) grows"),
                    });
                }
                prev_right = right.max(1e-300);
            }
        }
        Ok(())
    }
}

/// Two sides of a summation-formula check.
#[derive(Debug, Clone, Copy)]
pub struct SummationReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Deformed summation formula
/// `Σ_n h(n) e^{-s0 n} = 2π Σ_m ĥ(2πm + is0)` with both sums truncated
/// symmetrically.
pub fn deformed_psf_theorem(
    h: &TestFunction,
    s0: f64,
    n_terms: usize,
    m_terms: usize,
) -> Result<SummationReport> {
    if s0 >= 0.0 {
        return Err(Error::Validation {
            invariant: "s0 < 0",
            detail: format!("s0 = {s0}"),
        });
    }
    h.check_hypotheses(s0)?;
    let mut lhs = CAccum::default();
    for n in -(n_terms as i64)..=(n_terms as i64) {
        let nf = n as f64;
        lhs.add(h.h(Complex64::new(nf, 0.0)) * (-s0 * nf).exp());
    }
    let mut rhs = CAccum::default();
    for m in -(m_terms as i64)..=(m_terms as i64) {
        let tau = Complex64::new(TWO_PI * m as f64, s0);
        rhs.add(h.fourier(tau));
    }
    let lhs = lhs.value();
    let rhs = TWO_PI * rhs.value();
    Ok(SummationReport {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

/// Classical summation formula `Σ h(n) = 2π Σ ĥ(2πm)` for the s0 -> 0 limit.
pub fn classical_psf_theorem(h: &TestFunction, n_terms: usize, m_terms: usize) -> SummationReport {
    let mut lhs = CAccum::default();
    for n in -(n_terms as i64)..=(n_terms as i64) {
        lhs.add(h.h(Complex64::new(n as f64, 0.0)));
    }
    let mut rhs = CAccum::default();
    for m in -(m_terms as i64)..=(m_terms as i64) {
        rhs.add(h.fourier(Complex64::new(TWO_PI * m as f64, 0.0)));
    }
    let lhs = lhs.value();
    let rhs = TWO_PI * rhs.value();
    SummationReport {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    }
}

// ---------------------------------------------------------------------------
// higher genus: Selberg zeta
// ---------------------------------------------------------------------------

/// Length spectrum with winding truncation and domain guard for the
/// zeta-function comparison.
#[derive(Debug, Clone)]
pub struct SelbergContext {
    pub lengths: LengthSpectrum,
    pub k_max: usize,
}

impl SelbergContext {
    pub fn new(lengths: LengthSpectrum, k_max: usize) -> Self {
        Self { lengths, k_max }
    }

    /// `log Z(s)` from the Euler product over primitive lengths, for
    /// Re(s) > 1, with geometric truncation of the n-product.
    pub fn log_zeta(&self, s: Complex64) -> Result<Complex64> {
        if s.re <= 1.0 {
            return Err(Error::Domain {
                what: "Selberg zeta Euler product",
                detail: format!("Re(s) = {} <= 1", s.re),
            });
        }
        let mut acc = CAccum::default();
        for (&tau, &mult) in self
            .lengths
            .lengths()
            .iter()
            .zip(self.lengths.multiplicities())
        {
            let mut n = 0usize;
            loop {
                let x = (-tau * (s + n as f64)).exp();
                acc.add(mult as f64 * (1.0 - x).ln());
                // remaining factors are bounded by a geometric series
                let rest = x.norm() * (-tau).exp() / (1.0 - (-tau).exp());
                if rest < 1e-17 || n > 4000 {
                    break;
                }
                n += 1;
            }
        }
        Ok(acc.value())
    }

    /// Third ρ-derivative of `log Z(1/2 + ρ)` by 5-point central
    /// differences with one Richardson step, h = 1e-2.
    pub fn log_zeta_third_derivative(&self, rho: Complex64) -> Result<Complex64> {
        let h0 = 1e-2;
        if rho.re <= 0.5 + 2.0 * h0 + 1e-9 {
            return Err(Error::Domain {
                what: "zeta third derivative",
                detail: format!("Re(rho) = {} too close to 1/2 for the stencil", rho.re),
            });
        }
        let f = |r: Complex64| self.log_zeta(Complex64::new(0.5, 0.0) + r);
        let stencil = |h: f64| -> Result<Complex64> {
            Ok(
                (f(rho + 2.0 * h)? - 2.0 * f(rho + h)? + 2.0 * f(rho - h)? - f(rho - 2.0 * h)?)
                    / (2.0 * h * h * h),
            )
        };
        let d0 = stencil(h0)?;
        let d1 = stencil(h0 / 2.0)?;
        Ok((4.0 * d1 - d0) / 3.0)
    }
}

/// `Σ_k Σ_m mult_m k² τ_m³ e^{-kτ_m ρ} / (2 sinh(kτ_m/2))` with a certified
/// winding tail; this is the third derivative of `log Z(1/2+ρ)` summed
/// directly from the length data. Domain Re(ρ) > 1/2.
pub fn selberg_log_deriv3(ctx: &SelbergContext, rho: Complex64, tol: f64) -> Result<Complex64> {
    if rho.re <= 0.5 {
        return Err(Error::Domain {
            what: "geodesic winding sum",
            detail: format!("Re(rho) = {} <= 1/2", rho.re),
        });
    }
    if ctx.lengths.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let per_length_tol = tol / ctx.lengths.lengths().len() as f64;
    let mut acc = CAccum::default();
    for (&tau, &mult) in ctx
        .lengths
        .lengths()
        .iter()
        .zip(ctx.lengths.multiplicities())
    {
        let x = (-tau * (rho.re + 0.5)).exp();
        let prefactor = mult as f64 * tau.powi(3) / (1.0 - (-tau).exp());
        let mut last_tail = f64::INFINITY;
        let mut certified = false;
        for k in 1..=ctx.k_max {
            let kf = k as f64;
            let term = mult as f64 * kf * kf * tau.powi(3) * (-kf * tau * rho).exp()
                / (2.0 * (kf * tau / 2.0).sinh());
            acc.add(term);
            // Σ_{j>k} j² x^j <= (k+1)² x^{k+1} (1+x)/(1-x)³
            last_tail = prefactor * (kf + 1.0) * (kf + 1.0) * x.powi(k as i32 + 1) * (1.0 + x)
                / (1.0 - x).powi(3);
            if last_tail < per_length_tol {
                certified = true;
                break;
            }
        }
        if !certified {
            return Err(Error::InsufficientSpectrum {
                needed: per_length_tol,
                achieved: last_tail,
            });
        }
    }
    Ok(acc.value())
}

/// Stokes data of the lifted surface germ `t²Θ_X(t)`: simple poles at
/// ikτ_m with residue `(ikτ_m)² mult τ_m/(4π sinh(kτ_m/2))`.
pub fn surface_stokes_data(lengths: &LengthSpectrum, eps: f64, k_max: usize) -> StokesSum {
    let mut sing = Vec::new();
    for (&tau, &mult) in lengths.lengths().iter().zip(lengths.multiplicities()) {
        for k in 1..=k_max {
            let kf = k as f64;
            let loc = Complex64::new(0.0, kf * tau);
            let residue = loc * loc * (mult as f64) * tau / (4.0 * PI * (kf * tau / 2.0).sinh());
            sing.push(alien_simple_pole(residue, loc));
        }
    }
    StokesSum::new(sing, HALF_PI - eps)
}

/// The surface asymmetry part lifted by t²:
/// `t² (2-2g) Θ_{S²}(it) = (2g-2) · (it)² Θ_{S²}(it)`.
pub fn surface_asymmetry(genus: u32, eps: f64) -> AsymmetryPart {
    let theta = HALF_PI + eps;
    let coefficient = 2.0 * genus as f64 - 2.0;
    let integrand = t2_theta_s2_rotated_integrand(theta, -coefficient);
    // t²Θ(it) = -(it)²Θ(it); the rotated integrand computes -c · (it)²Θ(it)
    // with c passed in, so c = -(2g-2) yields (2g-2)(it)²Θ(it) = (2-2g)t²Θ(it)
    let dir = integrand.decay();
    AsymmetryPart::new(integrand, dir).unwrap()
}

/// Dual-path report for the surface identity.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceReport {
    pub stokes_path: Complex64,
    pub direct_path: Complex64,
    pub residual: f64,
    pub combined_error: f64,
    pub pass: bool,
}

/// Verifies that the resummed closed formula built from the surface
/// singularity data equals the directly summed geodesic series plus the
/// sphere counterterm `(2-2g) L^{ε}(t²Θ_{S²})(ρ)`.
pub fn surface_identity_check(
    ctx: &SelbergContext,
    genus: u32,
    rho: Complex64,
    eps: f64,
    tol: f64,
) -> Result<SurfaceReport> {
    if rho.re <= 0.5 {
        return Err(Error::Domain {
            what: "surface identity",
            detail: format!("Re(rho) = {} <= 1/2", rho.re),
        });
    }
    if !(eps > 0.0 && eps < HALF_PI) {
        return Err(Error::AngleConstraint {
            detail: format!("eps = {eps} outside (0, π/2)"),
        });
    }
    let sing = surface_stokes_data(&ctx.lengths, eps, ctx.k_max);
    let asym = surface_asymmetry(genus, eps);
    let (path_a, err_a) = log_deriv_from_singularities(3, &sing, &asym, eps, rho, tol)?;

    let winding = selberg_log_deriv3(ctx, rho, tol)?;
    let counter = s2_counterterm_quadrature(rho, eps, tol)?;
    let path_b = winding + (2.0 - 2.0 * genus as f64) * counter.value;

    let residual = (path_a - path_b).norm();
    let combined_error = err_a + counter.abs_error_estimate + tol;
    Ok(SurfaceReport {
        stokes_path: path_a,
        direct_path: path_b,
        residual,
        combined_error,
        pass: residual <= combined_error.max(tol),
    })
}

/// `L^{ε}(t²Θ_{S²})(ρ)` by quadrature along the ray arg t = ε.
pub fn s2_counterterm_quadrature(
    rho: Complex64,
    eps: f64,
    tol: f64,
) -> Result<crate::laplace::QuadratureResult> {
    let g = t2_theta_s2_integrand(eps);
    laplace_ray(&g, g.decay(), rho, tol)
}

/// Spectral oracle for the counterterm:
/// `Σ_j (2j+1) · 2/(ρ+j+1/2)³`, accelerated with an integral tail and a
/// midpoint correction.
pub fn s2_counterterm_spectral(rho: Complex64, j_cut: usize) -> Complex64 {
    let mut acc = CAccum::default();
    for j in 0..=j_cut {
        let w = j as f64 + 0.5;
        acc.add(2.0 * (2.0 * w) / (rho + w).powi(3));
    }
    // remaining terms 4w/(ρ+w)³ at half-integer w are midpoint samples of
    // unit intervals: Σ ≈ ∫_{J+1}^∞ 4w/(ρ+w)³ dw + f'(J+1)/24
    let edge = j_cut as f64 + 1.0;
    let u = rho + edge;
    let integral = 4.0 * (1.0 / u - rho / (2.0 * u * u));
    let fprime = |w: f64| {
        let v = rho + w;
        4.0 / (v * v * v) - 12.0 * w / (v * v * v * v)
    };
    acc.add(integral + fprime(edge) / 24.0);
    acc.value()
}

// ---------------------------------------------------------------------------
// relation between the two regularizations
// ---------------------------------------------------------------------------

/// Entry of the deformation-limit table.
#[derive(Debug, Clone, Copy)]
pub struct GapEntry {
    pub s0: f64,
    pub gap: f64,
    pub certificate: f64,
}

/// Report of the small-deformation limit check: the m-th derivative of the
/// deformed determinant against the (m+1)-st log-derivative composite.
#[derive(Debug, Clone)]
pub struct LimitReport {
    pub entries: Vec<GapEntry>,
    pub strictly_decreasing: bool,
    pub final_over_initial: f64,
}

/// Gap `|(d/dρ)^m deformed(s0) - composite(m+1)|` computed as the
/// difference series `Σ_n (e^{s0 ρ_n}-1) d^m/dρ^m[2ρ/(ρ²+ρ_n²)]`, whose
/// truncation tail stays certified even for tiny |s0|. Requires m >= d.
pub fn deformation_gap(
    spectrum: &crate::spectral::Spectrum,
    m: u32,
    rho: Complex64,
    s0: f64,
) -> Result<(f64, f64)> {
    let d = spectrum.dimension();
    if m < d {
        return Err(Error::Validation {
            invariant: "deformation-limit order m >= d",
            detail: format!("m = {m}, d = {d}"),
        });
    }
    if s0 >= 0.0 {
        return Err(Error::Validation {
            invariant: "s0 < 0",
            detail: format!("s0 = {s0}"),
        });
    }
    let mut acc = CAccum::default();
    for &r in spectrum.rhos() {
        acc.add(((s0 * r).exp() - 1.0) * composite_term(m + 1, rho, r));
    }
    let certificate = if spectrum.is_complete() {
        0.0
    } else {
        gap_tail(spectrum, m, rho.norm(), s0)?
    };
    Ok((acc.value().norm(), certificate))
}

/// Certified tail of the difference series: per-term bound
/// `min(1, |s0| ρ_n) · 2 m! (1-u)^{-(m+1)} / ρ_n^{m+1}` with
/// `ρ_n >= a n^{1/d}` and `u = |ρ|/ρ_lb(N) < 1/2`, split at the index
/// where |s0| ρ_n reaches 1.
fn gap_tail(spectrum: &crate::spectral::Spectrum, m: u32, rho_abs: f64, s0: f64) -> Result<f64> {
    let d = spectrum.dimension() as f64;
    let Some(c) = spectrum.weyl_constant() else {
        return Err(Error::InsufficientSpectrum {
            needed: 0.0,
            achieved: f64::INFINITY,
        });
    };
    let a = (0.9 * c).sqrt();
    let n_used = spectrum.len() as f64;
    let u = rho_abs / (a * n_used.powf(1.0 / d));
    if u >= 0.5 {
        return Err(Error::InsufficientSpectrum {
            needed: 2.0 * rho_abs,
            achieved: a * n_used.powf(1.0 / d),
        });
    }
    let mut factorial = 1.0;
    for k in 1..=m {
        factorial *= k as f64;
    }
    let big_k = 2.0 * factorial / (1.0 - u).powi(m as i32 + 1);
    let mf = m as f64;
    let n_star = (1.0 / (s0.abs() * a)).powf(d).max(n_used);
    // below the split: |e^{s0 ρ}-1| <= |s0| ρ_n
    let part1 = if (mf / d - 1.0).abs() < 1e-12 {
        s0.abs() * big_k * a.powf(-mf) * ((n_star / n_used).ln() + 1.0 / n_used)
    } else if mf / d > 1.0 {
        s0.abs() * big_k * a.powf(-mf) * n_used.powf(1.0 - mf / d) / (mf / d - 1.0)
    } else {
        s0.abs() * big_k * a.powf(-mf) * n_star.powf(1.0 - mf / d) / (1.0 - mf / d)
    };
    // beyond the split: |e^{s0 ρ}-1| <= 1
    let q = (mf + 1.0) / d;
    let part2 = big_k * a.powf(-(mf + 1.0)) * n_star.powf(1.0 - q) / (q - 1.0);
    Ok(part1 + part2)
}

/// Tabulates the gap over a decreasing |s0| sequence.
pub fn regularization_limit_check(
    spectrum: &crate::spectral::Spectrum,
    m: u32,
    rho: Complex64,
    s0_sequence: &[f64],
) -> Result<LimitReport> {
    let mut entries = Vec::with_capacity(s0_sequence.len());
    for &s0 in s0_sequence {
        let (gap, certificate) = deformation_gap(spectrum, m, rho, s0)?;
        entries.push(GapEntry {
            s0,
            gap,
            certificate,
        });
    }
    let strictly_decreasing = entries.windows(2).all(|w| w[1].gap < w[0].gap);
    let final_over_initial = match (entries.first(), entries.last()) {
        (Some(first), Some(last)) if first.gap > 0.0 => last.gap / first.gap,
        _ => f64::NAN,
    };
    Ok(LimitReport {
        entries,
        strictly_decreasing,
        final_over_initial,
    })
}

/// Two synthetic length spectra used by the surface checks; not lengths of
/// genuine hyperbolic surfaces.
pub fn synthetic_length_spectra() -> (LengthSpectrum, LengthSpectrum) {
    let a = LengthSpectrum::new(vec![(2.0, 1)], 2).unwrap();
    let b = LengthSpectrum::new(vec![(2.0, 1), (2.5, 1), (3.1, 2)], 2).unwrap();
    (a, b)
}
