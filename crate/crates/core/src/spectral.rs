//! Operator spectra, geodesic length spectra and theta series
//! `Θ(t) = Σ_n e^{-w_n t}` with certified truncation error.
//!
//! Eigenvalues are stored with explicit multiplicity (a doubly degenerate
//! eigenvalue appears twice). The series can run over the eigenvalues
//! `λ_n` themselves or over the root spectrum `ρ_n = √λ_n`; the latter is
//! the form whose singularities stay discrete on the imaginary axis.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::util::{Accum, CAccum};

/// Safety factor applied to the Weyl constant in tail certificates.
const WEYL_MARGIN: f64 = 0.9;

/// A finite, nondecreasing positive eigenvalue sequence with growth data.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    roots: Vec<f64>,
    dimension: u32,
    shift: f64,
    weyl_constant: Option<f64>,
    /// First stored index (0-based) from which every eigenvalue satisfies
    /// `λ_n >= 0.9 c n^{2/d}`; the Weyl tail certificate applies beyond it.
    weyl_valid_from: Option<usize>,
    /// The stored list is the entire spectrum; truncation tails vanish.
    complete: bool,
}

impl Spectrum {
    pub fn new(
        eigenvalues: Vec<f64>,
        dimension: u32,
        shift: f64,
        weyl_constant: Option<f64>,
    ) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Validation {
                invariant: "nonempty spectrum",
                detail: "no eigenvalues given".into(),
            });
        }
        if dimension == 0 {
            return Err(Error::Validation {
                invariant: "positive dimension",
                detail: "dimension must be >= 1".into(),
            });
        }
        for (i, w) in eigenvalues.windows(2).enumerate() {
            if w[1] < w[0] {
                return Err(Error::Validation {
                    invariant: "nondecreasing eigenvalues",
                    detail: format!("entry {} = {} < entry {} = {}", i + 2, w[1], i + 1, w[0]),
                });
            }
        }
        if eigenvalues[0] <= 0.0 || !eigenvalues[0].is_finite() {
            return Err(Error::Validation {
                invariant: "strictly positive eigenvalues",
                detail: format!("first eigenvalue is {}", eigenvalues[0]),
            });
        }
        if let Some(c) = weyl_constant {
            if c <= 0.0 {
                return Err(Error::Validation {
                    invariant: "positive weyl constant",
                    detail: format!("weyl_constant = {c}"),
                });
            }
        }
        let roots: Vec<f64> = eigenvalues.iter().map(|l| l.sqrt()).collect();
        let weyl_valid_from = weyl_constant.map(|c| {
            let p = 2.0 / dimension as f64;
            let mut from = eigenvalues.len();
            for i in (0..eigenvalues.len()).rev() {
                let n = (i + 1) as f64;
                if eigenvalues[i] >= WEYL_MARGIN * c * n.powf(p) {
                    from = i;
                } else {
                    break;
                }
            }
            from
        });
        Ok(Self {
            eigenvalues,
            roots,
            dimension,
            shift,
            weyl_constant,
            weyl_valid_from,
            complete: false,
        })
    }

    /// Marks the stored list as the entire spectrum of a toy operator, so
    /// sums over it carry no truncation tail.
    pub fn into_complete(mut self) -> Self {
        self.complete = true;
        self
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Spectrum of the circle Laplacian: eigenvalues n^2, each twice
    /// (n and -n modes), n = 1..=n_max.
    pub fn unit_circle(n_max: usize) -> Self {
        let mut ev = Vec::with_capacity(2 * n_max);
        for n in 1..=n_max {
            let l = (n * n) as f64;
            ev.push(l);
            ev.push(l);
        }
        Spectrum::new(ev, 1, 0.0, Some(0.25)).expect("valid by construction")
    }

    /// Spectrum of the quarter-shifted sphere Laplacian: eigenvalues
    /// (j + 1/2)^2 with multiplicity 2j + 1, j = 0..=j_max.
    pub fn round_sphere(j_max: usize) -> Self {
        let mut ev = Vec::new();
        for j in 0..=j_max {
            let l = (j as f64 + 0.5) * (j as f64 + 0.5);
            for _ in 0..(2 * j + 1) {
                ev.push(l);
            }
        }
        Spectrum::new(ev, 2, 0.25, Some(1.0)).expect("valid by construction")
    }

    /// Single-eigenvalue spectrum, mostly for analytic cross-checks.
    pub fn single(lambda: f64) -> Result<Self> {
        Ok(Spectrum::new(vec![lambda], 1, 0.0, None)?.into_complete())
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.roots[i]
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn rhos(&self) -> &[f64] {
        &self.roots
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn weyl_constant(&self) -> Option<f64> {
        self.weyl_constant
    }

    /// Largest deviation `|λ_n / n^{2/d} - c|` over the stored spectrum.
    pub fn weyl_deviation(&self) -> Option<f64> {
        let c = self.weyl_constant?;
        let p = 2.0 / self.dimension as f64;
        let mut worst: f64 = 0.0;
        for (i, l) in self.eigenvalues.iter().enumerate() {
            let n = (i + 1) as f64;
            worst = worst.max((l / n.powf(p) - c).abs());
        }
        Some(worst)
    }

    fn terms(&self, variant: SeriesVariant) -> &[f64] {
        match variant {
            SeriesVariant::Rho => &self.roots,
            SeriesVariant::Lambda => &self.eigenvalues,
        }
    }

    /// First stored index from which the margin-deflated Weyl growth bound
    /// holds on every later stored eigenvalue, when growth data exists.
    pub(crate) fn weyl_valid_from(&self) -> Option<usize> {
        self.weyl_valid_from
    }

    /// Certified bound on `Σ_{n>n_used} e^{-w_n x}` under the stated growth
    /// assumptions; returns the smaller of a geometric bound built from the
    /// stored gaps and the Weyl integral bound.
    pub(crate) fn series_tail(
        &self,
        variant: SeriesVariant,
        n_used: usize,
        x: f64,
    ) -> (f64, TailMethod) {
        let w = self.terms(variant);
        if self.complete {
            // remainder over the stored tail is exact
            let rest: f64 = w[n_used.min(w.len())..]
                .iter()
                .map(|v| (-v * x).exp())
                .sum();
            return (rest, TailMethod::ClosedForm);
        }
        let mut best = (f64::INFINITY, TailMethod::GeometricFromLastTerm);

        // geometric bound: smallest positive gap and largest multiplicity in
        // the stored tail, extrapolated beyond storage
        let view = if n_used + 1 < w.len() {
            &w[n_used..]
        } else {
            &w[w.len().saturating_sub(8)..]
        };
        let mut gap = f64::INFINITY;
        let mut mult: usize = 1;
        let mut run = 1usize;
        for pair in view.windows(2) {
            let g = pair[1] - pair[0];
            if g > 0.0 {
                gap = gap.min(g);
                run = 1;
            } else {
                run += 1;
                mult = mult.max(run);
            }
        }
        if gap.is_finite() && gap > 0.0 {
            let w_next = if n_used < w.len() {
                w[n_used]
            } else {
                w[w.len() - 1] + gap
            };
            let r = (-gap * x).exp();
            if r < 1.0 {
                let b = mult as f64 * (-w_next * x).exp() / (1.0 - r);
                if b < best.0 {
                    best = (b, TailMethod::GeometricFromLastTerm);
                }
            }
        }

        // Weyl integral bound, valid once the stored tail obeys the margin
        if let (Some(c), Some(valid_from)) = (self.weyl_constant, self.weyl_valid_from) {
            if n_used >= valid_from && n_used > 0 {
                let (a, p) = match variant {
                    SeriesVariant::Lambda => (WEYL_MARGIN * c, 2.0 / self.dimension as f64),
                    SeriesVariant::Rho => ((WEYL_MARGIN * c).sqrt(), 1.0 / self.dimension as f64),
                };
                let q = 1.0 / p;
                let v0 = (n_used as f64).powf(p);
                let b = a * x;
                let tail = if q <= 1.0 {
                    q * v0.powf(q - 1.0) * (-b * v0).exp() / b
                } else if b * v0 > q - 1.0 {
                    q * v0.powf(q - 1.0) * (-b * v0).exp() / (b - (q - 1.0) / v0)
                } else {
                    f64::INFINITY
                };
                if tail < best.0 {
                    best = (tail, TailMethod::WeylIntegral);
                }
            }
        }
        best
    }
}

/// Which exponent sequence a theta series runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVariant {
    /// root spectrum ρ_n = √λ_n
    Rho,
    /// eigenvalues λ_n
    Lambda,
}

/// Geodesic length spectrum of a hyperbolic surface (or a synthetic stand-in).
#[derive(Debug, Clone)]
pub struct LengthSpectrum {
    lengths: Vec<f64>,
    multiplicities: Vec<u32>,
    genus: u32,
}

impl LengthSpectrum {
    /// Builds a length spectrum, folding repeated lengths into multiplicities.
    pub fn new(entries: Vec<(f64, u32)>, genus: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::Validation {
                invariant: "genus >= 2",
                detail: format!("genus = {genus}"),
            });
        }
        let mut entries = entries;
        for (i, &(l, m)) in entries.iter().enumerate() {
            if l <= 0.0 || !l.is_finite() {
                return Err(Error::Validation {
                    invariant: "positive lengths",
                    detail: format!("entry {}: length {}", i + 1, l),
                });
            }
            if m == 0 {
                return Err(Error::Validation {
                    invariant: "positive multiplicities",
                    detail: format!("entry {}: multiplicity 0", i + 1),
                });
            }
        }
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut lengths: Vec<f64> = Vec::new();
        let mut multiplicities: Vec<u32> = Vec::new();
        for (l, m) in entries {
            match lengths.last() {
                Some(&prev) if (l - prev).abs() <= 1e-12 * prev.max(1.0) => {
                    *multiplicities.last_mut().unwrap() += m;
                }
                _ => {
                    lengths.push(l);
                    multiplicities.push(m);
                }
            }
        }
        Ok(Self {
            lengths,
            multiplicities,
            genus,
        })
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

/// How a truncation certificate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailMethod {
    GeometricFromLastTerm,
    WeylIntegral,
    ClosedForm,
}

/// Certified remainder after truncating a spectral series.
#[derive(Debug, Clone, Copy)]
pub struct TailBound {
    pub truncation_index: usize,
    pub bound: f64,
    pub method: TailMethod,
}

/// What a `ThetaEvaluator` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaKind {
    /// Σ e^{-ρ_n t} from a stored spectrum
    SpectralRho,
    /// Σ e^{-λ_n t} from a stored spectrum
    SpectralLambda,
    /// 2/(e^t - 1), the circle series summed in closed form
    ClosedS1,
    /// cosh(t/2) / (2 sinh^2(t/2)), the sphere series in closed form
    ClosedS2,
}

/// Evaluates a theta series at complex arguments, with a certified
/// truncation bound for the spectral kinds and an optional shift
/// `t -> t - s0` for the exponentially deformed variants.
#[derive(Clone)]
pub struct ThetaEvaluator {
    kind: ThetaKind,
    spectrum: Option<Arc<Spectrum>>,
    s0: f64,
    max_derivative_order: usize,
}

impl std::fmt::Debug for ThetaEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ThetaEvaluator")
            .field("kind", &self.kind)
            .field("s0", &self.s0)
            .field("spectrum_len", &self.spectrum.as_ref().map(|s| s.len()))
            .finish()
    }
}

impl ThetaEvaluator {
    pub fn spectral_rho(spectrum: Arc<Spectrum>) -> Self {
        Self {
            kind: ThetaKind::SpectralRho,
            spectrum: Some(spectrum),
            s0: 0.0,
            max_derivative_order: 20,
        }
    }

    pub fn spectral_lambda(spectrum: Arc<Spectrum>) -> Self {
        Self {
            kind: ThetaKind::SpectralLambda,
            spectrum: Some(spectrum),
            s0: 0.0,
            max_derivative_order: 20,
        }
    }

    pub fn closed_s1() -> Self {
        Self {
            kind: ThetaKind::ClosedS1,
            spectrum: None,
            s0: 0.0,
            max_derivative_order: 20,
        }
    }

    pub fn closed_s2() -> Self {
        Self {
            kind: ThetaKind::ClosedS2,
            spectrum: None,
            s0: 0.0,
            max_derivative_order: 20,
        }
    }

    /// Raises the derivative-order cap (default 20).
    pub fn with_max_derivative_order(mut self, order: usize) -> Self {
        self.max_derivative_order = order;
        self
    }

    /// Shifted evaluator for `Θ(t - s0)`, `s0 < 0`.
    pub fn shifted(mut self, s0: f64) -> Result<Self> {
        if s0 >= 0.0 {
            return Err(Error::Validation {
                invariant: "s0 < 0",
                detail: format!("s0 = {s0}"),
            });
        }
        self.s0 = s0;
        Ok(self)
    }

    pub fn kind(&self) -> ThetaKind {
        self.kind
    }

    pub fn shift(&self) -> f64 {
        self.s0
    }

    pub fn spectrum(&self) -> Option<&Arc<Spectrum>> {
        self.spectrum.as_ref()
    }

    fn variant(&self) -> SeriesVariant {
        match self.kind {
            ThetaKind::SpectralLambda => SeriesVariant::Lambda,
            _ => SeriesVariant::Rho,
        }
    }

    fn closed_value(kind: ThetaKind, t: Complex64) -> Complex64 {
        match kind {
            ThetaKind::ClosedS1 => 2.0 / (t.exp() - 1.0),
            ThetaKind::ClosedS2 => {
                let half = t / 2.0;
                half.cosh() / (2.0 * half.sinh() * half.sinh())
            }
            _ => unreachable!("closed_value is only called for closed kinds"),
        }
    }

    /// Evaluates the series at `t`. The certified bound covers the dropped
    /// tail; closed forms carry a zero bound.
    pub fn eval(&self, t: Complex64, tol: f64) -> Result<(Complex64, TailBound)> {
        if tol <= 0.0 {
            return Err(Error::Validation {
                invariant: "tol > 0",
                detail: format!("tol = {tol}"),
            });
        }
        let teff = t - self.s0;
        if teff.re <= 0.0 {
            return Err(Error::Domain {
                what: "theta series",
                detail: format!("Re(t) = {} not > {}", t.re, self.s0),
            });
        }
        match self.kind {
            ThetaKind::ClosedS1 | ThetaKind::ClosedS2 => Ok((
                Self::closed_value(self.kind, teff),
                TailBound {
                    truncation_index: 0,
                    bound: 0.0,
                    method: TailMethod::ClosedForm,
                },
            )),
            ThetaKind::SpectralRho | ThetaKind::SpectralLambda => {
                let spec = self
                    .spectrum
                    .as_ref()
                    .expect("spectral kind carries a spectrum");
                let terms = spec.terms(self.variant());
                let x = teff.re;
                let mut acc = CAccum::default();
                let mut best_bound = f64::INFINITY;
                let mut best_method = TailMethod::GeometricFromLastTerm;
                let mut n_used = 0;
                for (i, &w) in terms.iter().enumerate() {
                    acc.add((-w * teff).exp());
                    n_used = i + 1;
                    if i >= 3 || i + 1 == terms.len() {
                        let (b, m) = spec.series_tail(self.variant(), n_used, x);
                        if b < best_bound {
                            best_bound = b;
                            best_method = m;
                        }
                        if best_bound <= tol {
                            break;
                        }
                    }
                }
                if best_bound > tol {
                    return Err(Error::InsufficientSpectrum {
                        needed: tol,
                        achieved: best_bound,
                    });
                }
                Ok((
                    acc.value(),
                    TailBound {
                        truncation_index: n_used,
                        bound: best_bound,
                        method: best_method,
                    },
                ))
            }
        }
    }

    /// Closed-form kinds extend holomorphically past the convergence
    /// half-plane; evaluates the continuation anywhere off the pole lattice.
    pub fn eval_continued(&self, t: Complex64) -> Result<Complex64> {
        let teff = t - self.s0;
        match self.kind {
            ThetaKind::ClosedS1 | ThetaKind::ClosedS2 => {
                let tau = 2.0 * std::f64::consts::PI;
                let k = (teff.im / tau).round();
                let nearest = Complex64::new(0.0, k * tau);
                if (teff - nearest).norm() < 1e-12 {
                    return Err(Error::Domain {
                        what: "theta continuation",
                        detail: format!("t = {t} on the pole lattice"),
                    });
                }
                Ok(Self::closed_value(self.kind, teff))
            }
            _ => Err(Error::Domain {
                what: "theta continuation",
                detail: "spectral kinds are only defined in the convergence half-plane".into(),
            }),
        }
    }

    /// i-th derivative of the series at real s: `Σ (-w_n)^i e^{-w_n s}` for
    /// spectral kinds; closed forms fall back to Richardson-extrapolated
    /// central differences.
    pub fn derivative(&self, order: usize, s: f64) -> Result<f64> {
        if order > self.max_derivative_order {
            return Err(Error::Validation {
                invariant: "derivative order within configured maximum",
                detail: format!("order {} > {}", order, self.max_derivative_order),
            });
        }
        let x = s - self.s0;
        if x <= 0.0 {
            return Err(Error::Domain {
                what: "theta derivative",
                detail: format!("s = {s} not > {}", self.s0),
            });
        }
        match self.kind {
            ThetaKind::SpectralRho | ThetaKind::SpectralLambda => {
                let spec = self.spectrum.as_ref().unwrap();
                let terms = spec.terms(self.variant());
                let mut acc = Accum::default();
                // |w^i e^{-w x}| <= (2i/(e x))^i e^{-w x / 2}
                let env = if order == 0 {
                    1.0
                } else {
                    (2.0 * order as f64 / (std::f64::consts::E * x)).powi(order as i32)
                };
                let mut certified = false;
                for (i, &w) in terms.iter().enumerate() {
                    let sign = if order % 2 == 1 { -1.0 } else { 1.0 };
                    acc.add(sign * w.powi(order as i32) * (-w * x).exp());
                    if i >= 3 {
                        let (b, _) = spec.series_tail(self.variant(), i + 1, x / 2.0);
                        let scale = acc.value().abs().max(1.0);
                        if env * b <= 1e-13 * scale {
                            certified = true;
                            break;
                        }
                    }
                }
                if !certified {
                    let (b, _) = spec.series_tail(self.variant(), terms.len(), x / 2.0);
                    let scale = acc.value().abs().max(1.0);
                    if env * b > 1e-10 * scale {
                        return Err(Error::InsufficientSpectrum {
                            needed: 1e-10 * scale,
                            achieved: env * b,
                        });
                    }
                }
                Ok(acc.value())
            }
            ThetaKind::ClosedS1 | ThetaKind::ClosedS2 => {
                let f = |u: f64| Self::closed_value(self.kind, Complex64::new(u, 0.0)).re;
                Ok(central_derivative(&f, order, x))
            }
        }
    }
}

/// Central-difference derivative with three Richardson levels,
/// step `h = 1e-3 * max(1, s)`.
fn central_derivative(f: &dyn Fn(f64) -> f64, order: usize, s: f64) -> f64 {
    if order == 0 {
        return f(s);
    }
    let h0 = 1e-3_f64.max(s * 1e-3);
    let stencil = |h: f64| -> f64 {
        // standard central stencil: i-th derivative from binomial weights on
        // offsets (i/2 - j) h, j = 0..=i
        let mut sum = 0.0;
        let mut binom = 1.0_f64;
        for j in 0..=order {
            let offset = order as f64 / 2.0 - j as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * f(s + offset * h);
            binom = binom * (order - j) as f64 / (j + 1) as f64;
        }
        sum / h.powi(order as i32)
    };
    // error is O(h^2); two Richardson eliminations with ratio 4
    let d0 = stencil(h0);
    let d1 = stencil(h0 / 2.0);
    let d2 = stencil(h0 / 4.0);
    let r1 = (4.0 * d1 - d0) / 3.0;
    let r2 = (4.0 * d2 - d1) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

#[derive(Deserialize)]
struct SpectrumSidecar {
    dimension: u32,
    #[serde(default)]
    shift: f64,
    #[serde(default)]
    weyl_constant: Option<f64>,
}

#[derive(Deserialize)]
struct LengthSidecar {
    genus: u32,
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    path.with_extension("json")
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        detail: format!("{}: {e}", path.display()),
    })
}

/// Loads a spectrum from a CSV of eigenvalues (one per line, optional
/// header) plus a sidecar JSON `<stem>.json` holding dimension and growth
/// data.
pub fn load_spectrum(path: &Path) -> Result<Spectrum> {
    let body = read_to_string(path)?;
    let side = read_to_string(&sidecar_path(path))?;
    let meta: SpectrumSidecar = serde_json::from_str(&side).map_err(|e| Error::Parse {
        line: 0,
        detail: format!("sidecar {}: {e}", sidecar_path(path).display()),
    })?;
    let mut eigenvalues = Vec::new();
    for (i, raw) in body.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => eigenvalues.push(v),
            Err(_) if i == 0 => continue, // header
            Err(e) => {
                return Err(Error::Parse {
                    line: i + 1,
                    detail: format!("`{line}`: {e}"),
                });
            }
        }
    }
    if let Some(&bad) = eigenvalues.iter().find(|v| **v <= 0.0) {
        return Err(Error::Validation {
            invariant: "strictly positive eigenvalues",
            detail: format!("found {bad}"),
        });
    }
    Spectrum::new(eigenvalues, meta.dimension, meta.shift, meta.weyl_constant)
}

/// Loads a length spectrum from CSV rows `length,multiplicity` plus a
/// sidecar JSON `{"genus": g}`. Repeated lengths fold into multiplicities.
pub fn load_length_spectrum(path: &Path) -> Result<LengthSpectrum> {
    let body = read_to_string(path)?;
    let side = read_to_string(&sidecar_path(path))?;
    let meta: LengthSidecar = serde_json::from_str(&side).map_err(|e| Error::Parse {
        line: 0,
        detail: format!("sidecar {}: {e}", sidecar_path(path).display()),
    })?;
    let mut entries = Vec::new();
    for (i, raw) in body.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let l = parts.next().unwrap_or("").trim();
        let m = parts.next().unwrap_or("1").trim();
        let length: f64 = match l.parse() {
            Ok(v) => v,
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    line: i + 1,
                    detail: format!("`{l}`: {e}"),
                })
            }
        };
        let mult: u32 = m.parse().map_err(|e| Error::Parse {
            line: i + 1,
            detail: format!("`{m}`: {e}"),
        })?;
        entries.push((length, mult));
    }
    LengthSpectrum::new(entries, meta.genus)
}
