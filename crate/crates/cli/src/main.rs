//! Command-line front end: evaluate theta series, ray transforms and
//! regularized determinants from spectrum files, and run the verification
//! suites with machine-readable reports.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use resdet_core::cases::{
    deformed_psf_rhs, deformed_psf_series, kernel_transform, psf_identity_residual,
    s2_counterterm_quadrature, selberg_log_deriv3, sinh_kernel_integrand, surface_identity_check,
    t2_theta_s2_integrand, t_theta_s1_integrand, SelbergContext,
};
use resdet_core::laplace::{laplace_ray, Integrand, RayDirection};
use resdet_core::regularize::{
    exp_deformed_det, log_deriv_composite, log_deriv_det, DeformVariant, ExpDeformRequest,
    LogDerivRequest, Variable,
};
use resdet_core::report::CheckRecord;
use resdet_core::spectral::{load_length_spectrum, load_spectrum, ThetaEvaluator};
use resdet_core::suite;

#[derive(Parser)]
#[command(
    name = "resdet",
    about = "Regularized spectral determinants: evaluation and verification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format: JSON lines, CSV rows or an aligned table
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Tolerance override (>= 1e-14)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaKindArg {
    SpectralRho,
    SpectralLambda,
    ClosedS1,
    ClosedS2,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegrandArg {
    /// e^{-t}
    Exp,
    /// t · 2/(e^t - 1)
    TThetaS1,
    /// t² cosh(t/2)/(2 sinh²(t/2))
    T2ThetaS2,
    /// sinh(s0)/(cosh t - cosh s0)
    SinhKernel,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegVariant {
    /// Σ (-1)^{m-1}(m-1)!/(λ+λ_n)^m
    Lambda,
    /// ρ²-composite Σ d^{m-1}/dρ^{m-1}[2ρ/(ρ²+ρ_n²)]
    Rho,
    /// plain root-spectrum series Σ (-1)^{m-1}(m-1)!/(ρ+ρ_n)^m
    RhoSeries,
    /// Σ e^{s0 λ_n}/(λ+λ_n), needs --s0
    Sharp1Lambda,
    /// Σ e^{s0 ρ_n}/(ρ+ρ_n), needs --s0
    Sharp1Rho,
    /// Σ e^{s0 ρ_n}/(λ+λ_n), needs --s0
    Sharp2,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a theta series at a point, with its truncation certificate
    Theta {
        #[arg(long, value_enum)]
        kind: ThetaKindArg,
        /// Spectrum CSV (sidecar JSON <stem>.json), for spectral kinds
        #[arg(long)]
        spectrum: Option<PathBuf>,
        /// Optional shift s0 < 0 for the deformed series Θ(t - s0)
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<f64>,
        /// Evaluation point t as RE[,IM]
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a directional Laplace transform of a built-in integrand
    Laplace {
        #[arg(long, value_enum)]
        integrand: IntegrandArg,
        /// Ray direction in radians
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta: f64,
        /// Deformation parameter for the sinh kernel
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<f64>,
        /// Transform variable as RE[,IM]
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a regularized determinant from a spectrum file
    Regdet {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, value_enum)]
        variant: RegVariant,
        /// Derivative order m (log-derivative variants)
        #[arg(long, default_value_t = 2)]
        m: u32,
        /// Deformation parameter (sharp variants)
        #[arg(long, allow_hyphen_values = true)]
        s0: Option<f64>,
        /// Evaluation point as RE[,IM]
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the summation identity Σ ρ/(n²+ρ²) = π/tanh(πρ)
    PsfCheck {
        /// Evaluation point RE[,IM]; omitted: the 5x5 acceptance grid
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the deformed summation identity at one point
    DeformedPsfCheck {
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        s0: f64,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[arg(long, default_value = "1.0", allow_hyphen_values = true)]
        rho: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate or verify the extended kernel transform
    KExtension {
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        s0: f64,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        /// Evaluation point RE[,IM]; omitted: overlap + residue checks
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Verify the dual-path surface identity against the zeta data
    SelbergCheck {
        /// Length-spectrum CSV (sidecar JSON); omitted: synthetic spectra
        #[arg(long)]
        lengths: Option<PathBuf>,
        #[arg(long)]
        genus: Option<u32>,
        #[arg(long, default_value = "1.0", allow_hyphen_values = true)]
        rho: String,
        #[arg(long, default_value_t = 0.3)]
        eps: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the 1-Gevrey remainder-bound fits
    GevreyCheck {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Tabulate the small-deformation limit of the deformed determinant
    LimitCheck {
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run every acceptance criterion
    FullSuite {
        /// Seed for randomized grids
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => re
            .trim()
            .parse::<f64>()
            .map(|r| Complex64::new(r, 0.0))
            .map_err(|e| format!("bad real part `{re}`: {e}")),
        [re, im] => {
            let r = re
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad real part `{re}`: {e}"))?;
            let i = im
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad imag part `{im}`: {e}"))?;
            Ok(Complex64::new(r, i))
        }
        _ => Err(format!("expected RE or RE,IM, got `{s}`")),
    }
}

fn effective_tol(out: &OutputArgs, default: f64) -> Result<f64, String> {
    match out.tol {
        Some(t) if t < 1e-14 => Err(format!("tolerance override {t:e} below 1e-14")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn emit(records: &[CheckRecord], format: Format) {
    match format {
        Format::Json => {
            for r in records {
                println!("{}", r.to_json_line());
            }
        }
        Format::Csv => {
            println!("{}", CheckRecord::csv_header());
            for r in records {
                println!("{}", r.to_csv_row());
            }
        }
        Format::Table => {
            println!(
                "{:34} {:>24} {:>12} {:>9}  status",
                "check", "value", "residual", "tol"
            );
            for r in records {
                println!("{}", r.to_table_row());
            }
        }
    }
}

fn finish(mut records: Vec<CheckRecord>, format: Format) -> ExitCode {
    let failed: Vec<String> = records
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.clone())
        .collect();
    let summary = CheckRecord::property(
        "summary",
        json!({"total": records.len(), "failed": failed.len(), "failed_checks": failed}),
        records.iter().all(|r| r.pass),
    );
    let ok = summary.pass;
    records.push(summary);
    emit(&records, format);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Theta {
            kind,
            spectrum,
            s0,
            at,
            out,
        } => {
            let t = parse_complex(&at)?;
            let tol = effective_tol(&out, 1e-10)?;
            let mut ev = match kind {
                ThetaKindArg::ClosedS1 => ThetaEvaluator::closed_s1(),
                ThetaKindArg::ClosedS2 => ThetaEvaluator::closed_s2(),
                ThetaKindArg::SpectralRho | ThetaKindArg::SpectralLambda => {
                    let path = spectrum
                        .as_ref()
                        .ok_or("spectral kinds need --spectrum".to_string())?;
                    let spec = Arc::new(load_spectrum(path).map_err(|e| e.to_string())?);
                    match kind {
                        ThetaKindArg::SpectralRho => ThetaEvaluator::spectral_rho(spec),
                        _ => ThetaEvaluator::spectral_lambda(spec),
                    }
                }
            };
            if let Some(s0) = s0 {
                ev = ev.shifted(s0).map_err(|e| e.to_string())?;
            }
            let (value, tail) = ev.eval(t, tol).map_err(|e| e.to_string())?;
            let rec = CheckRecord::new(
                "theta_eval",
                json!({"t": [t.re, t.im], "s0": s0, "truncation_index": tail.truncation_index}),
                value,
                Complex64::new(0.0, 0.0),
                tail.bound,
                tol,
            );
            Ok(finish(vec![rec], out.format))
        }
        Command::Laplace {
            integrand,
            theta,
            s0,
            rho,
            out,
        } => {
            let rho = parse_complex(&rho)?;
            let tol = effective_tol(&out, 1e-9)?;
            let g: Integrand = match integrand {
                IntegrandArg::Exp => Integrand::new(
                    |t: Complex64| (-t).exp(),
                    0.0,
                    RayDirection::new(theta, -theta.cos()),
                )
                .map_err(|e| e.to_string())?,
                IntegrandArg::TThetaS1 => t_theta_s1_integrand(theta, 8),
                IntegrandArg::T2ThetaS2 => t2_theta_s2_integrand(theta),
                IntegrandArg::SinhKernel => {
                    let s0 = s0.ok_or("sinh-kernel needs --s0".to_string())?;
                    if s0 >= 0.0 {
                        return Err(format!("s0 = {s0} must be negative"));
                    }
                    sinh_kernel_integrand(s0, theta)
                }
            };
            let r = laplace_ray(&g, g.decay(), rho, tol).map_err(|e| e.to_string())?;
            let rec = CheckRecord::new(
                "laplace_ray",
                json!({"theta": theta, "rho": [rho.re, rho.im],
                       "radius": r.truncation_radius, "panels": r.panels}),
                r.value,
                Complex64::new(0.0, 0.0),
                r.abs_error_estimate,
                tol,
            );
            Ok(finish(vec![rec], out.format))
        }
        Command::Regdet {
            spectrum,
            variant,
            m,
            s0,
            at,
            out,
        } => {
            let z = parse_complex(&at)?;
            let tol = effective_tol(&out, 1e-8)?;
            let spec = Arc::new(load_spectrum(&spectrum).map_err(|e| e.to_string())?);
            let (name, value) = match variant {
                RegVariant::Lambda | RegVariant::RhoSeries => {
                    let var = if matches!(variant, RegVariant::Lambda) {
                        Variable::Lambda
                    } else {
                        Variable::Rho
                    };
                    let req = LogDerivRequest::new(spec, m, var).map_err(|e| e.to_string())?;
                    let v = log_deriv_det(&req, z, tol).map_err(|e| e.to_string())?;
                    ("log_deriv_det", v)
                }
                RegVariant::Rho => {
                    let v = log_deriv_composite(&spec, m, z, tol).map_err(|e| e.to_string())?;
                    ("log_deriv_composite", v)
                }
                RegVariant::Sharp1Lambda | RegVariant::Sharp1Rho | RegVariant::Sharp2 => {
                    let s0 = s0.ok_or("sharp variants need --s0".to_string())?;
                    let dv = match variant {
                        RegVariant::Sharp1Lambda => DeformVariant::Sharp1Lambda,
                        RegVariant::Sharp1Rho => DeformVariant::Sharp1Rho,
                        _ => DeformVariant::Sharp2,
                    };
                    let req = ExpDeformRequest::new(spec, s0, dv).map_err(|e| e.to_string())?;
                    let v = exp_deformed_det(&req, z, tol).map_err(|e| e.to_string())?;
                    ("exp_deformed_det", v)
                }
            };
            let rec = CheckRecord::new(
                name,
                json!({"at": [z.re, z.im], "m": m, "s0": s0, "certified_tail": tol}),
                value,
                Complex64::new(0.0, 0.0),
                0.0,
                tol,
            );
            Ok(finish(vec![rec], out.format))
        }
        Command::PsfCheck { rho, terms, out } => {
            let tol = effective_tol(&out, 1e-10)?;
            let records = match rho {
                Some(s) => {
                    let rho = parse_complex(&s)?;
                    let r = psf_identity_residual(rho, terms).map_err(|e| e.to_string())?;
                    vec![CheckRecord::new(
                        "psf_identity",
                        json!({"rho": [rho.re, rho.im], "terms": terms}),
                        Complex64::new(r, 0.0),
                        Complex64::new(0.0, 0.0),
                        r,
                        tol,
                    )]
                }
                None => suite::criterion_psf_grid(),
            };
            Ok(finish(records, out.format))
        }
        Command::DeformedPsfCheck { s0, eps, rho, out } => {
            let rho = parse_complex(&rho)?;
            let tol = effective_tol(&out, 1e-8)?;
            let rhs = deformed_psf_rhs(rho, s0, eps, tol * 1e-2).map_err(|e| e.to_string())?;
            let lhs = deformed_psf_series(rho, s0);
            let rec = CheckRecord::new(
                "deformed_psf_identity",
                json!({"s0": s0, "eps": eps, "rho": [rho.re, rho.im]}),
                lhs,
                rhs,
                (lhs - rhs).norm(),
                tol,
            );
            Ok(finish(vec![rec], out.format))
        }
        Command::KExtension { s0, eps, rho, out } => {
            let records = match rho {
                Some(s) => {
                    let rho = parse_complex(&s)?;
                    let tol = effective_tol(&out, 1e-9)?;
                    let v = kernel_transform(rho, s0, eps, tol).map_err(|e| e.to_string())?;
                    vec![CheckRecord::new(
                        "kernel_transform",
                        json!({"s0": s0, "eps": eps, "rho": [rho.re, rho.im]}),
                        v,
                        Complex64::new(0.0, 0.0),
                        0.0,
                        tol,
                    )]
                }
                None => suite::criterion_kernel_extension(),
            };
            Ok(finish(records, out.format))
        }
        Command::SelbergCheck {
            lengths,
            genus,
            rho,
            eps,
            out,
        } => {
            let rho = parse_complex(&rho)?;
            let tol = effective_tol(&out, 1e-6)?;
            let records = match lengths {
                Some(path) => {
                    let ls = load_length_spectrum(&path).map_err(|e| e.to_string())?;
                    let g = genus.unwrap_or(ls.genus());
                    let ctx = SelbergContext::new(ls, 40);
                    let rep = surface_identity_check(&ctx, g, rho, eps, tol * 1e-2)
                        .map_err(|e| e.to_string())?;
                    let winding =
                        selberg_log_deriv3(&ctx, rho, 1e-10).map_err(|e| e.to_string())?;
                    let counter =
                        s2_counterterm_quadrature(rho, eps, 1e-10).map_err(|e| e.to_string())?;
                    vec![CheckRecord::new(
                        "selberg_dual_path",
                        json!({"genus": g, "rho": [rho.re, rho.im], "eps": eps,
                               "winding_sum": [winding.re, winding.im],
                               "counterterm": [counter.value.re, counter.value.im]}),
                        rep.stokes_path,
                        rep.direct_path,
                        rep.residual,
                        tol,
                    )]
                }
                None => suite::criterion_selberg(),
            };
            Ok(finish(records, out.format))
        }
        Command::GevreyCheck { out } => {
            effective_tol(&out, 1e-9)?;
            Ok(finish(suite::criterion_gevrey(), out.format))
        }
        Command::LimitCheck { out } => {
            effective_tol(&out, 1e-9)?;
            Ok(finish(suite::criterion_limit(), out.format))
        }
        Command::FullSuite { seed, out } => {
            let records = suite::run_full_suite(seed, suite::default_threads());
            Ok(finish(records, out.format))
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
