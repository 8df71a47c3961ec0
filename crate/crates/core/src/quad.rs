//! Quadrature kernels used by the directional Laplace transform:
//! tanh-sinh for the endpoint panel and adaptive Gauss-Kronrod (G7K15)
//! for the remainder, both for complex-valued integrands of a real
//! variable.

use num_complex::Complex64;

use crate::util::CAccum;

/// G7K15 abscissae (positive half) and weights, QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_6,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub struct PanelResult {
    pub value: Complex64,
    pub error: f64,
}

/// One G7K15 panel on [a, b].
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> PanelResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[7];
    let mut samples: [Complex64; 15] = [Complex64::default(); 15];
    samples[7] = fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = f1;
        samples[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    gauss += WG[3] * fc;
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((samples[j] - mean).norm() + (samples[14 - j] - mean).norm());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let raw = ((kronrod - gauss) * half).norm();
    PanelResult {
        value,
        error: rescale_error(raw, resabs, resasc),
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err;
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    scaled.max(floor)
}

/// Adaptive G7K15 on [a, b]: splits the worst panel until the summed error
/// estimate drops below `tol` or the panel budget runs out.
pub fn adaptive_gk<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> (Complex64, f64, usize) {
    struct Panel {
        a: f64,
        b: f64,
        value: Complex64,
        error: f64,
    }
    let mut panels: Vec<Panel> = Vec::new();
    // geometric initial subdivision keeps early panels commensurate with
    // the decay scale of Laplace integrands
    let mut edges = vec![a];
    let mut step = (b - a).clamp(1e-3, 2.0);
    let mut x = a;
    while x + step < b {
        x += step;
        edges.push(x);
        step *= 2.0;
    }
    edges.push(b);
    for w in edges.windows(2) {
        let r = gk15(f, w[0], w[1]);
        panels.push(Panel {
            a: w[0],
            b: w[1],
            value: r.value,
            error: r.error,
        });
    }
    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= tol || panels.len() >= max_panels {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval at floating-point resolution; keep as-is
            let r = gk15(f, a, b);
            panels.push(Panel {
                a,
                b,
                value: r.value,
                error: r.error,
            });
            break;
        }
        let left = gk15(f, a, mid);
        let right = gk15(f, mid, b);
        panels.push(Panel {
            a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        panels.push(Panel {
            a: mid,
            b,
            value: right.value,
            error: right.error,
        });
    }
    let mut acc = CAccum::default();
    let mut err = 0.0;
    for p in &panels {
        acc.add(p.value);
        err += p.error;
    }
    (acc.value(), err, panels.len())
}

/// Tanh-sinh rule on [0, b] for integrands with an algebraic endpoint
/// singularity t^alpha (alpha > -1) at 0. Evaluations double per level
/// until two successive levels agree.
pub fn tanh_sinh<F: Fn(f64) -> Complex64>(f: &F, b: f64, tol: f64) -> (Complex64, f64, usize) {
    const S_MAX: f64 = 6.5;
    const MAX_LEVEL: u32 = 11;
    let half_pi = std::f64::consts::FRAC_PI_2;

    // abscissa measured from the lower endpoint: u = b * sigma(2y),
    // sigma the logistic function, y = (pi/2) sinh(s)
    let node = |s: f64| -> (f64, f64) {
        let y = half_pi * s.sinh();
        let em = (-2.0 * y).exp();
        let u = b / (1.0 + em);
        let cosh_y = y.cosh();
        let w = b * half_pi * s.cosh() / (2.0 * cosh_y * cosh_y);
        (u, w)
    };

    let mut evals = 0usize;
    let eval_at = |s: f64, evals: &mut usize| -> Complex64 {
        let (u, w) = node(s);
        if u <= 0.0 || u >= b || w == 0.0 || !w.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        *evals += 1;
        let fv = f(u);
        if fv.is_finite() {
            fv * w
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    let mut h = 1.0_f64;
    let mut acc = CAccum::default();
    acc.add(eval_at(0.0, &mut evals));
    let mut j = 1;
    while (j as f64) * h <= S_MAX {
        let s = j as f64 * h;
        acc.add(eval_at(s, &mut evals));
        acc.add(eval_at(-s, &mut evals));
        j += 1;
    }
    let mut value = acc.value() * h;
    let mut err = f64::INFINITY;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        // new nodes are the odd multiples of the refined step
        let mut k = 1;
        while (k as f64) * h <= S_MAX {
            let s = k as f64 * h;
            acc.add(eval_at(s, &mut evals));
            acc.add(eval_at(-s, &mut evals));
            k += 2;
        }
        let new_value = acc.value() * h;
        err = (new_value - value).norm();
        value = new_value;
        if err <= tol.max(value.norm() * 1e-15) {
            break;
        }
    }
    (value, err, evals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_polynomial_exactness() {
        // K15 integrates monomials up to degree 22 exactly
        for k in 0..=22u32 {
            let r = gk15(&|x: f64| Complex64::new(x.powi(k as i32), 0.0), 0.0, 1.0);
            let exact = 1.0 / (k as f64 + 1.0);
            assert_relative_eq!(r.value.re, exact, max_relative = 5e-15);
        }
    }

    #[test]
    fn adaptive_oscillatory() {
        // ∫_0^10 e^{20 i x} dx
        let w = 20.0;
        let (v, err, _) = adaptive_gk(
            &|x: f64| (Complex64::new(0.0, w * x)).exp(),
            0.0,
            10.0,
            1e-12,
            2000,
        );
        let exact = (Complex64::new(0.0, w * 10.0).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((v - exact).norm() < 1e-11);
        assert!(err < 1e-10);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫_0^1 t^a dt = 1/(a+1)
        for &a in &[-0.9, -0.5, 0.0, 1.0] {
            let (v, _, _) = tanh_sinh(&|t: f64| Complex64::new(t.powf(a), 0.0), 1.0, 1e-13);
            assert_relative_eq!(v.re, 1.0 / (a + 1.0), max_relative = 1e-11);
        }
    }

    #[test]
    fn tanh_sinh_log_singularity_tolerated() {
        // ∫_0^1 ln(t) dt = -1 (integrable, not of power type)
        let (v, _, _) = tanh_sinh(&|t: f64| Complex64::new(t.ln(), 0.0), 1.0, 1e-13);
        assert_relative_eq!(v.re, -1.0, max_relative = 1e-11);
    }

    #[test]
    fn pieces_agree_on_smooth_integrand() {
        let f = |x: f64| Complex64::new((-x).exp() * (PI * x).cos(), 0.0);
        let (a, _, _) = tanh_sinh(&f, 1.0, 1e-13);
        let (b, _, _) = adaptive_gk(&f, 0.0, 1.0, 1e-13, 100);
        assert!((a - b).norm() < 1e-12);
    }
}
