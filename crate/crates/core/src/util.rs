use num_complex::Complex64;

/// Neumaier compensated accumulator for f64.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accum {
    sum: f64,
    comp: f64,
}

impl Accum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CAccum {
    re: Accum,
    im: Accum,
}

impl CAccum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Distance from a point to the open ray { r e^{i theta} : r > 0 }.
pub fn distance_to_ray(p: Complex64, theta: f64) -> f64 {
    let z = p * Complex64::from_polar(1.0, -theta);
    if z.re >= 0.0 {
        z.im.abs()
    } else {
        z.norm()
    }
}

/// ln(n!) by direct accumulation; exact to rounding for the orders used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Γ(z) for z > 0 by a Stirling series with downward recurrence; used as a
/// quadrature-independent oracle for endpoint tests.
pub fn gamma_stirling(z: f64) -> f64 {
    // Bernoulli coefficients B_{2n}/(2n(2n-1))
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        7.0 / 1092.0,
    ];
    let mut shift = 0.0_f64;
    let mut zz = z;
    while zz < 20.0 {
        shift += zz.ln();
        zz += 1.0;
    }
    let mut series = 0.0;
    let mut pow = zz;
    for c in C {
        series += c / pow;
        pow *= zz * zz;
    }
    let ln_gamma =
        (zz - 0.5) * zz.ln() - zz + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift;
    ln_gamma.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_beats_naive_on_cancellation() {
        let mut acc = Accum::default();
        acc.add(1e16);
        acc.add(1.0);
        acc.add(-1e16);
        assert_eq!(acc.value(), 1.0);
    }

    #[test]
    fn ray_distance() {
        let d = distance_to_ray(Complex64::new(0.0, 1.0), 0.0);
        assert!((d - 1.0).abs() < 1e-15);
        // point behind the ray: distance is to the origin
        let d = distance_to_ray(Complex64::new(-3.0, 4.0), 0.0);
        assert!((d - 5.0).abs() < 1e-12);
    }

    #[test]
    fn ln_factorial_small() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn gamma_known_values() {
        assert!((gamma_stirling(1.0) - 1.0).abs() < 1e-12);
        assert!((gamma_stirling(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!((gamma_stirling(5.0) - 24.0).abs() < 1e-10);
        assert!((gamma_stirling(0.1) - 9.513_507_698_668_7).abs() < 1e-9);
    }
}
