//! Machine-readable verification records: one JSON line (or CSV row per
//! the selected format) per executed check, schema version "1".

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexField {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexField {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub schema: &'static str,
    pub check: String,
    pub inputs: Value,
    pub lhs: ComplexField,
    pub rhs: ComplexField,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        check: impl Into<String>,
        inputs: Value,
        lhs: Complex64,
        rhs: Complex64,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            schema: "1",
            check: check.into(),
            inputs,
            lhs: lhs.into(),
            rhs: rhs.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// A record that reports a boolean property rather than a residual.
    pub fn property(check: impl Into<String>, inputs: Value, pass: bool) -> Self {
        Self {
            schema: "1",
            check: check.into(),
            inputs,
            lhs: Complex64::new(0.0, 0.0).into(),
            rhs: Complex64::new(0.0, 0.0).into(),
            residual: if pass { 0.0 } else { 1.0 },
            tolerance: 0.5,
            pass,
        }
    }

    /// A record for a check that could not run at all.
    pub fn failure(check: impl Into<String>, inputs: Value, error: &crate::Error) -> Self {
        Self {
            schema: "1",
            check: check.into(),
            inputs: serde_json::json!({ "error": error.to_string(), "given": inputs }),
            lhs: Complex64::new(f64::NAN, 0.0).into(),
            rhs: Complex64::new(f64::NAN, 0.0).into(),
            residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn csv_header() -> &'static str {
        "check,residual,tolerance,pass,lhs_re,lhs_im,rhs_re,rhs_im"
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:e},{:e},{},{:e},{:e},{:e},{:e}",
            self.check,
            self.residual,
            self.tolerance,
            self.pass,
            self.lhs.re,
            self.lhs.im,
            self.rhs.re,
            self.rhs.im
        )
    }

    pub fn to_table_row(&self) -> String {
        let value = if self.lhs.im == 0.0 {
            format!("{:.12e}", self.lhs.re)
        } else {
            format!("{:.9e}{:+.3e}i", self.lhs.re, self.lhs.im)
        };
        format!(
            "{:34} {:>24} {:>12.3e} {:>9.1e}  {}",
            self.check,
            value,
            self.residual,
            self.tolerance,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_line_has_schema_and_pass() {
        let r = CheckRecord::new(
            "demo",
            serde_json::json!({"rho": 1.0}),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            0.0,
            1e-9,
        );
        let line = r.to_json_line();
        assert!(line.contains("\"schema\":\"1\""));
        assert!(line.contains("\"pass\":true"));
    }

    #[test]
    fn csv_row_counts_fields() {
        let r = CheckRecord::property("p", serde_json::json!({}), true);
        assert_eq!(r.to_csv_row().split(',').count(), 8);
        assert_eq!(CheckRecord::csv_header().split(',').count(), 8);
    }
}
