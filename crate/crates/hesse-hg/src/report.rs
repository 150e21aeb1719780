//! Machine-readable check reports and serialization helpers shared by the
//! verification suites and the CLI.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::scalar::q_to_f64;

/// Complex numbers serialize as `[re, im]` pairs.
pub fn ser_c64<S: Serializer>(z: &Complex64, ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

pub fn c64_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

pub fn q_c64(q: &BigRational) -> Complex64 {
    Complex64::new(q_to_f64(q), 0.0)
}

/// Outcome of one verification item.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub check: String,
    pub status: Status,
    /// Measured residual (absent for purely structural checks).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl CheckResult {
    pub fn residual(check: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckResult {
            check: check.into(),
            status: if residual.is_finite() && residual <= tolerance {
                Status::Pass
            } else {
                Status::Fail
            },
            residual: Some(residual),
            tolerance: Some(tolerance),
            detail: None,
        }
    }

    pub fn bool(check: impl Into<String>, ok: bool) -> Self {
        CheckResult {
            check: check.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: None,
            tolerance: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed())
}
