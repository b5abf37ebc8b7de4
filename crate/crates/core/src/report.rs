use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one named verification: `passed ⇔ metric ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, Value>,
    /// Non-finite metrics are written as `null` and read back as NaN.
    #[serde(deserialize_with = "nullable_f64")]
    pub metric: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub runtime_ms: f64,
}

impl VerificationReport {
    pub fn builder(check_name: impl Into<String>) -> ReportBuilder {
        ReportBuilder {
            check_name: check_name.into(),
            parameters: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    /// Re-evaluates the verdict under a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = verdict(self.metric, tolerance);
        self
    }
}

fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

fn verdict(metric: f64, tolerance: f64) -> bool {
    // NaN metrics fail
    metric <= tolerance
}

pub struct ReportBuilder {
    check_name: String,
    parameters: BTreeMap<String, Value>,
    started: Instant,
}

impl ReportBuilder {
    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn param_mut(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn finish(self, metric: f64, tolerance: f64) -> VerificationReport {
        VerificationReport {
            check_name: self.check_name,
            parameters: self.parameters,
            metric,
            tolerance,
            passed: verdict(metric, tolerance),
            runtime_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_metric() {
        let r = VerificationReport::builder("x").param("dim", 3).finish(1e-7, 1e-6);
        assert!(r.passed);
        assert_eq!(r.parameters["dim"], Value::from(3));
        let r = r.with_tolerance(1e-8);
        assert!(!r.passed);
        let nan = VerificationReport::builder("y").finish(f64::NAN, 1.0);
        assert!(!nan.passed);
        let text = serde_json::to_string(&nan).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert!(back.metric.is_nan() && !back.passed);
    }
}
