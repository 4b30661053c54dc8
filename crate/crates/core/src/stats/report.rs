use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// How the reference distribution of a statistic was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NullMc,
    LimitingLaw,
    ParametricBootstrap,
}

/// Outcome of a test together with its provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic_name: String,
    pub statistic: f64,
    pub p: u32,
    pub alpha: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    pub method: Method,
    pub seed: u64,
    pub n_replications: usize,
}

impl TestReport {
    /// Builds a report against a reference sample of the statistic's
    /// null law. The reference is sorted in place.
    pub fn from_reference(
        statistic_name: impl Into<String>,
        statistic: f64,
        p: u32,
        alpha: f64,
        reference: &mut [f64],
        method: Method,
        seed: u64,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        if reference.is_empty() {
            return Err(invalid("reference", "reference distribution is empty"));
        }
        reference.sort_by(f64::total_cmp);
        let critical_value = upper_critical_value(reference, alpha);
        Ok(Self {
            statistic_name: statistic_name.into(),
            statistic,
            p,
            alpha,
            critical_value,
            p_value: upper_p_value(reference, statistic),
            reject: statistic > critical_value,
            method,
            seed,
            n_replications: reference.len(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", "alpha must lie in (0,1)"));
    }
    Ok(())
}

/// The `ceil(M(1 - alpha))`-th order statistic of a sorted reference sample.
pub fn upper_critical_value(sorted: &[f64], alpha: f64) -> f64 {
    crate::gaussproc::order_statistic_quantile(sorted, 1.0 - alpha)
}

/// `(1 + #{draws >= statistic}) / (M + 1)` for a sorted reference sample.
pub fn upper_p_value(sorted: &[f64], statistic: f64) -> f64 {
    let below = sorted.partition_point(|&v| v < statistic);
    let at_least = sorted.len() - below;
    (1 + at_least) as f64 / (sorted.len() + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decision_and_roundtrip() {
        let mut reference: Vec<f64> = (1..=100).rev().map(f64::from).collect();
        let rep =
            TestReport::from_reference("ks", 96.5, 1, 0.05, &mut reference, Method::NullMc, 3)
                .unwrap();
        assert_eq!(rep.critical_value, 95.0);
        assert!(rep.reject);
        assert!((rep.p_value - 5.0 / 101.0).abs() < 1e-15);
        let back: TestReport = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        assert_eq!(back, rep);
        assert!(rep.to_json().unwrap().contains("\"null-mc\""));
    }

    #[test]
    fn alpha_range() {
        let mut r = vec![1.0];
        let err =
            TestReport::from_reference("ks", 0.0, 0, 1.5, &mut r, Method::NullMc, 0).unwrap_err();
        assert!(err.to_string().contains("alpha must lie in (0,1)"));
    }
}
