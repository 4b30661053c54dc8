//! Continuous distributions used as hypothesized d.f.s and samplers.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

use crate::error::{invalid, Error, Result};

/// A continuous distribution known through its d.f. and quantile function.
///
/// Implementors must satisfy `cdf(inv_cdf(u)) == u` on `(0, 1)` up to
/// rounding, and `cdf` must be nondecreasing.
pub trait ContinuousDist: Send + Sync + fmt::Debug {
    fn cdf(&self, t: f64) -> f64;
    /// Generalized inverse `inf { t : cdf(t) >= u }`.
    fn inv_cdf(&self, u: f64) -> f64;
    fn label(&self) -> String;
}

/// Distribution registry used by the command line and reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistSpec {
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    Normal { mu: f64, sigma: f64 },
    Table(PiecewiseLinear),
}

impl DistSpec {
    pub fn uniform() -> Self {
        DistSpec::Uniform { lo: 0.0, hi: 1.0 }
    }

    pub fn uniform_on(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("uniform", "need finite lo < hi"));
        }
        Ok(DistSpec::Uniform { lo, hi })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(invalid("rate", "must be positive"));
        }
        Ok(DistSpec::Exponential { rate })
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", "must be positive"));
        }
        Ok(DistSpec::Normal { mu, sigma })
    }

    /// Parses `uniform`, `uniform(a,b)`, `exponential(rate)`, `normal(mu,sigma)`
    /// or `table:<path>` (two-column CSV of `t,F(t)`, header optional).
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("table:") {
            return Ok(DistSpec::Table(PiecewiseLinear::from_csv_path(Path::new(
                path,
            ))?));
        }
        let (name, args) = match spec.find('(') {
            Some(open) => {
                let close = spec.rfind(')').filter(|&c| c > open).ok_or_else(|| {
                    invalid("dist", format!("unbalanced parentheses in `{spec}`"))
                })?;
                let args = spec[open + 1..close]
                    .split(',')
                    .map(|a| {
                        a.trim()
                            .parse::<f64>()
                            .map_err(|_| invalid("dist", format!("bad number `{}`", a.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (&spec[..open], args)
            }
            None => (spec, Vec::new()),
        };
        match (name.to_ascii_lowercase().as_str(), args.as_slice()) {
            ("uniform", []) => Ok(Self::uniform()),
            ("uniform", [a, b]) => Self::uniform_on(*a, *b),
            ("exponential" | "exp", []) => Self::exponential(1.0),
            ("exponential" | "exp", [rate]) => Self::exponential(*rate),
            ("normal", []) => Self::normal(0.0, 1.0),
            ("normal", [mu, sigma]) => Self::normal(*mu, *sigma),
            _ => Err(invalid("dist", format!("unknown distribution `{spec}`"))),
        }
    }
}

pub(crate) fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

pub(crate) fn std_normal_inv(u: f64) -> f64 {
    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let mut x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u);
    // Two Halley steps; the residual uses the tail that avoids cancellation.
    for _ in 0..2 {
        let resid = if u <= 0.5 {
            std_normal_cdf(x) - u
        } else {
            (1.0 - u) - 0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
        };
        let density = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        if density == 0.0 {
            break;
        }
        let step = resid / density;
        x -= step / (1.0 + 0.5 * x * step);
    }
    x
}

impl ContinuousDist for DistSpec {
    fn cdf(&self, t: f64) -> f64 {
        match self {
            DistSpec::Uniform { lo, hi } => ((t - lo) / (hi - lo)).clamp(0.0, 1.0),
            DistSpec::Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-rate * t).exp_m1()
                }
            }
            DistSpec::Normal { mu, sigma } => std_normal_cdf((t - mu) / sigma),
            DistSpec::Table(table) => table.cdf(t),
        }
    }

    fn inv_cdf(&self, u: f64) -> f64 {
        match self {
            DistSpec::Uniform { lo, hi } => lo + u.clamp(0.0, 1.0) * (hi - lo),
            DistSpec::Exponential { rate } => {
                if u >= 1.0 {
                    f64::INFINITY
                } else {
                    -(-u.max(0.0)).ln_1p() / rate
                }
            }
            DistSpec::Normal { mu, sigma } => mu + sigma * std_normal_inv(u),
            DistSpec::Table(table) => table.inv_cdf(u),
        }
    }

    fn label(&self) -> String {
        match self {
            DistSpec::Uniform { lo, hi } => format!("uniform({lo},{hi})"),
            DistSpec::Exponential { rate } => format!("exponential({rate})"),
            DistSpec::Normal { mu, sigma } => format!("normal({mu},{sigma})"),
            DistSpec::Table(t) => format!("table({} knots)", t.knots.len()),
        }
    }
}

/// D.f. given by a monotone piecewise-linear interpolation of `(t, F(t))` knots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Knots must have strictly increasing `t`, nondecreasing `F`,
    /// `F` starting at 0 and ending at 1.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(invalid("table", "need at least two knots"));
        }
        for w in knots.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(invalid("table", "t values must be strictly increasing"));
            }
            if w[0].1 > w[1].1 {
                return Err(invalid("table", "F values must be nondecreasing"));
            }
        }
        if knots
            .iter()
            .any(|&(t, f)| !t.is_finite() || !(0.0..=1.0).contains(&f))
        {
            return Err(invalid(
                "table",
                "F values must lie in [0,1] and t must be finite",
            ));
        }
        if knots[0].1 != 0.0 || knots[knots.len() - 1].1 != 1.0 {
            return Err(invalid("table", "F must start at 0 and end at 1"));
        }
        Ok(Self { knots })
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .from_path(path)?;
        let mut knots = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            // An optional header row is skipped.
            if line == 0 && record.iter().all(|f| f.trim().parse::<f64>().is_err()) {
                continue;
            }
            let field = |i: usize| -> Result<f64> {
                record
                    .get(i)
                    .and_then(|s| s.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse {
                        line: line + 1,
                        message: "expected two numeric columns t,F".into(),
                    })
            };
            knots.push((field(0)?, field(1)?));
        }
        Self::new(knots)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn cdf(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 {
            return 0.0;
        }
        if t >= k[k.len() - 1].0 {
            return 1.0;
        }
        let j = k.partition_point(|&(x, _)| x <= t);
        let (t0, f0) = k[j - 1];
        let (t1, f1) = k[j];
        f0 + (f1 - f0) * (t - t0) / (t1 - t0)
    }

    fn inv_cdf(&self, u: f64) -> f64 {
        let k = &self.knots;
        if u <= 0.0 {
            // smallest t with F(t) >= 0 is -inf; return the support start
            return k[0].0;
        }
        if u >= 1.0 {
            let j = k.partition_point(|&(_, f)| f < 1.0);
            return k[j].0;
        }
        let j = k.partition_point(|&(_, f)| f < u);
        let (t0, f0) = k[j - 1];
        let (t1, f1) = k[j];
        t0 + (t1 - t0) * (u - f0) / (f1 - f0)
    }
}
