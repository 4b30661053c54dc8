//! Goodness-of-fit with estimated parameters.

use rand::distr::Open01;
use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::dist::std_normal_cdf;
use crate::empirical::{factorial, LevelTable};
use crate::error::{invalid, Error, Result};
use crate::gaussproc::{simulate_kiefer, uniform_grid};
use crate::rng::RngStream;
use crate::sample::Sample;
use crate::stats::onesample::ks_scores;
use crate::stats::report::{check_alpha, Method, TestReport};

/// A parametric family `{F(·, θ)}` with an estimator and a sampler.
pub trait ParametricFamily: Send + Sync {
    fn dim(&self) -> usize;
    fn label(&self) -> String;
    fn cdf(&self, t: f64, theta: &[f64]) -> f64;
    fn inv_cdf(&self, u: f64, theta: &[f64]) -> f64;
    fn estimate(&self, sample: &Sample) -> Result<Vec<f64>>;

    /// `∇_θ F(t, θ)`, when the family provides it.
    fn grad_theta_cdf(&self, _t: f64, _theta: &[f64]) -> Option<Vec<f64>> {
        None
    }

    fn sample(&self, theta: &[f64], n: usize, rng: &mut dyn RngCore) -> Result<Sample> {
        let values = (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.inv_cdf(u, theta)
            })
            .collect();
        Sample::new(values)
    }
}

/// Exponential with rate `θ`; estimator `1 / mean`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExponentialFamily;

impl ParametricFamily for ExponentialFamily {
    fn dim(&self) -> usize {
        1
    }
    fn label(&self) -> String {
        "exponential".into()
    }
    fn cdf(&self, t: f64, theta: &[f64]) -> f64 {
        if t <= 0.0 {
            0.0
        } else {
            -(-theta[0] * t).exp_m1()
        }
    }
    fn inv_cdf(&self, u: f64, theta: &[f64]) -> f64 {
        -(-u).ln_1p() / theta[0]
    }
    fn estimate(&self, sample: &Sample) -> Result<Vec<f64>> {
        let mean = sample.values().iter().sum::<f64>() / sample.len() as f64;
        if !(mean > 0.0) {
            return Err(Error::Estimation(format!(
                "exponential rate needs a positive mean, got {mean}"
            )));
        }
        Ok(vec![1.0 / mean])
    }
    fn grad_theta_cdf(&self, t: f64, theta: &[f64]) -> Option<Vec<f64>> {
        Some(vec![if t <= 0.0 {
            0.0
        } else {
            t * (-theta[0] * t).exp()
        }])
    }
}

/// Normal with `θ = (μ, σ)`; maximum-likelihood estimator.
#[derive(Clone, Copy, Debug, Default)]
pub struct NormalFamily;

impl ParametricFamily for NormalFamily {
    fn dim(&self) -> usize {
        2
    }
    fn label(&self) -> String {
        "normal".into()
    }
    fn cdf(&self, t: f64, theta: &[f64]) -> f64 {
        std_normal_cdf((t - theta[0]) / theta[1])
    }
    fn inv_cdf(&self, u: f64, theta: &[f64]) -> f64 {
        theta[0] + theta[1] * crate::dist::std_normal_inv(u)
    }
    fn estimate(&self, sample: &Sample) -> Result<Vec<f64>> {
        let n = sample.len() as f64;
        let mean = sample.values().iter().sum::<f64>() / n;
        let var = sample
            .values()
            .iter()
            .map(|x| (x - mean).powi(2))
            .sum::<f64>()
            / n;
        if !(var > 0.0) {
            return Err(Error::Estimation("normal scale estimate is zero".into()));
        }
        Ok(vec![mean, var.sqrt()])
    }
    fn grad_theta_cdf(&self, t: f64, theta: &[f64]) -> Option<Vec<f64>> {
        let z = (t - theta[0]) / theta[1];
        let phi = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
        Some(vec![-phi / theta[1], -z * phi / theta[1]])
    }
}

/// Uniform on `(0, θ)`; estimator `max X_i`.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformScaleFamily;

impl ParametricFamily for UniformScaleFamily {
    fn dim(&self) -> usize {
        1
    }
    fn label(&self) -> String {
        "uniform-scale".into()
    }
    fn cdf(&self, t: f64, theta: &[f64]) -> f64 {
        (t / theta[0]).clamp(0.0, 1.0)
    }
    fn inv_cdf(&self, u: f64, theta: &[f64]) -> f64 {
        u * theta[0]
    }
    fn estimate(&self, sample: &Sample) -> Result<Vec<f64>> {
        let max = *sample.sorted().last().unwrap();
        if !(max > 0.0) {
            return Err(Error::Estimation(
                "uniform scale needs a positive maximum".into(),
            ));
        }
        Ok(vec![max])
    }
    fn grad_theta_cdf(&self, t: f64, theta: &[f64]) -> Option<Vec<f64>> {
        let inside = t > 0.0 && t < theta[0];
        Some(vec![if inside {
            -t / (theta[0] * theta[0])
        } else {
            0.0
        }])
    }
}

/// `sup_t |√n (F_n^(p)(t) - F(t, θ)^{p+1}/(p+1)!)|` at a given `θ`.
pub fn estimated_statistic_at(
    sample: &Sample,
    family: &dyn ParametricFamily,
    theta: &[f64],
    p: u32,
) -> f64 {
    let u: Vec<f64> = sample
        .sorted()
        .iter()
        .map(|&x| family.cdf(x, theta).clamp(0.0, 1.0))
        .collect();
    ks_scores(&u, &LevelTable::new(u.len(), p))
}

/// The statistic with `θ` replaced by the family's estimate.
pub fn estimated_statistic(
    sample: &Sample,
    family: &dyn ParametricFamily,
    p: u32,
) -> Result<(f64, Vec<f64>)> {
    let theta = family.estimate(sample)?;
    Ok((estimated_statistic_at(sample, family, &theta, p), theta))
}

/// Parametric-bootstrap test of fit to the family.
///
/// Replicate `b` draws `n` points from `F(·, θ̂)` on substream `b` of
/// `stream`, refits, and recomputes the statistic. Failed refits are
/// dropped; more than 10% failures is an error.
pub fn estimated_gof(
    sample: &Sample,
    family: &dyn ParametricFamily,
    p: u32,
    alpha: f64,
    n_boot: usize,
    stream: RngStream,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    if n_boot < 99 {
        return Err(invalid("B", "at least 99 bootstrap replicates required"));
    }
    let (statistic, theta) = estimated_statistic(sample, family, p)?;
    let n = sample.len();
    let draws: Vec<Option<f64>> = (0..n_boot)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream.substream(b as u64).rng();
            let resample = family.sample(&theta, n, &mut rng).ok()?;
            estimated_statistic(&resample, family, p)
                .ok()
                .map(|(s, _)| s)
        })
        .collect();
    let mut reference: Vec<f64> = draws.into_iter().flatten().collect();
    let dropped = n_boot - reference.len();
    if dropped * 10 > n_boot {
        return Err(Error::BootstrapFailures {
            dropped,
            requested: n_boot,
        });
    }
    TestReport::from_reference(
        format!("estimated-ks({})", family.label()),
        statistic,
        p,
        alpha,
        &mut reference,
        Method::ParametricBootstrap,
        stream.key(),
    )
}

/// One draw of the estimated-parameter limit on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimatedLimitDraw {
    /// `sup_u |G_n^(p)|`.
    pub sup: f64,
    /// `W(n) / √n`.
    pub w: Vec<f64>,
    pub grid: Vec<f64>,
    /// `G_n^(p)` at the grid points.
    pub values: Vec<f64>,
}

/// Simulates `G_n^(p) = F^p/p! · (K(n, F) - W(n) ∇F) / √n` with
/// `W(n) = Σ l(Q(u_mid)) ΔK(n, u)`, a discrete stochastic integral of the
/// caller's score `l(·, θ0)` against the Kiefer sheet.
pub fn simulate_estimated_limit_path<R: Rng + ?Sized>(
    family: &dyn ParametricFamily,
    theta0: &[f64],
    score: &dyn Fn(f64) -> Vec<f64>,
    p: u32,
    m: usize,
    n_steps: usize,
    rng: &mut R,
) -> Result<EstimatedLimitDraw> {
    let d = family.dim();
    if family.grad_theta_cdf(0.0, theta0).is_none() {
        return Err(invalid("family", "family provides no gradient of its cdf"));
    }
    let sheet = simulate_kiefer(n_steps, m, rng)?;
    let k = sheet.at(n_steps);
    let grid = uniform_grid(m);
    let mut w = vec![0.0; d];
    for j in 0..m - 1 {
        let t_mid = family.inv_cdf(0.5 * (grid[j] + grid[j + 1]), theta0);
        let l = score(t_mid);
        if l.len() != d {
            return Err(invalid(
                "score",
                format!("expected {d} components, got {}", l.len()),
            ));
        }
        let dk = k[j + 1] - k[j];
        for (wi, li) in w.iter_mut().zip(&l) {
            *wi += li * dk;
        }
    }
    let root = (n_steps as f64).sqrt();
    let c = 1.0 / factorial(p);
    let mut values = vec![0.0; m];
    for j in 0..m {
        // ∇F vanishes at both ends of the support.
        let grad = if j == 0 || j + 1 == m {
            vec![0.0; d]
        } else {
            family
                .grad_theta_cdf(family.inv_cdf(grid[j], theta0), theta0)
                .unwrap_or_else(|| vec![0.0; d])
        };
        let correction: f64 = w.iter().zip(&grad).map(|(a, b)| a * b).sum();
        values[j] = c * grid[j].powi(p as i32) * (k[j] - correction) / root;
    }
    let sup = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(EstimatedLimitDraw {
        sup,
        w: w.into_iter().map(|x| x / root).collect(),
        grid,
        values,
    })
}

/// `sup_u |G_n^(p)(u)|` for one simulated sheet.
pub fn simulate_estimated_limit<R: Rng + ?Sized>(
    family: &dyn ParametricFamily,
    theta0: &[f64],
    score: &dyn Fn(f64) -> Vec<f64>,
    p: u32,
    m: usize,
    n_steps: usize,
    rng: &mut R,
) -> Result<f64> {
    simulate_estimated_limit_path(family, theta0, score, p, m, n_steps, rng).map(|d| d.sup)
}
