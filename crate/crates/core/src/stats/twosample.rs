//! Two-sample and K-sample statistics built on integrated e.d.f.s.
//!
//! Both processes are step functions that only move at pooled order
//! statistics, so every sup and every integral reduces to a finite sum over
//! the distinct pooled points.

use crate::dist::ContinuousDist;
use crate::empirical::integrated_level;
use crate::error::{invalid, Result};
use crate::sample::Sample;

/// Measure used for the Cramér–von Mises type two-sample functional.
#[derive(Clone, Copy, Debug)]
pub enum Integrator<'a> {
    /// Pooled e.d.f. of both samples (the default).
    Pooled,
    /// A hypothesized continuous common d.f.
    Hypothesized(&'a dyn ContinuousDist),
}

fn check_q(q: u32) -> Result<()> {
    if q < 1 {
        return Err(invalid("q", "q ≥ 1 required"));
    }
    Ok(())
}

fn integrated_at(sample: &Sample, p: u32, t: f64) -> f64 {
    integrated_level(sample.count_le(t), sample.len(), p)
}

/// `√(mn/(m+n)) [F_m^(p)(t)^q - G_n^(p)(t)^q]`.
pub fn two_sample_process(x: &Sample, y: &Sample, p: u32, q: u32, t: f64) -> Result<f64> {
    check_q(q)?;
    let (m, n) = (x.len() as f64, y.len() as f64);
    let scale = (m * n / (m + n)).sqrt();
    Ok(scale * (integrated_at(x, p, t).powi(q as i32) - integrated_at(y, p, t).powi(q as i32)))
}

/// Distinct pooled points in ascending order, plus the pooled multiplicity
/// of each.
fn pooled_points(samples: &[&Sample]) -> (Vec<f64>, Vec<usize>) {
    let mut all: Vec<f64> = samples
        .iter()
        .flat_map(|s| s.sorted().iter().copied())
        .collect();
    all.sort_by(f64::total_cmp);
    let mut points: Vec<f64> = Vec::with_capacity(all.len());
    let mut mult = Vec::with_capacity(all.len());
    for v in all {
        if points.last() == Some(&v) {
            *mult.last_mut().unwrap() += 1;
        } else {
            points.push(v);
            mult.push(1);
        }
    }
    (points, mult)
}

/// Integrated e.d.f. of `s` at each pooled point (right-continuous).
fn levels_at(s: &Sample, p: u32, points: &[f64]) -> Vec<f64> {
    let sorted = s.sorted();
    let mut idx = 0;
    points
        .iter()
        .map(|&t| {
            while idx < sorted.len() && sorted[idx] <= t {
                idx += 1;
            }
            integrated_level(idx, sorted.len(), p)
        })
        .collect()
}

/// Two-sample `S` and `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSampleStatistics {
    pub s: f64,
    pub t: f64,
    /// Distinct pooled points.
    pub points: Vec<f64>,
    /// Process value just after each pooled point.
    pub values: Vec<f64>,
}

pub fn two_sample_statistics(
    x: &Sample,
    y: &Sample,
    p: u32,
    q: u32,
    integrator: Integrator<'_>,
) -> Result<TwoSampleStatistics> {
    check_q(q)?;
    let (points, mult) = pooled_points(&[x, y]);
    let fx = levels_at(x, p, &points);
    let fy = levels_at(y, p, &points);
    let (m, n) = (x.len() as f64, y.len() as f64);
    let scale = (m * n / (m + n)).sqrt();
    let values: Vec<f64> = fx
        .iter()
        .zip(&fy)
        .map(|(a, b)| scale * (a.powi(q as i32) - b.powi(q as i32)))
        .collect();
    // Left limits equal the previous right values and the process is 0
    // before the first point, so the right values carry the whole sup.
    let s = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let t = match integrator {
        Integrator::Pooled => {
            values
                .iter()
                .zip(&mult)
                .map(|(v, &k)| k as f64 * v * v)
                .sum::<f64>()
                / (m + n)
        }
        Integrator::Hypothesized(f0) => step_integral(&points, &values, |v| v * v, f0),
    };
    Ok(TwoSampleStatistics {
        s,
        t,
        points,
        values,
    })
}

/// `∫ h(ξ) dF0` for a right-continuous step function with value `values[j]`
/// on `[points[j], points[j+1])` and 0 before the first point.
fn step_integral(
    points: &[f64],
    values: &[f64],
    h: impl Fn(f64) -> f64,
    f0: &dyn ContinuousDist,
) -> f64 {
    let mut total = 0.0;
    for j in 0..points.len() {
        let lo = f0.cdf(points[j]);
        let hi = if j + 1 < points.len() {
            f0.cdf(points[j + 1])
        } else {
            1.0
        };
        total += h(values[j]) * (hi - lo);
    }
    total
}

/// `D(t) = Σ (n_k/|n|) F_k^(p)(t)`: the weighted average of per-sample
/// integrated e.d.f.s.
pub fn ksample_average(samples: &[Sample], p: u32, t: f64) -> f64 {
    let total: usize = samples.iter().map(Sample::len).sum();
    samples
        .iter()
        .map(|s| s.len() as f64 / total as f64 * integrated_at(s, p, t))
        .sum()
}

/// `ξ_K(t) = Σ n_k (F_k^(p)(t) - D(t))^2`.
pub fn ksample_process(samples: &[Sample], p: u32, t: f64) -> Result<f64> {
    check_k(samples)?;
    let d = ksample_average(samples, p, t);
    Ok(samples
        .iter()
        .map(|s| {
            let diff = integrated_at(s, p, t) - d;
            s.len() as f64 * diff * diff
        })
        .sum())
}

fn check_k(samples: &[Sample]) -> Result<()> {
    if samples.len() < 2 {
        return Err(invalid("K", "K ≥ 2 samples required"));
    }
    Ok(())
}

/// K-sample `S = sup ξ_K` and `T = ∫ ξ_K dF0`, with the step process kept
/// for evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct KSampleStatistics {
    pub s: f64,
    pub t: f64,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

impl KSampleStatistics {
    /// `ξ_K(t)` from the stored step function.
    pub fn eval(&self, t: f64) -> f64 {
        match self.points.partition_point(|&x| x <= t) {
            0 => 0.0,
            j => self.values[j - 1],
        }
    }
}

pub fn ksample_statistics(
    samples: &[Sample],
    f0: &(impl ContinuousDist + ?Sized),
    p: u32,
) -> Result<KSampleStatistics> {
    check_k(samples)?;
    let refs: Vec<&Sample> = samples.iter().collect();
    let (points, _) = pooled_points(&refs);
    let per: Vec<Vec<f64>> = samples.iter().map(|s| levels_at(s, p, &points)).collect();
    let total: usize = samples.iter().map(Sample::len).sum();
    let values: Vec<f64> = (0..points.len())
        .map(|j| {
            let d: f64 = samples
                .iter()
                .zip(&per)
                .map(|(s, f)| s.len() as f64 / total as f64 * f[j])
                .sum();
            samples
                .iter()
                .zip(&per)
                .map(|(s, f)| s.len() as f64 * (f[j] - d).powi(2))
                .sum()
        })
        .collect();
    let s = values.iter().fold(0.0f64, |a, &v| a.max(v));
    let t = step_integral(&points, &values, |v| v, &Wrapper(f0));
    Ok(KSampleStatistics {
        s,
        t,
        points,
        values,
    })
}

/// Lets an `impl ContinuousDist + ?Sized` pass as `&dyn ContinuousDist`.
#[derive(Debug)]
struct Wrapper<'a, D: ?Sized>(&'a D);

impl<D: ContinuousDist + ?Sized> ContinuousDist for Wrapper<'_, D> {
    fn cdf(&self, t: f64) -> f64 {
        self.0.cdf(t)
    }
    fn inv_cdf(&self, u: f64) -> f64 {
        self.0.inv_cdf(u)
    }
    fn label(&self) -> String {
        self.0.label()
    }
}
