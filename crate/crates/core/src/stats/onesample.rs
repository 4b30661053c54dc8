//! One-sample goodness-of-fit statistics.
//!
//! Everything here is a function of the probability-integral scores
//! `u_i = F0(X_(i))`, which makes the statistics distribution-free under a
//! continuous null. The `*_scores` variants take sorted scores directly and
//! are what the Monte Carlo engine calls in its inner loop.

use serde::{Deserialize, Serialize};

use crate::dist::ContinuousDist;
use crate::empirical::{factorial, LevelTable};
use crate::error::{invalid, Result};
use crate::quad::gl32_integrate;
use crate::sample::Sample;

/// Sorted scores `F0(X_(1)) <= ... <= F0(X_(n))`.
pub fn uniform_scores(sample: &Sample, f0: &(impl ContinuousDist + ?Sized)) -> Vec<f64> {
    // F0 is nondecreasing, so mapping the sorted sample keeps the order.
    sample
        .sorted()
        .iter()
        .map(|&x| f0.cdf(x).clamp(0.0, 1.0))
        .collect()
}

/// Which one-sample functional to compute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StatKind {
    /// Integrated Kolmogorov–Smirnov `S_n^(p)`.
    Ks,
    /// Integrated Cramér–von Mises `T_n^(p)`.
    Cvm,
    /// `ω_{n,p,r}`.
    Omega { r: f64 },
}

impl StatKind {
    pub fn name(&self) -> String {
        match self {
            StatKind::Ks => "ks".into(),
            StatKind::Cvm => "cvm".into(),
            StatKind::Omega { r } => format!("omega(r={r})"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let StatKind::Omega { r } = self {
            check_r(*r)?;
        }
        Ok(())
    }

    /// Evaluates the statistic on sorted scores.
    pub fn from_scores(&self, u: &[f64], levels: &LevelTable) -> Result<f64> {
        match *self {
            StatKind::Ks => Ok(ks_scores(u, levels)),
            StatKind::Cvm => Ok(cvm_scores(u, levels)),
            StatKind::Omega { r } => omega_scores(u, levels, r),
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(invalid("r", "r ≥ 1 required"));
    }
    Ok(())
}

/// `sup_t |√n (F_n^(p)(t) - F0(t)^{p+1}/(p+1)!)|`.
pub fn ks_integrated(sample: &Sample, f0: &(impl ContinuousDist + ?Sized), p: u32) -> f64 {
    let u = uniform_scores(sample, f0);
    ks_scores(&u, &LevelTable::new(u.len(), p))
}

/// KS scan on sorted scores. Tied scores are treated as one jump.
pub fn ks_scores(u: &[f64], levels: &LevelTable) -> f64 {
    let n = u.len();
    debug_assert_eq!(n, levels.n());
    let c = factorial(levels.p() + 1);
    let pow = levels.p() as i32 + 1;
    let mut best = 0.0f64;
    let mut i = 0;
    while i < n {
        let before = levels.get(i);
        let mut j = i;
        while j + 1 < n && u[j + 1] == u[i] {
            j += 1;
        }
        let after = levels.get(j + 1);
        let g = u[i].powi(pow) / c;
        best = best.max((after - g).abs()).max((before - g).abs());
        i = j + 1;
    }
    best = best.max((levels.plateau() - 1.0 / c).abs());
    (n as f64).sqrt() * best
}

/// `n ∫ (F_n^(p) - F0^(p))^2 dF0`, exact.
pub fn cvm_integrated(sample: &Sample, f0: &(impl ContinuousDist + ?Sized), p: u32) -> f64 {
    let u = uniform_scores(sample, f0);
    cvm_scores(&u, &LevelTable::new(u.len(), p))
}

/// Exact `∫_a^b (v - u^k / c)^2 du` with `k = p + 1`.
fn square_piece(v: f64, a: f64, b: f64, k: i32, c: f64) -> f64 {
    let lin = v * v * (b - a);
    let cross = 2.0 * v * (b.powi(k + 1) - a.powi(k + 1)) / ((k + 1) as f64 * c);
    let quad = (b.powi(2 * k + 1) - a.powi(2 * k + 1)) / ((2 * k + 1) as f64 * c * c);
    lin - cross + quad
}

pub fn cvm_scores(u: &[f64], levels: &LevelTable) -> f64 {
    let n = u.len();
    let k = levels.p() as i32 + 1;
    let c = factorial(levels.p() + 1);
    let mut total = 0.0;
    let mut lo = 0.0;
    for i in 0..=n {
        let hi = if i < n { u[i] } else { 1.0 };
        total += square_piece(levels.get(i), lo, hi, k, c);
        lo = hi;
    }
    n as f64 * total
}

/// `√n (∫ |F_n^(p) - F0^(p)|^r dF0)^{1/r}` for `r >= 1`.
pub fn omega_integrated(
    sample: &Sample,
    f0: &(impl ContinuousDist + ?Sized),
    p: u32,
    r: f64,
) -> Result<f64> {
    let u = uniform_scores(sample, f0);
    omega_scores(&u, &LevelTable::new(u.len(), p), r)
}

pub fn omega_scores(u: &[f64], levels: &LevelTable, r: f64) -> Result<f64> {
    check_r(r)?;
    let n = u.len();
    let integral = if levels.p() == 0 {
        omega_integral_p0(u, r)
    } else {
        omega_integral_piecewise(u, levels, r)
    };
    Ok((n as f64).sqrt() * integral.max(0.0).powf(1.0 / r))
}

/// Closed form of `∫ |F_n(u) - u|^r du` for uniform scores.
fn omega_integral_p0(u: &[f64], r: f64) -> f64 {
    let n = u.len();
    let signed = |x: f64| x * x.abs().powf(r);
    let mut total = 0.0;
    let mut lo = 0.0;
    for i in 1..=n + 1 {
        let hi = if i <= n { u[i - 1] } else { 1.0 };
        let level = (i - 1) as f64 / n as f64;
        total += signed(hi - level) - signed(lo - level);
        lo = hi;
    }
    total / (r + 1.0)
}

/// Piecewise Gauss–Legendre, splitting each interval at the crossing of
/// the step level with `u^{p+1}/(p+1)!`.
fn omega_integral_piecewise(u: &[f64], levels: &LevelTable, r: f64) -> f64 {
    let n = u.len();
    let k = levels.p() as i32 + 1;
    let c = factorial(levels.p() + 1);
    let g = |x: f64| x.powi(k) / c;
    let mut total = 0.0;
    let mut lo = 0.0;
    for i in 0..=n {
        let hi = if i < n { u[i] } else { 1.0 };
        if hi > lo {
            let v = levels.get(i);
            let f = |x: f64| (v - g(x)).abs().powf(r);
            if g(lo) < v && v < g(hi) {
                let cross = bisect_increasing(g, v, lo, hi);
                total += gl32_integrate(f, lo, cross) + gl32_integrate(f, cross, hi);
            } else {
                total += gl32_integrate(f, lo, hi);
            }
        }
        lo = hi;
    }
    total
}

/// Root of `g(x) = target` for increasing `g` with a sign change on `[lo, hi]`.
pub(crate) fn bisect_increasing(
    g: impl Fn(f64) -> f64,
    target: f64,
    mut lo: f64,
    mut hi: f64,
) -> f64 {
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
