//! Empirical d.f.s and their p-fold integrated versions.
//!
//! With `k = n F_n(t)` observations at or below `t`, the p-fold integrated
//! e.d.f. is `C(k + p, p + 1) / n^(p+1)` and its population counterpart is
//! `F(t)^(p+1) / (p+1)!`. All functions here are right-continuous in `t`;
//! left limits are available through [`Side::Left`].

use crate::dist::ContinuousDist;
use crate::error::{Error, Result};
use crate::sample::Sample;

/// Which one-sided value of a step function to evaluate at a jump point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Side {
    /// `f(t)`, counting observations `<= t`.
    #[default]
    Right,
    /// `f(t-)`, counting observations `< t`.
    Left,
}

fn count(sample: &Sample, t: f64, side: Side) -> usize {
    match side {
        Side::Right => sample.count_le(t),
        Side::Left => sample.count_lt(t),
    }
}

/// `F_n(t) = #{i : X_i <= t} / n`.
pub fn edf_eval(sample: &Sample, t: f64) -> f64 {
    edf_eval_at(sample, t, Side::Right)
}

pub fn edf_eval_at(sample: &Sample, t: f64, side: Side) -> f64 {
    count(sample, t, side) as f64 / sample.len() as f64
}

/// Largest `count + p` for which binomials are formed in exact integer arithmetic.
pub const EXACT_BINOMIAL_LIMIT: usize = 60;

fn binomial_u128(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub(crate) fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `C(count + p, p + 1) / n^(p+1)`, the value of the p-fold integrated e.d.f.
/// when `count` of the `n` observations lie at or below the evaluation point.
pub fn integrated_level(count: usize, n: usize, p: u32) -> f64 {
    debug_assert!(count <= n && n > 0);
    if count == 0 {
        return 0.0;
    }
    let p_usize = p as usize;
    if count + p_usize <= EXACT_BINOMIAL_LIMIT {
        let c = binomial_u128((count + p_usize) as u128, (p + 1) as u128);
        // n^(p+1) may exceed 2^53 for large p; divide stepwise instead.
        let nf = n as f64;
        if (p + 1) as f64 * nf.log2() < 52.0 {
            c as f64 / nf.powi(p as i32 + 1)
        } else {
            (0..=p).fold(c as f64, |acc, _| acc / nf)
        }
    } else {
        // k(k+1)...(k+p) / ((p+1)! n^(p+1)) as a product of bounded factors.
        let nf = n as f64;
        (0..=p).fold(1.0, |acc, i| acc * (count as f64 + i as f64) / nf) / factorial(p + 1)
    }
}

/// The p-fold integrated e.d.f. at `t` together with the count it depends on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratedEdfValue {
    /// `n F_n(t)`.
    pub u_count: usize,
    pub value: f64,
    pub p: u32,
}

pub fn integrated_edf(sample: &Sample, p: u32, t: f64) -> IntegratedEdfValue {
    integrated_edf_at(sample, p, t, Side::Right)
}

pub fn integrated_edf_at(sample: &Sample, p: u32, t: f64, side: Side) -> IntegratedEdfValue {
    let k = count(sample, t, side);
    IntegratedEdfValue {
        u_count: k,
        value: integrated_level(k, sample.len(), p),
        p,
    }
}

/// Levels `C(k + p, p + 1) / n^(p+1)` for every `k = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelTable {
    n: usize,
    p: u32,
    levels: Vec<f64>,
}

impl LevelTable {
    pub fn new(n: usize, p: u32) -> Self {
        let levels = (0..=n).map(|k| integrated_level(k, n, p)).collect();
        Self { n, p, levels }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn get(&self, count: usize) -> f64 {
        self.levels[count]
    }

    /// Value to the right of the largest observation.
    pub fn plateau(&self) -> f64 {
        self.levels[self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.levels
    }
}

/// Direct evaluation of the nested integrals defining the p-fold integrated
/// e.d.f., by recursion `F^(p)(t) = (1/n) Σ_{X_i <= t} F^(p-1)(X_i)`.
///
/// Exponential in `p`; only meant as a test oracle. Inputs are limited to
/// `n <= 12`, `p <= 4`.
pub fn integrated_edf_oracle(sample: &Sample, p: u32, t: f64) -> Result<f64> {
    let n = sample.len();
    if n > 12 || p > 4 {
        return Err(Error::OracleGuard { n, p });
    }
    fn nested(values: &[f64], p: u32, t: f64) -> f64 {
        let n = values.len() as f64;
        if p == 0 {
            return values.iter().filter(|&&x| x <= t).count() as f64 / n;
        }
        values
            .iter()
            .filter(|&&x| x <= t)
            .map(|&x| nested(values, p - 1, x))
            .sum::<f64>()
            / n
    }
    Ok(nested(sample.values(), p, t))
}

/// `F^(p)` in terms of `u = F(t)`: `u^(p+1) / (p+1)!`.
pub fn theoretical_integrated(u: f64, p: u32) -> f64 {
    u.powi(p as i32 + 1) / factorial(p + 1)
}

/// The integrated empirical process `√n (F_n^(p)(t) - F_0^(p)(t))`.
pub fn alpha_np(sample: &Sample, f0: &(impl ContinuousDist + ?Sized), p: u32, t: f64) -> f64 {
    let n = sample.len() as f64;
    n.sqrt() * (integrated_edf(sample, p, t).value - theoretical_integrated(f0.cdf(t), p))
}

/// `∫_{-∞}^t F_n(s)^p dF_n(s) = n^-(p+1) Σ_{i=1}^{k} i^p`.
pub fn tilde_integrated_edf(sample: &Sample, p: u32, t: f64) -> f64 {
    let n = sample.len() as f64;
    let k = sample.count_le(t);
    (1..=k).map(|i| (i as f64 / n).powi(p as i32)).sum::<f64>() / n
}

/// `∫_{-∞}^t (F_n(t) - F_n(s))^p dF_n(s) = n^-(p+1) Σ_{i=0}^{k-1} i^p`.
pub fn breve_integrated_edf(sample: &Sample, p: u32, t: f64) -> f64 {
    let n = sample.len() as f64;
    let k = sample.count_le(t);
    (0..k).map(|i| (i as f64 / n).powi(p as i32)).sum::<f64>() / n
}

/// Population counterpart of both Appendix-A families: `u^(p+1) / (p+1)`.
pub fn tilde_theoretical(u: f64, p: u32) -> f64 {
    u.powi(p as i32 + 1) / (p + 1) as f64
}

/// Polynomial-indexed family: `Σ_ij a_ij F_n(t)^j tilde^(i)(t)` where
/// `coeffs[i][j] = a_ij` is the coefficient of `x^i y^j`.
pub fn poly_integrated_edf(sample: &Sample, coeffs: &[Vec<f64>], t: f64) -> f64 {
    let fn_t = edf_eval(sample, t);
    coeffs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let tilde = tilde_integrated_edf(sample, i as u32, t);
            row.iter()
                .enumerate()
                .map(|(j, a)| a * fn_t.powi(j as i32) * tilde)
                .sum::<f64>()
        })
        .sum()
}

/// `Σ_ij a_ij / (i+1) u^(i+j+1)`.
pub fn poly_theoretical(coeffs: &[Vec<f64>], u: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, a)| a / (i + 1) as f64 * u.powi((i + j + 1) as i32))
                .sum::<f64>()
        })
        .sum()
}

/// Coefficients `a_k`, `k = 1..=p`, in
/// `F_n^(p)(t) = F_n(t)^(p+1)/(p+1)! + Σ_k a_k F_n(t)^k / n^(p-k+1)`.
///
/// `a_k` is the coefficient of `x^k` in `x(x+1)...(x+p)` divided by `(p+1)!`.
pub fn representation_coefficients(p: u32) -> Vec<f64> {
    // rising factorial x(x+1)...(x+p), coefficients indexed by power
    let mut poly = vec![0.0f64, 1.0];
    for i in 1..=p {
        let mut next = vec![0.0; poly.len() + 1];
        for (deg, &c) in poly.iter().enumerate() {
            next[deg + 1] += c;
            next[deg] += c * i as f64;
        }
        poly = next;
    }
    let scale = factorial(p + 1);
    (1..=p as usize).map(|k| poly[k] / scale).collect()
}

/// Uniform bound `Σ_k a_k` on `n |F_n^(p)(t) - F_n(t)^(p+1)/(p+1)!|`.
pub fn representation_bound(p: u32) -> f64 {
    representation_coefficients(p).iter().sum()
}

/// Pooled p-fold integrated e.d.f. taken as the size-weighted average of the
/// per-sample ones, `(1/|n|) Σ_k n_k F_{n_k}^{k,(p)}(t)`.
pub fn pooled_weighted_integrated_edf(samples: &[Sample], p: u32, t: f64) -> f64 {
    let total: usize = samples.iter().map(Sample::len).sum();
    samples
        .iter()
        .map(|s| s.len() as f64 * integrated_edf(s, p, t).value)
        .sum::<f64>()
        / total as f64
}
