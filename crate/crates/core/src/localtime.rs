//! Random walk with increments `((1-U)^p - 1/(p+1))/p!`, its local time in
//! unit windows, the self-intersection local time, and the characteristic
//! function of one centred increment.

use num_complex::Complex64;
use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::empirical::factorial;
use crate::error::{invalid, Result};
use crate::quad::adaptive_simpson;
use crate::rng::RngStream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkPath {
    pub p: u32,
    /// `S_1, ..., S_n`.
    pub steps: Vec<f64>,
}

impl WalkPath {
    /// Builds a path from given partial sums.
    pub fn from_partial_sums(p: u32, steps: Vec<f64>) -> Self {
        Self { p, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `S_i - S_{i-1}` with `S_0 = 0`.
    pub fn increments(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.steps
            .iter()
            .map(|&s| {
                let d = s - prev;
                prev = s;
                d
            })
            .collect()
    }

    /// Path with every partial sum negated.
    pub fn reflected(&self) -> Self {
        Self {
            p: self.p,
            steps: self.steps.iter().map(|s| -s).collect(),
        }
    }
}

/// One increment `((1-u)^p - 1/(p+1)) / p!`.
pub fn increment(p: u32, u: f64) -> f64 {
    ((1.0 - u).powi(p as i32) - 1.0 / (p as f64 + 1.0)) / factorial(p)
}

pub fn walk<R: Rng + ?Sized>(p: u32, n: usize, rng: &mut R) -> Result<WalkPath> {
    if p < 1 {
        return Err(invalid("p", "walk needs p ≥ 1"));
    }
    let mut s = 0.0;
    let steps = (0..n)
        .map(|_| {
            s += increment(p, rng.sample(Open01));
            s
        })
        .collect();
    Ok(WalkPath { p, steps })
}

/// Number of `i <= n` with `|S_i - x| <= 1/2`.
pub fn local_time(path: &WalkPath, x: f64, n: usize) -> Result<usize> {
    if n > path.len() {
        return Err(invalid(
            "n",
            format!("horizon {n} exceeds path length {}", path.len()),
        ));
    }
    Ok(path.steps[..n]
        .iter()
        .filter(|&&s| (s - x).abs() <= 0.5)
        .count())
}

/// `Σ_{i<j<=⌊nt⌋} max(0, 1 - |S_i - S_j|)`, in `O(m log m)` for `m = ⌊nt⌋`.
pub fn self_intersection(path: &WalkPath, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid("t", "t must lie in (0,1]"));
    }
    let m = (path.len() as f64 * t).floor() as usize;
    if m < 2 {
        return Err(invalid("t", "⌊nt⌋ must be at least 2"));
    }
    let mut v = path.steps[..m].to_vec();
    v.sort_by(f64::total_cmp);
    Ok(overlap_sum_sorted(&v))
}

/// For sorted `v`: `Σ_{i<j} max(0, 1 - (v_j - v_i))`. For each `j`, the
/// partners are `v_i` in `(v_j - 1, v_j]`, contributing
/// `cnt (1 - v_j) + Σ v_i`.
fn overlap_sum_sorted(v: &[f64]) -> f64 {
    let mut prefix = Vec::with_capacity(v.len() + 1);
    prefix.push(0.0);
    for &x in v {
        prefix.push(prefix.last().unwrap() + x);
    }
    let mut lo = 0;
    let mut total = 0.0;
    for j in 0..v.len() {
        while v[j] - v[lo] >= 1.0 {
            lo += 1;
        }
        let cnt = (j - lo) as f64;
        total += cnt * (1.0 - v[j]) + (prefix[j] - prefix[lo]);
    }
    total
}

/// Direct `O(m^2)` double sum.
pub fn self_intersection_naive(path: &WalkPath, t: f64) -> Result<f64> {
    let m = (path.len() as f64 * t).floor() as usize;
    if m < 2 {
        return Err(invalid("t", "⌊nt⌋ must be at least 2"));
    }
    let s = &path.steps[..m];
    let mut total = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            total += (1.0 - (s[i] - s[j]).abs()).max(0.0);
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    /// Mean over paths of the least-squares slope of `log L_n` on `log n`.
    pub slope: f64,
    pub per_path: Vec<f64>,
    /// `(n, mean L_n)` over paths.
    pub profile: Vec<(usize, f64)>,
}

/// Least-squares slope of `y` on `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Growth exponent of `L_n^(p)(1)` over `n_list`, averaged over `n_paths`
/// walks. Path `k` uses substream `k` and is grown to `max(n_list)`.
pub fn growth_exponent(
    p: u32,
    n_list: &[usize],
    n_paths: usize,
    stream: RngStream,
) -> Result<GrowthEstimate> {
    growth_exponent_with(n_list, n_paths, |k| {
        walk(
            p,
            *n_list.iter().max().unwrap_or(&0),
            &mut stream.substream(k as u64).rng(),
        )
    })
}

/// As [`growth_exponent`], with the paths supplied by `make_path`.
pub fn growth_exponent_with(
    n_list: &[usize],
    n_paths: usize,
    make_path: impl Fn(usize) -> Result<WalkPath> + Sync,
) -> Result<GrowthEstimate> {
    if n_list.len() < 2 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid(
            "n_list",
            "need at least two strictly ascending sizes",
        ));
    }
    if n_list[0] < 2 {
        return Err(invalid("n_list", "sizes must be at least 2"));
    }
    if n_list[n_list.len() - 1] < 100 * n_list[0] {
        return Err(invalid("n_list", "sizes must span at least two decades"));
    }
    if n_paths < 1 {
        return Err(invalid("paths", "at least one path required"));
    }
    let logn: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let per: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|k| {
            let path = make_path(k)?;
            if path.len() < n_list[n_list.len() - 1] {
                return Err(invalid("paths", "path shorter than the largest size"));
            }
            n_list
                .iter()
                .map(|&n| {
                    let mut v = path.steps[..n].to_vec();
                    v.sort_by(f64::total_cmp);
                    Ok(overlap_sum_sorted(&v))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let per_path: Vec<f64> = per
        .iter()
        .map(|ls| ls_slope(&logn, &ls.iter().map(|l| l.ln()).collect::<Vec<_>>()))
        .collect();
    let slope = per_path.iter().sum::<f64>() / n_paths as f64;
    let profile = n_list
        .iter()
        .enumerate()
        .map(|(i, &n)| (n, per.iter().map(|ls| ls[i]).sum::<f64>() / n_paths as f64))
        .collect();
    Ok(GrowthEstimate {
        slope,
        per_path,
        profile,
    })
}

/// `χ^(p)(z) = ∫_0^1 exp(i z (u^p - 1/(p+1))) du`.
pub fn char_fn(p: u32, z: f64) -> Result<Complex64> {
    if p < 1 {
        return Err(invalid("p", "p ≥ 1 required"));
    }
    let c = 1.0 / (p as f64 + 1.0);
    let phase = |u: f64| z * (u.powi(p as i32) - c);
    let re = adaptive_simpson(&|u| phase(u).cos(), 0.0, 1.0, 1e-11);
    let im = adaptive_simpson(&|u| phase(u).sin(), 0.0, 1.0, 1e-11);
    Ok(Complex64::new(re, im))
}
