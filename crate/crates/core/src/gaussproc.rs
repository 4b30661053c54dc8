//! Grid simulation of the Gaussian limit processes.
//!
//! Every path lives on the uniform grid `u_j = j/(m-1)`, `j = 0..m`. A
//! Brownian bridge is built as `W(u) - u W(1)` from independent Gaussian
//! increments, which has the exact finite-dimensional law of the bridge on
//! the grid. The Kiefer sheet at integer times is a running sum of
//! independent bridges.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::empirical::factorial;
use crate::error::{invalid, Result};

/// Default number of grid points for limiting-distribution sampling.
pub const DEFAULT_GRID: usize = 2048;

/// A process path sampled on an ascending grid of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathGrid {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl PathGrid {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `sup_j |values_j|`.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `m` equally spaced points from 0 to 1 inclusive.
pub fn uniform_grid(m: usize) -> Vec<f64> {
    let last = (m - 1) as f64;
    (0..m)
        .map(|j| if j + 1 == m { 1.0 } else { j as f64 / last })
        .collect()
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 {
        return Err(invalid("m", "grid needs at least 2 points"));
    }
    Ok(())
}

/// Fills `out` (length `m`) with a Brownian bridge on the uniform grid.
pub fn fill_bridge<R: Rng + ?Sized>(out: &mut [f64], rng: &mut R) {
    let m = out.len();
    let step = 1.0 / (m - 1) as f64;
    let sd = step.sqrt();
    out[0] = 0.0;
    let mut w = 0.0;
    for v in out.iter_mut().skip(1) {
        let z: f64 = rng.sample(StandardNormal);
        w += sd * z;
        *v = w;
    }
    let w1 = w;
    for (j, v) in out.iter_mut().enumerate() {
        let u = if j + 1 == m { 1.0 } else { j as f64 * step };
        *v -= u * w1;
    }
    out[m - 1] = 0.0;
}

pub fn simulate_bridge<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<PathGrid> {
    check_grid(m)?;
    let mut values = vec![0.0; m];
    fill_bridge(&mut values, rng);
    Ok(PathGrid {
        grid: uniform_grid(m),
        values,
        label: "bridge".into(),
    })
}

/// Pointwise `u^p / p!` reweighting, giving `B^(p)` from `B`.
pub fn bp_transform(path: &PathGrid, p: u32) -> PathGrid {
    if p == 0 {
        return path.clone();
    }
    let c = 1.0 / factorial(p);
    PathGrid {
        grid: path.grid.clone(),
        values: path
            .grid
            .iter()
            .zip(&path.values)
            .map(|(&u, &v)| c * u.powi(p as i32) * v)
            .collect(),
        label: format!("{}^({p})", path.label),
    }
}

/// `sup_j scale * u_j^exponent * |b_j|` over a bridge stored on the uniform grid.
pub fn weighted_sup(bridge: &[f64], exponent: f64, scale: f64) -> f64 {
    let grid = uniform_grid(bridge.len());
    let sup = if exponent == 0.0 {
        bridge.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else {
        grid.iter()
            .zip(bridge)
            .fold(0.0f64, |m, (&u, &b)| m.max(u.powf(exponent) * b.abs()))
    };
    scale * sup
}

/// Trapezoid `∫_0^1 (u^p b(u) / p!)^2 du`.
pub fn weighted_square_integral(bridge: &[f64], p: u32) -> f64 {
    let m = bridge.len();
    let h = 1.0 / (m - 1) as f64;
    let c = 1.0 / factorial(p);
    let grid = uniform_grid(m);
    let f = |j: usize| {
        let v = c * grid[j].powi(p as i32) * bridge[j];
        v * v
    };
    let inner: f64 = (1..m - 1).map(f).sum();
    h * (inner + 0.5 * (f(0) + f(m - 1)))
}

/// One draw of `sup_u |u^p B(u)| / p!`.
pub fn sample_limit_ks<R: Rng + ?Sized>(p: u32, m: usize, rng: &mut R) -> Result<f64> {
    check_grid(m)?;
    let mut b = vec![0.0; m];
    fill_bridge(&mut b, rng);
    Ok(weighted_sup(&b, p as f64, 1.0 / factorial(p)))
}

/// One draw of `∫_0^1 (u^p B(u) / p!)^2 du`.
pub fn sample_limit_cvm<R: Rng + ?Sized>(p: u32, m: usize, rng: &mut R) -> Result<f64> {
    check_grid(m)?;
    let mut b = vec![0.0; m];
    fill_bridge(&mut b, rng);
    Ok(weighted_square_integral(&b, p))
}

/// One draw of `sup_u c u^a |B(u)|`, the two-sample limit with
/// `c = (p+1) q / (p+1)!^q` and `a = pq + q - 1`.
pub fn sample_limit_weighted_bridge_sup<R: Rng + ?Sized>(
    a: f64,
    c: f64,
    m: usize,
    rng: &mut R,
) -> Result<f64> {
    check_grid(m)?;
    if !(a >= 0.0 && a.is_finite()) {
        return Err(invalid("a", "exponent must be a finite nonnegative number"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("c", "scale must be positive"));
    }
    let mut b = vec![0.0; m];
    fill_bridge(&mut b, rng);
    Ok(weighted_sup(&b, a, c))
}

/// Exponent and scale of the two-sample limit for orders `(p, q)`.
pub fn two_sample_limit_shape(p: u32, q: u32) -> (f64, f64) {
    let a = (p * q + q - 1) as f64;
    let c = (p + 1) as f64 * q as f64 / factorial(p + 1).powi(q as i32);
    (a, c)
}

/// Pointwise K-sample limit
/// `u^{2p}/p!^2 [Σ B_k(u)^2 - (Σ w_k B_k(u))^2]` from given bridges.
pub fn ksample_limit_process(bridges: &[Vec<f64>], weights: &[f64], p: u32) -> Result<Vec<f64>> {
    check_weights(weights)?;
    if bridges.len() != weights.len() {
        return Err(invalid("weights", "one weight per bridge required"));
    }
    let m = bridges[0].len();
    if bridges.iter().any(|b| b.len() != m) {
        return Err(invalid("bridges", "all bridges must share the grid"));
    }
    let grid = uniform_grid(m);
    let c = 1.0 / factorial(p).powi(2);
    Ok((0..m)
        .map(|j| {
            let sq: f64 = bridges.iter().map(|b| b[j] * b[j]).sum();
            let lin: f64 = bridges.iter().zip(weights).map(|(b, w)| w * b[j]).sum();
            // Cauchy–Schwarz makes the bracket nonnegative; clamp rounding noise.
            c * grid[j].powi(2 * p as i32) * (sq - lin * lin).max(0.0)
        })
        .collect())
}

fn check_weights(weights: &[f64]) -> Result<()> {
    if weights.len() < 2 {
        return Err(invalid("K", "need at least two samples"));
    }
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(invalid("weights", "weights must be finite and nonnegative"));
    }
    let norm: f64 = weights.iter().map(|w| w * w).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(invalid(
            "weights",
            format!("squared weights must sum to 1, got {norm}"),
        ));
    }
    Ok(())
}

/// Weights `sqrt(n_k / |n|)` for sample sizes `n_k`.
pub fn ksample_weights(sizes: &[usize]) -> Vec<f64> {
    let total: usize = sizes.iter().sum();
    sizes
        .iter()
        .map(|&n| (n as f64 / total as f64).sqrt())
        .collect()
}

/// One draw of (sup, trapezoid integral) of the K-sample limit process.
pub fn sample_limit_ksample<R: Rng + ?Sized>(
    p: u32,
    weights: &[f64],
    m: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    check_grid(m)?;
    check_weights(weights)?;
    let bridges: Vec<Vec<f64>> = weights
        .iter()
        .map(|_| {
            let mut b = vec![0.0; m];
            fill_bridge(&mut b, rng);
            b
        })
        .collect();
    let process = ksample_limit_process(&bridges, weights, p)?;
    Ok(sup_and_trapezoid(&process))
}

fn sup_and_trapezoid(values: &[f64]) -> (f64, f64) {
    let m = values.len();
    let h = 1.0 / (m - 1) as f64;
    let sup = values.iter().fold(0.0f64, |a, &v| a.max(v));
    let inner: f64 = values[1..m - 1].iter().sum();
    (sup, h * (inner + 0.5 * (values[0] + values[m - 1])))
}

/// Kiefer process at integer times `0..=n_steps` on a uniform u-grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KieferSheet {
    pub n_steps: usize,
    pub grid: Vec<f64>,
    /// Independent bridges; `K(k, ·)` is the sum of the first `k`.
    pub rows: Vec<Vec<f64>>,
}

impl KieferSheet {
    /// `K(k, ·)`; `K(0, ·)` is identically zero.
    pub fn at(&self, k: usize) -> Vec<f64> {
        let mut acc = vec![0.0; self.grid.len()];
        for row in &self.rows[..k] {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += r;
            }
        }
        acc
    }

    /// `K(k, ·)` for every `k = 0..=n_steps`.
    pub fn partial_sums(&self) -> Vec<Vec<f64>> {
        let m = self.grid.len();
        let mut out = Vec::with_capacity(self.n_steps + 1);
        let mut acc = vec![0.0; m];
        out.push(acc.clone());
        for row in &self.rows {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += r;
            }
            out.push(acc.clone());
        }
        out
    }
}

pub fn simulate_kiefer<R: Rng + ?Sized>(
    n_steps: usize,
    m: usize,
    rng: &mut R,
) -> Result<KieferSheet> {
    check_grid(m)?;
    if n_steps < 1 {
        return Err(invalid("n_steps", "must be at least 1"));
    }
    let rows = (0..n_steps)
        .map(|_| {
            let mut b = vec![0.0; m];
            fill_bridge(&mut b, rng);
            b
        })
        .collect();
    Ok(KieferSheet {
        n_steps,
        grid: uniform_grid(m),
        rows,
    })
}

/// `w(t) = sqrt(t(1-t) loglog(1/(t(1-t))))`, the inner logarithm's
/// argument clamped below at `e`.
pub fn loglog_weight(t: f64) -> f64 {
    let v = t * (1.0 - t);
    let arg = (1.0 / v).max(std::f64::consts::E);
    (v * arg.ln().ln()).sqrt()
}

/// Weight function for change-point scans.
#[derive(Clone, Copy)]
pub enum ChangePointWeight<'a> {
    /// `w ≡ 1`.
    None,
    /// [`loglog_weight`].
    LogLog,
    Custom(&'a (dyn Fn(f64) -> f64 + Sync)),
}

impl ChangePointWeight<'_> {
    /// Weights at `s = k/n` for `k = 1..n-1`; index 0 and n carry `None`.
    pub(crate) fn evaluate(&self, n: usize) -> Result<Vec<Option<f64>>> {
        let mut out = vec![None; n + 1];
        for (k, slot) in out.iter_mut().enumerate().take(n).skip(1) {
            let s = k as f64 / n as f64;
            let w = match self {
                ChangePointWeight::None => 1.0,
                ChangePointWeight::LogLog => loglog_weight(s),
                ChangePointWeight::Custom(f) => f(s),
            };
            if !(w.is_finite() && w > 0.0) {
                return Err(invalid(
                    "weight",
                    format!("w({s}) = {w} is not positive and finite"),
                ));
            }
            *slot = Some(w);
        }
        Ok(out)
    }

    pub fn is_weighted(&self) -> bool {
        !matches!(self, ChangePointWeight::None)
    }
}

/// Tied-down Kiefer field `K°(k/n, u) = (K(k,u) - (k/n) K(n,u)) / sqrt(n)`
/// for `k = 0..=n`, built from a sheet.
pub fn tied_down_field(sheet: &KieferSheet) -> Vec<Vec<f64>> {
    let n = sheet.n_steps;
    let sums = sheet.partial_sums();
    let total = &sums[n];
    let norm = 1.0 / (n as f64).sqrt();
    sums.iter()
        .enumerate()
        .map(|(k, kk)| {
            let s = k as f64 / n as f64;
            kk.iter()
                .zip(total)
                .map(|(a, b)| norm * (a - s * b))
                .collect()
        })
        .collect()
}

/// One draw of `sup_{s,u} |K°^(p)(s,u)| / w(s)` on the grid `s = k/n`.
/// Unweighted draws include the tied-down rows `k = 0, n`, which are zero.
pub fn sample_limit_changepoint<R: Rng + ?Sized>(
    p: u32,
    n_steps: usize,
    m: usize,
    weight: ChangePointWeight<'_>,
    rng: &mut R,
) -> Result<f64> {
    if n_steps < 2 {
        return Err(invalid("n_steps", "must be at least 2"));
    }
    let weights = weight.evaluate(n_steps)?;
    let sheet = simulate_kiefer(n_steps, m, rng)?;
    let field = tied_down_field(&sheet);
    let c = 1.0 / factorial(p);
    let upow: Vec<f64> = sheet.grid.iter().map(|u| c * u.powi(p as i32)).collect();
    let mut best = 0.0f64;
    for (k, row) in field.iter().enumerate() {
        let w = match weights[k] {
            Some(w) => w,
            None => continue,
        };
        let row_sup = row
            .iter()
            .zip(&upow)
            .fold(0.0f64, |a, (v, c)| a.max((v * c).abs()));
        best = best.max(row_sup / w);
    }
    Ok(best)
}

/// Empirical quantile by the `ceil(M q)`-th order statistic of sorted draws.
pub fn order_statistic_quantile(sorted: &[f64], q: f64) -> f64 {
    let m = sorted.len();
    let idx = ((m as f64 * q).ceil() as usize).clamp(1, m) - 1;
    sorted[idx]
}

/// Row of the exported quantile table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantileRow {
    pub functional: String,
    pub p: u32,
    pub m: usize,
    pub n_draws: usize,
    pub seed: u64,
    pub q90: f64,
    pub q95: f64,
    pub q99: f64,
}

impl QuantileRow {
    pub fn from_draws(functional: &str, p: u32, m: usize, seed: u64, mut draws: Vec<f64>) -> Self {
        draws.sort_by(f64::total_cmp);
        Self {
            functional: functional.to_string(),
            p,
            m,
            n_draws: draws.len(),
            seed,
            q90: order_statistic_quantile(&draws, 0.90),
            q95: order_statistic_quantile(&draws, 0.95),
            q99: order_statistic_quantile(&draws, 0.99),
        }
    }
}

/// Writes quantile rows as CSV with header
/// `functional,p,m,n_draws,seed,q90,q95,q99`.
pub fn write_quantile_table<W: std::io::Write>(rows: &[QuantileRow], out: W) -> Result<()> {
    crate::output::write_csv(rows, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn two_point_bridge_is_pinned() {
        let mut rng = RngStream::new(1).rng();
        let b = simulate_bridge(2, &mut rng).unwrap();
        assert_eq!(b.values, vec![0.0, 0.0]);
        assert!(simulate_bridge(1, &mut rng).is_err());
    }

    #[test]
    fn bridge_endpoints_exact() {
        let mut rng = RngStream::new(2).rng();
        for m in [3, 17, 2048] {
            let b = simulate_bridge(m, &mut rng).unwrap();
            assert_eq!(b.values[0], 0.0);
            assert_eq!(b.values[m - 1], 0.0);
            assert_eq!(b.grid[0], 0.0);
            assert_eq!(b.grid[m - 1], 1.0);
        }
    }

    #[test]
    fn bp_transform_identity_and_endpoint() {
        let mut rng = RngStream::new(3).rng();
        let b = simulate_bridge(65, &mut rng).unwrap();
        assert_eq!(bp_transform(&b, 0).values, b.values);
        let b2 = bp_transform(&b, 2);
        assert_eq!(*b2.values.last().unwrap(), 0.0);
        assert!((b2.values[32] - 0.125 * b.values[32]).abs() < 1e-15);
    }

    #[test]
    fn ks_draws_shrink_with_p() {
        for seed in 0..50 {
            let s = RngStream::new(seed);
            let d0 = sample_limit_ks(0, 257, &mut s.rng()).unwrap();
            let d1 = sample_limit_ks(1, 257, &mut s.rng()).unwrap();
            let d8 = sample_limit_ks(8, 257, &mut s.rng()).unwrap();
            assert!(d1 <= d0);
            assert!(d8 <= d0 / factorial(8));
        }
    }

    #[test]
    fn weighted_sup_matches_ks_parametrization() {
        for p in 0..4 {
            let s = RngStream::new(10 + p as u64);
            let a = sample_limit_ks(p, 513, &mut s.rng()).unwrap();
            let (ea, ec) = (p as f64, 1.0 / factorial(p));
            let b = sample_limit_weighted_bridge_sup(ea, ec, 513, &mut s.rng()).unwrap();
            assert!((a - b).abs() < 1e-14);
            assert_eq!(two_sample_limit_shape(p, 1), (ea, ec));
        }
        assert!(
            sample_limit_weighted_bridge_sup(-1.0, 1.0, 10, &mut RngStream::new(0).rng()).is_err()
        );
        assert!(
            sample_limit_weighted_bridge_sup(0.0, 0.0, 10, &mut RngStream::new(0).rng()).is_err()
        );
    }

    #[test]
    fn ksample_identical_bridges_vanish() {
        let mut rng = RngStream::new(5).rng();
        let b = simulate_bridge(129, &mut rng).unwrap().values;
        let w = [0.5f64.sqrt(), 0.5f64.sqrt()];
        let proc_ = ksample_limit_process(&[b.clone(), b], &w, 1).unwrap();
        assert!(proc_.iter().all(|v| v.abs() < 1e-14));
        assert!(ksample_limit_process(&[vec![0.0; 3], vec![0.0; 3]], &[1.0, 1.0], 0).is_err());
    }

    #[test]
    fn ksample_two_is_square_of_two_sample() {
        let mut rng = RngStream::new(6).rng();
        let b1 = simulate_bridge(129, &mut rng).unwrap().values;
        let b2 = simulate_bridge(129, &mut rng).unwrap().values;
        let w = ksample_weights(&[3, 7]);
        let p = 2;
        let kproc = ksample_limit_process(&[b1.clone(), b2.clone()], &w, p).unwrap();
        let grid = uniform_grid(129);
        for j in 0..129 {
            let two = grid[j].powi(p as i32) / factorial(p) * (w[1] * b1[j] - w[0] * b2[j]);
            assert!((kproc[j] - two * two).abs() < 1e-12);
        }
    }

    #[test]
    fn kiefer_starts_at_zero() {
        let mut rng = RngStream::new(7).rng();
        let sheet = simulate_kiefer(5, 33, &mut rng).unwrap();
        assert!(sheet.at(0).iter().all(|&v| v == 0.0));
        let sums = sheet.partial_sums();
        assert_eq!(sums.len(), 6);
        for row in &sums {
            assert_eq!(row[0], 0.0);
            assert_eq!(row[32], 0.0);
        }
        assert_eq!(sums[3], sheet.at(3));
        let field = tied_down_field(&sheet);
        assert!(field[0].iter().chain(&field[5]).all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn changepoint_weight_checks() {
        let mut rng = RngStream::new(8).rng();
        let bad = |_s: f64| -1.0;
        assert!(
            sample_limit_changepoint(0, 10, 17, ChangePointWeight::Custom(&bad), &mut rng).is_err()
        );
        let nan = |_s: f64| f64::NAN;
        assert!(
            sample_limit_changepoint(0, 10, 17, ChangePointWeight::Custom(&nan), &mut rng).is_err()
        );
        assert!(sample_limit_changepoint(0, 1, 17, ChangePointWeight::None, &mut rng).is_err());
        assert!(loglog_weight(0.5) > 0.0 && loglog_weight(1e-9) > 0.0);
    }

    #[test]
    fn weighted_changepoint_dominates_scaled_unweighted() {
        let wmax = (1..20)
            .map(|k| loglog_weight(k as f64 / 20.0))
            .fold(0.0, f64::max);
        for seed in 0..20 {
            let s = RngStream::new(seed);
            let plain =
                sample_limit_changepoint(1, 20, 33, ChangePointWeight::None, &mut s.rng()).unwrap();
            let weighted =
                sample_limit_changepoint(1, 20, 33, ChangePointWeight::LogLog, &mut s.rng())
                    .unwrap();
            assert!(weighted >= plain / wmax - 1e-12);
        }
    }

    #[test]
    fn quantile_table_csv() {
        let row = QuantileRow::from_draws("ks", 0, 64, 9, (1..=100).map(f64::from).collect());
        assert_eq!((row.q90, row.q95, row.q99), (90.0, 95.0, 99.0));
        let mut buf = Vec::new();
        write_quantile_table(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "functional,p,m,n_draws,seed,q90,q95,q99\nks,0,64,100,9,90.0,95.0,99.0\n"
        );
    }
}
