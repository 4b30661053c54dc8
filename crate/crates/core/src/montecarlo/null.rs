//! Null distributions and test calibration.
//!
//! The one-sample statistics are distribution-free under a continuous null,
//! so all null draws use Uniform(0,1) data. Replicate `r` always uses
//! substream `r` of the caller's stream.

use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::ContinuousDist;
use crate::empirical::{factorial, LevelTable};
use crate::error::{invalid, Result};
use crate::gaussproc::{fill_bridge, sample_limit_cvm, sample_limit_ks, uniform_grid};
use crate::rng::RngStream;
use crate::sample::Sample;
use crate::stats::onesample::{uniform_scores, StatKind};
use crate::stats::report::{check_alpha, upper_critical_value, Method, TestReport};

/// Sorted Uniform(0,1) sample of size `n` written into `buf`.
pub(crate) fn uniform_sorted<R: Rng + ?Sized>(n: usize, rng: &mut R, buf: &mut Vec<f64>) {
    buf.clear();
    buf.extend((0..n).map(|_| rng.sample::<f64, _>(Open01)));
    buf.sort_by(f64::total_cmp);
}

/// `m` null draws of the statistic for each order in `p_list`, in
/// replicate order. All orders share the same uniform samples.
pub fn null_statistics(
    kind: StatKind,
    p_list: &[u32],
    n: usize,
    m: usize,
    stream: RngStream,
) -> Result<Vec<Vec<f64>>> {
    kind.validate()?;
    if n == 0 {
        return Err(invalid("n", "sample size must be positive"));
    }
    let tables: Vec<LevelTable> = p_list.iter().map(|&p| LevelTable::new(n, p)).collect();
    let per_rep: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map_init(Vec::new, |buf, r| {
            let mut rng = stream.substream(r as u64).rng();
            uniform_sorted(n, &mut rng, buf);
            tables
                .iter()
                .map(|t| kind.from_scores(buf, t))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok((0..p_list.len())
        .map(|j| per_rep.iter().map(|row| row[j]).collect())
        .collect())
}

/// Sorted null draws of one statistic.
pub fn null_distribution(
    kind: StatKind,
    p: u32,
    n: usize,
    m: usize,
    stream: RngStream,
) -> Result<Vec<f64>> {
    let mut draws = null_statistics(kind, &[p], n, m, stream)?.remove(0);
    draws.sort_by(f64::total_cmp);
    Ok(draws)
}

/// The `ceil(M(1 - alpha))`-th order statistic of `M` null draws.
pub fn null_critical_value(
    kind: StatKind,
    p: u32,
    n: usize,
    alpha: f64,
    m: usize,
    stream: RngStream,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_tail_size(m, alpha)?;
    let draws = null_distribution(kind, p, n, m, stream)?;
    Ok(upper_critical_value(&draws, alpha))
}

pub(crate) fn check_tail_size(m: usize, alpha: f64) -> Result<()> {
    if (m as f64) * alpha < 5.0 {
        return Err(invalid(
            "M",
            format!("M·alpha must be at least 5 (M = {m}, alpha = {alpha})"),
        ));
    }
    Ok(())
}

/// One draw from the limiting law of the statistic on an `m`-point grid.
pub fn limit_draw<R: Rng + ?Sized>(kind: StatKind, p: u32, m: usize, rng: &mut R) -> Result<f64> {
    match kind {
        StatKind::Ks => sample_limit_ks(p, m, rng),
        StatKind::Cvm => sample_limit_cvm(p, m, rng),
        StatKind::Omega { r } => {
            kind.validate()?;
            if m < 2 {
                return Err(invalid("m", "grid needs at least 2 points"));
            }
            let mut b = vec![0.0; m];
            fill_bridge(&mut b, rng);
            let grid = uniform_grid(m);
            let c = 1.0 / factorial(p);
            let f: Vec<f64> = grid
                .iter()
                .zip(&b)
                .map(|(&u, &v)| (c * u.powi(p as i32) * v).abs().powf(r))
                .collect();
            let h = 1.0 / (m - 1) as f64;
            let inner: f64 = f[1..m - 1].iter().sum();
            Ok((h * (inner + 0.5 * (f[0] + f[m - 1]))).powf(1.0 / r))
        }
    }
}

/// Reference distribution used to calibrate a test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Calibration {
    /// Finite-sample null Monte Carlo at the sample's own `n`.
    NullMc { reps: usize },
    /// Draws from the limiting Gaussian functional on a `grid`-point grid.
    LimitingLaw { reps: usize, grid: usize },
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration::NullMc { reps: 10_000 }
    }
}

/// One-sample test of `H0: X ~ f0`.
pub fn gof_test(
    sample: &Sample,
    f0: &(impl ContinuousDist + ?Sized),
    kind: StatKind,
    p: u32,
    alpha: f64,
    calibration: Calibration,
    seed: u64,
) -> Result<TestReport> {
    check_alpha(alpha)?;
    kind.validate()?;
    let n = sample.len();
    let u = uniform_scores(sample, f0);
    let statistic = kind.from_scores(&u, &LevelTable::new(n, p))?;
    let root = RngStream::new(seed);
    let (mut reference, method) = match calibration {
        Calibration::NullMc { reps } => {
            check_tail_size(reps, alpha)?;
            let s = root.labeled("null");
            (
                null_statistics(kind, &[p], n, reps, s)?.remove(0),
                Method::NullMc,
            )
        }
        Calibration::LimitingLaw { reps, grid } => {
            check_tail_size(reps, alpha)?;
            let s = root.labeled("limit");
            let draws = (0..reps)
                .into_par_iter()
                .map(|r| limit_draw(kind, p, grid, &mut s.substream(r as u64).rng()))
                .collect::<Result<Vec<f64>>>()?;
            (draws, Method::LimitingLaw)
        }
    };
    TestReport::from_reference(
        kind.name(),
        statistic,
        p,
        alpha,
        &mut reference,
        method,
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::DistSpec;

    #[test]
    fn deterministic_and_monotone_in_alpha() {
        let s = RngStream::new(11);
        let a = null_critical_value(StatKind::Ks, 1, 15, 0.05, 400, s).unwrap();
        let b = null_critical_value(StatKind::Ks, 1, 15, 0.05, 400, s).unwrap();
        assert_eq!(a, b);
        let c = null_critical_value(StatKind::Ks, 1, 15, 0.5, 400, s).unwrap();
        assert!(c <= a);
        assert!(null_critical_value(StatKind::Ks, 1, 15, 0.01, 100, s).is_err());
    }

    #[test]
    fn shared_samples_across_orders() {
        let s = RngStream::new(12);
        let both = null_statistics(StatKind::Cvm, &[0, 2], 10, 50, s).unwrap();
        let one = null_statistics(StatKind::Cvm, &[2], 10, 50, s).unwrap();
        assert_eq!(both[1], one[0]);
    }

    #[test]
    fn gof_report_fields() {
        let x = Sample::new(vec![0.11, 0.52, 0.33, 0.87, 0.64, 0.05, 0.71]).unwrap();
        let u = DistSpec::uniform();
        let rep = gof_test(
            &x,
            &u,
            StatKind::Ks,
            1,
            0.05,
            Calibration::NullMc { reps: 500 },
            7,
        )
        .unwrap();
        assert_eq!(rep.method, Method::NullMc);
        assert_eq!(rep.n_replications, 500);
        assert_eq!(rep.reject, rep.statistic > rep.critical_value);
        let lim = gof_test(
            &x,
            &u,
            StatKind::Omega { r: 1.5 },
            0,
            0.05,
            Calibration::LimitingLaw {
                reps: 200,
                grid: 129,
            },
            7,
        )
        .unwrap();
        assert_eq!(lim.method, Method::LimitingLaw);
    }
}
