//! Change-point scans comparing the integrated e.d.f. of the first `k`
//! observations with that of the remaining `n - k`.

use serde::{Deserialize, Serialize};

use crate::empirical::integrated_level;
use crate::error::{invalid, Result};
use crate::gaussproc::ChangePointWeight;
use crate::sample::Sample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChangePointResult {
    pub statistic: f64,
    pub argmax_k: usize,
    pub argmax_t: f64,
    pub weighted: bool,
}

/// Largest scan value for one split `k`, with the point where it occurs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub k: usize,
    pub t: f64,
    pub value: f64,
}

/// `σ_n^(p)` (unweighted) or `σ_{n,w}^(p)` with the log-log weight.
pub fn changepoint_scan(sample: &Sample, p: u32, weighted: bool) -> Result<ChangePointResult> {
    let weight = if weighted {
        ChangePointWeight::LogLog
    } else {
        ChangePointWeight::None
    };
    changepoint_scan_with(sample, p, weight).map(|(res, _)| res)
}

/// Scan with an arbitrary weight; also returns the per-`k` profile.
pub fn changepoint_scan_with(
    sample: &Sample,
    p: u32,
    weight: ChangePointWeight<'_>,
) -> Result<(ChangePointResult, Vec<ProfileRow>)> {
    let n = sample.len();
    if n < 2 {
        return Err(invalid("n", "change-point scan needs n ≥ 2"));
    }
    if weight.is_weighted() && n < 4 {
        return Err(invalid("n", "weighted change-point scan needs n ≥ 4"));
    }
    let weights = weight.evaluate(n)?;

    // Distinct sorted values and each observation's rank among them.
    let mut points: Vec<f64> = sample.sorted().to_vec();
    points.dedup();
    let ranks: Vec<usize> = sample
        .values()
        .iter()
        .map(|v| points.partition_point(|x| x < v))
        .collect();
    let mut total = vec![0usize; points.len()];
    for &r in &ranks {
        total[r] += 1;
    }
    for j in 1..total.len() {
        total[j] += total[j - 1];
    }

    // prefix[j] = #{i <= k : X_i <= points[j]}, updated as k grows.
    let mut prefix = vec![0usize; points.len()];
    let nf = n as f64;
    let mut profile = Vec::with_capacity(n - 1);
    let mut best = ProfileRow {
        k: 1,
        t: points[0],
        value: f64::NEG_INFINITY,
    };
    for k in 1..n {
        for c in prefix.iter_mut().skip(ranks[k - 1]) {
            *c += 1;
        }
        let coef = (k * (n - k)) as f64 / nf.powf(1.5) / weights[k].unwrap_or(1.0);
        let mut row = ProfileRow {
            k,
            t: points[0],
            value: 0.0,
        };
        for (j, &t) in points.iter().enumerate() {
            let left = integrated_level(prefix[j], k, p);
            let right = integrated_level(total[j] - prefix[j], n - k, p);
            let v = coef * (left - right).abs();
            if v > row.value {
                row = ProfileRow { k, t, value: v };
            }
        }
        if row.value > best.value {
            best = row;
        }
        profile.push(row);
    }
    Ok((
        ChangePointResult {
            statistic: best.value,
            argmax_k: best.k,
            argmax_t: best.t,
            weighted: weight.is_weighted(),
        },
        profile,
    ))
}

/// Writes profile rows as CSV with header `k,t,value`.
pub fn write_profile_csv<W: std::io::Write>(rows: &[ProfileRow], out: W) -> Result<()> {
    crate::output::write_csv(rows, out)
}
