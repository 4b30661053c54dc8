//! Convergence-rate and iterated-logarithm diagnostics.

use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::empirical::{factorial, LevelTable};
use crate::error::{invalid, Result};
use crate::gaussproc::sample_limit_ks;
use crate::montecarlo::null::null_statistics;
use crate::rng::RngStream;
use crate::stats::onesample::{ks_scores, StatKind};

/// `sup_x |F_a(x) - F_b(x)|` between two empirical distributions.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        best = best.max((i as f64 / na - j as f64 / nb).abs());
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub p: u32,
    pub n: usize,
    pub ks_distance: f64,
}

/// Distance between `M` null draws of `S_n^(p)` and `M` draws of the
/// limiting sup functional on an `m_grid`-point grid, for each `n`.
/// The limit draws are shared across `n`.
pub fn rate_study(
    p: u32,
    n_list: &[usize],
    m: usize,
    m_grid: usize,
    stream: RngStream,
) -> Result<Vec<RateRow>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n_list", "must be nonempty and strictly ascending"));
    }
    let limit_stream = stream.labeled("limit");
    let limit: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|r| sample_limit_ks(p, m_grid, &mut limit_stream.substream(r as u64).rng()))
        .collect::<Result<_>>()?;
    let null_stream = stream.labeled("null");
    n_list
        .iter()
        .map(|&n| {
            let draws = null_statistics(StatKind::Ks, &[p], n, m, null_stream.substream(n as u64))?;
            Ok(RateRow {
                p,
                n,
                ks_distance: ks_distance(&draws[0], &limit),
            })
        })
        .collect()
}

/// `(p + 1/2)^{p+1/2} / (p! (p+1)^{p+1})`.
pub fn lil_constant(p: u32) -> f64 {
    let h = p as f64 + 0.5;
    h.powf(h) / (factorial(p) * (p as f64 + 1.0).powi(p as i32 + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LilRow {
    pub path: usize,
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LilDiagnostic {
    pub p: u32,
    pub constant: f64,
    pub rows: Vec<LilRow>,
}

/// Trajectories of `sup_t |α_n^(p)(t)| / sqrt(log log n)` along nested
/// uniform samples, one trajectory per path.
pub fn lil_diagnostic(
    p: u32,
    n_list: &[usize],
    n_paths: usize,
    stream: RngStream,
) -> Result<LilDiagnostic> {
    if n_list.is_empty() || n_list.iter().any(|&n| n < 16) {
        return Err(invalid("n_list", "every n must be at least 16"));
    }
    let n_max = *n_list.iter().max().unwrap();
    let rows: Vec<Vec<LilRow>> = (0..n_paths)
        .into_par_iter()
        .map(|path| {
            let mut rng = stream.substream(path as u64).rng();
            let data: Vec<f64> = (0..n_max).map(|_| rng.sample::<f64, _>(Open01)).collect();
            n_list
                .iter()
                .map(|&n| {
                    let mut prefix = data[..n].to_vec();
                    prefix.sort_by(f64::total_cmp);
                    let sup = ks_scores(&prefix, &LevelTable::new(n, p)) / (n as f64).sqrt();
                    LilRow {
                        path,
                        n,
                        value: (n as f64).sqrt() * sup / (n as f64).ln().ln().sqrt(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(LilDiagnostic {
        p,
        constant: lil_constant(p),
        rows: rows.into_iter().flatten().collect(),
    })
}
