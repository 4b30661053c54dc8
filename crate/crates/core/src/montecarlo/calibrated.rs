//! Null-MC calibrated multi-sample and change-point tests.
//!
//! Under the null every statistic here is a function of ranks (or of
//! `F0`-scores), so the reference distribution is simulated from
//! Uniform(0,1) samples with the observed sizes.

use rand::distr::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{ContinuousDist, DistSpec};
use crate::error::Result;
use crate::gaussproc::ChangePointWeight;
use crate::montecarlo::null::check_tail_size;
use crate::rng::RngStream;
use crate::sample::Sample;
use crate::stats::changepoint::{changepoint_scan_with, ProfileRow};
use crate::stats::report::{check_alpha, Method, TestReport};
use crate::stats::twosample::{ksample_statistics, two_sample_statistics, Integrator};

/// Reports for the sup-type and the integral-type statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedReport {
    pub s: TestReport,
    pub t: TestReport,
}

fn uniform_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Sample {
    Sample::new((0..n).map(|_| rng.sample::<f64, _>(Open01)).collect())
        .expect("uniform draws are finite and n ≥ 1")
}

/// Whether the two-sample integral uses the pooled e.d.f. or `F0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IntegratorSpec {
    Pooled,
    Hypothesized { dist: DistSpec },
}

pub fn two_sample_test(
    x: &Sample,
    y: &Sample,
    p: u32,
    q: u32,
    integrator: &IntegratorSpec,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<PairedReport> {
    check_alpha(alpha)?;
    check_tail_size(reps, alpha)?;
    let observed = match integrator {
        IntegratorSpec::Pooled => two_sample_statistics(x, y, p, q, Integrator::Pooled)?,
        IntegratorSpec::Hypothesized { dist } => {
            two_sample_statistics(x, y, p, q, Integrator::Hypothesized(dist))?
        }
    };
    let uniform = DistSpec::uniform();
    let null_integrator = match integrator {
        IntegratorSpec::Pooled => Integrator::Pooled,
        IntegratorSpec::Hypothesized { .. } => Integrator::Hypothesized(&uniform),
    };
    let stream = RngStream::new(seed).labeled("two-sample");
    let (m, n) = (x.len(), y.len());
    let draws: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream.substream(r as u64).rng();
            let a = uniform_sample(m, &mut rng);
            let b = uniform_sample(n, &mut rng);
            two_sample_statistics(&a, &b, p, q, null_integrator).map(|s| (s.s, s.t))
        })
        .collect::<Result<_>>()?;
    let (mut ds, mut dt): (Vec<f64>, Vec<f64>) = draws.into_iter().unzip();
    Ok(PairedReport {
        s: TestReport::from_reference(
            format!("two-sample-S(q={q})"),
            observed.s,
            p,
            alpha,
            &mut ds,
            Method::NullMc,
            seed,
        )?,
        t: TestReport::from_reference(
            format!("two-sample-T(q={q})"),
            observed.t,
            p,
            alpha,
            &mut dt,
            Method::NullMc,
            seed,
        )?,
    })
}

pub fn ksample_test(
    samples: &[Sample],
    f0: &(impl ContinuousDist + ?Sized),
    p: u32,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<PairedReport> {
    check_alpha(alpha)?;
    check_tail_size(reps, alpha)?;
    let observed = ksample_statistics(samples, f0, p)?;
    let sizes: Vec<usize> = samples.iter().map(Sample::len).collect();
    let uniform = DistSpec::uniform();
    let stream = RngStream::new(seed).labeled("k-sample");
    let draws: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream.substream(r as u64).rng();
            let sim: Vec<Sample> = sizes.iter().map(|&n| uniform_sample(n, &mut rng)).collect();
            ksample_statistics(&sim, &uniform, p).map(|s| (s.s, s.t))
        })
        .collect::<Result<_>>()?;
    let (mut ds, mut dt): (Vec<f64>, Vec<f64>) = draws.into_iter().unzip();
    Ok(PairedReport {
        s: TestReport::from_reference(
            "k-sample-S",
            observed.s,
            p,
            alpha,
            &mut ds,
            Method::NullMc,
            seed,
        )?,
        t: TestReport::from_reference(
            "k-sample-T",
            observed.t,
            p,
            alpha,
            &mut dt,
            Method::NullMc,
            seed,
        )?,
    })
}

/// Change-point test: report plus the per-split profile of the data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChangePointTest {
    pub report: TestReport,
    pub argmax_k: usize,
    pub argmax_t: f64,
    pub profile: Vec<ProfileRow>,
}

pub fn changepoint_test(
    sample: &Sample,
    p: u32,
    weighted: bool,
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<ChangePointTest> {
    check_alpha(alpha)?;
    check_tail_size(reps, alpha)?;
    let weight = if weighted {
        ChangePointWeight::LogLog
    } else {
        ChangePointWeight::None
    };
    let (observed, profile) = changepoint_scan_with(sample, p, weight)?;
    let n = sample.len();
    let stream = RngStream::new(seed).labeled("changepoint");
    let mut draws: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let sim = uniform_sample(n, &mut stream.substream(r as u64).rng());
            changepoint_scan_with(&sim, p, weight).map(|(res, _)| res.statistic)
        })
        .collect::<Result<_>>()?;
    let name = if weighted {
        "changepoint-weighted"
    } else {
        "changepoint"
    };
    Ok(ChangePointTest {
        report: TestReport::from_reference(
            name,
            observed.statistic,
            p,
            alpha,
            &mut draws,
            Method::NullMc,
            seed,
        )?,
        argmax_k: observed.argmax_k,
        argmax_t: observed.argmax_t,
        profile,
    })
}
