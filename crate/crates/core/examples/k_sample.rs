//! K-sample homogeneity test for three uniform samples, one of them shifted,
//! with the limiting quantile of the sup statistic for the same sizes.
//!
//! cargo run --release --example k_sample

use ipef::dist::DistSpec;
use ipef::gaussproc::{ksample_weights, sample_limit_ksample};
use ipef::montecarlo::ksample_test;
use ipef::rng::RngStream;
use ipef::sample::Sample;
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(5).labeled("data").rng();
    let sizes = [30usize, 45, 25];
    let shifts = [0.0, 0.0, 0.25];
    let samples = sizes
        .iter()
        .zip(shifts)
        .map(|(&n, s)| Sample::new((0..n).map(|_| (rng.random::<f64>() + s).min(1.0)).collect()))
        .collect::<Result<Vec<_>, _>>()?;

    let f0 = DistSpec::uniform();
    for p in 0..=2 {
        let rep = ksample_test(&samples, &f0, p, 0.05, 2000, 9)?;
        println!(
            "p={p}: S={:.4} crit={:.4} reject={} | T={:.4} crit={:.4} reject={}",
            rep.s.statistic,
            rep.s.critical_value,
            rep.s.reject,
            rep.t.statistic,
            rep.t.critical_value,
            rep.t.reject
        );
    }

    let w = ksample_weights(&sizes);
    let stream = RngStream::new(5).labeled("limit");
    let mut sup: Vec<f64> = (0..4000)
        .map(|i| sample_limit_ksample(0, &w, 1024, &mut stream.substream(i).rng()).map(|d| d.0))
        .collect::<Result<_, _>>()?;
    sup.sort_by(f64::total_cmp);
    println!(
        "limiting 0.95 quantile of S (p=0): {:.4}",
        sup[(0.95 * sup.len() as f64) as usize]
    );
    Ok(())
}
