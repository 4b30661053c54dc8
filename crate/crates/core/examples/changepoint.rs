//! Change-point scan of a sequence whose distribution shifts at k = 70,
//! unweighted and with the log-log weight. Writes the profile to
//! changepoint_profile.csv in the temp directory.
//!
//! cargo run --release --example changepoint

use ipef::montecarlo::changepoint_test;
use ipef::rng::RngStream;
use ipef::sample::Sample;
use ipef::stats::changepoint::write_profile_csv;
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(21).labeled("data").rng();
    let before = Normal::new(0.0, 1.0)?;
    let after = Normal::new(0.8, 1.0)?;
    let x: Vec<f64> = (0..120)
        .map(|i| {
            if i < 70 {
                before.sample(&mut rng)
            } else {
                after.sample(&mut rng)
            }
        })
        .collect();
    let x = Sample::new(x)?;

    for weighted in [false, true] {
        for p in [0, 1] {
            let res = changepoint_test(&x, p, weighted, 0.05, 1000, 4)?;
            println!(
                "weighted={weighted} p={p}: stat={:.4} crit={:.4} reject={} k*={} t*={:.4}",
                res.report.statistic,
                res.report.critical_value,
                res.report.reject,
                res.argmax_k,
                res.argmax_t
            );
            if weighted && p == 0 {
                let path = std::env::temp_dir().join("changepoint_profile.csv");
                write_profile_csv(&res.profile, std::fs::File::create(&path)?)?;
                println!("profile written to {}", path.display());
            }
        }
    }
    Ok(())
}
