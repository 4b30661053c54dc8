//! Goodness of fit with estimated parameters: normal data tested against
//! the normal and exponential families, calibrated by parametric bootstrap.
//!
//! cargo run --release --example estimated_gof

use ipef::rng::RngStream;
use ipef::sample::Sample;
use ipef::stats::estimated::{estimated_gof, ExponentialFamily, NormalFamily, ParametricFamily};
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(8).labeled("data").rng();
    let d = Normal::new(3.0, 0.7)?;
    let x = Sample::new((0..80).map(|_| d.sample(&mut rng)).collect())?;

    let families: [&dyn ParametricFamily; 2] = [&NormalFamily, &ExponentialFamily];
    for family in families {
        for p in [0, 1] {
            let rep = estimated_gof(&x, family, p, 0.05, 499, RngStream::new(8).labeled("boot"))?;
            println!(
                "{} p={p}: stat={:.4} crit={:.4} p-value={:.3} reject={}",
                family.label(),
                rep.statistic,
                rep.critical_value,
                rep.p_value,
                rep.reject
            );
        }
    }
    Ok(())
}
