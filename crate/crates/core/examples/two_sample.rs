//! Two-sample tests: N(0,1) against N(0.5,1) samples of unequal size, with
//! the pooled integrator and with a hypothesized N(0,1) integrator.
//!
//! cargo run --release --example two_sample

use ipef::dist::DistSpec;
use ipef::montecarlo::{two_sample_test, IntegratorSpec};
use ipef::rng::RngStream;
use ipef::sample::Sample;
use rand_distr::{Distribution, Normal};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(3).labeled("data").rng();
    let x = Sample::new(
        (0..40)
            .map(|_| Normal::new(0.0, 1.0).unwrap().sample(&mut rng))
            .collect(),
    )?;
    let y = Sample::new(
        (0..55)
            .map(|_| Normal::new(0.5, 1.0).unwrap().sample(&mut rng))
            .collect(),
    )?;

    let integrators = [
        IntegratorSpec::Pooled,
        IntegratorSpec::Hypothesized {
            dist: DistSpec::normal(0.0, 1.0)?,
        },
    ];
    for integrator in &integrators {
        for (p, q) in [(0, 1), (1, 1), (1, 2)] {
            let rep = two_sample_test(&x, &y, p, q, integrator, 0.05, 2000, 11)?;
            println!(
                "{integrator:?} p={p} q={q}: S={:.4} (p-value {:.3}), T={:.4} (p-value {:.3})",
                rep.s.statistic, rep.s.p_value, rep.t.statistic, rep.t.p_value
            );
        }
    }
    Ok(())
}
