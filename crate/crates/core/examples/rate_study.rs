//! Kolmogorov distance between the finite-n null law of the integrated KS
//! statistic and its limiting law, for growing n.
//!
//! cargo run --release --example rate_study -- [reps]

use ipef::montecarlo::rate_study;
use ipef::output::write_csv;
use ipef::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reps: usize = std::env::args().nth(1).map_or(Ok(20_000), |s| s.parse())?;
    let n_list = [10, 40, 160, 640];
    let mut rows = Vec::new();
    for p in 0..=2 {
        rows.extend(rate_study(
            p,
            &n_list,
            reps,
            2048,
            RngStream::new(2).substream(p as u64),
        )?);
    }
    write_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
