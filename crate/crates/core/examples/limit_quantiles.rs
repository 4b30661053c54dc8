//! Upper quantiles of the limiting sup and L2 functionals for p = 0..3.
//! For p = 0 the sup quantile at 0.95 is close to the Kolmogorov value 1.358.
//!
//! cargo run --release --example limit_quantiles -- [draws] [grid]

use ipef::gaussproc::{sample_limit_cvm, sample_limit_ks, write_quantile_table, QuantileRow};
use ipef::rng::RngStream;
use rayon::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let draws: usize = args.first().map_or(Ok(20_000), |s| s.parse())?;
    let grid: usize = args.get(1).map_or(Ok(2048), |s| s.parse())?;
    let root = RngStream::new(1);

    let mut rows = Vec::new();
    for p in 0..=3u32 {
        let s = root.labeled("sup").substream(p as u64);
        let sup = (0..draws)
            .into_par_iter()
            .map(|i| sample_limit_ks(p, grid, &mut s.substream(i as u64).rng()))
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(QuantileRow::from_draws("ks", p, grid, 1, sup));
        let s = root.labeled("l2").substream(p as u64);
        let l2 = (0..draws)
            .into_par_iter()
            .map(|i| sample_limit_cvm(p, grid, &mut s.substream(i as u64).rng()))
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(QuantileRow::from_draws("cvm", p, grid, 1, l2));
    }
    write_quantile_table(&rows, std::io::stdout().lock())?;
    Ok(())
}
