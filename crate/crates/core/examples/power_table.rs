//! Reproduces a power table: rejection percentages of the integrated
//! Kolmogorov–Smirnov tests S^(0..3) against eight alternatives.
//!
//! cargo run --release --example power_table -- [n] [alpha] [reps] [seed]

use ipef::montecarlo::{power_study, PowerStudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n = args.first().map_or(Ok(20), |s| s.parse())?;
    let alpha = args.get(1).map_or(Ok(0.05), |s| s.parse())?;
    let reps = args.get(2).map_or(Ok(10_000), |s| s.parse())?;
    let seed = args.get(3).map_or(Ok(42), |s| s.parse())?;

    let mut config = PowerStudyConfig::standard(n, alpha, seed);
    config.m_null = reps;
    config.m_power = reps;
    let table = power_study(&config)?;

    print!("{}", table.to_csv_string()?);
    eprintln!("critical values: {:?}", table.critical_values);
    Ok(())
}
