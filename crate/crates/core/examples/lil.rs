//! Iterated-logarithm normalised sup of the integrated empirical process
//! along a few growing paths, next to the limiting constant.
//!
//! cargo run --release --example lil

use ipef::montecarlo::{lil_constant, lil_diagnostic};
use ipef::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_list = [16, 128, 1024, 8192, 65536];
    for p in 0..=2 {
        let diag = lil_diagnostic(p, &n_list, 5, RngStream::new(13).substream(p as u64))?;
        println!(
            "p={p} constant={:.5} (check {:.5})",
            diag.constant,
            lil_constant(p)
        );
        for &n in &n_list {
            let vals: Vec<String> = diag
                .rows
                .iter()
                .filter(|r| r.n == n)
                .map(|r| format!("{:.4}", r.value))
                .collect();
            println!("  n={n:>6}: {}", vals.join(" "));
        }
    }
    Ok(())
}
