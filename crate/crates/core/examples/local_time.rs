//! Random walks built from integrated-e.d.f. increments: local time at 0,
//! the self-intersection local time and its growth exponent (about 3/2),
//! and the increment characteristic function.
//!
//! cargo run --release --example local_time

use ipef::localtime::{char_fn, growth_exponent, local_time, self_intersection, walk};
use ipef::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n_list: Vec<usize> = (9..=16).map(|k| 1usize << k).collect();
    for p in [1, 2] {
        let path = walk(
            p,
            1 << 16,
            &mut RngStream::new(17).substream(p as u64).rng(),
        )?;
        println!(
            "p={p}: local time at 0 = {}, L_n(1) = {:.1}",
            local_time(&path, 0.0, path.len())?,
            self_intersection(&path, 1.0)?
        );
        let est = growth_exponent(
            p,
            &n_list,
            20,
            RngStream::new(17).labeled("growth").substream(p as u64),
        )?;
        println!("  growth exponent {:.4}", est.slope);
        for z in [1.0, 5.0, 25.0] {
            let c = char_fn(p, z)?;
            println!("  chi({z}) = {:.6} {:+.6}i", c.re, c.im);
        }
    }
    Ok(())
}
