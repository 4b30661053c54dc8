//! Evaluates the integrated e.d.f. of a small sample for p = 0..3 and
//! compares it with the integrated uniform cdf u^(p+1)/(p+1)!.
//!
//! cargo run --example integrated_edf

use ipef::empirical::{integrated_edf, integrated_edf_oracle, theoretical_integrated};
use ipef::sample::Sample;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = Sample::new(vec![0.12, 0.31, 0.47, 0.52, 0.66, 0.83, 0.91])?;
    println!("t,p,closed_form,nested_sum,uniform");
    for t in [0.25, 0.5, 0.75, 1.0] {
        for p in 0..=3 {
            let v = integrated_edf(&x, p, t);
            let nested = integrated_edf_oracle(&x, p, t)?;
            println!(
                "{t},{p},{:.8},{nested:.8},{:.8}",
                v.value,
                theoretical_integrated(t, p)
            );
        }
    }
    Ok(())
}
