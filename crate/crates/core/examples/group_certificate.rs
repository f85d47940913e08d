//! The determinant certificate: zero on orbit triples, generically nonzero.

use suborbit::certificate::{harness_sweep, separation_demo};

fn main() -> suborbit::Result<()> {
    let results = harness_sweep(23, 1)?;
    let worst = results.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    println!(
        "{} orbit triples with p <= 23, max |det| = {worst:.2e}",
        results.len()
    );

    let s = separation_demo(10_000, 42)?;
    println!("random triples: |det| quantiles {:?}", s.generic_quantiles);
    println!("equilateral controls: max |det| = {:.2e}", s.control_max);
    Ok(())
}
