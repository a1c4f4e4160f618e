//! The largest jump of the overlap field shrinks with n.

use wigner_bridge::cli::median_max_jumps;
use wigner_bridge::matrices::EnsembleSpec;

fn main() -> wigner_bridge::Result<()> {
    let sizes = [25, 50, 100, 200];
    let medians = median_max_jumps(&EnsembleSpec::goe(1), &sizes, 25, 1, None)?;
    for (n, m) in sizes.iter().zip(&medians) {
        println!("n={n:>4}  median max jump {m:.4}  (log n / n = {:.4})", (*n as f64).ln() / *n as f64);
    }
    Ok(())
}
