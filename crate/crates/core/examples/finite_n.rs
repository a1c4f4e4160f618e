//! The exact finite-n covariance approaching its limit.

use wigner_bridge::combinatorics::{finite_n_cov, limit_cov_centered};
use wigner_bridge::rational::{int, to_f64};
use wigner_bridge::AtomSpec;

fn main() -> wigner_bridge::Result<()> {
    let diag = AtomSpec::gauss_real(int(2));
    let off = AtomSpec::gauss_real(int(1));
    let one = int(1);
    for (k1, k2) in [(2, 2), (3, 3), (2, 4)] {
        let limit = to_f64(&limit_cov_centered(k1, k2, &one, &one, &diag, &off)?);
        println!("(k1,k2) = ({k1},{k2}), limit {limit}");
        for n in 2..=6 {
            let v = finite_n_cov(n, k1, k2, &one, &one, &diag, &off)?.value();
            println!("  n={n}: {v:>10.5}  n*gap = {:>8.4}", n as f64 * (v - limit));
        }
    }
    Ok(())
}
