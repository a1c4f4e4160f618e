//! Exact limiting covariances from the partition calculus.

use wigner_bridge::combinatorics::{centered_coefficients, limit_cov, limit_cov_trace};
use wigner_bridge::rational::{display_exact, int, ratio};
use wigner_bridge::AtomSpec;

fn main() -> wigner_bridge::Result<()> {
    let diag = AtomSpec::gauss_real(int(2));

    // Cov(2,2) at (0.3, 0.7) across fourth moments
    for m4 in [1, 2, 3, 5] {
        let off = AtomSpec::two_point_m4(int(m4))?;
        let v = limit_cov(2, 2, &ratio(3, 10), &ratio(7, 10), &diag, &off)?;
        println!("m4={m4}: Cov(2,2; 0.3, 0.7) = {}", display_exact(&v));
    }

    let off = AtomSpec::gauss_real(int(1));
    println!("\ncontributing partitions for (k1,k2) = (2,2):");
    for line in limit_cov_trace(2, 2, &diag, &off)? {
        println!("  {:<16} {:<9} s = {:<11} factor = {}", line.blocks, line.class, line.weight, line.factor);
    }

    println!("\nC(s1,s2) = a*min(s1,s2) + b*s1*s2 for GOE entries:");
    for (k1, k2) in [(1, 1), (2, 2), (3, 3), (2, 4), (4, 4), (3, 5)] {
        let c = centered_coefficients(k1, k2, &diag, &off)?;
        println!("  ({k1},{k2}): a = {:<5} b = {}", c.min_coeff, c.product_coeff);
    }
    Ok(())
}
