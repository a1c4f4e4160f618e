//! Haar second moments: Weingarten sums against sampling.

use wigner_bridge::cli::haar_pattern_means;
use wigner_bridge::combinatorics::{haar_pair_moment, weingarten, Perm2};
use wigner_bridge::matrices::HaarGroup;
use wigner_bridge::rational::to_f64;

fn main() -> wigner_bridge::Result<()> {
    let n = 8;
    for group in [HaarGroup::Orthogonal, HaarGroup::Unitary] {
        println!(
            "{group}: Wg(id) = {}, Wg((12)) = {}",
            weingarten(group, Perm2::Identity, n)?,
            weingarten(group, Perm2::Transposition, n)?
        );
        for (pattern, mean, se) in haar_pattern_means(n, group, 20_000, 5)? {
            let (i1, j1, i2, j2) = pattern.representative();
            let exact = haar_pair_moment(i1, j1, i2, j2, n, group)?;
            println!("  {pattern:<14} exact {exact:<8} ({:.6})  sampled {mean:.6} ± {se:.6}", to_f64(&exact));
        }
    }
    Ok(())
}
