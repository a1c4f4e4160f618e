//! ∫ u^k B(s, F(u)) du against the weighted trace statistic, and the
//! signed-measure moment lemma.

use wigner_bridge::matrices::{build_wigner, spectral_decomposition, EnsembleSpec};
use wigner_bridge::process::{
    bridge_moment_integral, build_bridge_grid, empirical_cdf, signed_cdf_moment, WeightedSpectralMeasure,
};
use wigner_bridge::spectral_stats::t_stat_power;
use wigner_bridge::RngStream;

fn main() -> wigner_bridge::Result<()> {
    let x = build_wigner(&EnsembleSpec::gue(50), &mut RngStream::new(9));
    let dec = spectral_decomposition(&x)?;
    let grid = build_bridge_grid(&dec);
    let cdf = empirical_cdf(&dec);
    let scale = (dec.beta() as f64 / 2.0).sqrt();
    let s = 0.4;
    for k in 0..=5u32 {
        let lhs = bridge_moment_integral(&grid, &cdf, s, k);
        let rhs = -scale * t_stat_power(&x, s, k as usize + 1)? / (k + 1) as f64;
        println!("k={k}: integral {lhs:+.12}  trace side {rhs:+.12}");
    }

    let mu = WeightedSpectralMeasure::from_row(&dec, 0)?.centered();
    for k in 0..=4 {
        let r = signed_cdf_moment(&mu, k)?;
        println!("row 0, k={k}: step integral {:+.3e}  atom sum {:+.3e}", r.step_integral, r.atom_sum);
    }
    Ok(())
}
