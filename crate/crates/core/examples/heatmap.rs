//! Localization contrast between Gaussian and heavy-tailed entries.

use wigner_bridge::config::ensemble_preset;
use wigner_bridge::matrices::{build_wigner, spectral_decomposition};
use wigner_bridge::process::heatmap_cells;
use wigner_bridge::RngStream;

fn max_cell(name: &str, seed: u64) -> wigner_bridge::Result<f64> {
    let spec = ensemble_preset(name, 50)?;
    let dec = spectral_decomposition(&build_wigner(&spec, &mut RngStream::new(seed)))?;
    Ok(heatmap_cells(&dec).iter().fold(0.0, |m, c| m.max(c.2)))
}

fn main() -> wigner_bridge::Result<()> {
    let mut wins = 0;
    let runs = 20;
    for seed in 0..runs {
        let goe = max_cell("goe", seed)?;
        let pareto = max_cell("pareto", seed)?;
        if pareto > goe {
            wins += 1;
        }
        println!("seed {seed:>2}: goe max {goe:.3}   pareto max {pareto:.3}");
    }
    println!("pareto above goe in {wins}/{runs} paired runs");
    Ok(())
}
