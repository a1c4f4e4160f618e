//! Wigner sampling and the deterministic eigendecomposition.

use wigner_bridge::matrices::{build_wigner, spectral_decomposition, EnsembleSpec};
use wigner_bridge::RngStream;

fn main() -> wigner_bridge::Result<()> {
    let mut rng = RngStream::new(2024);
    for spec in [EnsembleSpec::goe(200), EnsembleSpec::gue(200)] {
        let x = build_wigner(&spec, &mut rng);
        let dec = spectral_decomposition(&x)?;
        let lam = &dec.eigenvalues;
        let trace_gap = (lam.iter().sum::<f64>() - x.trace()).abs();
        println!(
            "beta={} n={}  lambda in [{:.3}, {:.3}]  |U*U-I|={:.1e}  |UDU*-X|={:.1e}  |sum-trace|={:.1e}",
            spec.beta,
            spec.n,
            lam[0],
            lam[lam.len() - 1],
            dec.orthonormality_residual(),
            dec.reconstruction_residual(&x),
            trace_gap
        );
    }
    Ok(())
}
