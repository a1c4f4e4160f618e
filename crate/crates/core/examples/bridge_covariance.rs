//! Monte Carlo covariance of the overlap field against the Brownian bridge.

use wigner_bridge::matrices::EnsembleSpec;
use wigner_bridge::montecarlo::{cov_estimate, run, ExperimentPlan, Observable};

fn bridge_cov((s, t): (f64, f64), (s2, t2): (f64, f64)) -> f64 {
    (s.min(s2) - s * s2) * (t.min(t2) - t * t2)
}

fn main() -> wigner_bridge::Result<()> {
    let points = [(0.25, 0.5), (0.5, 0.5), (0.75, 0.5), (0.5, 0.25)];
    let observables = points.iter().map(|&(s, t)| Observable::BridgePoint { s, t }).collect();
    let plan = ExperimentPlan::new(EnsembleSpec::goe(100), 1000, 7, observables);
    let report = run(&plan)?;
    for i in 0..points.len() {
        for j in i..points.len() {
            let (c, se) = cov_estimate(&report.samples[i], &report.samples[j])?;
            let expected = bridge_cov(points[i], points[j]);
            println!("{:?} x {:?}: {c:+.5} ± {se:.5}  (bridge {expected:+.5})", points[i], points[j]);
        }
    }
    Ok(())
}
