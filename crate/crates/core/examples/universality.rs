//! Var T(1/2, 2) depends on the off-diagonal law only through E|x|^4.

use wigner_bridge::combinatorics::limit_cov;
use wigner_bridge::matrices::EnsembleSpec;
use wigner_bridge::montecarlo::{run, var_estimate, ExperimentPlan, Observable};
use wigner_bridge::rational::{int, ratio, to_f64};
use wigner_bridge::AtomSpec;

fn main() -> wigner_bridge::Result<()> {
    let laws = [
        ("gauss", AtomSpec::gauss_real(int(1))),
        ("two-point m4=3", AtomSpec::two_point_m4(int(3))?),
        ("skewed m4=3", AtomSpec::skewed_m4_3()),
        ("uniform", AtomSpec::uniform_unit()),
        ("rademacher", AtomSpec::rademacher()),
    ];
    let obs = Observable::TStat { s: 0.5, k: 2 };
    for (name, off) in laws {
        let spec = EnsembleSpec::real_with_offdiag(200, off.clone())?;
        let report = run(&ExperimentPlan::new(spec.clone(), 1000, 3, vec![obs]))?;
        let (v, se) = var_estimate(&report.samples[0])?;
        let limit = limit_cov(2, 2, &ratio(1, 2), &ratio(1, 2), &spec.diag, &off)?;
        println!("{name:<16} m4={:<4} Var = {v:.4} ± {se:.4}   limit {:.4}", off.fourth_moment().to_string(), to_f64(&limit));
    }
    Ok(())
}
