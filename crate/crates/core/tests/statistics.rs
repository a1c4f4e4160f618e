//! Monte Carlo checks of samplers, ensembles and the trace statistics.

use wigner_bridge::atoms::moment_f64;
use wigner_bridge::matrices::{build_wigner, haar_sample, spectral_decomposition, EnsembleSpec, HaarGroup};
use wigner_bridge::montecarlo::{cov_estimate, kurtosis, run, var_estimate, ExperimentPlan, Observable};
use wigner_bridge::process::{build_bridge_grid, heatmap_cells};
use wigner_bridge::rational::int;
use wigner_bridge::spectral_stats::{centered_t_stat, t_stat_power, MeanOracle};
use wigner_bridge::{AtomSpec, RngStream};

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

#[test]
fn sampler_moments_match_oracle() {
    let specs = [
        AtomSpec::gauss_real(int(1)),
        AtomSpec::gauss_real(int(2)),
        AtomSpec::rademacher(),
        AtomSpec::uniform_unit(),
        AtomSpec::two_point_m4(int(3)).unwrap(),
        AtomSpec::skewed_m4_3(),
    ];
    let draws = 1_000_000;
    for (i, spec) in specs.iter().enumerate() {
        let mut rng = RngStream::new(300 + i as u64);
        let xs: Vec<f64> = (0..draws).map(|_| spec.sample(&mut rng).re).collect();
        for a in 1..=8u32 {
            let (m, se) = mean_se(&xs.iter().map(|x| x.powi(a as i32)).collect::<Vec<_>>());
            let exact = moment_f64(spec, a, 0);
            let tol = 5.0 * se.max(1e-12);
            assert!((m - exact).abs() <= tol, "{spec:?} order {a}: {m} vs {exact} (se {se})");
        }
    }
    let gue = AtomSpec::gauss_complex(int(1));
    let mut rng = RngStream::new(310);
    let zs: Vec<_> = (0..draws).map(|_| gue.sample(&mut rng)).collect();
    for (a, b) in [(1, 1), (2, 2), (2, 0), (3, 1)] {
        let vals: Vec<_> = zs.iter().map(|z| z.powu(a) * z.conj().powu(b)).collect();
        let (re, re_se) = mean_se(&vals.iter().map(|z| z.re).collect::<Vec<_>>());
        let exact = moment_f64(&gue, a, b);
        assert!((re - exact).abs() <= 5.0 * re_se, "({a},{b}): {re} vs {exact}");
    }
}

#[test]
fn goe_normalization_and_spectrum_edges() {
    let n = 500;
    let mut second = Vec::new();
    let mut inside = 0;
    for trial in 0..100 {
        let x = build_wigner(&EnsembleSpec::goe(n), &mut RngStream::split(320, trial));
        if trial < 20 {
            let tr2: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| x.entry(i, j).norm_sqr()).sum();
            second.push(tr2 / n as f64);
        }
        let dec = spectral_decomposition(&x).unwrap();
        let top = dec.eigenvalues[0].abs().max(dec.eigenvalues[n - 1].abs());
        inside += usize::from((1.8..=2.3).contains(&top));
        let sum: f64 = dec.eigenvalues.iter().sum();
        assert!((sum - x.trace()).abs() <= 1e-8 * n as f64 * x.max_abs());
        if trial < 5 {
            let (m, se) = mean_se(&dec.overlaps().iter().map(|v| v * n as f64).collect::<Vec<_>>());
            assert!((m - 1.0).abs() <= 3.0 * se + 1e-12, "n E|u|^2 = {m}");
        }
    }
    let mean2 = second.iter().sum::<f64>() / second.len() as f64;
    assert!((mean2 - 1.0).abs() <= 0.05, "{mean2}");
    assert!(inside >= 95, "{inside}/100 spectra with edge in [1.8, 2.3]");
}

#[test]
fn overlaps_are_haar_like_per_entry() {
    // n E|u_ij|^2 at a few fixed cells, across independent matrices
    let n = 40;
    let cells = [(0, 0), (3, 17), (39, 20)];
    let mut vals = vec![Vec::new(); cells.len()];
    for trial in 0..2000 {
        let x = build_wigner(&EnsembleSpec::gue(n), &mut RngStream::split(330, trial));
        let dec = spectral_decomposition(&x).unwrap();
        for (v, &(i, j)) in vals.iter_mut().zip(&cells) {
            v.push(n as f64 * dec.entry(i, j).norm_sqr());
        }
    }
    for v in &vals {
        let (m, se) = mean_se(v);
        assert!((m - 1.0).abs() <= 3.0 * se, "{m} ± {se}");
    }
}

#[test]
fn bridge_grid_variances_follow_brownian_sheet() {
    let grid = [0.25, 0.5, 0.75];
    let obs: Vec<Observable> =
        grid.iter().flat_map(|&s| grid.iter().map(move |&t| Observable::BridgePoint { s, t })).collect();
    let report = run(&ExperimentPlan::new(EnsembleSpec::goe(200), 2000, 340, obs.clone())).unwrap();
    let mut worst = 0.0f64;
    for (o, xs) in obs.iter().zip(&report.samples) {
        let Observable::BridgePoint { s, t } = *o else { unreachable!() };
        let (v, se) = var_estimate(xs).unwrap();
        let target = s * (1.0 - s) * t * (1.0 - t);
        worst = worst.max((v - target).abs() / se);
    }
    // nine correlated comparisons, allow a Bonferroni-style margin
    assert!(worst <= 3.5, "worst z {worst}");
}

#[test]
fn prefix_variance_at_half_within_ten_percent() {
    let n = 100;
    let xs: Vec<f64> = (0..2000)
        .map(|trial| {
            let x = build_wigner(&EnsembleSpec::goe(n), &mut RngStream::split(350, trial));
            build_bridge_grid(&spectral_decomposition(&x).unwrap()).prefix(n / 2, n / 2)
        })
        .collect();
    let (v, _) = var_estimate(&xs).unwrap();
    assert!((v - 1.0 / 16.0).abs() <= 0.1 / 16.0, "{v}");
}

#[test]
fn rectangle_increments_have_uniform_second_moment_bound() {
    let mut rng = RngStream::new(360);
    let mut rects = Vec::new();
    while rects.len() < 20 {
        let (a, b, c, d) = (rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform());
        let (s, s2, t, t2) = (a.min(b), a.max(b), c.min(d), c.max(d));
        if s2 - s >= 0.05 && t2 - t >= 0.05 {
            rects.push(Observable::RectIncrement { s, s2, t, t2 });
        }
    }
    let report = run(&ExperimentPlan::new(EnsembleSpec::goe(200), 500, 361, rects.clone())).unwrap();
    for (o, xs) in rects.iter().zip(&report.samples) {
        let Observable::RectIncrement { s, s2, t, t2 } = *o else { unreachable!() };
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        assert!(m2 / ((s2 - s) * (t2 - t)) <= 3.0, "{o}: {m2}");
    }
}

#[test]
fn t_statistic_variance_kurtosis_and_parity() {
    let plan = ExperimentPlan::new(
        EnsembleSpec::goe(400),
        4000,
        370,
        vec![Observable::TStat { s: 0.5, k: 1 }, Observable::TStat { s: 0.5, k: 2 }],
    );
    let report = run(&plan).unwrap();
    let k = kurtosis(&report.samples[1]).unwrap();
    assert!((2.7..=3.3).contains(&k), "kurtosis {k}");
    let (c, se) = cov_estimate(&report.samples[0], &report.samples[1]).unwrap();
    assert!(c.abs() <= 3.0 * se, "odd-total covariance {c} ± {se}");
}

#[test]
fn t_statistic_variance_goe_two_hundred() {
    let r = run(&ExperimentPlan::new(EnsembleSpec::goe(200), 2000, 380, vec![Observable::TStat { s: 0.5, k: 2 }]))
        .unwrap();
    let (v, _) = var_estimate(&r.samples[0]).unwrap();
    assert!((v - 0.5).abs() <= 0.05, "{v}");
}

#[test]
fn t_statistic_cross_covariance() {
    let plan = ExperimentPlan::new(
        EnsembleSpec::goe(300),
        3000,
        390,
        vec![Observable::TStat { s: 0.3, k: 2 }, Observable::TStat { s: 0.7, k: 2 }],
    );
    let r = run(&plan).unwrap();
    let (c, se) = cov_estimate(&r.samples[0], &r.samples[1]).unwrap();
    assert!((c - 0.18).abs() <= 3.0 * se, "{c} ± {se}");
}

#[test]
fn centered_recombination_is_an_identity() {
    let spec = EnsembleSpec::goe(60);
    let oracle = MeanOracle::exact(&spec);
    for trial in 0..5 {
        let x = build_wigner(&spec, &mut RngStream::split(400, trial));
        for k in 1..=4 {
            for s in [0.2, 0.5, 0.8] {
                let c = centered_t_stat(&x, s, k, &oracle).unwrap();
                let direct = t_stat_power(&x, s, k).unwrap();
                assert!((c.recombined - direct).abs() <= 1e-8 * direct.abs().max(1.0));
            }
        }
    }
}

#[test]
fn goe_heatmap_matches_haar_baseline_and_pareto_stands_out() {
    let n = 50;
    let runs = 100;
    let max_cell = |cells: Vec<(usize, usize, f64)>| cells.into_iter().map(|c| c.2).fold(0.0, f64::max);
    let mut goe = Vec::new();
    let mut haar = Vec::new();
    let mut pareto_wins = 0;
    let pareto_spec = EnsembleSpec::real_with_offdiag(n, AtomSpec::heavy_tail()).unwrap();
    for trial in 0..runs {
        let mut rng = RngStream::split(410, trial);
        let g = max_cell(heatmap_cells(&spectral_decomposition(&build_wigner(&EnsembleSpec::goe(n), &mut rng)).unwrap()));
        let p = max_cell(heatmap_cells(&spectral_decomposition(&build_wigner(&pareto_spec, &mut rng)).unwrap()));
        let u = haar_sample(n, HaarGroup::Orthogonal, &mut rng);
        let h = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (u[(i, j)].norm_sqr() - 1.0 / n as f64).abs())
            .fold(0.0, f64::max);
        pareto_wins += usize::from(p > g);
        goe.push(g);
        haar.push(h);
    }
    let (mg, sg) = mean_se(&goe);
    let (mh, sh) = mean_se(&haar);
    assert!((mg - mh).abs() <= 3.0 * (sg * sg + sh * sh).sqrt(), "GOE {mg} ± {sg}, Haar {mh} ± {sh}");
    assert!(pareto_wins >= 90, "{pareto_wins}/{runs}");
}
