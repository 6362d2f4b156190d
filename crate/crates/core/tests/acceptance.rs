//! Acceptance suite: one test per exit criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Criteria:
//!  1. Moran roots and lattice period of the Cantor ratio list
//!  2. Functional-equation residuals (exact and Monte Carlo backends)
//!  3. The s = N identity against direct tube volumes
//!  4. Zeta scaling under drum rescaling
//!  5. Pointwise tube-formula exactness for the Cantor string
//!  6. Measurability verdicts and contents for the catalog drums
//!  7. The residue–content sandwich (with a fabricated negative control)
//!  8. The Tauberian content upper bound for the Cantor string
//!  9. Nonlattice critical-strip root count
//! 10. Planted-parameter recovery of the estimation suite

use fractal_zeta::cli::checks;
use fractal_zeta::criterion::{residue_content_sandwich, Verdict};
use fractal_zeta::dimensions::{classify_lattice, moran_roots, LatticeClass, Window};
use fractal_zeta::estimation::content_estimate;
use fractal_zeta::geometry::{
    FractalString, RatioList, RelativeFractalDrum, TubeMethod, TubeSamples,
};
use fractal_zeta::report::{default_window, run_analyze, AnalyzeOptions};
use fractal_zeta::zeta::{
    catalog_expr, distance_zeta_mc, functional_equation_residual, QuadratureOpts, VolumeBackend,
};
use num_complex::Complex64;

fn pass(line: &str) {
    println!("[PASS] {line}");
}

#[test]
fn acceptance_01_moran_lattice() {
    let rl = RatioList::new(vec![1.0 / 3.0, 1.0 / 3.0], 1).unwrap();
    let w = Window::new(0.0, 1.0, 10.0).unwrap();
    let roots = moran_roots(&rl, &w, 1e-12).unwrap();
    let d = (2f64).ln() / (3f64).ln();
    let p = 2.0 * std::f64::consts::PI / (3f64).ln();
    for want in [(d, 0.0), (d, p), (d, -p)] {
        let dist = roots
            .roots
            .iter()
            .map(|r| (r.omega() - Complex64::new(want.0, want.1)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(dist <= 1e-9, "root near {want:?} off by {dist:e}");
    }
    let period = match classify_lattice(&rl) {
        LatticeClass::Lattice { period, .. } => period,
        other => panic!("expected lattice, got {other:?}"),
    };
    assert!((period - p).abs() <= 1e-5, "period {period} vs {p}");
    pass(&format!("criterion 1: Moran roots to 1e-9, lattice period {period:.5}"));
}

#[test]
fn acceptance_02_functional_equation() {
    // exact backends: Cantor and the single-gap string at 1e-6
    let opts = QuadratureOpts::with_tol(1e-8);
    for (name, drum) in [
        ("cantor", RelativeFractalDrum::cantor()),
        (
            "single-gap string",
            RelativeFractalDrum::string_drum(FractalString::single_gap(1.0).unwrap()),
        ),
    ] {
        let n = drum.ambient_dim() as f64;
        let d = drum.box_dimension().unwrap();
        let span = (n - d).max(0.6);
        let mut worst = 0.0f64;
        for i in 0..5 {
            for j in 0..5 {
                let s = Complex64::new(
                    d + (0.12 + 0.83 * i as f64 / 4.0) * span,
                    2.0 * j as f64 / 4.0,
                );
                let r =
                    functional_equation_residual(&drum, s, &opts, VolumeBackend::Exact).unwrap();
                worst = worst.max(r);
            }
        }
        assert!(worst <= 1e-6, "{name}: residual {worst:e}");
        pass(&format!("criterion 2a ({name}): max residual {worst:.2e} <= 1e-6"));
    }
    // gasket with the Monte Carlo backend at 1e7 samples, 1e-3
    let drum = RelativeFractalDrum::gasket();
    let backend = VolumeBackend::MonteCarlo { samples: 10_000_000, seed: 42 };
    let d = drum.box_dimension().unwrap();
    let mut worst = 0.0f64;
    for i in 0..5 {
        for j in 0..5 {
            let s = Complex64::new(d + 0.05 + 0.3 * i as f64 / 4.0, 2.0 * j as f64 / 4.0);
            let r = functional_equation_residual(&drum, s, &opts, backend).unwrap();
            worst = worst.max(r);
        }
    }
    assert!(worst <= 1e-3, "gasket MC residual {worst:e}");
    pass(&format!("criterion 2b (gasket, MC 1e7): max residual {worst:.2e} <= 1e-3"));
}

#[test]
fn acceptance_03_s_equals_n_identity() {
    // |ζ(N) − V(δ)| within backend error for every catalog drum, with the
    // direct Monte Carlo integral as the independent route
    let drums: Vec<(&str, RelativeFractalDrum)> = vec![
        ("cantor", RelativeFractalDrum::cantor()),
        ("a-string", RelativeFractalDrum::a_string(1.0).unwrap()),
        ("gasket", RelativeFractalDrum::gasket()),
        ("carpet-3d", RelativeFractalDrum::carpet3()),
        ("third-square", RelativeFractalDrum::third_square()),
        ("nest", RelativeFractalDrum::fractal_nest(1.0).unwrap()),
        ("chirp", RelativeFractalDrum::geometric_chirp(-0.5, 1.0).unwrap()),
    ];
    for (name, drum) in drums {
        let n = drum.ambient_dim() as f64;
        let v_delta = drum.tube_volume(drum.delta(), &TubeMethod::Exact).unwrap().0;
        // independent stochastic route
        let (mc, sigma) =
            distance_zeta_mc(&drum, Complex64::new(n, 0.0), 2_000_000, 7).unwrap();
        assert!(
            (mc.re - v_delta).abs() <= 4.0 * sigma.max(1e-12),
            "{name}: MC {} vs V(δ) {v_delta} (σ {sigma:e})",
            mc.re
        );
        // closed-form route where the expression is consistent
        if let Ok((expr, _)) = catalog_expr(&drum) {
            let ze = expr.eval(Complex64::new(n, 0.0)).re;
            assert!(
                (ze - v_delta).abs() <= 1e-8 * v_delta.max(1.0),
                "{name}: expr {ze} vs {v_delta}"
            );
        }
    }
    // the gasket value is the closed collar formula
    let drum = RelativeFractalDrum::gasket();
    let d = drum.delta();
    let want = 3.0f64.sqrt() / 4.0 + 3.0 * d + std::f64::consts::PI * d * d;
    let got = drum.tube_volume(d, &TubeMethod::Exact).unwrap().0;
    assert!((got - want).abs() < 1e-12);
    pass("criterion 3: s = N identity on every catalog drum (MC within 4σ, exprs to 1e-8)");
}

#[test]
fn acceptance_04_scaling() {
    let results = checks::scaling();
    for r in &results {
        assert!(r.pass, "{}: {}", r.name, r.detail);
    }
    pass(&format!("criterion 4: zeta and tube scaling on {} drum cases", results.len() / 2));
}

#[test]
fn acceptance_05_tube_formula_exactness() {
    let results = checks::tube_exactness(0);
    for r in &results {
        assert!(r.pass, "{}: {}", r.name, r.detail);
    }
    pass("criterion 5: Cantor residue-sum formula within the K=50 tail bound on 50 random t");
}

#[test]
fn acceptance_06_criterion_reproduction() {
    // lattice drums: not measurable
    for (name, drum) in [
        ("cantor", RelativeFractalDrum::cantor()),
        ("gasket", RelativeFractalDrum::gasket()),
        ("carpet-3d", RelativeFractalDrum::carpet3()),
    ] {
        let rep = run_analyze(&drum, &AnalyzeOptions::default()).unwrap();
        assert!(
            matches!(rep.verdict, Some(Verdict::NotMeasurable { .. })),
            "{name}: {:?}",
            rep.verdict
        );
    }
    pass("criterion 6a: Cantor, gasket, 3-carpet verdicts NotMeasurable");

    // a-string: measurable with M = 2√2, direct estimate within 2%
    let drum = RelativeFractalDrum::a_string(1.0).unwrap();
    let rep = run_analyze(&drum, &AnalyzeOptions::default()).unwrap();
    let want = 2.0 * std::f64::consts::SQRT_2;
    match rep.verdict {
        Some(Verdict::Measurable { content, .. }) => {
            assert!((content - want).abs() / want < 1e-6, "{content}");
        }
        v => panic!("{v:?}"),
    }
    let samples = TubeSamples::sample(&drum, 0.05, 0.9, 220, &TubeMethod::Exact).unwrap();
    let est = content_estimate(&samples, 1, 0.5, 1);
    assert!((est.mean - want).abs() / want < 0.02, "direct estimate {est:?}");
    pass(&format!(
        "criterion 6b: a-string Measurable, M = {want:.5}, direct estimate {:.5} (2%)",
        est.mean
    ));

    // nest a=1: gauge measurable with M_h = 2π
    let drum = RelativeFractalDrum::fractal_nest(1.0).unwrap();
    let rep = run_analyze(&drum, &AnalyzeOptions::default()).unwrap();
    let want = 2.0 * std::f64::consts::PI;
    match rep.verdict {
        Some(Verdict::GaugeMeasurable { order, content, .. }) => {
            assert_eq!(order, 2);
            assert!((content - want).abs() / want < 0.05, "{content}");
        }
        v => panic!("{v:?}"),
    }
    // cross-check against the direct gauge-normalized estimate
    let samples = TubeSamples::sample(&drum, 0.02, 0.88, 150, &TubeMethod::Exact).unwrap();
    let est = content_estimate(&samples, 2, 1.0, 2);
    assert!((est.mean - want).abs() / want < 0.05, "{est:?}");
    pass("criterion 6c: nest(a=1) GaugeMeasurable with M_h = 2π (verdict and direct, 5%)");

    // half-square: gauge measurable with M_h = 1/(4 log 2)
    let drum = RelativeFractalDrum::half_square();
    let rep = run_analyze(&drum, &AnalyzeOptions::default()).unwrap();
    let want = 1.0 / (4.0 * (2f64).ln());
    match rep.verdict {
        Some(Verdict::GaugeMeasurable { order, content, .. }) => {
            assert_eq!(order, 2);
            assert!((content - want).abs() / want < 0.05, "{content}");
        }
        v => panic!("{v:?}"),
    }
    pass("criterion 6d: half-square GaugeMeasurable with M_h = 1/(4 log 2) (5%)");

    // third-square: measurable with M = 16, Monte Carlo estimate within 5%
    let drum = RelativeFractalDrum::third_square();
    let rep = run_analyze(&drum, &AnalyzeOptions::default()).unwrap();
    match rep.verdict {
        Some(Verdict::Measurable { content, .. }) => {
            assert!((content - 16.0).abs() < 1e-6, "{content}");
        }
        v => panic!("{v:?}"),
    }
    let mc = TubeMethod::MonteCarlo { samples: 10_000_000, seed: 11 };
    let samples = TubeSamples::sample(&drum, 3e-3, 0.7, 10, &mc).unwrap();
    let est = content_estimate(&samples, 2, 1.0, 1);
    assert!((est.mean - 16.0).abs() / 16.0 < 0.05, "MC estimate {est:?}");
    pass(&format!(
        "criterion 6e: third-square Measurable, M = 16, MC estimate {:.3} (5%)",
        est.mean
    ));
}

#[test]
fn acceptance_07_residue_sandwich() {
    // Cantor
    let drum = RelativeFractalDrum::cantor();
    let d = (2f64).ln() / (3f64).ln();
    let samples = TubeSamples::sample(&drum, 1.0 / 6.0, 0.9, 260, &TubeMethod::Exact).unwrap();
    let est = content_estimate(&samples, 1, d, 1);
    let res = 0.931_634_918_637_962; // res(ζ, D) = 2^{-D}/(D log 3)
    let rep = residue_content_sandwich(res, 1, d, &est, 1e-3);
    assert!(rep.pass, "{rep:?}");
    // a-string: the equality case
    let drum = RelativeFractalDrum::a_string(1.0).unwrap();
    let samples = TubeSamples::sample(&drum, 0.05, 0.9, 220, &TubeMethod::Exact).unwrap();
    let est_a = content_estimate(&samples, 1, 0.5, 1);
    let res_a = 0.5 * 2.0 * std::f64::consts::SQRT_2;
    let rep_a = residue_content_sandwich(res_a, 1, 0.5, &est_a, 0.02);
    assert!(rep_a.pass, "{rep_a:?}");
    // fabricated violation: doubled residue must fail
    let rep_bad = residue_content_sandwich(2.0 * res, 1, d, &est, 1e-3);
    assert!(!rep_bad.pass, "negative control passed: {rep_bad:?}");
    pass("criterion 7: residue sandwich passes (Cantor, a-string), doubled residue fails");
}

#[test]
fn acceptance_08_content_upper_bound() {
    let drum = RelativeFractalDrum::cantor();
    let rep = run_analyze(&drum, &AnalyzeOptions::default()).unwrap();
    let upper = rep.bounds.as_ref().and_then(|b| b.upper).unwrap();
    assert!((upper - 7.632_095_830_556_175).abs() < 1e-6, "{upper}");
    let d = (2f64).ln() / (3f64).ln();
    let samples = TubeSamples::sample(&drum, 1.0 / 6.0, 0.9, 260, &TubeMethod::Exact).unwrap();
    let est = content_estimate(&samples, 1, d, 1);
    assert!(upper > est.upper, "{upper} vs {est:?}");
    pass(&format!(
        "criterion 8: Cantor bound {upper:.3} (C=3) exceeds estimated upper content {:.3}",
        est.upper
    ));
}

#[test]
fn acceptance_09_nonlattice_scan() {
    let rl = RatioList::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
    let s0 = fractal_zeta::geometry::string::moran_real_root(&[0.5, 1.0 / 3.0]);
    let w = Window::new(s0 - 1e-3, s0 + 1e-3, 100.0).unwrap();
    let roots = moran_roots(&rl, &w, 1e-12).unwrap();
    assert_eq!(roots.roots.len(), 1, "{:?}", roots.roots);
    assert!((roots.roots[0].omega().re - s0).abs() < 1e-9);
    assert!(roots.roots[0].omega().im.abs() < 1e-9);
    pass(&format!(
        "criterion 9: strip [σ0 ± 1e-3] × [−100, 100] holds exactly one root, σ0 = {s0:.5}"
    ));
}

#[test]
fn acceptance_10_synthetic_estimators() {
    let results = checks::estimation_synthetic(0);
    for r in &results {
        assert!(r.pass, "{}: {}", r.name, r.detail);
    }
    pass("criterion 10: planted (D, M, m, P, A, α) recovered on 20 random draws");
}

#[test]
fn default_windows_are_valid() {
    // every catalog drum must produce a usable analysis window
    let drums = [
        RelativeFractalDrum::cantor(),
        RelativeFractalDrum::gasket(),
        RelativeFractalDrum::carpet3(),
        RelativeFractalDrum::half_square(),
        RelativeFractalDrum::third_square(),
        RelativeFractalDrum::fractal_nest(1.0).unwrap(),
        RelativeFractalDrum::a_string(1.0).unwrap(),
        RelativeFractalDrum::geometric_chirp(-0.5, 1.0).unwrap(),
    ];
    for drum in &drums {
        let w = default_window(drum).unwrap();
        let d = drum.box_dimension().unwrap();
        assert!(w.sigma_min < d && d < w.sigma_max, "{:?}: {w:?}", drum.kind());
    }
}
