//! The analysis pipeline: drum descriptor in, JSON report out.
//!
//! Reports are deterministic for a fixed `(descriptor, seed)`: keys are
//! emitted sorted, floats serialize shortest-roundtrip, and every random
//! draw is seeded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::criterion::{content_bounds, measurability_verdict, ContentBounds};
use crate::dimensions::{classify_lattice, spectrum, ComplexDimension, LatticeClass, Window};
use crate::error::{Error, Result};
use crate::estimation::{
    box_dimension_fit, content_estimate, gauge_order_probe, languidity_probe, oscillation_probe,
    remainder_order_fit, ContentEstimate, OscillationReport,
};
use crate::geometry::{DrumKind, RelativeFractalDrum, TubeMethod, TubeSamples};
use crate::tubeformula::{catalog_exact_tube, residue_sum_from_spectrum};
use crate::zeta::{catalog_expr, functional_equation_residual, QuadratureOpts, VolumeBackend};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub tol: f64,
    /// Monte Carlo sample count for drums without exact backends.
    pub mc_samples: u64,
    /// Override the automatic window.
    pub window: Option<Window>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { seed: 0, tol: 1e-7, mc_samples: 2_000_000, window: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionInfo {
    pub value: f64,
    pub provenance: String,
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionalEquationSummary {
    pub max_residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TubeComparisonRow {
    pub t: f64,
    pub direct: f64,
    pub direct_error: f64,
    pub formula: Option<f64>,
    pub formula_tail: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EstimationBlock {
    pub dimension: f64,
    pub dimension_stderr: f64,
    pub content: ContentEstimate,
    pub gauge_order: u32,
    pub oscillation: OscillationReport,
    pub kappa: Option<f64>,
    pub kappa_stderr: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_oscillatory: Option<bool>,
}

/// The full analysis report (serialized with sorted keys).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub drum: Value,
    pub delta: f64,
    pub seed: u64,
    pub dimension: DimensionInfo,
    pub window: Option<Window>,
    pub spectrum: Vec<ComplexDimension>,
    pub dropped_poles: Vec<(f64, f64)>,
    pub verdict: Option<crate::criterion::Verdict>,
    pub bounds: Option<ContentBounds>,
    pub functional_equation: Option<FunctionalEquationSummary>,
    pub tube_comparison: Vec<TubeComparisonRow>,
    pub estimation: Option<EstimationBlock>,
    pub hypothesis_notes: Vec<String>,
}

/// Per-kind default analysis window: brackets the critical line, stays
/// right of deeper poles and of the series-backed analytic edge, and
/// spans at least two oscillation periods in the lattice cases.
pub fn default_window(drum: &RelativeFractalDrum) -> Result<Window> {
    let d = drum
        .box_dimension()
        .ok_or_else(|| Error::UnsupportedKind("no analytic dimension for this drum".into()))?;
    let (lo, hi, tau) = match drum.kind() {
        DrumKind::Cantor => (0.3, 0.9, 13.0),
        DrumKind::SierpinskiGasket => (1.2, 1.8, 20.0),
        DrumKind::Carpet3D => (2.5, 3.05, 13.0),
        DrumKind::HalfSquare => (0.7, 1.3, 20.0),
        DrumKind::ThirdSquare => (0.8, 1.3, 5.0),
        DrumKind::FractalNest { a } => {
            let others = if *a < 1.0 { 1.0 } else { 2.0 / (a + 1.0) };
            (0.5 * (d + others).max(1.02 * others), d + 0.25, 5.0)
        }
        DrumKind::GeometricChirp { .. } => (0.5 * (d + 1.0), d + 0.2, 5.0),
        DrumKind::AString { .. } => (0.5 * d, d + 0.25, 10.0),
        DrumKind::StringDrum(s) => match s.generator() {
            crate::geometry::StringGenerator::SelfSimilar { ratios, gaps: _ } => {
                let rl = crate::geometry::RatioList::new(ratios.clone(), 1)?;
                let tau = match classify_lattice(&rl) {
                    LatticeClass::Lattice { period, .. } => 2.2 * period,
                    LatticeClass::Nonlattice { .. } => 60.0,
                };
                (d - 1e-3, d + 0.2, tau)
            }
            _ => (d - 0.35, d + 0.3, 10.0),
        },
        DrumKind::Spray { ratios, .. } => {
            let tau = match classify_lattice(ratios) {
                LatticeClass::Lattice { period, .. } => 2.2 * period,
                LatticeClass::Nonlattice { .. } => 60.0,
            };
            (d - 1e-3, d + 0.2, tau)
        }
        DrumKind::Sampled { .. } => {
            return Err(Error::UnsupportedKind("sampled drums have no spectrum window".into()))
        }
    };
    Window::new(lo, hi, tau)
}

/// End-to-end analysis of one drum.
pub fn run_analyze(drum: &RelativeFractalDrum, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let n = drum.ambient_dim();
    let exact_ok = drum.tube_volume(drum.delta(), &TubeMethod::Exact).is_ok();
    let method = if exact_ok {
        TubeMethod::Exact
    } else {
        TubeMethod::MonteCarlo { samples: opts.mc_samples, seed: opts.seed }
    };

    // tube samples for the empirical block
    let samples = TubeSamples::sample(
        drum,
        drum.delta(),
        0.9,
        if exact_ok { 300 } else { 160 },
        &method,
    )
    .ok();

    // dimension: exact when known, fit otherwise
    let dimension = match drum.box_dimension() {
        Some(v) => DimensionInfo { value: v, provenance: "exact".to_string(), stderr: None },
        None => {
            let s = samples.as_ref().ok_or_else(|| {
                Error::InsufficientSamples("no tube samples for dimension fit".into())
            })?;
            let (v, e) = box_dimension_fit(s, n)?;
            DimensionInfo { value: v, provenance: "fit".to_string(), stderr: Some(e) }
        }
    };

    // symbolic path
    let expr = catalog_expr(drum).ok();
    let (window, spec, verdict_report, bounds) = match &expr {
        Some((expr, kind)) => {
            let window = match opts.window {
                Some(w) => w,
                None => default_window(drum)?,
            };
            let spec = spectrum(expr, &window, 1e-12)?;
            let verdict = measurability_verdict(&spec, n, &window, *kind)?;
            let bounds = content_bounds(&spec, n, 3.0).ok();
            (Some(window), Some(spec), Some(verdict), bounds)
        }
        None => (None, None, None, None),
    };

    // empirical block
    let estimation = samples.as_ref().map(|s| {
        let d_used = dimension.value;
        let gauge_order = match verdict_report.as_ref().map(|v| &v.verdict) {
            Some(crate::criterion::Verdict::GaugeMeasurable { order, .. }) => *order,
            _ => gauge_order_probe(s, n, d_used),
        };
        let content = content_estimate(s, n, d_used, gauge_order);
        let oscillation = oscillation_probe(s, n, d_used);
        let (kappa, kappa_stderr) = match &expr {
            Some((e, _)) => {
                let sigma = window
                    .map(|w| 0.5 * (w.sigma_min + d_used))
                    .unwrap_or(d_used - 0.2);
                let pole_res: Vec<f64> = spec
                    .as_ref()
                    .map(|sp| sp.dims.iter().map(|x| x.omega.0).collect())
                    .unwrap_or_default();
                let eval = |s: Complex64| e.eval(s);
                match languidity_probe(&eval, sigma, 1000.0, 64, &pole_res) {
                    Ok((k, err)) => (Some(k), Some(err)),
                    Err(_) => (None, None),
                }
            }
            None => (None, None),
        };
        let (alpha, alpha_osc) = match remainder_order_fit(s, n, d_used, content.mean, gauge_order)
        {
            Ok(fit) => {
                if fit.oscillatory {
                    (None, Some(true))
                } else {
                    (Some(fit.alpha), Some(false))
                }
            }
            Err(_) => (None, None),
        };
        EstimationBlock {
            dimension: d_used,
            dimension_stderr: dimension.stderr.unwrap_or(0.0),
            content,
            gauge_order,
            oscillation,
            kappa,
            kappa_stderr,
            alpha,
            alpha_oscillatory: alpha_osc,
        }
    });

    // functional-equation spot checks off the poles
    let functional_equation = if expr.is_some() && exact_ok {
        let d = dimension.value;
        let pts = [
            Complex64::new(d + 0.5 * (n as f64 - d), 0.0),
            Complex64::new(d + 0.5 * (n as f64 - d), 1.0),
            Complex64::new(d + 0.8 * (n as f64 - d), -2.0),
        ];
        let qopts = QuadratureOpts::with_tol(opts.tol.min(1e-6));
        let mut worst = 0.0f64;
        let mut count = 0usize;
        for s in pts {
            if let Ok(r) = functional_equation_residual(drum, s, &qopts, VolumeBackend::Exact) {
                worst = worst.max(r);
                count += 1;
            }
        }
        if count > 0 {
            Some(FunctionalEquationSummary { max_residual: worst, points: count })
        } else {
            None
        }
    } else {
        None
    };

    // direct-vs-formula tube comparison where a transcription exists
    let mut tube_comparison = Vec::new();
    let has_formula = matches!(
        drum.kind(),
        DrumKind::Cantor | DrumKind::HalfSquare | DrumKind::ThirdSquare
    );
    for k in 0..4 {
        let t = drum.delta() * 0.5 * 0.2f64.powi(k);
        if let Ok((v, e)) = drum.tube_volume(t, &method) {
            let (formula, tail) = if has_formula {
                match catalog_exact_tube(drum, t, 50) {
                    Ok((f, tl)) => (Some(f), Some(tl)),
                    Err(_) => (None, None),
                }
            } else if let (Some(sp), Some(w)) = (&spec, &window) {
                match residue_sum_from_spectrum(sp, n, w, t) {
                    Ok(rec) => (Some(rec.volume), None),
                    Err(_) => (None, None),
                }
            } else {
                (None, None)
            };
            tube_comparison.push(TubeComparisonRow {
                t,
                direct: v,
                direct_error: e,
                formula,
                formula_tail: tail,
            });
        }
    }

    let mut hypothesis_notes = verdict_report
        .as_ref()
        .map(|v| v.hypothesis_notes.clone())
        .unwrap_or_default();
    if let DrumKind::Spray { ratios, .. } = drum.kind() {
        if matches!(classify_lattice(ratios), LatticeClass::Nonlattice { .. }) {
            hypothesis_notes.push(
                "nonlattice spray: the screen-existence hypothesis of the criterion is \
                 assumed, not verified"
                    .to_string(),
            );
        }
    }

    let report = AnalysisReport {
        drum: drum.to_descriptor(),
        delta: drum.delta(),
        seed: opts.seed,
        dimension,
        window,
        spectrum: spec.as_ref().map(|s| s.dims.clone()).unwrap_or_default(),
        dropped_poles: spec.map(|s| s.dropped).unwrap_or_default(),
        verdict: verdict_report.map(|v| v.verdict),
        bounds,
        functional_equation,
        tube_comparison,
        estimation,
        hypothesis_notes,
    };
    validate_finite(&serde_json::to_value(&report)?)?;
    Ok(report)
}

/// Reports must not smuggle NaN or infinities.
fn validate_finite(v: &Value) -> Result<()> {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if !f.is_finite() {
                    return Err(Error::InvalidInput("non-finite number in report".into()));
                }
            }
            Ok(())
        }
        Value::Array(a) => a.iter().try_for_each(validate_finite),
        Value::Object(o) => o.values().try_for_each(validate_finite),
        _ => Ok(()),
    }
}

/// Serialize with sorted keys (the default serde_json map is ordered) and
/// shortest-roundtrip floats.
pub fn report_to_json(report: &AnalysisReport) -> Result<String> {
    let value = serde_json::to_value(report)?;
    Ok(serde_json::to_string_pretty(&value)?)
}
