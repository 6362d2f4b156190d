//! The Minkowski measurability criterion and its gauge extension, applied
//! to a drum's pole spectrum, plus content bounds from residue data.
//!
//! Verdict logic on the principal complex dimensions (the poles with
//! maximal real part D):
//! a unique simple principal pole at D gives measurability with content
//! `res(ζ, D)/(N−D)`; a principal pole of order m ≥ 2 dominating all
//! nonreal companions gives gauge measurability for `h(t) = (log 1/t)^{m-1}`
//! with content `ζ[D]_{-m}/((N−D)(m−1)!)`; nonreal principal poles of
//! maximal order block both. Numeric-only drums get an empirical verdict,
//! never a theorem-grade claim.

use serde::{Deserialize, Serialize};

use crate::dimensions::{ComplexDimension, Spectrum, Window};
use crate::error::{Error, Result};
use crate::estimation::{ContentEstimate, OscillationReport};
use crate::zeta::ZetaKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Measurable {
        dim: f64,
        content: f64,
        provenance: String,
    },
    NotMeasurable {
        dim: f64,
        principal: Vec<ComplexDimension>,
        average_content_hint: f64,
        provenance: String,
    },
    GaugeMeasurable {
        dim: f64,
        order: u32,
        gauge: String,
        content: f64,
        provenance: String,
    },
    Empirical {
        dim_estimate: f64,
        dim_stderr: f64,
        oscillation: OscillationReport,
        provenance: String,
    },
}

impl Verdict {
    pub fn dim(&self) -> f64 {
        match self {
            Verdict::Measurable { dim, .. }
            | Verdict::NotMeasurable { dim, .. }
            | Verdict::GaugeMeasurable { dim, .. } => *dim,
            Verdict::Empirical { dim_estimate, .. } => *dim_estimate,
        }
    }

    pub fn provenance(&self) -> &str {
        match self {
            Verdict::Measurable { provenance, .. }
            | Verdict::NotMeasurable { provenance, .. }
            | Verdict::GaugeMeasurable { provenance, .. }
            | Verdict::Empirical { provenance, .. } => provenance,
        }
    }
}

/// A verdict together with the hypothesis caveats that a finite window
/// cannot discharge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub hypothesis_notes: Vec<String>,
}

/// Apply the measurability criterion to a spectrum obtained from a
/// distance-zeta (or tube-zeta) expression over the window.
pub fn measurability_verdict(
    spectrum: &Spectrum,
    n: u32,
    window: &Window,
    kind: ZetaKind,
) -> Result<VerdictReport> {
    let nf = n as f64;
    let d = spectrum
        .max_re()
        .ok_or_else(|| Error::InvalidInput("empty spectrum in window".into()))?;
    if matches!(kind, ZetaKind::Distance) && d >= nf - 1e-12 {
        return Err(Error::StripViolation(format!(
            "D = {d} ≥ N = {n}: route this drum through the tube zeta"
        )));
    }
    let principal: Vec<&ComplexDimension> = spectrum.principal();
    let real = principal
        .iter()
        .find(|p| p.is_real())
        .ok_or_else(|| Error::InvalidInput("no real principal pole found in window".into()))?;
    let m = real.multiplicity;
    let nonreal: Vec<&&ComplexDimension> =
        principal.iter().filter(|p| !p.is_real()).collect();

    let mut notes = vec![
        "languidity and screen hypotheses are probed numerically, not proved".to_string(),
    ];
    // finite windows cannot rule out further principal poles
    if let Some(min_im) = nonreal.iter().map(|p| p.omega.1.abs()).fold(None, |a: Option<f64>, x| {
        Some(a.map_or(x, |v: f64| v.min(x)))
    }) {
        if 2.0 * min_im > window.tau_max {
            notes.push(format!(
                "window holds fewer than two oscillation periods (spacing {min_im:.4}, τ_max {})",
                window.tau_max
            ));
        }
    }

    let content_denominator = if matches!(kind, ZetaKind::Distance) { nf - d } else { 1.0 };
    let verdict = if nonreal.is_empty() && m == 1 {
        Verdict::Measurable {
            dim: d,
            content: real.residue().re / content_denominator,
            provenance: "unique simple principal pole: measurable with content res/(N-D)"
                .to_string(),
        }
    } else if m >= 2 && nonreal.iter().all(|p| p.multiplicity < m) {
        if !nonreal.is_empty() {
            notes.push(
                "gauge verdict assumes finitely many nonreal principal poles; the lattice \
                 structure implies infinitely many, all of lower order, for which the same \
                 leading term still holds"
                    .to_string(),
            );
        }
        let fact: f64 = (1..m as u64).map(|k| k as f64).product::<f64>().max(1.0);
        Verdict::GaugeMeasurable {
            dim: d,
            order: m,
            gauge: format!("(log 1/t)^{}", m - 1),
            content: real.coeff(-(m as i32)).re / (content_denominator * fact),
            provenance: format!(
                "principal pole of order {m} dominating all nonreal companions: gauge-measurable"
            ),
        }
    } else {
        Verdict::NotMeasurable {
            dim: d,
            principal: principal.iter().map(|p| (*p).clone()).collect(),
            average_content_hint: real.residue().re / content_denominator,
            provenance:
                "nonreal principal poles of maximal order: oscillations block the limit"
                    .to_string(),
        }
    };
    Ok(VerdictReport { verdict, hypothesis_notes: notes })
}

/// An empirical verdict for drums without a closed form.
pub fn empirical_verdict(
    dim_estimate: f64,
    dim_stderr: f64,
    oscillation: OscillationReport,
) -> VerdictReport {
    VerdictReport {
        verdict: Verdict::Empirical {
            dim_estimate,
            dim_stderr,
            oscillation,
            provenance: "numeric evidence only: no theorem-grade claim".to_string(),
        },
        hypothesis_notes: vec![
            "dimension and oscillation are finite-sample estimates".to_string()
        ],
    }
}

/// Upper bound for the upper Minkowski content from the tube-zeta residue:
/// `C λ (N−D) res / (2π (1 − e^{−2π(N−D)/λ}))` for `D < N`, and `C·res`
/// at `D = N`. The Tauberian constant is fixed at its stated ceiling 3.
pub fn content_upper_bound(
    residue_tube: f64,
    lambda: f64,
    n: u32,
    d: f64,
    c: f64,
) -> Result<f64> {
    if !(residue_tube > 0.0) || !(lambda > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidInput("bound inputs must be positive".into()));
    }
    let nf = n as f64;
    if d > nf || d < 0.0 {
        return Err(Error::OutOfRange(format!("need 0 ≤ D ≤ N, got D = {d}")));
    }
    if (nf - d).abs() < 1e-12 {
        return Ok(c * residue_tube);
    }
    let gap = nf - d;
    Ok(c * lambda * gap * residue_tube
        / (2.0 * std::f64::consts::PI * (1.0 - (-2.0 * std::f64::consts::PI * gap / lambda).exp())))
}

/// Content bounds block for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentBounds {
    /// min |D − ω| over the found nonreal principal poles, if any.
    pub gap_lambda: Option<f64>,
    pub tauberian_c: f64,
    /// Theorem-style upper bound (absent when no nonreal principal pole
    /// was found inside the window).
    pub upper: Option<f64>,
}

pub fn content_bounds(spectrum: &Spectrum, n: u32, c: f64) -> Result<ContentBounds> {
    let d = spectrum
        .max_re()
        .ok_or_else(|| Error::InvalidInput("empty spectrum".into()))?;
    let principal = spectrum.principal();
    let real = principal.iter().find(|p| p.is_real());
    let lambda = principal
        .iter()
        .filter(|p| !p.is_real())
        .map(|p| (p.omega() - d).norm())
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |v| v.min(x))));
    let upper = match (real, lambda) {
        (Some(r), Some(l)) => {
            // tube residue from the distance residue: res(ζ̃) = res(ζ)/(N−D)
            let res_tube = r.residue().re / (n as f64 - d);
            Some(content_upper_bound(res_tube, l, n, d, c)?)
        }
        _ => None,
    };
    Ok(ContentBounds { gap_lambda: lambda, tauberian_c: c, upper })
}

/// Pass/fail report of the residue sandwich
/// `(N−D)·lower ≤ res(ζ, D) ≤ (N−D)·upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub pass: bool,
    pub residue: f64,
    pub lower_side: f64,
    pub upper_side: f64,
    /// Margins (positive = satisfied with room) including estimate errors.
    pub lower_margin: f64,
    pub upper_margin: f64,
}

pub fn residue_content_sandwich(
    residue_dist: f64,
    n: u32,
    d: f64,
    estimate: &ContentEstimate,
    estimate_error: f64,
) -> SandwichReport {
    let gap = n as f64 - d;
    let lower_side = gap * estimate.lower;
    let upper_side = gap * estimate.upper;
    let lower_margin = residue_dist - (lower_side - gap * estimate_error);
    let upper_margin = (upper_side + gap * estimate_error) - residue_dist;
    SandwichReport {
        pass: lower_margin >= 0.0 && upper_margin >= 0.0,
        residue: residue_dist,
        lower_side,
        upper_side,
        lower_margin,
        upper_margin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimensions::{spectrum, Window};
    use crate::geometry::{RelativeFractalDrum, TubeMethod, TubeSamples};
    use crate::zeta::catalog_expr;

    fn verdict_for(drum: &RelativeFractalDrum, window: Window) -> VerdictReport {
        let (expr, kind) = catalog_expr(drum).unwrap();
        let spec = spectrum(&expr, &window, 1e-12).unwrap();
        measurability_verdict(&spec, drum.ambient_dim(), &window, kind).unwrap()
    }

    #[test]
    fn cantor_not_measurable() {
        let rep = verdict_for(&RelativeFractalDrum::cantor(), Window::new(0.3, 0.9, 13.0).unwrap());
        match rep.verdict {
            Verdict::NotMeasurable { dim, ref principal, .. } => {
                assert!((dim - (2f64).ln() / (3f64).ln()).abs() < 1e-9);
                assert!(principal.len() >= 3);
            }
            ref v => panic!("expected NotMeasurable, got {v:?}"),
        }
    }

    #[test]
    fn astring_measurable_with_content_two_sqrt_two() {
        let rep = verdict_for(
            &RelativeFractalDrum::a_string(1.0).unwrap(),
            Window::new(0.1, 0.9, 30.0).unwrap(),
        );
        match rep.verdict {
            Verdict::Measurable { dim, content, .. } => {
                assert!((dim - 0.5).abs() < 1e-9);
                let want = 2.0 * std::f64::consts::SQRT_2;
                assert!((content - want).abs() < 1e-6, "{content} vs {want}");
            }
            ref v => panic!("expected Measurable, got {v:?}"),
        }
    }

    #[test]
    fn nest_gauge_measurable_two_pi() {
        let rep = verdict_for(
            &RelativeFractalDrum::fractal_nest(1.0).unwrap(),
            Window::new(0.8, 1.3, 5.0).unwrap(),
        );
        match rep.verdict {
            Verdict::GaugeMeasurable { dim, order, content, ref gauge, .. } => {
                assert!((dim - 1.0).abs() < 1e-9);
                assert_eq!(order, 2);
                assert_eq!(gauge, "(log 1/t)^1");
                let want = 2.0 * std::f64::consts::PI;
                assert!((content - want).abs() < 1e-6, "{content} vs {want}");
            }
            ref v => panic!("expected GaugeMeasurable, got {v:?}"),
        }
    }

    #[test]
    fn half_square_gauge_measurable() {
        let rep = verdict_for(
            &RelativeFractalDrum::half_square(),
            Window::new(0.7, 1.3, 20.0).unwrap(),
        );
        match rep.verdict {
            Verdict::GaugeMeasurable { dim, order, content, .. } => {
                assert!((dim - 1.0).abs() < 1e-9);
                assert_eq!(order, 2);
                let want = 1.0 / (4.0 * (2f64).ln());
                assert!((content - want).abs() < 1e-8, "{content} vs {want}");
            }
            ref v => panic!("expected GaugeMeasurable, got {v:?}"),
        }
    }

    #[test]
    fn third_square_measurable_sixteen() {
        let rep = verdict_for(
            &RelativeFractalDrum::third_square(),
            Window::new(0.8, 1.3, 5.0).unwrap(),
        );
        match rep.verdict {
            Verdict::Measurable { dim, content, .. } => {
                assert!((dim - 1.0).abs() < 1e-9);
                assert!((content - 16.0).abs() < 1e-6, "{content}");
            }
            ref v => panic!("expected Measurable, got {v:?}"),
        }
    }

    #[test]
    fn cantor_bound_exceeds_estimated_upper_content() {
        let drum = RelativeFractalDrum::cantor();
        let (expr, _) = catalog_expr(&drum).unwrap();
        let w = Window::new(0.3, 0.9, 13.0).unwrap();
        let spec = spectrum(&expr, &w, 1e-12).unwrap();
        let bounds = content_bounds(&spec, 1, 3.0).unwrap();
        // frozen from the closed-form inputs: ≈ 7.632
        let upper = bounds.upper.unwrap();
        assert!((upper - 7.632_095_830_556_175).abs() < 1e-6, "{upper}");
        let samples = TubeSamples::sample(&drum, 1.0 / 6.0, 0.9, 260, &TubeMethod::Exact).unwrap();
        let d = (2f64).ln() / (3f64).ln();
        let est = crate::estimation::content_estimate(&samples, 1, d, 1);
        assert!(upper > est.upper, "{upper} vs {est:?}");
    }

    #[test]
    fn bound_is_monotone_in_lambda_and_trivial_at_d_equals_n() {
        assert_eq!(content_upper_bound(0.5, 1.0, 1, 1.0, 3.0).unwrap(), 1.5);
        let mut prev = 0.0;
        for lambda in [1.0, 10.0, 100.0] {
            let b = content_upper_bound(1.0, lambda, 1, 0.5, 3.0).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn sandwich_passes_for_cantor_and_fails_doubled() {
        let drum = RelativeFractalDrum::cantor();
        let samples = TubeSamples::sample(&drum, 1.0 / 6.0, 0.9, 260, &TubeMethod::Exact).unwrap();
        let d = (2f64).ln() / (3f64).ln();
        let est = crate::estimation::content_estimate(&samples, 1, d, 1);
        let res = 0.931_634_918_637_962; // res(ζ, D), frozen
        let rep = residue_content_sandwich(res, 1, d, &est, 1e-3);
        assert!(rep.pass, "{rep:?}");
        let rep2 = residue_content_sandwich(2.0 * res, 1, d, &est, 1e-3);
        assert!(!rep2.pass, "{rep2:?}");
    }

    #[test]
    fn astring_sandwich_collapses_to_equality() {
        let drum = RelativeFractalDrum::a_string(1.0).unwrap();
        let samples = TubeSamples::sample(&drum, 0.05, 0.9, 220, &TubeMethod::Exact).unwrap();
        let est = crate::estimation::content_estimate(&samples, 1, 0.5, 1);
        let res = 0.5 * 2.0 * std::f64::consts::SQRT_2; // (1−D)·M
        let rep = residue_content_sandwich(res, 1, 0.5, &est, 0.02);
        assert!(rep.pass, "{rep:?}");
        assert!(rep.lower_margin < 0.1 && rep.upper_margin < 0.1, "{rep:?}");
    }
}
