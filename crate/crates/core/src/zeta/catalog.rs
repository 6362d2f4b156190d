//! Closed-form distance zeta expressions for the catalog drums.
//!
//! Each constructor transcribes the drum's known closed form with the
//! drum's δ substituted into the explicitly δ-dependent terms, and the
//! drum's affine scale applied as a global `λ^s` factor.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::string::StringGenerator;
use crate::geometry::{DrumKind, FractalString, RelativeFractalDrum};
use crate::series::GapSeries;
use crate::zeta::expr::{DirichletFactor, EntireFactor, ExprTerm, MeromorphicExpr, ZetaKind};

/// The closed-form zeta expression of a drum, if it has one.
pub fn catalog_expr(drum: &RelativeFractalDrum) -> Result<(MeromorphicExpr, ZetaKind)> {
    let lambda = drum.scale();
    let delta_u = drum.delta() / lambda;
    let expr = match drum.kind() {
        DrumKind::Cantor => cantor_expr(),
        DrumKind::SierpinskiGasket => gasket_expr(delta_u),
        DrumKind::Carpet3D => carpet3_expr(delta_u),
        DrumKind::HalfSquare => half_square_expr(delta_u),
        DrumKind::ThirdSquare => third_square_expr(delta_u),
        DrumKind::FractalNest { a } => nest_expr(*a),
        DrumKind::GeometricChirp { alpha, beta } => chirp_expr(*alpha, *beta),
        DrumKind::AString { a } => a_string_expr(*a),
        DrumKind::StringDrum(s) => string_expr(s)?,
        DrumKind::Spray { generator, ratios } => {
            let (gen_expr, _) = catalog_expr(generator)?;
            let moran = DirichletFactor::moran(&ratios.ratios);
            let terms = gen_expr
                .terms
                .into_iter()
                .map(|t| t.dirichlet(moran.clone()))
                .collect();
            MeromorphicExpr::new(terms)
        }
        DrumKind::Sampled { .. } => {
            return Err(Error::NoClosedForm("sampled drums have no closed form".into()))
        }
    };
    Ok((expr.scaled_by_power(lambda), ZetaKind::Distance))
}

/// `ζ_{C,(0,1)}(s) = 2^{1-s}/(s(3^s − 2))`.
fn cantor_expr() -> MeromorphicExpr {
    MeromorphicExpr::new(vec![ExprTerm::new(2.0)
        .base(0.5)
        .pole(0.0, 1)
        .dirichlet(DirichletFactor::power_minus(3.0, 2.0))])
}

/// `6(√3)^{1-s} 2^{-s}/(s(s−1)(2^s−3)) + 2πδ^s/s + 3δ^{s-1}/(s−1)`.
fn gasket_expr(delta: f64) -> MeromorphicExpr {
    let sqrt3 = 3.0f64.sqrt();
    MeromorphicExpr::new(vec![
        ExprTerm::new(6.0 * sqrt3)
            .base(1.0 / (2.0 * sqrt3))
            .pole(0.0, 1)
            .pole(1.0, 1)
            .dirichlet(DirichletFactor::power_minus(2.0, 3.0)),
        ExprTerm::new(2.0 * PI).base(delta).pole(0.0, 1),
        ExprTerm::new(3.0 / delta).base(delta).pole(1.0, 1),
    ])
}

/// `48·2^{-s}/(s(s−1)(s−2)(3^s−26)) + 4πδ^s/s + 6πδ^{s-1}/(s−1) + 6δ^{s-2}/(s−2)`.
fn carpet3_expr(delta: f64) -> MeromorphicExpr {
    MeromorphicExpr::new(vec![
        ExprTerm::new(48.0)
            .base(0.5)
            .pole(0.0, 1)
            .pole(1.0, 1)
            .pole(2.0, 1)
            .dirichlet(DirichletFactor::power_minus(3.0, 26.0)),
        ExprTerm::new(4.0 * PI).base(delta).pole(0.0, 1),
        ExprTerm::new(6.0 * PI / delta).base(delta).pole(1.0, 1),
        ExprTerm::new(6.0 / (delta * delta)).base(delta).pole(2.0, 1),
    ])
}

/// `2^{-s}/(s(s−1)(2^s−2)) + 4δ^{s-1}/(s−1) + 2πδ^s/s`.
fn half_square_expr(delta: f64) -> MeromorphicExpr {
    MeromorphicExpr::new(vec![
        ExprTerm::new(1.0)
            .base(0.5)
            .pole(0.0, 1)
            .pole(1.0, 1)
            .dirichlet(DirichletFactor::power_minus(2.0, 2.0)),
        ExprTerm::new(4.0 / delta).base(delta).pole(1.0, 1),
        ExprTerm::new(2.0 * PI).base(delta).pole(0.0, 1),
    ])
}

/// `12/(s(s−1)(3^s−2)) + 2 Z(s)/(s(3^s−2)) + 4δ^{s-1}/(s−1) + 2πδ^s/s`.
fn third_square_expr(delta: f64) -> MeromorphicExpr {
    MeromorphicExpr::new(vec![
        ExprTerm::new(12.0)
            .pole(0.0, 1)
            .pole(1.0, 1)
            .dirichlet(DirichletFactor::power_minus(3.0, 2.0)),
        ExprTerm::new(2.0)
            .pole(0.0, 1)
            .dirichlet(DirichletFactor::power_minus(3.0, 2.0))
            .entire(EntireFactor::CornerIntegral),
        ExprTerm::new(4.0 / delta).base(delta).pole(1.0, 1),
        ExprTerm::new(2.0 * PI).base(delta).pole(0.0, 1),
    ])
}

/// Fractal nest over the a-string:
/// `2^{3-s}π S_{c=a,ρ=a}(s−1)/(s−1) − 2^{2-s}π ζ_L(s)/(s−1)`,
/// with the leading series poles extracted into linear factors (for a = 1
/// they merge into the double pole at s = 1).
fn nest_expr(a: f64) -> MeromorphicExpr {
    let weighted = GapSeries::new(a, a);
    let plain = GapSeries::new(a, 0.0);
    let p_weighted = 2.0 / (a + 1.0); // pole of S(s−1) in s
    let p_plain = 1.0 / (a + 1.0); // pole of ζ_L in s
    MeromorphicExpr::new(vec![
        ExprTerm::new(8.0 * PI)
            .base(0.5)
            .pole(1.0, 1)
            .pole(p_weighted, 1)
            .entire(EntireFactor::GapSeriesFactor {
                series: weighted,
                shift: -1.0,
                extracted: vec![p_weighted],
            }),
        ExprTerm::new(-4.0 * PI)
            .base(0.5)
            .pole(1.0, 1)
            .pole(p_plain, 1)
            .entire(EntireFactor::GapSeriesFactor {
                series: plain,
                shift: 0.0,
                extracted: vec![p_plain],
            }),
    ])
}

/// Unbounded geometric chirp:
/// `2^{2-s} T(s)/(s−1)` with `T = S_{c=1/β, ρ=α/β}(s−1)`.
fn chirp_expr(alpha: f64, beta: f64) -> MeromorphicExpr {
    let series = GapSeries::new(1.0 / beta, alpha / beta);
    let d = 1.0 + series.pole(0); // = 2 − (1+α)/(1+β)
    MeromorphicExpr::new(vec![ExprTerm::new(4.0)
        .base(0.5)
        .pole(1.0, 1)
        .pole(d, 1)
        .entire(EntireFactor::GapSeriesFactor { series, shift: -1.0, extracted: vec![d] })])
}

/// a-string drum: `2^{1-s} ζ_L(s)/s` with the pole at `1/(a+1)` extracted.
fn a_string_expr(a: f64) -> MeromorphicExpr {
    let series = GapSeries::new(a, 0.0);
    let d = series.pole(0);
    MeromorphicExpr::new(vec![ExprTerm::new(2.0)
        .base(0.5)
        .pole(0.0, 1)
        .pole(d, 1)
        .entire(EntireFactor::GapSeriesFactor { series, shift: 0.0, extracted: vec![d] })])
}

/// General string drums via `ζ = 2^{1-s} ζ_L(s)/s`.
fn string_expr(s: &FractalString) -> Result<MeromorphicExpr> {
    let scale = s.scale();
    let expr = match s.generator() {
        StringGenerator::Explicit(lengths) => {
            // 2^{1-s} Σ ℓ^s / s = Σ 2 (ℓ/2)^s / s
            MeromorphicExpr::new(
                lengths
                    .iter()
                    .map(|&l| ExprTerm::new(2.0).base(l / 2.0).pole(0.0, 1))
                    .collect(),
            )
        }
        StringGenerator::AString { a } => a_string_expr(*a),
        StringGenerator::SelfSimilar { ratios, gaps } => {
            let moran = DirichletFactor::moran(ratios);
            MeromorphicExpr::new(
                gaps.iter()
                    .map(|&g| {
                        ExprTerm::new(2.0).base(g / 2.0).pole(0.0, 1).dirichlet(moran.clone())
                    })
                    .collect(),
            )
        }
    };
    Ok(expr.scaled_by_power(scale))
}
