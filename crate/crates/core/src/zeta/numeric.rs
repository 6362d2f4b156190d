//! Numeric zeta evaluation from tube volumes, and the functional-equation
//! consistency checks.
//!
//! The distance zeta is computed through the tube route
//! `ζ(s;δ) = δ^{s-N} V(δ) + (N−s) ∫_0^δ t^{s-N-1} V(t) dt`,
//! which trades the singular volume integrand for a 1-D integral with
//! controllable error: `V` is sampled on a geometric grid, every
//! log-subinterval is integrated in closed form under a local power-law
//! fit `V ≈ c t^γ`, and the sub-grid Richardson difference drives
//! refinement until the estimated error meets the requested tolerance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::tube::DistanceProfile;
use crate::geometry::{DrumKind, RelativeFractalDrum, TubeSamples};
use crate::zeta::catalog::catalog_expr;
use crate::zeta::expr::ZetaKind;

/// Quadrature controls for the tube route.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOpts {
    /// Geometric grid ratio ρ (default 0.9); refinement takes √ρ steps.
    pub grid_ratio: f64,
    /// Minimum number of grid nodes before the tail may be attached.
    pub min_samples: usize,
    /// Target absolute error on the tube zeta value.
    pub tol: f64,
    /// Refinement rounds (each squares the node density).
    pub max_refine: u32,
}

impl Default for QuadratureOpts {
    fn default() -> Self {
        Self { grid_ratio: 0.9, min_samples: 400, tol: 1e-8, max_refine: 7 }
    }
}

impl QuadratureOpts {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Where tube volumes come from.
#[derive(Debug, Clone, Copy)]
pub enum VolumeBackend {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

/// A resolved volume source: a callable `t → (V, σ)` plus the smallest
/// trustworthy `t`.
struct VolumeSource<'a> {
    drum: &'a RelativeFractalDrum,
    profile: Option<DistanceProfile>,
    stochastic: bool,
}

impl<'a> VolumeSource<'a> {
    fn new(drum: &'a RelativeFractalDrum, backend: VolumeBackend) -> Result<Self> {
        match backend {
            VolumeBackend::Exact => {
                // verify the drum actually has an exact backend
                drum.tube_volume(drum.delta(), &crate::geometry::TubeMethod::Exact)?;
                Ok(Self { drum, profile: None, stochastic: false })
            }
            VolumeBackend::MonteCarlo { samples, seed } => Ok(Self {
                drum,
                profile: Some(drum.distance_profile(samples, seed)?),
                stochastic: true,
            }),
        }
    }

    fn volume(&self, t: f64) -> (f64, f64) {
        match &self.profile {
            None => (
                self.drum
                    .tube_volume(t, &crate::geometry::TubeMethod::Exact)
                    .expect("exact backend checked at construction")
                    .0,
                0.0,
            ),
            Some(p) => {
                let sat = self.drum.delta();
                let tc = if self.drum.is_absolute() { t.min(sat) } else { t };
                let (mut v, e) = p.tube_volume(tc);
                v += self.drum.outer_collar(tc.min(sat));
                (v, e)
            }
        }
    }

    /// Smallest t with a meaningful volume reading.
    fn t_floor(&self) -> f64 {
        match &self.profile {
            None => 0.0,
            Some(p) => {
                // need enough hits for a stable relative error
                let k = 400.min(p.distances.len() / 10).max(1);
                p.distances.get(k).copied().unwrap_or(0.0)
            }
        }
    }
}

/// Tube zeta `ζ̃(s; δ) = ∫_0^δ t^{s-N-1} V(t) dt` with an error estimate.
pub fn tube_zeta_numeric(
    drum: &RelativeFractalDrum,
    s: Complex64,
    delta: f64,
    opts: &QuadratureOpts,
    backend: VolumeBackend,
) -> Result<(Complex64, f64)> {
    let src = VolumeSource::new(drum, backend)?;
    tube_zeta_from_source(&src, s, delta, drum.ambient_dim() as f64, opts)
}

fn tube_zeta_from_source(
    src: &VolumeSource,
    s: Complex64,
    delta: f64,
    n_dim: f64,
    opts: &QuadratureOpts,
) -> Result<(Complex64, f64)> {
    let mut ratio = opts.grid_ratio;
    let mut best: Option<(Complex64, f64)> = None;
    let mut prev: Option<Complex64> = None;
    for _round in 0..=opts.max_refine {
        let (value, err, grid_err) = tube_zeta_once(src, s, delta, n_dim, ratio, opts)?;
        // the Richardson estimate can be fooled by phase-correlated
        // oscillatory error; floor it with the successive-round difference
        let err = match prev {
            Some(p) => err.max((value - p).norm() / 2.0),
            None => err,
        };
        prev = Some(value);
        if err <= opts.tol {
            return Ok((value, err));
        }
        match best {
            Some((_, e)) if e <= err => {}
            _ => best = Some((value, err)),
        }
        if src.stochastic || grid_err <= 0.3 * err {
            // refinement only shrinks the grid component; stop once noise
            // or the tail model dominates
            break;
        }
        ratio = ratio.sqrt();
    }
    Ok(best.expect("at least one quadrature round"))
}

fn tube_zeta_once(
    src: &VolumeSource,
    s: Complex64,
    delta: f64,
    n_dim: f64,
    ratio: f64,
    opts: &QuadratureOpts,
) -> Result<(Complex64, f64, f64)> {
    let t_floor = src.t_floor();
    // collect the geometric grid
    let mut ts: Vec<f64> = Vec::new();
    let mut vs: Vec<f64> = Vec::new();
    let mut es: Vec<f64> = Vec::new();
    let mut t = delta;
    let hard_cap = 400_000usize;
    while ts.len() < hard_cap {
        if t < t_floor || t < 1e-280 {
            break;
        }
        let (v, e) = src.volume(t);
        if src.stochastic && v <= 8.0 * e {
            break;
        }
        ts.push(t);
        vs.push(v);
        es.push(e);
        // stop once the analytic tail is clearly below tolerance
        if ts.len() >= opts.min_samples && ts.len() % 64 == 0 {
            let (gamma, _c) = tail_fit(&ts, &vs);
            let w_re = s.re - n_dim + gamma;
            if w_re > 0.05 {
                let tail_mag = vs.last().unwrap() * t.powf(s.re - n_dim) / w_re;
                if tail_mag < opts.tol / 8.0 {
                    break;
                }
            }
        }
        t *= ratio;
    }
    if ts.len() < 8 {
        return Err(Error::InsufficientSamples(format!(
            "only {} usable tube samples above the noise floor",
            ts.len()
        )));
    }

    let fine = powerlaw_integral(&ts, &vs, s, n_dim);
    let coarse = {
        let tc: Vec<f64> = ts.iter().copied().step_by(2).collect();
        let vc: Vec<f64> = vs.iter().copied().step_by(2).collect();
        powerlaw_integral(&tc, &vc, s, n_dim)
    };
    let grid_err = (fine - coarse).norm();

    // analytic power-law tail below the last node
    let (gamma, c) = tail_fit(&ts, &vs);
    let w = s - n_dim + gamma;
    let t_last = *ts.last().unwrap();
    if w.re <= 0.0 {
        return Err(Error::InsufficientSamples(format!(
            "tail exponent Re(s − N + γ) = {} not positive; Re s too close to the dimension",
            w.re
        )));
    }
    let tail = c * (w * t_last.ln()).exp() / w;
    // tail model error: residual of the fit plus the volume error there
    let fit_rel = tail_fit_residual(&ts, &vs, gamma, c);
    let vol_rel = es.last().unwrap() / vs.last().unwrap().max(1e-300);
    let tail_err = tail.norm() * (fit_rel + vol_rel);

    // stochastic error propagated through the piecewise weights
    let mc_err = if src.stochastic {
        let mut acc = 0.0f64;
        for k in 0..ts.len() {
            let weight = ts[k].powf(s.re - n_dim) * vs[k].max(1e-300);
            let rel = es[k] / vs[k].max(1e-300);
            let dlog = -ratio.ln();
            acc += (weight * rel * dlog).powi(2);
        }
        acc.sqrt()
    } else {
        0.0
    };

    Ok((fine + tail, grid_err + tail_err + mc_err, grid_err))
}

/// Closed-form integral of the per-interval power-law interpolant.
fn powerlaw_integral(ts: &[f64], vs: &[f64], s: Complex64, n_dim: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..ts.len() - 1 {
        let (t0, t1) = (ts[k + 1], ts[k]); // t0 < t1
        let (v0, v1) = (vs[k + 1], vs[k]);
        if v0 <= 0.0 || v1 <= 0.0 {
            continue;
        }
        let gamma = (v1 / v0).ln() / (t1 / t0).ln();
        let w = s - n_dim + gamma;
        let c = v1 / t1.powf(gamma);
        // ∫_{t0}^{t1} c t^{w-1} dt
        let piece = if w.norm() < 1e-9 {
            c * (t1 / t0).ln() * Complex64::new(1.0, 0.0)
        } else {
            c * ((w * t1.ln()).exp() - (w * t0.ln()).exp()) / w
        };
        acc += piece;
    }
    acc
}

/// Least-squares (γ, c) over the last stretch of the grid; robust to one
/// log-period of oscillation because the fit spans many nodes.
fn tail_fit(ts: &[f64], vs: &[f64]) -> (f64, f64) {
    let n = ts.len();
    let take = n.min(96).max(2);
    let xs: Vec<f64> = ts[n - take..].iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = vs[n - take..].iter().map(|v| v.max(1e-300).ln()).collect();
    let mx = xs.iter().sum::<f64>() / take as f64;
    let my = ys.iter().sum::<f64>() / take as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..take {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    let gamma = if den > 0.0 { num / den } else { 0.0 };
    let c = (my - gamma * mx).exp();
    (gamma, c)
}

fn tail_fit_residual(ts: &[f64], vs: &[f64], gamma: f64, c: f64) -> f64 {
    let n = ts.len();
    let take = n.min(96).max(2);
    let mut worst = 0.0f64;
    for i in n - take..n {
        let model = c * ts[i].powf(gamma);
        worst = worst.max((vs[i] / model - 1.0).abs());
    }
    worst
}

/// Distance zeta via the tube route (Eq.-style functional identity).
pub fn distance_zeta_numeric(
    drum: &RelativeFractalDrum,
    s: Complex64,
    opts: &QuadratureOpts,
    backend: VolumeBackend,
) -> Result<(Complex64, f64)> {
    let n = drum.ambient_dim() as f64;
    let delta = drum.delta();
    if let Some(d) = drum.box_dimension() {
        if s.re <= d + 1e-9 {
            return Err(Error::StripViolation(format!(
                "distance zeta numeric route needs Re s > dim = {d}, got {}",
                s.re
            )));
        }
    }
    let src = VolumeSource::new(drum, backend)?;
    let (v_delta, e_delta) = src.volume(delta);
    let (tilde, e_tilde) = tube_zeta_from_source(&src, s, delta, n, opts)?;
    let pref = ((s - n) * delta.ln()).exp();
    let value = pref * v_delta + (n - s) * tilde;
    let err = pref.norm() * e_delta + (n - s).norm() * e_tilde;
    Ok((value, err))
}

/// Mellin zeta on the strip `dim < Re s < N`: the integral over `(0, ∞)`
/// splits at the saturation scale where `V ≡ |Ω|`.
pub fn mellin_zeta_numeric(
    drum: &RelativeFractalDrum,
    s: Complex64,
    opts: &QuadratureOpts,
    backend: VolumeBackend,
) -> Result<(Complex64, f64)> {
    let n = drum.ambient_dim() as f64;
    let dim = drum.box_dimension().unwrap_or(0.0);
    if s.re <= dim + 1e-9 || s.re >= n - 1e-9 {
        return Err(Error::StripViolation(format!(
            "Mellin zeta needs {dim} < Re s < {n}, got {}",
            s.re
        )));
    }
    let sat = drum.saturation_scale();
    let src = VolumeSource::new(drum, backend)?;
    let (tilde, e) = tube_zeta_from_source(&src, s, sat, n, opts)?;
    let omega = src.volume(sat).0;
    let head = omega * ((s - n) * sat.ln()).exp() / (n - s);
    Ok((tilde + head, e))
}

/// Direct Monte Carlo evaluation of `∫_{A_δ∩Ω} d(x,A)^{s-N} dx`, the
/// cross-check backend for `Re s > dim`.
pub fn distance_zeta_mc(
    drum: &RelativeFractalDrum,
    s: Complex64,
    samples: u64,
    seed: u64,
) -> Result<(Complex64, f64)> {
    let n = drum.ambient_dim() as f64;
    let delta = drum.delta();
    let profile = drum.distance_profile(samples, seed)?;
    let (core, err) = profile.integrate(|d| {
        if d >= delta {
            Complex64::new(0.0, 0.0)
        } else {
            ((s - n) * d.max(1e-14).ln()).exp()
        }
    });
    Ok((core + outer_distance_zeta(drum, s), err))
}

/// Closed-form outer part of the distance zeta for absolute drums
/// (sectors and face collars of the convex core), zero for relative drums.
pub fn outer_distance_zeta(drum: &RelativeFractalDrum, s: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    let lambda = drum.scale();
    let d = drum.delta() / lambda;
    let ds = (s * d.ln()).exp();
    let v = match drum.kind() {
        DrumKind::SierpinskiGasket => 2.0 * PI * ds / s + 3.0 * ds / d / (s - 1.0),
        DrumKind::Carpet3D => {
            4.0 * PI * ds / s + 6.0 * PI * ds / d / (s - 1.0) + 6.0 * ds / (d * d) / (s - 2.0)
        }
        DrumKind::HalfSquare | DrumKind::ThirdSquare => {
            2.0 * PI * ds / s + 4.0 * ds / d / (s - 1.0)
        }
        _ => Complex64::new(0.0, 0.0),
    };
    v * (s * lambda.ln()).exp()
}

/// Evaluate any zeta kind numerically.
pub fn zeta_numeric(
    drum: &RelativeFractalDrum,
    kind: ZetaKind,
    s: Complex64,
    opts: &QuadratureOpts,
    backend: VolumeBackend,
) -> Result<(Complex64, f64)> {
    match kind {
        ZetaKind::Distance => distance_zeta_numeric(drum, s, opts, backend),
        ZetaKind::Tube => tube_zeta_numeric(drum, s, drum.delta(), opts, backend),
        ZetaKind::Mellin => mellin_zeta_numeric(drum, s, opts, backend),
        ZetaKind::Geometric => match drum.kind() {
            DrumKind::StringDrum(st) => Ok((geometric_zeta(st, s, opts.tol)?, opts.tol)),
            _ => Err(Error::UnsupportedKind(
                "geometric zeta is defined for string drums".into(),
            )),
        },
    }
}

/// Geometric zeta `ζ_𝓛(s) = Σ ℓ_j^s` of a fractal string, by closed form
/// where available and by tail-corrected partial sums otherwise.
pub fn geometric_zeta(
    string: &crate::geometry::FractalString,
    s: Complex64,
    tol: f64,
) -> Result<Complex64> {
    use crate::geometry::StringGenerator;
    let abscissa = string.abscissa();
    if s.re <= abscissa {
        return Err(Error::DivergentAbscissa { re_s: s.re, abscissa });
    }
    let scale = string.scale();
    let scale_pow = (s * scale.ln()).exp();
    match string.generator() {
        StringGenerator::Explicit(lengths) => {
            Ok(scale_pow * lengths.iter().map(|l| (s * l.ln()).exp()).sum::<Complex64>())
        }
        StringGenerator::AString { a } => {
            let gs = crate::series::GapSeries::new(*a, 0.0);
            Ok(scale_pow * gs.eval(s, tol)?)
        }
        StringGenerator::SelfSimilar { ratios, gaps } => {
            // closed form Σ g^s / (1 − Σ r^s)
            let num: Complex64 = gaps.iter().map(|g| (s * g.ln()).exp()).sum();
            let den: Complex64 = Complex64::new(1.0, 0.0)
                - ratios.iter().map(|r| (s * r.ln()).exp()).sum::<Complex64>();
            Ok(scale_pow * num / den)
        }
    }
}

/// Maximum functional-equation residual at `s`, each normalized by
/// `1 + |ζ(s;δ)|`:
/// the distance/tube identity, and on the Mellin strip the two Mellin
/// identities.
pub fn functional_equation_residual(
    drum: &RelativeFractalDrum,
    s: Complex64,
    opts: &QuadratureOpts,
    backend: VolumeBackend,
) -> Result<f64> {
    let n = drum.ambient_dim() as f64;
    let delta = drum.delta();
    let zeta_cf = match catalog_expr(drum) {
        Ok((expr, _)) => expr.eval(s),
        Err(_) => {
            let (v, _) = distance_zeta_mc(drum, s, 2_000_000, 0)?;
            v
        }
    };
    // the residual is normalized by 1 + |ζ|, so the quadrature only needs
    // tolerance on that scale
    let opts = &QuadratureOpts {
        tol: opts.tol * 0.25 * (1.0 + zeta_cf.norm()),
        ..*opts
    };
    let src = VolumeSource::new(drum, backend)?;
    let (v_delta, _) = src.volume(delta);
    let (tilde, _) = tube_zeta_from_source(&src, s, delta, n, opts)?;
    let scale = 1.0 + zeta_cf.norm();
    let pref = ((s - n) * delta.ln()).exp();
    let mut worst = (zeta_cf - pref * v_delta - (n - s) * tilde).norm() / scale;

    let dim = drum.box_dimension().unwrap_or(f64::NEG_INFINITY);
    if s.re > dim && s.re < n {
        let (mellin, _) = {
            let sat = drum.saturation_scale();
            let (t2, e2) = tube_zeta_from_source(&src, s, sat, n, opts)?;
            let omega = src.volume(sat).0;
            (t2 + omega * ((s - n) * sat.ln()).exp() / (n - s), e2)
        };
        worst = worst.max((mellin - zeta_cf / (n - s)).norm() / scale);
        // the tube form needs Ω ⊆ A_δ, i.e. δ at or beyond saturation
        if delta >= drum.saturation_scale() * (1.0 - 1e-12) {
            let omega = drum.omega_volume();
            let r3 = (mellin - tilde - omega * pref / (n - s)).norm() / scale;
            worst = worst.max(r3);
        }
    }
    Ok(worst)
}

/// Numeric zeta evaluation directly from pre-recorded tube samples.
pub fn tube_zeta_from_samples(
    samples: &TubeSamples,
    s: Complex64,
    n_dim: f64,
) -> Result<(Complex64, f64)> {
    if samples.len() < 8 {
        return Err(Error::InsufficientSamples("need at least 8 samples".into()));
    }
    let ts: Vec<f64> = samples.entries.iter().map(|e| e.t).collect();
    let vs: Vec<f64> = samples.entries.iter().map(|e| e.volume).collect();
    let fine = powerlaw_integral(&ts, &vs, s, n_dim);
    let (gamma, c) = tail_fit(&ts, &vs);
    let w = s - n_dim + gamma;
    if w.re <= 0.0 {
        return Err(Error::InsufficientSamples("tail exponent not positive".into()));
    }
    let t_last = *ts.last().unwrap();
    let tail = c * (w * t_last.ln()).exp() / w;
    let fit_rel = tail_fit_residual(&ts, &vs, gamma, c);
    Ok((fine + tail, tail.norm() * fit_rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::FractalString;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn geometric_zeta_cantor_closed_form() {
        let c = FractalString::cantor();
        // total length at s = 1
        let v = geometric_zeta(&c, re(1.0), 1e-12).unwrap();
        assert!((v.re - 1.0).abs() < 1e-14);
        // s = 0.8 frozen from 1/(3^0.8 − 2)
        let v = geometric_zeta(&c, re(0.8), 1e-12).unwrap();
        assert!((v.re - 2.449_631_382_071_879).abs() < 1e-12, "{v}");
        // below the abscissa: divergent
        assert!(geometric_zeta(&c, re(0.6), 1e-12).is_err());
    }

    #[test]
    fn geometric_zeta_astring_total() {
        let a = FractalString::a_string(1.0).unwrap();
        let v = geometric_zeta(&a, re(1.0), 1e-12).unwrap();
        assert!((v.re - 1.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn single_gap_string_all_closed_form() {
        // V(t) = min(2t, 1): every quantity is elementary; residual tiny
        let drum = RelativeFractalDrum::string_drum(FractalString::single_gap(1.0).unwrap());
        let opts = QuadratureOpts::with_tol(1e-12);
        let r = functional_equation_residual(&drum, re(0.5), &opts, VolumeBackend::Exact).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }

    #[test]
    fn cantor_functional_equation_residual() {
        let drum = RelativeFractalDrum::cantor();
        let opts = QuadratureOpts::with_tol(1e-8);
        for s in [re(0.9), Complex64::new(0.9, 0.5), Complex64::new(1.4, 2.0)] {
            let r = functional_equation_residual(&drum, s, &opts, VolumeBackend::Exact).unwrap();
            assert!(r < 1e-6, "s={s}: residual {r}");
        }
    }

    #[test]
    fn distance_zeta_numeric_matches_expr_on_cantor() {
        let drum = RelativeFractalDrum::cantor();
        let (expr, _) = catalog_expr(&drum).unwrap();
        let opts = QuadratureOpts::with_tol(1e-9);
        for s in [re(0.9), re(1.3), Complex64::new(0.8, 1.0)] {
            let (num, err) = distance_zeta_numeric(&drum, s, &opts, VolumeBackend::Exact).unwrap();
            let want = expr.eval(s);
            assert!(
                (num - want).norm() < 1e-4 * want.norm().max(1.0) + 10.0 * err + 1e-6,
                "s={s}: {num} vs {want} (err {err:e})"
            );
        }
    }

    #[test]
    fn mellin_matches_distance_over_n_minus_s() {
        let drum = RelativeFractalDrum::cantor();
        let (expr, _) = catalog_expr(&drum).unwrap();
        let opts = QuadratureOpts::with_tol(1e-9);
        let s = re(0.9);
        let (mellin, _) = mellin_zeta_numeric(&drum, s, &opts, VolumeBackend::Exact).unwrap();
        let want = expr.eval(s) / (1.0 - s);
        assert!((mellin - want).norm() < 1e-5 * want.norm().max(1.0), "{mellin} vs {want}");
    }
}
