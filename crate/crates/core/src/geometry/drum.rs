//! Relative fractal drums: a set `A` together with a finite-volume region
//! `Ω`, with exact, grid and Monte Carlo tube-volume backends.
//!
//! Catalog bounded sets (gasket, 3-carpet, 1/2- and 1/3-square) are stored
//! in the "absolute" view `Ω = A_δ`, which splits their tube volume into an
//! inner part (within the convex core) and a closed-form outer collar.
//! String-like drums (Cantor string, a-string, nest, chirp) are genuinely
//! relative and carry their natural `Ω`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::catalog::*;
use crate::geometry::string::{moran_real_root, FractalString};
use crate::geometry::tube::*;

/// A multiset of contraction ratios with the ambient dimension they act in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioList {
    pub ratios: Vec<f64>,
    pub ambient_dim: u32,
}

impl RatioList {
    pub fn new(ratios: Vec<f64>, ambient_dim: u32) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::InvalidInput("ratio list must be nonempty".into()));
        }
        if ratios.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidInput("ratios must lie in (0,1)".into()));
        }
        Ok(Self { ratios, ambient_dim })
    }

    /// `Σ r_j^N`, the volume contraction of one spray generation.
    pub fn volume_ratio_sum(&self) -> f64 {
        self.ratios.iter().map(|r| r.powi(self.ambient_dim as i32)).sum()
    }

    /// Unique real Moran root `σ0` of `Σ r_j^s = 1`.
    pub fn similarity_dimension(&self) -> f64 {
        moran_real_root(&self.ratios)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DrumKind {
    StringDrum(FractalString),
    Cantor,
    SierpinskiGasket,
    Carpet3D,
    HalfSquare,
    ThirdSquare,
    FractalNest { a: f64 },
    GeometricChirp { alpha: f64, beta: f64 },
    AString { a: f64 },
    Spray { generator: Box<RelativeFractalDrum>, ratios: RatioList },
    Sampled { points: Vec<Vec<f64>>, box_min: Vec<f64>, box_max: Vec<f64> },
}

/// Tube-volume backends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TubeMethod {
    Exact,
    Grid { resolution: usize },
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelativeFractalDrum {
    kind: DrumKind,
    /// Neighborhood parameter δ (already in scaled units).
    delta: f64,
    /// Affine scale relative to the unit construction.
    scale: f64,
}

impl RelativeFractalDrum {
    pub fn new(kind: DrumKind, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if let DrumKind::Spray { generator, ratios } = &kind {
            if ratios.volume_ratio_sum() >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "spray needs Σ r_j^N < 1, got {}",
                    ratios.volume_ratio_sum()
                )));
            }
            if ratios.ambient_dim != generator.ambient_dim() {
                return Err(Error::InvalidInput("spray ratio list dimension mismatch".into()));
            }
        }
        if let DrumKind::GeometricChirp { alpha, beta } = kind {
            if !(-1.0 < alpha && alpha < 0.0 && beta > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "chirp needs α ∈ (−1,0), β > 0; got α={alpha}, β={beta}"
                )));
            }
        }
        Ok(Self { kind, delta, scale: 1.0 })
    }

    pub fn cantor() -> Self {
        Self { kind: DrumKind::Cantor, delta: 1.0 / 6.0, scale: 1.0 }
    }

    pub fn gasket() -> Self {
        // δ > 1/(4√3) keeps the δ-neighborhood simply connected
        Self { kind: DrumKind::SierpinskiGasket, delta: 0.2, scale: 1.0 }
    }

    pub fn carpet3() -> Self {
        Self { kind: DrumKind::Carpet3D, delta: 0.2, scale: 1.0 }
    }

    pub fn half_square() -> Self {
        Self { kind: DrumKind::HalfSquare, delta: 1.0, scale: 1.0 }
    }

    pub fn third_square() -> Self {
        Self { kind: DrumKind::ThirdSquare, delta: 1.0, scale: 1.0 }
    }

    pub fn fractal_nest(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidInput("nest needs a > 0".into()));
        }
        let l1 = 1.0 - (2.0f64).powf(-a);
        Ok(Self { kind: DrumKind::FractalNest { a }, delta: l1 / 2.0, scale: 1.0 })
    }

    pub fn geometric_chirp(alpha: f64, beta: f64) -> Result<Self> {
        let b1 = 1.0 - (2.0f64).powf(-1.0 / beta);
        Self::new(DrumKind::GeometricChirp { alpha, beta }, b1 / 2.0)
    }

    pub fn a_string(a: f64) -> Result<Self> {
        let l1 = 1.0 - (2.0f64).powf(-a);
        Ok(Self { kind: DrumKind::AString { a }, delta: l1 / 2.0, scale: 1.0 })
    }

    pub fn string_drum(s: FractalString) -> Self {
        let delta = s.first_length() / 2.0;
        Self { kind: DrumKind::StringDrum(s), delta, scale: 1.0 }
    }

    pub fn spray(generator: RelativeFractalDrum, ratios: RatioList) -> Result<Self> {
        let delta = generator.saturation_scale();
        Self::new(DrumKind::Spray { generator: Box::new(generator), ratios }, delta)
    }

    pub fn sampled(points: Vec<Vec<f64>>, box_min: Vec<f64>, box_max: Vec<f64>) -> Result<Self> {
        if box_min.len() != box_max.len() || box_min.is_empty() {
            return Err(Error::InvalidInput("box bounds must have matching dimension".into()));
        }
        let diag: f64 =
            box_min.iter().zip(&box_max).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        Ok(Self {
            kind: DrumKind::Sampled { points, box_min, box_max },
            delta: diag.max(1e-9),
            scale: 1.0,
        })
    }

    pub fn kind(&self) -> &DrumKind {
        &self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn ambient_dim(&self) -> u32 {
        match &self.kind {
            DrumKind::StringDrum(_) | DrumKind::Cantor | DrumKind::AString { .. } => 1,
            DrumKind::SierpinskiGasket
            | DrumKind::HalfSquare
            | DrumKind::ThirdSquare
            | DrumKind::FractalNest { .. }
            | DrumKind::GeometricChirp { .. } => 2,
            DrumKind::Carpet3D => 3,
            DrumKind::Spray { generator, .. } => generator.ambient_dim(),
            DrumKind::Sampled { box_min, .. } => box_min.len() as u32,
        }
    }

    /// Affine rescaling `(A, Ω) ↦ (λA, λΩ)`; δ scales along.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut d = self.clone();
        match &mut d.kind {
            DrumKind::StringDrum(st) => *st = st.scaled(lambda),
            DrumKind::Sampled { points, box_min, box_max } => {
                for p in points.iter_mut() {
                    for c in p.iter_mut() {
                        *c *= lambda;
                    }
                }
                for c in box_min.iter_mut().chain(box_max.iter_mut()) {
                    *c *= lambda;
                }
            }
            DrumKind::Spray { generator, .. } => {
                **generator = generator.scaled(lambda);
            }
            _ => d.scale *= lambda,
        }
        d.delta *= lambda;
        d
    }

    /// `|Ω|`: the saturated tube volume.
    pub fn omega_volume(&self) -> f64 {
        let s = self.scale;
        let n = self.ambient_dim() as i32;
        let du = self.delta / s; // δ in unit coordinates
        s.powi(n)
            * match &self.kind {
                DrumKind::StringDrum(st) => st.total_length(),
                DrumKind::Cantor => 1.0,
                DrumKind::AString { .. } => 1.0,
                DrumKind::SierpinskiGasket => gasket_inner_tube(du) + gasket_outer_collar(du),
                DrumKind::Carpet3D => carpet3_inner_tube(du) + carpet3_outer_collar(du),
                DrumKind::HalfSquare => half_square_inner_tube(du) + square_outer_collar(du),
                DrumKind::ThirdSquare => third_square_inner_tube(du) + square_outer_collar(du),
                DrumKind::FractalNest { .. } => std::f64::consts::PI,
                DrumKind::GeometricChirp { alpha, beta } => chirp_omega(*alpha, *beta),
                DrumKind::Spray { generator, ratios } => {
                    generator.omega_volume() / (1.0 - ratios.volume_ratio_sum())
                }
                DrumKind::Sampled { box_min, box_max, .. } => {
                    box_min.iter().zip(box_max).map(|(a, b)| b - a).product()
                }
            }
    }

    /// The scale beyond which `V(t)` saturates at `|Ω|`.
    pub fn saturation_scale(&self) -> f64 {
        match &self.kind {
            DrumKind::StringDrum(s) => s.first_length() / 2.0,
            DrumKind::Cantor => self.scale / 6.0,
            DrumKind::AString { a } => self.scale * (1.0 - (2.0f64).powf(-a)) / 2.0,
            DrumKind::SierpinskiGasket
            | DrumKind::Carpet3D
            | DrumKind::HalfSquare
            | DrumKind::ThirdSquare => self.delta,
            DrumKind::FractalNest { a } => self.scale * (1.0 - (2.0f64).powf(-a)) / 2.0,
            DrumKind::GeometricChirp { beta, .. } => {
                self.scale * (1.0 - (2.0f64).powf(-1.0 / beta)) / 2.0
            }
            DrumKind::Spray { generator, .. } => generator.saturation_scale(),
            DrumKind::Sampled { .. } => self.delta,
        }
    }

    /// Analytic Minkowski (box) dimension where known.
    pub fn box_dimension(&self) -> Option<f64> {
        match &self.kind {
            DrumKind::StringDrum(s) => Some(s.abscissa().max(0.0)),
            DrumKind::Cantor => Some((2f64).ln() / (3f64).ln()),
            DrumKind::SierpinskiGasket => Some((3f64).ln() / (2f64).ln()),
            DrumKind::Carpet3D => Some((26f64).ln() / (3f64).ln()),
            DrumKind::HalfSquare | DrumKind::ThirdSquare => Some(1.0),
            DrumKind::FractalNest { a } => Some((2.0 / (a + 1.0)).max(1.0)),
            DrumKind::GeometricChirp { alpha, beta } => {
                Some(2.0 - (1.0 + alpha) / (1.0 + beta))
            }
            DrumKind::AString { a } => Some(1.0 / (a + 1.0)),
            DrumKind::Spray { generator, ratios } => {
                let sigma0 = ratios.similarity_dimension();
                generator.box_dimension().map(|dg| sigma0.max(dg))
            }
            DrumKind::Sampled { .. } => None,
        }
    }

    /// Catalog bounded sets are stored as `(A, A_δ)`; those drums add a
    /// closed-form outer collar to the inner (core) tube volume.
    pub fn is_absolute(&self) -> bool {
        matches!(
            self.kind,
            DrumKind::SierpinskiGasket
                | DrumKind::Carpet3D
                | DrumKind::HalfSquare
                | DrumKind::ThirdSquare
        )
    }

    /// Closed-form outer collar volume `|A_t \ core|` for absolute drums
    /// (zero for relative drums), before saturation clamping.
    pub fn outer_collar(&self, t: f64) -> f64 {
        let s = self.scale;
        let n = self.ambient_dim() as i32;
        let tu = t / s;
        s.powi(n)
            * match &self.kind {
                DrumKind::SierpinskiGasket => gasket_outer_collar(tu),
                DrumKind::Carpet3D => carpet3_outer_collar(tu),
                DrumKind::HalfSquare | DrumKind::ThirdSquare => square_outer_collar(tu),
                _ => 0.0,
            }
    }

    /// Distance from a point to `A`, to absolute tolerance `tol`.
    pub fn distance(&self, point: &[f64], tol: f64) -> Result<f64> {
        if point.len() != self.ambient_dim() as usize {
            return Err(Error::InvalidInput(format!(
                "point dimension {} does not match ambient dimension {}",
                point.len(),
                self.ambient_dim()
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidInput("tol must be positive".into()));
        }
        // string and sampled drums work in absolute coordinates
        match &self.kind {
            DrumKind::StringDrum(st) => return Ok(st.distance(point[0])),
            DrumKind::Sampled { points, .. } => {
                if points.is_empty() {
                    return Err(Error::UnsupportedKind(
                        "sampled drum with empty point set".into(),
                    ));
                }
                return Ok(points
                    .iter()
                    .map(|p| {
                        p.iter().zip(point).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
                    })
                    .fold(f64::INFINITY, f64::min));
            }
            DrumKind::Spray { .. } => {
                return Err(Error::UnsupportedKind(
                    "abstract sprays have no concrete embedding for distance queries".into(),
                ))
            }
            _ => {}
        }
        let s = self.scale;
        let u: Vec<f64> = point.iter().map(|c| c / s).collect();
        let tu = tol / s;
        Ok(s * match &self.kind {
            DrumKind::Cantor => cantor_distance(u[0], tu)?,
            DrumKind::AString { a } => FractalString::a_string(*a)?.distance(u[0]),
            DrumKind::SierpinskiGasket => gasket_distance([u[0], u[1]], tu)?,
            DrumKind::Carpet3D => carpet3_distance([u[0], u[1], u[2]], tu)?,
            DrumKind::HalfSquare => half_square_distance([u[0], u[1]], tu)?,
            DrumKind::ThirdSquare => third_square_distance([u[0], u[1]], tu)?,
            DrumKind::FractalNest { a } => nest_distance([u[0], u[1]], *a),
            DrumKind::GeometricChirp { alpha, beta } => chirp_distance([u[0], u[1]], *alpha, *beta),
            _ => unreachable!(),
        })
    }

    /// Exact tube volume where a closed form exists.
    fn exact_tube(&self, t: f64) -> Result<f64> {
        if let DrumKind::StringDrum(st) = &self.kind {
            return Ok(st.tube_volume(t));
        }
        let s = self.scale;
        let n = self.ambient_dim() as i32;
        let tu = t / s;
        let du = self.delta / s;
        let v = match &self.kind {
            DrumKind::StringDrum(_) => unreachable!(),
            DrumKind::Cantor => FractalString::cantor().tube_volume(tu),
            DrumKind::AString { a } => FractalString::a_string(*a)?.tube_volume(tu),
            DrumKind::SierpinskiGasket => {
                let tc = tu.min(du);
                gasket_inner_tube(tc) + gasket_outer_collar(tc)
            }
            DrumKind::Carpet3D => {
                let tc = tu.min(du);
                carpet3_inner_tube(tc) + carpet3_outer_collar(tc)
            }
            DrumKind::HalfSquare => {
                let tc = tu.min(du);
                half_square_inner_tube(tc) + square_outer_collar(tc)
            }
            DrumKind::ThirdSquare => {
                let tc = tu.min(du);
                third_square_inner_tube(tc) + square_outer_collar(tc)
            }
            DrumKind::FractalNest { a } => nest_tube(*a, tu),
            DrumKind::GeometricChirp { alpha, beta } => chirp_tube(*alpha, *beta, tu),
            DrumKind::Spray { generator, ratios } => {
                return spray_tube(generator, ratios, t);
            }
            DrumKind::Sampled { .. } => {
                return Err(Error::MethodNotAvailable(
                    "no exact tube volume for sampled drums".into(),
                ))
            }
        };
        Ok(v * s.powi(n))
    }

    /// `V(t) = |A_t ∩ Ω|` with a one-sided error bound (zero for exact).
    pub fn tube_volume(&self, t: f64, method: &TubeMethod) -> Result<(f64, f64)> {
        if !(t > 0.0) {
            return Err(Error::OutOfRange("tube volume needs t > 0".into()));
        }
        match method {
            TubeMethod::Exact => Ok((self.exact_tube(t)?, 0.0)),
            TubeMethod::Grid { resolution } => self.grid_tube(t, *resolution),
            TubeMethod::MonteCarlo { samples, seed } => {
                let profile = self.distance_profile(*samples, *seed)?;
                let (mut v, e) = profile.tube_volume(t);
                if self.is_absolute() {
                    let tc = t.min(self.delta);
                    v += self.outer_collar(tc);
                    let (vc, _) = profile.tube_volume(tc);
                    if tc < t {
                        // beyond δ the absolute drum saturates
                        v = vc + self.outer_collar(tc);
                    }
                }
                Ok((v, e))
            }
        }
    }

    fn grid_tube(&self, t: f64, resolution: usize) -> Result<(f64, f64)> {
        let (lo, hi) = self.core_box()?;
        let est = grid_estimate(
            &lo,
            &hi,
            resolution,
            t,
            |p| self.in_core(p),
            |p| self.distance(p, 1e-9).unwrap_or(f64::INFINITY),
        );
        let mut v = est.volume;
        if self.is_absolute() {
            v += self.outer_collar(t.min(self.delta));
        }
        Ok((v, est.abs_error))
    }

    /// Monte Carlo distance profile over the drum's core region,
    /// bit-reproducible for a given `(drum, samples, seed)`.
    pub fn distance_profile(&self, samples: u64, seed: u64) -> Result<DistanceProfile> {
        let s = self.scale;
        let salt = self.sampling_salt();
        match &self.kind {
            DrumKind::StringDrum(st) => {
                let total = st.total_length();
                let stc = st.clone();
                Ok(sample_profile(samples, seed, salt, total, move |rng| {
                    stc.distance(rng.gen::<f64>() * total)
                }))
            }
            DrumKind::Cantor => Ok(sample_profile(samples, seed, salt, s, move |rng| {
                s * cantor_distance(rng.gen::<f64>(), 1e-14).unwrap()
            })),
            DrumKind::AString { a } => {
                let st = FractalString::a_string(*a)?;
                Ok(sample_profile(samples, seed, salt, s, move |rng| {
                    s * st.distance(rng.gen::<f64>())
                }))
            }
            DrumKind::SierpinskiGasket => {
                let vol = s * s * SQRT3_LOCAL / 4.0;
                Ok(sample_profile(samples, seed, salt, vol, move |rng| {
                    let p = sample_unit_triangle(rng);
                    s * gasket_distance(p, 1e-14).unwrap()
                }))
            }
            DrumKind::Carpet3D => Ok(sample_profile(samples, seed, salt, s.powi(3), move |rng| {
                let p = [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
                s * carpet3_distance(p, 1e-14).unwrap()
            })),
            DrumKind::HalfSquare => Ok(sample_profile(samples, seed, salt, s * s, move |rng| {
                s * half_square_distance([rng.gen::<f64>(), rng.gen::<f64>()], 1e-14).unwrap()
            })),
            DrumKind::ThirdSquare => Ok(sample_profile(samples, seed, salt, s * s, move |rng| {
                s * third_square_distance([rng.gen::<f64>(), rng.gen::<f64>()], 1e-14).unwrap()
            })),
            DrumKind::FractalNest { a } => {
                let a = *a;
                let vol = std::f64::consts::PI * s * s;
                Ok(sample_profile(samples, seed, salt, vol, move |rng| {
                    let r = rng.gen::<f64>().sqrt();
                    let th = rng.gen::<f64>() * std::f64::consts::TAU;
                    s * nest_distance([r * th.cos(), r * th.sin()], a)
                }))
            }
            DrumKind::GeometricChirp { alpha, beta } => {
                let (alpha, beta) = (*alpha, *beta);
                // inverse-CDF over rectangle areas
                let c = 1.0 / beta;
                let rho = alpha / beta;
                let omega = chirp_omega(alpha, beta);
                let mut cum = Vec::new();
                let mut acc = 0.0;
                let mut j = 1u64;
                while acc < omega * (1.0 - 1e-9) && j < 40_000_000 {
                    let jf = j as f64;
                    let b = jf.powf(-c) * (-(-c * (1.0 / jf).ln_1p()).exp_m1());
                    let h = jf.powf(-rho);
                    acc += b * h;
                    cum.push(acc);
                    j += 1;
                }
                let vol = acc;
                Ok(sample_profile(samples, seed, salt, vol * s * s, move |rng| {
                    let target = rng.gen::<f64>() * vol;
                    let idx = cum.partition_point(|&v| v < target);
                    let j = (idx + 1) as f64;
                    let x1 = (j + 1.0).powf(-c);
                    let x0 = j.powf(-c);
                    let h = j.powf(-rho);
                    let p = [x1 + rng.gen::<f64>() * (x0 - x1), rng.gen::<f64>() * h];
                    s * chirp_distance(p, alpha, beta)
                }))
            }
            DrumKind::Spray { .. } => Err(Error::MethodNotAvailable(
                "abstract sprays have no sampling domain".into(),
            )),
            DrumKind::Sampled { points, box_min, box_max } => {
                if points.is_empty() {
                    return Err(Error::UnsupportedKind(
                        "sampled drum with empty point set".into(),
                    ));
                }
                let vol: f64 = box_min.iter().zip(box_max).map(|(a, b)| b - a).product();
                let (points, box_min, box_max) =
                    (points.clone(), box_min.clone(), box_max.clone());
                Ok(sample_profile(samples, seed, salt, vol, move |rng| {
                    let p: Vec<f64> = box_min
                        .iter()
                        .zip(&box_max)
                        .map(|(a, b)| a + rng.gen::<f64>() * (b - a))
                        .collect();
                    points
                        .iter()
                        .map(|q| {
                            q.iter().zip(&p).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
                        })
                        .fold(f64::INFINITY, f64::min)
                }))
            }
        }
    }

    /// Axis-aligned bounding box of the core region (grid backend).
    fn core_box(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let s = self.scale;
        Ok(match &self.kind {
            DrumKind::StringDrum(st) => (vec![0.0], vec![st.total_length()]),
            DrumKind::Cantor | DrumKind::AString { .. } => (vec![0.0], vec![s]),
            DrumKind::SierpinskiGasket => (vec![0.0, 0.0], vec![s, s * SQRT3_LOCAL / 2.0]),
            DrumKind::HalfSquare | DrumKind::ThirdSquare => (vec![0.0, 0.0], vec![s, s]),
            DrumKind::Carpet3D => (vec![0.0, 0.0, 0.0], vec![s, s, s]),
            DrumKind::FractalNest { .. } => (vec![-s, -s], vec![s, s]),
            DrumKind::GeometricChirp { .. } => (vec![0.0, 0.0], vec![s, f64::INFINITY]),
            DrumKind::Spray { .. } => {
                return Err(Error::MethodNotAvailable("no grid domain for sprays".into()))
            }
            DrumKind::Sampled { box_min, box_max, .. } => (box_min.clone(), box_max.clone()),
        })
    }

    fn in_core(&self, p: &[f64]) -> bool {
        let s = self.scale;
        match &self.kind {
            DrumKind::SierpinskiGasket => {
                let u = [p[0] / s, p[1] / s];
                let l2 = 2.0 * u[1] / SQRT3_LOCAL;
                let l1 = u[0] - u[1] / SQRT3_LOCAL;
                let l0 = 1.0 - l1 - l2;
                l0 >= 0.0 && l1 >= 0.0 && l2 >= 0.0
            }
            DrumKind::FractalNest { .. } => p[0] * p[0] + p[1] * p[1] <= s * s,
            _ => true,
        }
    }

    fn sampling_salt(&self) -> u64 {
        // stable per-kind salt so different drums decorrelate under one seed
        match &self.kind {
            DrumKind::StringDrum(_) => 1,
            DrumKind::Cantor => 2,
            DrumKind::SierpinskiGasket => 3,
            DrumKind::Carpet3D => 4,
            DrumKind::HalfSquare => 5,
            DrumKind::ThirdSquare => 6,
            DrumKind::FractalNest { .. } => 7,
            DrumKind::GeometricChirp { .. } => 8,
            DrumKind::AString { .. } => 9,
            DrumKind::Spray { .. } => 10,
            DrumKind::Sampled { .. } => 11,
        }
    }

    /// Serialize to the JSON drum descriptor.
    pub fn to_descriptor(&self) -> Value {
        let (kind, params) = match &self.kind {
            DrumKind::StringDrum(s) => (
                "string_drum",
                serde_json::to_value(s.generator()).unwrap(),
            ),
            DrumKind::Cantor => ("cantor", json!({})),
            DrumKind::SierpinskiGasket => ("sierpinski_gasket", json!({})),
            DrumKind::Carpet3D => ("carpet_3d", json!({})),
            DrumKind::HalfSquare => ("half_square", json!({})),
            DrumKind::ThirdSquare => ("third_square", json!({})),
            DrumKind::FractalNest { a } => ("fractal_nest", json!({ "a": a })),
            DrumKind::GeometricChirp { alpha, beta } => {
                ("geometric_chirp", json!({ "alpha": alpha, "beta": beta }))
            }
            DrumKind::AString { a } => ("a_string", json!({ "a": a })),
            DrumKind::Spray { generator, ratios } => (
                "spray",
                json!({
                    "generator": generator.to_descriptor(),
                    "ratios": ratios.ratios,
                    "ambient_dim": ratios.ambient_dim,
                }),
            ),
            DrumKind::Sampled { points, box_min, box_max } => (
                "sampled",
                json!({ "points": points, "box_min": box_min, "box_max": box_max }),
            ),
        };
        json!({ "kind": kind, "params": params, "delta": self.delta, "scale": self.scale })
    }

    /// Parse a JSON drum descriptor.
    pub fn from_descriptor(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("descriptor missing \"kind\"".into()))?;
        let params = v.get("params").cloned().unwrap_or_else(|| json!({}));
        let getf = |p: &Value, key: &str| -> Result<f64> {
            p.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::InvalidInput(format!("descriptor missing numeric \"{key}\"")))
        };
        let mut drum = match kind {
            "string_drum" => {
                let gen: crate::geometry::string::StringGenerator =
                    serde_json::from_value(params.clone())
                        .map_err(|e| Error::InvalidInput(format!("bad string generator: {e}")))?;
                let s = match gen {
                    crate::geometry::string::StringGenerator::Explicit(l) => {
                        FractalString::explicit(l)?
                    }
                    crate::geometry::string::StringGenerator::AString { a } => {
                        FractalString::a_string(a)?
                    }
                    crate::geometry::string::StringGenerator::SelfSimilar { ratios, gaps } => {
                        FractalString::self_similar(ratios, gaps)?
                    }
                };
                Self::string_drum(s)
            }
            "cantor" => Self::cantor(),
            "sierpinski_gasket" => Self::gasket(),
            "carpet_3d" => Self::carpet3(),
            "half_square" => Self::half_square(),
            "third_square" => Self::third_square(),
            "fractal_nest" => Self::fractal_nest(getf(&params, "a")?)?,
            "geometric_chirp" => {
                Self::geometric_chirp(getf(&params, "alpha")?, getf(&params, "beta")?)?
            }
            "a_string" => Self::a_string(getf(&params, "a")?)?,
            "spray" => {
                let gv = params
                    .get("generator")
                    .ok_or_else(|| Error::InvalidInput("spray needs \"generator\"".into()))?;
                let generator = Self::from_descriptor(gv)?;
                let ratios: Vec<f64> = serde_json::from_value(
                    params.get("ratios").cloned().unwrap_or(Value::Null),
                )
                .map_err(|e| Error::InvalidInput(format!("bad spray ratios: {e}")))?;
                let dim = params
                    .get("ambient_dim")
                    .and_then(Value::as_u64)
                    .unwrap_or(generator.ambient_dim() as u64) as u32;
                Self::spray(generator, RatioList::new(ratios, dim)?)?
            }
            "sampled" => {
                let points: Vec<Vec<f64>> = serde_json::from_value(
                    params.get("points").cloned().unwrap_or(Value::Null),
                )
                .map_err(|e| Error::InvalidInput(format!("bad points: {e}")))?;
                let bmin: Vec<f64> = serde_json::from_value(
                    params.get("box_min").cloned().unwrap_or(Value::Null),
                )
                .map_err(|e| Error::InvalidInput(format!("bad box_min: {e}")))?;
                let bmax: Vec<f64> = serde_json::from_value(
                    params.get("box_max").cloned().unwrap_or(Value::Null),
                )
                .map_err(|e| Error::InvalidInput(format!("bad box_max: {e}")))?;
                Self::sampled(points, bmin, bmax)?
            }
            other => {
                return Err(Error::InvalidInput(format!("unknown drum kind \"{other}\"")))
            }
        };
        if let Some(scale) = v.get("scale").and_then(Value::as_f64) {
            if scale != 1.0 {
                drum = drum.scaled(scale);
            }
        }
        if let Some(delta) = v.get("delta").and_then(Value::as_f64) {
            if !(delta > 0.0) {
                return Err(Error::InvalidInput("delta must be positive".into()));
            }
            drum.delta = delta;
        }
        Ok(drum)
    }
}

const SQRT3_LOCAL: f64 = 1.732_050_807_568_877_2;

/// Exact tube volume of an abstract spray: copies with `λ·sat > t` are
/// enumerated by ratio-exponent profile (polynomially many); all smaller
/// copies are saturated and contribute `λ^N |G|`, summed by complementing
/// against `Σ_w λ_w^N = 1/(1 − Σ r_j^N)`.
fn spray_tube(generator: &RelativeFractalDrum, ratios: &RatioList, t: f64) -> Result<f64> {
    let n = ratios.ambient_dim as i32;
    let sat = generator.saturation_scale();
    let vol = generator.omega_volume();
    let vsum = ratios.volume_ratio_sum();
    let distinct = crate::series::distinct_ratios(&ratios.ratios);
    let theta = t / sat;
    let mut above = 0.0f64;
    let mut below = 0.0f64;
    let mut err: Option<Error> = None;
    crate::series::scan_word_products(
        &distinct,
        theta,
        &mut |ways, lambda: f64| {
            if err.is_some() {
                return;
            }
            match generator.tube_volume(t / lambda, &TubeMethod::Exact) {
                Ok((v, _)) => above += ways * lambda.powi(n) * v,
                Err(e) => err = Some(e),
            }
        },
        // saturated subtrees sum to λ^N |G| / (1 − Σ r^N)
        &mut |ways, lambda: f64| below += ways * lambda.powi(n) * vol / (1.0 - vsum),
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(above + below)
}
