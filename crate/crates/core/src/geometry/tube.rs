//! Exact tube-volume formulas for the catalog sets, plus the stochastic
//! and grid backends.
//!
//! Every catalog set is a complement of removed open cells, so the inner
//! covered area at scale `t` is the cell area minus the erosion of each
//! cell by `t`. The per-cell erosions are elementary (triangle, square,
//! cube, one octagon) and the generation sums saturate geometrically,
//! which makes these formulas exact with finitely many terms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::series::{weighted_gap_sum_tail, GapSeries};

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Inner covered area of the Sierpinski gasket drum (A, unit triangle):
/// `√3/4 − Σ_n 3^{n-1} (√3/4)(2^{-n} − 2√3 t)₊²`.
pub fn gasket_inner_tube(t: f64) -> f64 {
    // sum the covered collar of every deleted triangle directly: positive
    // increments only (no cancellation at tiny t), total hole area per
    // generation decays by 3/4, and the saturated tail is geometric
    let mut covered = 0.0;
    let mut hole_area = SQRT3 / 16.0; // count · (√3/4) · side², gen 1
    let mut side = 0.5;
    loop {
        let x = 2.0 * SQRT3 * t / side;
        if x >= 1.0 {
            // this and all deeper generations are fully covered
            covered += hole_area / (1.0 - 0.75);
            break;
        }
        covered += hole_area * x * (2.0 - x);
        hole_area *= 0.75;
        side *= 0.5;
    }
    covered
}

/// Outer collar of the unit triangle: three side rectangles plus vertex
/// sectors totaling a full disk.
pub fn gasket_outer_collar(t: f64) -> f64 {
    3.0 * t + PI * t * t
}

/// Inner covered volume of the 3-carpet drum (A, unit cube).
pub fn carpet3_inner_tube(t: f64) -> f64 {
    let mut covered = 0.0;
    let mut hole_vol = 1.0 / 27.0; // count · side³, decays by 26/27
    let mut side = 1.0 / 3.0;
    loop {
        let x = 2.0 * t / side;
        if x >= 1.0 {
            covered += hole_vol * 27.0;
            break;
        }
        covered += hole_vol * x * (3.0 - 3.0 * x + x * x);
        hole_vol *= 26.0 / 27.0;
        side /= 3.0;
    }
    covered
}

/// Outer collar of the unit cube: faces, quarter-cylinder edges, sphere
/// corners.
pub fn carpet3_outer_collar(t: f64) -> f64 {
    6.0 * t + 3.0 * PI * t * t + 4.0 * PI * t * t * t / 3.0
}

/// Inner covered area of the 1/2-square fractal inside the unit square:
/// `1 − Σ_n 2^n (2^{-n} − 2t)₊²`.
pub fn half_square_inner_tube(t: f64) -> f64 {
    let mut covered = 0.0;
    let mut hole_area = 0.5; // count · side², halves each generation
    let mut side = 0.5;
    loop {
        let x = 2.0 * t / side;
        if x >= 1.0 {
            covered += hole_area * 2.0;
            break;
        }
        covered += hole_area * x * (2.0 - x);
        hole_area *= 0.5;
        side *= 0.5;
    }
    covered
}

/// Outer collar of the unit square.
pub fn square_outer_collar(t: f64) -> f64 {
    4.0 * t + PI * t * t
}

/// Uncovered (eroded) area of the 1/3-square generator octagon at scale
/// `τ`: the inner offset square minus the two grown corner squares, plus
/// their lens overlap once the rounded corners meet. Saturates at τ = 1/3.
pub fn third_square_generator_uncovered(tau: f64) -> f64 {
    if tau >= 1.0 / 3.0 {
        return 0.0;
    }
    let inner = (1.0 - 2.0 * tau) * (1.0 - 2.0 * tau);
    let grown = 1.0 / 9.0 - (1.0 - PI / 4.0) * tau * tau;
    // distance between the two reflex corners of the octagon
    let d = std::f64::consts::SQRT_2 / 3.0;
    let lens = if 2.0 * tau > d {
        2.0 * tau * tau * (d / (2.0 * tau)).acos() - 0.5 * d * (4.0 * tau * tau - d * d).sqrt()
    } else {
        0.0
    };
    (inner - 2.0 * grown + lens).max(0.0)
}

/// Inner covered area of the 1/3-square fractal inside the unit square:
/// generation `n` holds `2^n` octagons at scale `3^{-n}`.
pub fn third_square_inner_tube(t: f64) -> f64 {
    let gen_area = 7.0 / 9.0;
    let mut acc = 0.0;
    let mut weight = 1.0; // 2^n 9^{-n}
    let mut scale = 1.0;
    loop {
        let tau = t / scale;
        if tau >= 1.0 / 3.0 {
            // every deeper generation is fully covered; geometric tail
            acc += weight * gen_area / (1.0 - 2.0 / 9.0);
            break;
        }
        acc += weight * third_square_generator_covered(tau);
        weight *= 2.0 / 9.0;
        scale /= 3.0;
    }
    acc
}

/// Covered area of the generator octagon at scale `τ`, cancellation-free:
/// below the first feature size the exact collar expansion applies.
pub fn third_square_generator_covered(tau: f64) -> f64 {
    if tau <= 1.0 / 6.0 {
        // perimeter collar with corner corrections: six convex right
        // angles overlap (−τ² each), two reflex corners add quarter disks
        4.0 * tau - (6.0 - PI / 2.0) * tau * tau
    } else {
        7.0 / 9.0 - third_square_generator_uncovered(tau)
    }
}

/// Exact tube volume of the fractal nest (concentric circles of radii
/// `j^{-a}` inside the unit disk): the uncovered set is the union of the
/// annuli between consecutive circles that are more than `2t` apart, plus
/// a residual center disk for finitely truncated nests (empty here since
/// the radii accumulate at the origin).
pub fn nest_tube(a: f64, t: f64) -> f64 {
    // J = last index with ℓ_j > 2t; uncovered telescopes to
    // π[(1 − a_{J+1}²) − 2t(Σ_{j≤J} a_j + Σ_{j≤J} a_{j+1})]
    // and the residual disk radius max(0, a_{j*} − t) vanishes because the
    // radii accumulate at the origin
    let j_big = crate::geometry::string::a_string_first_below(a, 2.0 * t) - 1.0;
    if j_big < 0.5 {
        return PI;
    }
    let aj1 = (j_big + 1.0).powf(-a);
    let s_j = crate::series::power_sum(a, j_big);
    let s_j1 = crate::series::power_sum(a, j_big + 1.0);
    PI * (aj1 * aj1 + 2.0 * t * (s_j + s_j1 - 1.0))
}

/// Exact tube volume of the geometric chirp: each rectangle contributes
/// strips of width `min(2t, b_j)` at height `h_j`.
pub fn chirp_tube(alpha: f64, beta: f64, t: f64) -> f64 {
    let c = 1.0 / beta;
    let rho = alpha / beta;
    // widths b_j are decreasing: strips until b_j <= 2t, full rectangles after
    let jb = crate::geometry::string::a_string_first_below(c, 2.0 * t);
    let covered = 2.0 * t * crate::series::power_sum(rho, jb - 1.0);
    covered + weighted_gap_sum_tail(GapSeries::new(c, rho), jb, 1e-14)
}

/// Total area of the chirp region `Ω = ⊔ R_j`.
pub fn chirp_omega(alpha: f64, beta: f64) -> f64 {
    weighted_gap_sum_tail(GapSeries::new(1.0 / beta, alpha / beta), 1.0, 1e-14)
}

/// A deterministic Monte Carlo distance profile: `n` points sampled from a
/// region of volume `vol`, with the sorted distances to the set. Any tube
/// volume `V(t)` (and its 1σ error bar) can then be read off by rank.
#[derive(Debug, Clone)]
pub struct DistanceProfile {
    pub distances: Vec<f64>,
    pub region_volume: f64,
}

impl DistanceProfile {
    /// `|A_t ∩ region|` estimate and CLT 1σ error.
    pub fn tube_volume(&self, t: f64) -> (f64, f64) {
        let n = self.distances.len();
        let k = self.distances.partition_point(|&d| d < t);
        let p = k as f64 / n as f64;
        let var = (p * (1.0 - p) / n as f64).max(1.0 / (n as f64 * n as f64));
        (self.region_volume * p, self.region_volume * var.sqrt())
    }

    /// Monte Carlo estimate of `∫ f(d(x)) dx` over the region, with a 1σ
    /// error bar; used by the direct distance-zeta backend.
    pub fn integrate<F: Fn(f64) -> Complex64 + Sync>(&self, f: F) -> (Complex64, f64) {
        let n = self.distances.len() as f64;
        let (sum, sum2) = self
            .distances
            .par_iter()
            .map(|&d| {
                let v = f(d);
                (v, v.norm_sqr())
            })
            .reduce(
                || (Complex64::new(0.0, 0.0), 0.0),
                |a, b| (a.0 + b.0, a.1 + b.1),
            );
        let mean = sum / n;
        let var = (sum2 / n - mean.norm_sqr()).max(0.0);
        (
            self.region_volume * mean,
            self.region_volume * (var / n).sqrt(),
        )
    }
}

/// Deterministic batched sampler. Batch `i` uses an independent ChaCha
/// stream, so the profile is bit-identical for a given `(salt, seed, n)`
/// regardless of thread schedule.
pub fn sample_profile<F>(
    n: u64,
    seed: u64,
    salt: u64,
    region_volume: f64,
    sampler: F,
) -> DistanceProfile
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    const BATCH: u64 = 1 << 16;
    let batches = n.div_ceil(BATCH);
    let sampler = &sampler;
    let mut distances: Vec<f64> = (0..batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut key = [0u8; 32];
            key[..8].copy_from_slice(&seed.to_le_bytes());
            key[8..16].copy_from_slice(&salt.to_le_bytes());
            key[16..24].copy_from_slice(&b.to_le_bytes());
            let mut rng = ChaCha8Rng::from_seed(key);
            let count = BATCH.min(n - b * BATCH);
            (0..count).map(move |_| sampler(&mut rng)).collect::<Vec<_>>()
        })
        .collect();
    distances.sort_by(|a, b| a.partial_cmp(b).unwrap());
    DistanceProfile { distances, region_volume }
}

/// Uniform point in the unit triangle (0,0),(1,0),(1/2,√3/2).
pub fn sample_unit_triangle(rng: &mut ChaCha8Rng) -> [f64; 2] {
    let mut u: f64 = rng.gen();
    let mut v: f64 = rng.gen();
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    // p = u·v1 + v·v2 with v1=(1,0), v2=(1/2,√3/2)
    [u + 0.5 * v, SQRT3 / 2.0 * v]
}

/// Midpoint-grid estimate over an axis-aligned box: counts cells whose
/// midpoint is covered; the error bound counts cells within half a cell
/// diagonal of the t-front plus cells straddling the region boundary.
pub struct GridEstimate {
    pub volume: f64,
    pub abs_error: f64,
}

pub fn grid_estimate<FD, FI>(
    lo: &[f64],
    hi: &[f64],
    resolution: usize,
    t: f64,
    in_region: FI,
    distance: FD,
) -> GridEstimate
where
    FD: Fn(&[f64]) -> f64 + Sync,
    FI: Fn(&[f64]) -> bool + Sync,
{
    let dim = lo.len();
    let steps: Vec<f64> = (0..dim).map(|i| (hi[i] - lo[i]) / resolution as f64).collect();
    let cell_vol: f64 = steps.iter().product();
    let half_diag = 0.5 * steps.iter().map(|s| s * s).sum::<f64>().sqrt();
    let total = (resolution as u64).pow(dim as u32);
    let (covered, uncertain) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut p = vec![0.0; dim];
            let mut rem = idx;
            for i in 0..dim {
                let k = rem % resolution as u64;
                rem /= resolution as u64;
                p[i] = lo[i] + (k as f64 + 0.5) * steps[i];
            }
            if !in_region(&p) {
                return (0u64, 0u64);
            }
            let d = distance(&p);
            let covered = (d < t) as u64;
            let uncertain = ((d - t).abs() <= half_diag) as u64;
            (covered, uncertain)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    GridEstimate {
        volume: covered as f64 * cell_vol,
        abs_error: uncertain as f64 * cell_vol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gasket_inner_saturates_at_inradius() {
        // above the first hole's inradius the inner neighborhood fills Ω
        let t = 0.15;
        assert!(t > 1.0 / (4.0 * SQRT3));
        assert!((gasket_inner_tube(t) - SQRT3 / 4.0).abs() < 1e-15);
        // below: strictly less
        assert!(gasket_inner_tube(0.01) < SQRT3 / 4.0);
    }

    #[test]
    fn third_square_generator_erosion_endpoints() {
        // τ→0: nothing covered beyond measure zero
        assert!((third_square_generator_uncovered(1e-12) - 7.0 / 9.0).abs() < 1e-10);
        // collar formula for small τ: 4τ − (6 − π/2)τ²
        for tau in [0.01, 0.05, 0.1] {
            let covered = 7.0 / 9.0 - third_square_generator_uncovered(tau);
            let want = 4.0 * tau - (6.0 - PI / 2.0) * tau * tau;
            assert!((covered - want).abs() < 1e-12, "tau={tau}");
        }
        // saturation exactly at 1/3 (deepest point (2/3,1/3))
        assert!(third_square_generator_uncovered(1.0 / 3.0 - 1e-9) < 1e-8);
        assert_eq!(third_square_generator_uncovered(0.34), 0.0);
    }

    #[test]
    fn third_square_inner_fills_the_square() {
        assert!((third_square_inner_tube(0.34) - 1.0).abs() < 1e-12);
        assert!(third_square_inner_tube(0.001) < 0.1);
    }

    #[test]
    fn nest_volume_against_annulus_oracle() {
        // oracle: direct annuli enumeration at modest j
        let a = 1.0;
        for &t in &[0.2, 0.05, 0.013, 0.004] {
            let mut unc = 0.0;
            for j in 1..200_000u64 {
                let aj = (j as f64).powf(-a);
                let aj1 = ((j + 1) as f64).powf(-a);
                if aj - aj1 > 2.0 * t {
                    unc += PI * ((aj - t).powi(2) - (aj1 + t).powi(2));
                }
            }
            let want = PI - unc;
            let got = nest_tube(a, t);
            assert!((got - want).abs() < 1e-12, "t={t}: {got} vs {want}");
        }
        // saturation: at t = 1/4 the whole disk is covered
        assert!((nest_tube(1.0, 0.25) - PI).abs() < 1e-14);
    }

    #[test]
    fn nest_gauge_scaling_toward_2pi_log() {
        // V(t) ~ 2π t log(1/t): the normalized ratio should drift toward 2π
        let w = |t: f64| nest_tube(1.0, t) / (t * (1.0 / t).ln());
        let w1 = w(1e-4);
        let w2 = w(1e-7);
        assert!((w2 - 2.0 * PI).abs() < (w1 - 2.0 * PI).abs());
        assert!((w2 - 2.0 * PI).abs() / (2.0 * PI) < 0.12, "{w2}");
    }

    #[test]
    fn half_square_inner_binary_points() {
        // exact value at t = 1/16 computed by hand from the removed squares
        let t = 1.0 / 16.0;
        let want = 21.0 / 32.0;
        assert!((half_square_inner_tube(t) - want).abs() < 1e-14);
    }

    #[test]
    fn chirp_tube_against_frozen_values() {
        // Σ_j 1/(√j (j+1)) = 1.860025079221190, frozen from an independent
        // 10^9-term summation with Euler–Maclaurin extrapolation; V(0.01)
        // follows from the strip decomposition 2t·H(7) + Ω − B(7)
        let omega = chirp_omega(-0.5, 1.0);
        assert!((omega - 1.860_025_079_221_190).abs() < 1e-10, "{omega}");
        let v = chirp_tube(-0.5, 1.0, 0.01);
        assert!((v - 0.963_764_909_730_793_2).abs() < 1e-10, "{v}");
        // fast-decay case admits a clean direct oracle
        let (alpha, beta) = (-0.5, 0.5);
        for &t in &[0.05, 0.002] {
            let mut direct = 0.0;
            for j in 1..2_000_000u64 {
                let jf = j as f64;
                let b = jf.powf(-2.0) - (jf + 1.0).powf(-2.0);
                let h = jf.powf(1.0);
                direct += h * b.min(2.0 * t);
            }
            let got = chirp_tube(alpha, beta, t);
            assert!((got - direct).abs() < 1e-5, "t={t}: {got} vs {direct}");
        }
    }

    #[test]
    fn profile_is_deterministic_and_consistent() {
        let p1 = sample_profile(100_000, 42, 7, 1.0, |rng| rng.gen::<f64>());
        let p2 = sample_profile(100_000, 42, 7, 1.0, |rng| rng.gen::<f64>());
        assert_eq!(p1.distances, p2.distances);
        // uniform distances: V(t) = t
        let (v, e) = p1.tube_volume(0.3);
        assert!((v - 0.3).abs() < 4.0 * e);
    }
}
