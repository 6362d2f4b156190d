//! Zeros of Dirichlet polynomials by argument-principle subdivision.
//!
//! The winding number `(1/2πi) ∮ f'/f ds` over a rectangle counts the
//! enclosed zeros; rectangles with count 0 are discarded, count 1 feeds a
//! Newton polish from the centroid, higher counts subdivide. Contour
//! nodes double until the winding stabilizes to within 1e-3 of an integer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::drum::RatioList;
use crate::geometry::string::moran_real_root;

use super::window::{sort_dimensions, ComplexDimension, Window};
use crate::zeta::expr::DirichletFactor;

/// Result of a Moran-equation scan: all roots in the window plus the
/// always-computed real root `σ0` (flagged by its position in the list).
#[derive(Debug, Clone)]
pub struct MoranRoots {
    pub roots: Vec<ComplexDimension>,
    pub sigma0: f64,
    /// index of σ0 inside `roots` when the window contains it
    pub sigma0_index: Option<usize>,
}

/// Trapezoid winding number of a Dirichlet factor over a rectangle.
/// Returns the (near-integer) count and the minimum of |f| seen on the
/// boundary, used for degeneracy detection.
pub fn winding_number(
    f: &DirichletFactor,
    lo: Complex64,
    hi: Complex64,
    start_nodes: usize,
) -> Result<(f64, f64)> {
    let corners = [
        lo,
        Complex64::new(hi.re, lo.im),
        hi,
        Complex64::new(lo.re, hi.im),
    ];
    let mut nodes = start_nodes.max(16);
    let mut prev: Option<f64> = None;
    loop {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut min_abs = f64::INFINITY;
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            let dz = (b - a) / nodes as f64;
            // trapezoid on f'/f along the edge
            let mut prev_val = {
                let v = f.eval(a);
                min_abs = min_abs.min(v.norm());
                f.eval_derivative(a) / v
            };
            for k in 1..=nodes {
                let z = a + dz * k as f64;
                let v = f.eval(z);
                min_abs = min_abs.min(v.norm());
                let val = f.eval_derivative(z) / v;
                acc += (prev_val + val) * 0.5 * dz;
                prev_val = val;
            }
        }
        let w = (acc / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re;
        if (w - w.round()).abs() < 1e-3 {
            if let Some(p) = prev {
                if (p - w).abs() < 1e-3 {
                    return Ok((w, min_abs));
                }
            }
            prev = Some(w);
        } else {
            prev = None;
        }
        nodes *= 2;
        if nodes > (1 << 21) {
            return Err(Error::BoundaryDegenerate { attempts: 0 });
        }
    }
}

fn newton_polish(f: &DirichletFactor, start: Complex64, tol: f64) -> Option<Complex64> {
    let mut z = start;
    let mut last = f64::INFINITY;
    for _ in 0..80 {
        let v = f.eval(z);
        let d = f.eval_derivative(z);
        if d.norm() == 0.0 {
            return None;
        }
        let step = v / d;
        z -= step;
        let r = f.eval(z).norm();
        if r < tol * 1e-3 || (r < tol && r >= last) {
            return Some(z);
        }
        last = r;
    }
    if f.eval(z).norm() < tol {
        Some(z)
    } else {
        None
    }
}

/// All zeros of `f(s) = q − Σ m_j b_j^s` inside the window, with
/// multiplicities from small-circle winding counts.
pub fn dirichlet_zeros(
    f: &DirichletFactor,
    window: &Window,
    tol: f64,
) -> Result<Vec<ComplexDimension>> {
    let mut found: Vec<(Complex64, u32)> = Vec::new();
    // perturb the window until its boundary is clearly nondegenerate
    let mut lo = Complex64::new(window.sigma_min, -window.tau_max);
    let mut hi = Complex64::new(window.sigma_max, window.tau_max);
    let mut attempt = 0u32;
    let (mut w_total, mut min_abs) = winding_number(f, lo, hi, 256)?;
    while min_abs < 1e-8 {
        attempt += 1;
        if attempt > 8 {
            return Err(Error::BoundaryDegenerate { attempts: 8 });
        }
        let bump = 1e-6 * attempt as f64 * (hi.re - lo.re).max(1.0);
        lo -= Complex64::new(bump, bump * 1.3);
        hi += Complex64::new(bump * 0.7, bump * 1.1);
        let r = winding_number(f, lo, hi, 256)?;
        w_total = r.0;
        min_abs = r.1;
    }
    let expect = w_total.round() as i64;
    if expect > 0 {
        subdivide(f, lo, hi, expect as u32, tol, 0, &mut found)?;
    }

    let mut out: Vec<ComplexDimension> = Vec::new();
    for (z, mult) in found {
        // residue data of the associated scaling zeta 1/f at the zero
        let laurent = if mult == 1 {
            vec![(1.0 / f.eval_derivative(z)).into_parts()]
        } else {
            scaling_laurent(f, z, mult)
        };
        out.push(ComplexDimension {
            omega: (z.re, z.im),
            multiplicity: mult,
            laurent: laurent.into_iter().map(|c| c).collect(),
        });
    }
    sort_dimensions(&mut out);
    Ok(out)
}

trait IntoParts {
    fn into_parts(self) -> (f64, f64);
}
impl IntoParts for Complex64 {
    fn into_parts(self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// Laurent principal part of `1/f` at a zero of order `m`, by contour
/// integration on a small circle.
fn scaling_laurent(f: &DirichletFactor, z: Complex64, m: u32) -> Vec<(f64, f64)> {
    let radius = 1e-3;
    let nodes = 512;
    let mut out = Vec::new();
    for k in (1..=m).rev() {
        // c_{-k} = (1/2πi) ∮ (s−z)^{k-1} / f(s) ds
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..nodes {
            let th = 2.0 * std::f64::consts::PI * i as f64 / nodes as f64;
            let e = Complex64::from_polar(radius, th);
            let s = z + e;
            let d_theta = Complex64::new(0.0, 1.0) * e; // ds/dθ
            acc += e.powu(k - 1) / f.eval(s) * d_theta;
        }
        acc /= nodes as f64;
        out.push((acc.re, acc.im));
    }
    out
}

fn min_abs_on_segment(f: &DirichletFactor, a: Complex64, b: Complex64, samples: usize) -> f64 {
    let mut min_abs = f64::INFINITY;
    for k in 0..=samples {
        let z = a + (b - a) * (k as f64 / samples as f64);
        min_abs = min_abs.min(f.eval(z).norm());
    }
    min_abs
}

fn subdivide(
    f: &DirichletFactor,
    lo: Complex64,
    hi: Complex64,
    count: u32,
    tol: f64,
    depth: u32,
    found: &mut Vec<(Complex64, u32)>,
) -> Result<()> {
    if depth > 60 {
        return Err(Error::MaxSubdivisionDepth(60));
    }
    let centroid = 0.5 * (lo + hi);
    if count == 1 {
        if let Some(z) = newton_polish(f, centroid, tol) {
            if z.re >= lo.re - 1e-9
                && z.re <= hi.re + 1e-9
                && z.im >= lo.im - 1e-9
                && z.im <= hi.im + 1e-9
            {
                push_root(f, z, found);
                return Ok(());
            }
        }
        // Newton escaped: fall through to subdivision
    }
    // tiny box: accept the centroid-polished root regardless of escape
    if (hi - lo).norm() < tol.max(1e-13) {
        if let Some(z) = newton_polish(f, centroid, tol.max(1e-10)) {
            push_root(f, z, found);
            return Ok(());
        }
        return Err(Error::MaxSubdivisionDepth(depth));
    }
    // split the longer side, probing offsets so the split line avoids roots
    let horizontal = hi.re - lo.re <= hi.im - lo.im; // split along Im?
    let fractions = [0.5, 0.55, 0.45, 0.6, 0.4, 0.65, 0.35, 0.52, 0.48];
    for frac in fractions {
        let (a2, b1) = if horizontal {
            let mid = lo.im + frac * (hi.im - lo.im);
            (Complex64::new(lo.re, mid), Complex64::new(hi.re, mid))
        } else {
            let mid = lo.re + frac * (hi.re - lo.re);
            (Complex64::new(mid, lo.im), Complex64::new(mid, hi.im))
        };
        if min_abs_on_segment(f, a2, b1, 96) < 1e-6 {
            continue;
        }
        let pair = [(lo, b1), (a2, hi)];
        let mut windings = [0i64; 2];
        let mut ok = true;
        for (i, (a, b)) in pair.iter().enumerate() {
            match winding_number(f, *a, *b, 128) {
                Ok((w, min_abs)) if min_abs >= 1e-9 => windings[i] = w.round() as i64,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || windings[0] + windings[1] != count as i64 {
            continue;
        }
        for (i, (a, b)) in pair.iter().enumerate() {
            if windings[i] > 0 {
                subdivide(f, *a, *b, windings[i] as u32, tol, depth + 1, found)?;
            }
        }
        return Ok(());
    }
    Err(Error::BoundaryDegenerate { attempts: 8 })
}

fn push_root(f: &DirichletFactor, z: Complex64, found: &mut Vec<(Complex64, u32)>) {
    if found.iter().any(|(r, _)| (r - z).norm() < 1e-9) {
        return;
    }
    // multiplicity via a small-circle winding count
    let r = 1e-6;
    let mult = match winding_number(
        f,
        z - Complex64::new(r, r),
        z + Complex64::new(r, r),
        64,
    ) {
        Ok((w, _)) => w.round().max(1.0) as u32,
        Err(_) => 1,
    };
    found.push((z, mult));
}

/// All solutions of the complexified Moran equation `Σ m_j r_j^s = 1`
/// inside the window. The real root σ0 is always computed by bisection and
/// included (and flagged) whenever the window contains it.
pub fn moran_roots(ratios: &RatioList, window: &Window, tol: f64) -> Result<MoranRoots> {
    let f = DirichletFactor::moran(&ratios.ratios);
    let sigma0 = moran_real_root(&ratios.ratios);
    let mut roots = dirichlet_zeros(&f, window, tol)?;
    let sigma0_in = window.contains(Complex64::new(sigma0, 0.0));
    if sigma0_in && !roots.iter().any(|r| (r.omega() - sigma0).norm() < 1e-7) {
        // ensure σ0 is present even if subdivision grazed it
        let d = f.eval_derivative(Complex64::new(sigma0, 0.0));
        roots.push(ComplexDimension {
            omega: (sigma0, 0.0),
            multiplicity: 1,
            laurent: vec![((1.0 / d).re, (1.0 / d).im)],
        });
        sort_dimensions(&mut roots);
    }
    let sigma0_index = if sigma0_in {
        roots
            .iter()
            .position(|r| (r.omega() - sigma0).norm() < 1e-7)
    } else {
        None
    };
    Ok(MoranRoots { roots, sigma0, sigma0_index })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(a: f64, b: f64, t: f64) -> Window {
        Window::new(a, b, t).unwrap()
    }

    #[test]
    fn cantor_lattice_roots() {
        // {1/3, 1/3}: σ0 = log 2/log 3, vertical spacing 2π/log 3
        let ratios = RatioList::new(vec![1.0 / 3.0, 1.0 / 3.0], 1).unwrap();
        let res = moran_roots(&ratios, &window(0.0, 1.0, 10.0), 1e-12).unwrap();
        let d = (2f64).ln() / (3f64).ln();
        let p = 2.0 * std::f64::consts::PI / (3f64).ln();
        assert_eq!(res.roots.len(), 3, "{:?}", res.roots);
        assert!((res.sigma0 - d).abs() < 1e-12);
        for want in [(d, -p), (d, 0.0), (d, p)] {
            let hit = res
                .roots
                .iter()
                .find(|r| (r.omega() - Complex64::new(want.0, want.1)).norm() < 1e-9)
                .unwrap_or_else(|| panic!("missing root near {want:?}: {:?}", res.roots));
            assert_eq!(hit.multiplicity, 1);
        }
        assert!(res.sigma0_index.is_some());
    }

    #[test]
    fn golden_ratio_roots() {
        // {1/2, 1/4}: x + x² = 1 at x = 2^{-s} gives σ0 = log2 φ
        let ratios = RatioList::new(vec![0.5, 0.25], 1).unwrap();
        let res = moran_roots(&ratios, &window(0.5, 0.9, 10.0), 1e-12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let s0 = phi.ln() / (2f64).ln();
        let p = 2.0 * std::f64::consts::PI / (2f64).ln();
        assert!((res.sigma0 - s0).abs() < 1e-12);
        assert_eq!(res.roots.len(), 3);
        for root in &res.roots {
            assert!((root.omega().re - s0).abs() < 1e-9);
            let k = (root.omega().im / p).round();
            assert!((root.omega().im - k * p).abs() < 1e-8, "{root:?}");
        }
    }

    #[test]
    fn nonlattice_critical_strip_has_one_root() {
        // {1/2, 1/3}: the thin strip around σ0 contains exactly σ0
        let ratios = RatioList::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
        let s0 = moran_real_root(&[0.5, 1.0 / 3.0]);
        let w = window(s0 - 1e-3, s0 + 1e-3, 100.0);
        let res = moran_roots(&ratios, &w, 1e-12).unwrap();
        assert_eq!(res.roots.len(), 1, "{:?}", res.roots);
        assert!((res.roots[0].omega().re - s0).abs() < 1e-10);
        assert!(res.roots[0].omega().im.abs() < 1e-9);
    }

    #[test]
    fn residues_match_derivative_formula() {
        let ratios = RatioList::new(vec![1.0 / 3.0, 1.0 / 3.0], 1).unwrap();
        let res = moran_roots(&ratios, &window(0.0, 1.0, 10.0), 1e-12).unwrap();
        let f = DirichletFactor::moran(&[1.0 / 3.0, 1.0 / 3.0]);
        for root in &res.roots {
            let want = 1.0 / f.eval_derivative(root.omega());
            assert!((root.residue() - want).norm() < 1e-10);
        }
    }

    #[test]
    fn argument_principle_counts_match() {
        // total multiplicity equals the whole-window winding number
        let ratios = RatioList::new(vec![0.5, 0.25], 1).unwrap();
        let f = DirichletFactor::moran(&[0.5, 0.25]);
        let w = window(0.3, 1.0, 20.0);
        let (count, _) = winding_number(
            &f,
            Complex64::new(w.sigma_min, -w.tau_max),
            Complex64::new(w.sigma_max, w.tau_max),
            256,
        )
        .unwrap();
        let res = moran_roots(&ratios, &w, 1e-12).unwrap();
        let total: u32 = res.roots.iter().map(|r| r.multiplicity).sum();
        assert!((count - total as f64).abs() < 1e-3, "{count} vs {total}");
    }
}
