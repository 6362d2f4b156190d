//! Pole enumeration and Laurent data of grammar expressions.
//!
//! Poles inside a window come from linear factors and Dirichlet-factor
//! zeros only (guaranteed by the expression grammar); coinciding
//! locations merge with their multiplicities summed per term. Laurent
//! coefficients are trapezoid-rule contour integrals on circles, which
//! are spectrally accurate for analytic integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zeta::expr::{DirichletFactor, MeromorphicExpr};

use super::moran::dirichlet_zeros;
use super::window::{sort_dimensions, ComplexDimension, Window};

/// Merge tolerance for coinciding pole locations (the half-square needs
/// the structural coincidence of `(s−1)` and the zero of `2^s − 2`).
const MERGE_TOL: f64 = 1e-9;

/// Numeric floor below which a leading Laurent coefficient is treated as
/// an exact cancellation and the pole is dropped (with a report flag).
pub const LAURENT_FLOOR: f64 = 1e-12;

/// The spectrum of an expression over a window: its complex dimensions,
/// plus candidate locations whose Laurent data fell below the floor.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub dims: Vec<ComplexDimension>,
    pub dropped: Vec<(f64, f64)>,
}

impl Spectrum {
    /// Largest real part among the dimensions.
    pub fn max_re(&self) -> Option<f64> {
        self.dims.iter().map(|d| d.omega.0).fold(None, |acc, x| match acc {
            None => Some(x),
            Some(a) => Some(a.max(x)),
        })
    }

    /// Dimensions on the critical line `Re ω = D` (within 1e-8).
    pub fn principal(&self) -> Vec<&ComplexDimension> {
        match self.max_re() {
            None => Vec::new(),
            Some(d) => self.dims.iter().filter(|x| (x.omega.0 - d).abs() < 1e-8).collect(),
        }
    }
}

/// All poles of the expression inside the window, with multiplicities and
/// principal-part Laurent coefficients.
pub fn spectrum(expr: &MeromorphicExpr, window: &Window, tol: f64) -> Result<Spectrum> {
    // 1. distinct Dirichlet factors and their zero sets
    let mut factors: Vec<&DirichletFactor> = Vec::new();
    for t in &expr.terms {
        for (d, _) in &t.dirichlet {
            if !factors.iter().any(|f| *f == d) {
                factors.push(d);
            }
        }
    }
    let mut factor_zeros: Vec<Vec<ComplexDimension>> = Vec::new();
    for f in &factors {
        factor_zeros.push(dirichlet_zeros(f, window, tol)?);
    }

    // 2. candidate locations: linear poles and Dirichlet zeros in-window
    let mut candidates: Vec<Complex64> = Vec::new();
    let mut push = |z: Complex64| {
        if !candidates.iter().any(|c| (c - z).norm() < MERGE_TOL) {
            candidates.push(z);
        }
    };
    for t in &expr.terms {
        for &(a, _) in &t.poles {
            let z = Complex64::new(a, 0.0);
            if window.contains(z) {
                push(z);
            }
        }
    }
    for zeros in &factor_zeros {
        for z in zeros {
            push(z.omega());
        }
    }

    // 3. per-candidate multiplicity: max over terms of the summed order
    let mut cands: Vec<(Complex64, u32)> = Vec::new();
    for &z in &candidates {
        let mut mult = 0u32;
        for t in &expr.terms {
            let mut m = 0u32;
            for &(a, p) in &t.poles {
                if (Complex64::new(a, 0.0) - z).norm() < MERGE_TOL {
                    m += p;
                }
            }
            for (d, p) in &t.dirichlet {
                let idx = factors.iter().position(|f| *f == d).unwrap();
                for zero in &factor_zeros[idx] {
                    if (zero.omega() - z).norm() < MERGE_TOL {
                        m += zero.multiplicity * p;
                    }
                }
            }
            mult = mult.max(m);
        }
        if mult > 0 {
            cands.push((z, mult));
        }
    }

    // 4. Laurent data by contour integration
    let analytic_edge = expr.analytic_right_of();
    let mut dims = Vec::new();
    let mut dropped = Vec::new();
    for &(z, mult) in &cands {
        let mut radius = 1e-2f64;
        for &(other, _) in &cands {
            if (other - z).norm() > MERGE_TOL {
                radius = radius.min(0.5 * (other - z).norm());
            }
        }
        // stay inside the entire factors' validity half-plane
        if z.re - radius <= analytic_edge {
            radius = (z.re - analytic_edge) * 0.5;
            if radius <= 1e-10 {
                return Err(Error::StripViolation(format!(
                    "pole at {z} too close to the expression's analytic edge {analytic_edge}"
                )));
            }
        }
        let laurent = laurent_by_contour(expr, z, mult, radius)?;
        // trim exact cancellations of the leading coefficients
        let mut lead = 0usize;
        while lead < laurent.len() && laurent[lead].norm() < LAURENT_FLOOR {
            lead += 1;
        }
        if lead == laurent.len() {
            dropped.push((z.re, z.im));
            continue;
        }
        let trimmed: Vec<(f64, f64)> =
            laurent[lead..].iter().map(|c| (c.re, c.im)).collect();
        dims.push(ComplexDimension {
            omega: (z.re, z.im),
            multiplicity: (mult as usize - lead) as u32,
            laurent: trimmed,
        });
    }
    sort_dimensions(&mut dims);
    Ok(Spectrum { dims, dropped })
}

/// `c_k = (1/2πi) ∮ expr(s) (s−ω)^{-k-1} ds` for `k = −m..−1`, node count
/// doubling until two successive evaluations agree.
fn laurent_by_contour(
    expr: &MeromorphicExpr,
    omega: Complex64,
    m: u32,
    radius0: f64,
) -> Result<Vec<Complex64>> {
    // on the circle s = ω + R e^{iθ} the integral reduces to the mean of
    // expr(s)·(R e^{iθ})^{-k}
    let mut radius = radius0;
    'attempts: for attempt in 0..6 {
        let mut nodes = 128usize;
        let mut prev: Option<Vec<Complex64>> = None;
        loop {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); m as usize];
            for i in 0..nodes {
                let th = 2.0 * std::f64::consts::PI * i as f64 / nodes as f64;
                let e = Complex64::from_polar(radius, th);
                let v = expr.eval(omega + e);
                if !v.re.is_finite() || !v.im.is_finite() {
                    radius *= 0.5;
                    if attempt == 5 {
                        return Err(Error::PoleOnContour { attempts: 6 });
                    }
                    continue 'attempts;
                }
                for (j, c) in coeffs.iter_mut().enumerate() {
                    let k = -(m as i32) + j as i32; // k runs −m..−1
                    *c += v * e.powi(-k);
                }
            }
            for c in coeffs.iter_mut() {
                *c /= nodes as f64;
            }
            if let Some(p) = prev {
                let close = coeffs
                    .iter()
                    .zip(&p)
                    .all(|(a, b)| (a - b).norm() <= 1e-11 * (1.0 + b.norm()));
                if close {
                    return Ok(coeffs);
                }
            }
            prev = Some(coeffs);
            nodes *= 2;
            if nodes > 1 << 14 {
                return Ok(prev.unwrap());
            }
        }
    }
    Err(Error::PoleOnContour { attempts: 6 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RelativeFractalDrum;
    use crate::zeta::catalog_expr;

    #[test]
    fn cantor_spectrum_window() {
        let (expr, _) = catalog_expr(&RelativeFractalDrum::cantor()).unwrap();
        let w = Window::new(0.3, 0.9, 12.0).unwrap();
        let spec = spectrum(&expr, &w, 1e-12).unwrap();
        let d = (2f64).ln() / (3f64).ln();
        let p = 2.0 * std::f64::consts::PI / (3f64).ln();
        assert_eq!(spec.dims.len(), 5, "{:?}", spec.dims);
        for dim in &spec.dims {
            assert_eq!(dim.multiplicity, 1);
            assert!((dim.omega().re - d).abs() < 1e-9);
            let k = (dim.omega().im / p).round();
            assert!(k.abs() <= 2.0);
            assert!((dim.omega().im - k * p).abs() < 1e-8);
        }
        // residue at D: 2^{-D}/(D log 3), frozen from the formula
        let at_d = spec
            .dims
            .iter()
            .find(|x| x.omega().im.abs() < 1e-9)
            .unwrap();
        assert!(
            (at_d.residue().re - 0.931_634_918_637_962).abs() < 1e-9,
            "{:?}",
            at_d.residue()
        );
        // conjugate symmetry of the Laurent data
        for dim in &spec.dims {
            if dim.omega().im > 1e-9 {
                let conj = spec
                    .dims
                    .iter()
                    .find(|x| (x.omega() - dim.omega().conj()).norm() < 1e-8)
                    .expect("conjugate partner");
                assert!((conj.residue() - dim.residue().conj()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn half_square_double_pole_laurent() {
        // (s−1) and the zero of (2^s−2) coincide at 1: multiplicity 2, and
        // laurent[−2] = 2^{-1}/(2 log 2) = 1/(4 log 2)
        let (expr, _) = catalog_expr(&RelativeFractalDrum::half_square()).unwrap();
        let w = Window::new(0.8, 1.2, 2.0).unwrap();
        let spec = spectrum(&expr, &w, 1e-12).unwrap();
        assert_eq!(spec.dims.len(), 1);
        let pole = &spec.dims[0];
        assert_eq!(pole.multiplicity, 2);
        assert!((pole.omega() - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        let want = 1.0 / (4.0 * (2f64).ln());
        assert!(
            (pole.coeff(-2).re - want).abs() < 1e-9,
            "laurent[-2] = {:?} vs {want}",
            pole.coeff(-2)
        );
    }

    #[test]
    fn gasket_residue_at_dimension() {
        let (expr, _) = catalog_expr(&RelativeFractalDrum::gasket()).unwrap();
        let w = Window::new(1.2, 1.8, 10.0).unwrap();
        let spec = spectrum(&expr, &w, 1e-12).unwrap();
        let d = (3f64).ln() / (2f64).ln();
        // poles at log₂3 + i k 2π/log 2 for k ∈ {0, ±1}
        assert_eq!(spec.dims.len(), 3, "{:?}", spec.dims);
        let at_d = spec.dims.iter().find(|x| x.omega().im.abs() < 1e-9).unwrap();
        // quotient-rule residue, frozen: 6(√3)^{1-D} 2^{-D}/(D(D−1)·3 log 2)
        assert!(
            (at_d.residue().re - 0.752_293_381_275_787).abs() < 1e-9,
            "{:?}",
            at_d.residue()
        );
    }

    #[test]
    fn nest_double_pole_with_gauge_coefficient() {
        let (expr, _) =
            catalog_expr(&RelativeFractalDrum::fractal_nest(1.0).unwrap()).unwrap();
        let w = Window::new(0.8, 1.3, 3.0).unwrap();
        let spec = spectrum(&expr, &w, 1e-12).unwrap();
        // the only pole in this window is the double pole at 1 (the a = 1
        // merge of 2/(a+1) and 1) — 1/(a+1) = 1/2 lies outside
        assert_eq!(spec.dims.len(), 1, "{:?}", spec.dims);
        let pole = &spec.dims[0];
        assert_eq!(pole.multiplicity, 2);
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((pole.coeff(-2).re - two_pi).abs() < 1e-7, "{:?}", pole.coeff(-2));
    }
}
