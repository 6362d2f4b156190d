//! Closed-form meromorphic zeta expressions.
//!
//! An expression is a finite sum of terms
//! `coeff · Π bᵢ^s · Π E_m(s) / (Π (s-aₖ)^{pₖ} · Π D_l(s)^{q_l})`
//! where each Dirichlet factor `D(s) = q − Σ mᵢ bᵢ^s` has a computable
//! zero set and each entire factor is a named, numerically backed entire
//! function. All catalog zeta functions fit this grammar, so pole hunting
//! reduces to linear factors plus Dirichlet zeros.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::series::GapSeries;

/// Which fractal zeta function an expression (or numeric route) represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ZetaKind {
    Distance,
    Tube,
    Mellin,
    Geometric,
}

/// `q − Σ mᵢ bᵢ^s` with real weights and positive bases.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletFactor {
    pub q: f64,
    pub terms: Vec<(f64, f64)>, // (m_i, b_i)
}

impl DirichletFactor {
    /// The Moran-style factor `1 − Σ r_j^s` with ratio multiplicities
    /// merged into weights.
    pub fn moran(ratios: &[f64]) -> Self {
        let mut terms: Vec<(f64, f64)> = Vec::new();
        for &r in ratios {
            if let Some(t) = terms.iter_mut().find(|t| (t.1 - r).abs() < 1e-15) {
                t.0 += 1.0;
            } else {
                terms.push((1.0, r));
            }
        }
        Self { q: 1.0, terms }
    }

    /// `b^s − q` written in grammar form `(−q) − (−1)·b^s`.
    pub fn power_minus(b: f64, q: f64) -> Self {
        Self { q: -q, terms: vec![(-1.0, b)] }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut v = Complex64::new(self.q, 0.0);
        for &(m, b) in &self.terms {
            v -= m * (s * b.ln()).exp();
        }
        v
    }

    pub fn eval_derivative(&self, s: Complex64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for &(m, b) in &self.terms {
            v -= m * b.ln() * (s * b.ln()).exp();
        }
        v
    }
}

/// Named entire functions backed by quadrature or tail-corrected series.
#[derive(Debug, Clone, PartialEq)]
pub enum EntireFactor {
    /// `Z(s) = ∫_0^{π/2} (cos φ + sin φ)^{-s} dφ`, entire in `s`.
    CornerIntegral,
    /// `Π (s − p) · S(s + shift)` for a weighted gap series `S`, with the
    /// listed leading poles multiplied out; entire on the series'
    /// continuation half-plane.
    GapSeriesFactor { series: GapSeries, shift: f64, extracted: Vec<f64> },
}

impl EntireFactor {
    pub fn eval(&self, s: Complex64) -> Complex64 {
        match self {
            EntireFactor::CornerIntegral => corner_integral(s),
            EntireFactor::GapSeriesFactor { series, shift, extracted } => {
                let base = series
                    .eval(s + *shift, 1e-12)
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                extracted
                    .iter()
                    .fold(base, |acc, &p| acc * (s - p))
            }
        }
    }

    /// Left edge of the half-plane where this factor is actually entire
    /// and numerically trustworthy.
    pub fn analytic_right_of(&self) -> f64 {
        match self {
            EntireFactor::CornerIntegral => f64::NEG_INFINITY,
            EntireFactor::GapSeriesFactor { series, shift, extracted } => {
                // the first non-extracted series pole bounds analyticity
                let mut k = 0;
                loop {
                    let p = series.pole(k) - shift;
                    if !extracted.iter().any(|&e| (e - p).abs() < 1e-12) {
                        return p.max(series.valid_re() - shift);
                    }
                    k += 1;
                    if k > 8 {
                        return series.valid_re() - shift;
                    }
                }
            }
        }
    }
}

/// Adaptive-Simpson evaluation of the corner integral, memoized per thread
/// to absolute tolerance 1e-12.
pub fn corner_integral(s: Complex64) -> Complex64 {
    thread_local! {
        static CACHE: RefCell<HashMap<(u64, u64), Complex64>> = RefCell::new(HashMap::new());
    }
    let key = (s.re.to_bits(), s.im.to_bits());
    if let Some(v) = CACHE.with(|c| c.borrow().get(&key).copied()) {
        return v;
    }
    let f = |phi: f64| {
        let g = phi.cos() + phi.sin();
        (-s * g.ln()).exp()
    };
    let v = adaptive_simpson(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-13, 30);
    CACHE.with(|c| c.borrow_mut().insert(key, v));
    v
}

fn adaptive_simpson<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    fn simpson<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, Complex64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (f(a) + 4.0 * fm + f(b)), fm)
    }
    fn rec<F: Fn(f64) -> Complex64>(
        f: &F,
        a: f64,
        b: f64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (left, _) = simpson(f, a, m);
        let (right, _) = simpson(f, m, b);
        let diff = left + right - whole;
        if depth == 0 || diff.norm() < 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, left, tol / 2.0, depth - 1) + rec(f, m, b, right, tol / 2.0, depth - 1)
    }
    let (whole, _) = simpson(f, a, b);
    rec(f, a, b, whole, tol, depth)
}

/// One summand of a [`MeromorphicExpr`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExprTerm {
    pub coeff: f64,
    /// `Π b^s`, bases positive.
    pub bases: Vec<f64>,
    /// Denominator linear factors `(s − a)^p`.
    pub poles: Vec<(f64, u32)>,
    /// Denominator Dirichlet factors with powers.
    pub dirichlet: Vec<(DirichletFactor, u32)>,
    /// Numerator entire factors.
    pub entire: Vec<EntireFactor>,
}

impl ExprTerm {
    pub fn new(coeff: f64) -> Self {
        Self { coeff, bases: Vec::new(), poles: Vec::new(), dirichlet: Vec::new(), entire: Vec::new() }
    }

    pub fn base(mut self, b: f64) -> Self {
        assert!(b > 0.0, "power bases must be positive");
        if (b - 1.0).abs() > 1e-300 {
            self.bases.push(b);
        }
        self
    }

    pub fn pole(mut self, a: f64, p: u32) -> Self {
        self.poles.push((a, p));
        self
    }

    pub fn dirichlet(mut self, d: DirichletFactor) -> Self {
        self.dirichlet.push((d, 1));
        self
    }

    pub fn entire(mut self, e: EntireFactor) -> Self {
        self.entire.push(e);
        self
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut v = Complex64::new(self.coeff, 0.0);
        for &b in &self.bases {
            v *= (s * b.ln()).exp();
        }
        for e in &self.entire {
            v *= e.eval(s);
        }
        for &(a, p) in &self.poles {
            v /= (s - a).powu(p);
        }
        for (d, p) in &self.dirichlet {
            v /= d.eval(s).powu(*p);
        }
        v
    }
}

/// A finite sum of grammar terms; immutable and shareable.
#[derive(Debug, Clone, PartialEq)]
pub struct MeromorphicExpr {
    pub terms: Vec<ExprTerm>,
}

impl MeromorphicExpr {
    pub fn new(terms: Vec<ExprTerm>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(s)).sum()
    }

    /// Multiply the whole expression by `λ^s` (drum rescaling).
    pub fn scaled_by_power(mut self, lambda: f64) -> Self {
        for t in &mut self.terms {
            if (lambda - 1.0).abs() > 0.0 {
                t.bases.push(lambda);
            }
        }
        self
    }

    /// Left edge of the region where every entire factor is valid.
    pub fn analytic_right_of(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.entire.iter().map(|e| e.analytic_right_of()))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Candidate pole locations from the grammar (linear factors only;
    /// Dirichlet zeros are enumerated by the dimensions module).
    pub fn linear_pole_candidates(&self) -> Vec<(f64, u32)> {
        let mut out: Vec<(f64, u32)> = Vec::new();
        for t in &self.terms {
            for &(a, p) in &t.poles {
                match out.iter_mut().find(|x| (x.0 - a).abs() < 1e-12) {
                    Some(x) => x.1 = x.1.max(p),
                    None => out.push((a, p)),
                }
            }
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        out
    }
}

fn fmt_float(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

impl fmt::Display for DirichletFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // print `b^s − q` style when the stored form is negated
        let mut parts: Vec<String> = Vec::new();
        if self.q != 0.0 {
            parts.push(fmt_float(self.q));
        }
        for &(m, b) in &self.terms {
            let sign = if m > 0.0 { "-" } else { "+" };
            let mag = m.abs();
            let coef = if (mag - 1.0).abs() < 1e-15 {
                String::new()
            } else {
                format!("{}*", fmt_float(mag))
            };
            parts.push(format!("{sign} {coef}({})^s", fmt_float(b)));
        }
        let mut s = parts.join(" ");
        if s.starts_with("+ ") {
            s = s[2..].to_string();
        }
        if s.starts_with("- ") && self.q == 0.0 {
            // keep explicit sign
        }
        write!(f, "({s})")
    }
}

impl fmt::Display for EntireFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntireFactor::CornerIntegral => write!(f, "Z(s)"),
            EntireFactor::GapSeriesFactor { series, shift, extracted } => {
                let arg = if *shift == 0.0 {
                    "s".to_string()
                } else {
                    format!("s{}{}", if *shift > 0.0 { "+" } else { "-" }, fmt_float(shift.abs()))
                };
                let mut pre = String::new();
                for p in extracted {
                    pre.push_str(&format!("(s - {})*", fmt_float(*p)));
                }
                write!(f, "{pre}S[c={},rho={}]({arg})", fmt_float(series.c), fmt_float(series.rho))
            }
        }
    }
}

impl fmt::Display for ExprTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = vec![fmt_float(self.coeff)];
        for &b in &self.bases {
            num.push(format!("({})^s", fmt_float(b)));
        }
        for e in &self.entire {
            num.push(format!("{e}"));
        }
        let mut den: Vec<String> = Vec::new();
        for &(a, p) in &self.poles {
            let base = if a == 0.0 {
                "s".to_string()
            } else if a > 0.0 {
                format!("(s - {})", fmt_float(a))
            } else {
                format!("(s + {})", fmt_float(-a))
            };
            den.push(if p == 1 { base } else { format!("{base}^{p}") });
        }
        for (d, p) in &self.dirichlet {
            den.push(if *p == 1 { format!("{d}") } else { format!("{d}^{p}") });
        }
        if den.is_empty() {
            write!(f, "{}", num.join("*"))
        } else {
            write!(f, "{} / ({})", num.join("*"), den.join("*"))
        }
    }
}

impl fmt::Display for MeromorphicExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_integral_values() {
        // Z(0) = π/2 (integrand ≡ 1); Z(1) = √2 ln(1+√2) via the secant
        // antiderivative; Z(2) = 1
        let z0 = corner_integral(Complex64::new(0.0, 0.0));
        assert!((z0.re - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let z1 = corner_integral(Complex64::new(1.0, 0.0));
        let want = std::f64::consts::SQRT_2 * (1.0 + std::f64::consts::SQRT_2).ln();
        assert!((z1.re - want).abs() < 1e-11, "{z1}");
        let z2 = corner_integral(Complex64::new(2.0, 0.0));
        assert!((z2.re - 1.0).abs() < 1e-11, "{z2}");
    }

    #[test]
    fn reflection_symmetry() {
        // real-coefficient expressions satisfy ζ(conj s) = conj ζ(s)
        let term = ExprTerm::new(2.0)
            .base(0.5)
            .pole(0.0, 1)
            .dirichlet(DirichletFactor::power_minus(3.0, 2.0));
        let e = MeromorphicExpr::new(vec![term]);
        for s in [Complex64::new(0.8, 1.3), Complex64::new(1.2, -4.0)] {
            let a = e.eval(s.conj());
            let b = e.eval(s).conj();
            assert!((a - b).norm() < 1e-14 * b.norm().max(1.0));
        }
    }

    #[test]
    fn cantor_style_eval() {
        // 2^{1-s}/(s(3^s-2)) at s = 1 equals 1
        let term = ExprTerm::new(2.0)
            .base(0.5)
            .pole(0.0, 1)
            .dirichlet(DirichletFactor::power_minus(3.0, 2.0));
        let e = MeromorphicExpr::new(vec![term]);
        let v = e.eval(Complex64::new(1.0, 0.0));
        assert!((v.re - 1.0).abs() < 1e-14, "{v}");
        // s = 0.8: 2^{0.2}/(0.8(3^{0.8} − 2)), frozen from the formula
        let v = e.eval(Complex64::new(0.8, 0.0));
        assert!((v.re - 3.517_359_423_668_851).abs() < 1e-12, "{v}");
    }

    #[test]
    fn printer_is_stable() {
        let term = ExprTerm::new(2.0)
            .base(0.5)
            .pole(0.0, 1)
            .dirichlet(DirichletFactor::power_minus(3.0, 2.0));
        let e = MeromorphicExpr::new(vec![term]);
        assert_eq!(format!("{e}"), "2*(0.5)^s / (s*(-2 + (3)^s))");
    }
}
