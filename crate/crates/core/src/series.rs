//! Weighted gap series with Euler–Maclaurin continuation.
//!
//! The generated string families (a-string, fractal nest, geometric chirp)
//! all reduce to one series shape,
//!
//! `S(σ) = Σ_{j≥1} j^{-ρ} (j^{-c} - (j+1)^{-c})^σ`,
//!
//! with `c > 0`, `ρ ≥ 0` and complex exponent `σ`. Writing
//! `ℓ_j = c j^{-c-1} φ(1/j)` and expanding `φ^σ` in `1/j` turns the tail
//! into a short combination of Hurwitz-type tails `Σ_{j>J} j^{-v}`, each of
//! which continues meromorphically via Euler–Maclaurin with a single pole at
//! `v = 1`. The leading pole of `S` sits at `σ* = (1-ρ)/(c+1)` with residue
//! `c^{σ*}/(c+1)`; deeper expansion orders contribute poles at
//! `σ_k = (1-ρ-k)/(c+1)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of the gap family `ℓ_j = j^{-c} - (j+1)^{-c}` with weight
/// `j^{-ρ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSeries {
    pub c: f64,
    pub rho: f64,
}

impl GapSeries {
    pub fn new(c: f64, rho: f64) -> Self {
        Self { c, rho }
    }

    /// Location of the `k`-th pole in the `σ` plane.
    pub fn pole(&self, k: usize) -> f64 {
        (1.0 - self.rho - k as f64) / (self.c + 1.0)
    }

    /// Residue of `S` at the leading pole `σ* = (1-ρ)/(c+1)`.
    pub fn leading_residue(&self) -> f64 {
        self.c.powf(self.pole(0)) / (self.c + 1.0)
    }

    /// Left edge of the numerically trustworthy half-plane: the expansion
    /// is carried to order 4, so we stay right of the k = 4 pole.
    pub fn valid_re(&self) -> f64 {
        self.pole(4) + 0.05
    }

    /// `ln ℓ_j`, cancellation-free.
    fn ln_len(&self, j: u64) -> f64 {
        let jf = j as f64;
        -self.c * jf.ln() + (-(-self.c * (1.0 / jf).ln_1p()).exp_m1()).ln()
    }

    /// Evaluate `S(σ)` to absolute tolerance ~`tol` (away from poles).
    pub fn eval(&self, sigma: Complex64, tol: f64) -> Result<Complex64> {
        if sigma.re < self.valid_re() {
            return Err(Error::StripViolation(format!(
                "gap series evaluated at Re σ = {} left of its continuation range (needs > {})",
                sigma.re,
                self.valid_re()
            )));
        }
        let c = self.c;
        let w = (c + 1.0) * sigma + self.rho;

        // φ(x) = 1 + p1 x + p2 x² + p3 x³ + p4 x⁴ + O(x⁵)
        let p1 = -(c + 1.0) / 2.0;
        let p2 = (c + 1.0) * (c + 2.0) / 6.0;
        let p3 = -(c + 1.0) * (c + 2.0) * (c + 3.0) / 24.0;
        let p4 = (c + 1.0) * (c + 2.0) * (c + 3.0) * (c + 4.0) / 120.0;
        // ln φ = u1 x + u2 x² + u3 x³ + u4 x⁴ + ...
        let u1 = p1;
        let u2 = p2 - p1 * p1 / 2.0;
        let u3 = p3 - p1 * p2 + p1 * p1 * p1 / 3.0;
        let u4 = p4 - (p2 * p2 / 2.0 + p1 * p3) + p1 * p1 * p2 - p1 * p1 * p1 * p1 / 4.0;
        // φ^σ = 1 + A1 x + A2 x² + A3 x³ + A4 x⁴ + ...
        let a1 = sigma * u1;
        let a2 = sigma * u2 + sigma * sigma * (u1 * u1 / 2.0);
        let a3 = sigma * u3 + sigma * sigma * (u1 * u2) + sigma.powu(3) * (u1 * u1 * u1 / 6.0);
        let a4 = sigma * u4
            + sigma * sigma * (u2 * u2 / 2.0 + u1 * u3)
            + sigma.powu(3) * (u1 * u1 * u2 / 2.0)
            + sigma.powu(4) * (u1 * u1 * u1 * u1 / 24.0);

        // truncation order 5 in x ⇒ remainder ~ K J^{-(Re w + 4)}
        let decay = w.re + 4.0;
        if decay <= 0.25 {
            return Err(Error::StripViolation(format!(
                "gap series tail does not converge at Re σ = {}",
                sigma.re
            )));
        }
        let k5 = (1.0 + sigma.norm()).powi(5) * (1.0 + c).powi(5) / 120.0;
        let mut j_cut = ((k5 / (tol * decay.max(0.5))).powf(1.0 / decay)).ceil();
        if !j_cut.is_finite() {
            j_cut = 64.0;
        }
        let j_cut = (j_cut as u64).clamp(64, 5_000_000);

        let mut partial = Complex64::new(0.0, 0.0);
        for j in 1..=j_cut {
            let jf = j as f64;
            let term = (sigma * self.ln_len(j) - self.rho * jf.ln()).exp();
            partial += term;
        }

        let zt = |k: f64| hurwitz_tail(w + k, j_cut);
        let tail = zt(0.0) + a1 * zt(1.0) + a2 * zt(2.0) + a3 * zt(3.0) + a4 * zt(4.0);
        Ok(partial + (sigma * c.ln()).exp() * tail)
    }
}

/// `Σ_{j>J} j^{-v}` by Euler–Maclaurin; meromorphic in `v` with a single
/// pole at `v = 1`.
pub fn hurwitz_tail(v: Complex64, j_cut: u64) -> Complex64 {
    let m = (j_cut + 1) as f64;
    let mv = (-v * m.ln()).exp(); // M^{-v}
    let one = Complex64::new(1.0, 0.0);
    mv * m / (v - one) + mv / 2.0 + v * mv / (12.0 * m)
        - v * (v + 1.0) * (v + 2.0) * mv / (720.0 * m.powi(3))
        + v * (v + 1.0) * (v + 2.0) * (v + 3.0) * (v + 4.0) * mv / (30240.0 * m.powi(5))
}

/// Real-argument convenience: `Σ_{j≥from} j^{-ρ} ℓ_j(c)`, used by the
/// geometric backends. Indices beyond the exact-integer range skip the
/// direct window and use the Euler–Maclaurin form alone.
pub fn weighted_gap_sum_tail(gs: GapSeries, from: f64, tol: f64) -> f64 {
    if from > 1e15 {
        let w = (gs.c + 1.0) + gs.rho;
        let p1 = -(gs.c + 1.0) / 2.0;
        let p2 = (gs.c + 1.0) * (gs.c + 2.0) / 6.0;
        let tail = hurwitz_tail_f(w, from - 1.0)
            + p1 * hurwitz_tail_f(w + 1.0, from - 1.0)
            + p2 * hurwitz_tail_f(w + 2.0, from - 1.0);
        return gs.c * tail;
    }
    let from = from.max(1.0) as u64;
    // Σ_{j≥from} j^{-ρ} ℓ_j: sum directly until terms are negligible, then
    // integral-correct via the σ = 1 expansion
    let mut acc = 0.0;
    let mut j = from;
    loop {
        let jf = j as f64;
        // j^{-ρ} ℓ_j, cancellation-free
        let term = jf.powf(-gs.rho) * jf.powf(-gs.c) * (-(-gs.c * (1.0 / jf).ln_1p()).exp_m1());
        acc += term;
        if j > from + 100_000 || term < tol * acc.max(1e-300) {
            break;
        }
        j += 1;
    }
    // Euler–Maclaurin remainder for Σ_{i>j}
    let gs2 = gs;
    let w = (gs2.c + 1.0) * 1.0 + gs2.rho;
    let p1 = -(gs2.c + 1.0) / 2.0;
    let p2 = (gs2.c + 1.0) * (gs2.c + 2.0) / 6.0;
    let tail = hurwitz_tail_f(w, j as f64)
        + p1 * hurwitz_tail_f(w + 1.0, j as f64)
        + p2 * hurwitz_tail_f(w + 2.0, j as f64);
    acc + gs2.c * tail
}

/// Real-argument Euler–Maclaurin tail `Σ_{i>j} i^{-v}`.
pub fn hurwitz_tail_f(v: f64, j: f64) -> f64 {
    let m = j + 1.0;
    let mv = m.powf(-v);
    mv * m / (v - 1.0) + mv / 2.0 + v * mv / (12.0 * m)
        - v * (v + 1.0) * (v + 2.0) * mv / (720.0 * m.powi(3))
        + v * (v + 1.0) * (v + 2.0) * (v + 3.0) * (v + 4.0) * mv / (30240.0 * m.powi(5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_sum(gs: GapSeries, sigma: Complex64, n: u64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=n {
            let jf = j as f64;
            let l = jf.powf(-gs.c) - (jf + 1.0).powf(-gs.c);
            acc += (sigma * l.ln() - gs.rho * jf.ln()).exp();
        }
        acc
    }

    #[test]
    fn astring_total_length_is_one() {
        let gs = GapSeries::new(1.0, 0.0);
        let s = gs.eval(Complex64::new(1.0, 0.0), 1e-12).unwrap();
        assert!((s.re - 1.0).abs() < 1e-11, "{s}");
        assert!(s.im.abs() < 1e-13);
    }

    #[test]
    fn matches_brute_force_in_convergence_halfplane() {
        for (c, rho) in [(1.0, 0.0), (0.5, 0.0), (1.0, 1.0), (2.0, 0.5)] {
            let gs = GapSeries::new(c, rho);
            for sigma in [Complex64::new(2.0, 0.0), Complex64::new(1.3, 0.8)] {
                let em = gs.eval(sigma, 1e-12).unwrap();
                let n = 3_000_000u64;
                let bf = direct_sum(gs, sigma, n);
                // the brute-force truncation leaves its own tail of order
                // c^{Re σ} N^{1-Re w}/(Re w − 1)
                let w = (c + 1.0) * sigma.re + rho;
                let bf_tail = 2.0 * c.powf(sigma.re) * (n as f64).powf(1.0 - w) / (w - 1.0);
                assert!(
                    (em - bf).norm() < bf_tail.max(1e-9),
                    "c={c} rho={rho} sigma={sigma}: {em} vs {bf} (allow {bf_tail:e})"
                );
            }
        }
    }

    #[test]
    fn leading_pole_residue() {
        // (σ - σ*)·S(σ) → c^{σ*}/(c+1)
        for (c, rho) in [(1.0, 0.0), (0.5, 0.0), (1.0, 1.0)] {
            let gs = GapSeries::new(c, rho);
            let star = gs.pole(0);
            let want = gs.leading_residue();
            for eps in [1e-3, 1e-4] {
                let sig = Complex64::new(star + eps, 0.0);
                let got = (gs.eval(sig, 1e-12).unwrap() * eps).re;
                assert!(
                    (got - want).abs() < 2e-2 * want.abs().max(1.0) * (eps / 1e-4).max(1.0),
                    "c={c} rho={rho} eps={eps}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn hurwitz_tail_against_riemann() {
        // Σ_{j>J} j^{-2} = π²/6 − Σ_{j≤J} j^{-2}; EM error falls like J^{-7}
        for (j_cut, tol) in [(10u64, 2e-11), (100, 1e-14)] {
            let direct: f64 = (1..=j_cut).map(|j| 1.0 / (j * j) as f64).sum();
            let want = std::f64::consts::PI * std::f64::consts::PI / 6.0 - direct;
            let got = hurwitz_tail(Complex64::new(2.0, 0.0), j_cut).re;
            assert!((got - want).abs() < tol, "J={j_cut}: {got} vs {want}");
        }
    }
}

/// Partial power sum `Σ_{i=1}^{j} i^{-a}` with Euler–Maclaurin beyond a
/// direct-summation window; valid for any real `a`. The index may exceed
/// the exact-integer range, in which case the closed-form prefix applies.
pub fn power_sum(a: f64, j: f64) -> f64 {
    const DIRECT: u64 = 100_000;
    if j < 0.5 {
        return 0.0;
    }
    if j <= DIRECT as f64 {
        return (1..=j as u64).map(|i| (i as f64).powf(-a)).sum();
    }
    let head: f64 = (1..=DIRECT).map(|i| (i as f64).powf(-a)).sum();
    // Σ_{K<i≤J} i^{-a} via the difference of Euler–Maclaurin prefixes
    let f = |m: f64| -> f64 {
        let mv = m.powf(-a);
        let integral = if (a - 1.0).abs() < 1e-12 {
            m.ln()
        } else {
            m.powf(1.0 - a) / (1.0 - a)
        };
        integral + mv / 2.0 - a * mv / (12.0 * m) + a * (a + 1.0) * (a + 2.0) * mv / (720.0 * m.powi(3))
    };
    head + f(j) - f(DIRECT as f64)
}

/// Walk the word tree of a ratio multiset level by level, merging words
/// with equal products so the work stays polynomial in `log(1/theta)`.
/// `above(ways, prod)` fires once per surviving product class with
/// `prod > theta`; `below(ways, prod)` fires once per subtree root whose
/// product first crosses `theta` (the whole subtree is then summable in
/// closed form by the caller).
pub fn scan_word_products<FA, FB>(distinct: &[(f64, f64)], theta: f64, above: &mut FA, below: &mut FB)
where
    FA: FnMut(f64, f64),
    FB: FnMut(f64, f64),
{
    use std::collections::HashMap;
    if theta >= 1.0 {
        below(1.0, 1.0);
        return;
    }
    if let [(r, m)] = distinct {
        // single ratio class: one product per level
        let (mut ways, mut prod) = (1.0f64, 1.0f64);
        loop {
            above(ways, prod);
            ways *= m;
            prod *= r;
            if prod <= theta {
                below(ways, prod);
                return;
            }
        }
    }
    let mut frontier: HashMap<u64, f64> = HashMap::new();
    frontier.insert(1.0f64.to_bits(), 1.0);
    while !frontier.is_empty() {
        let mut next: HashMap<u64, f64> = HashMap::new();
        for (&bits, &ways) in &frontier {
            let prod = f64::from_bits(bits);
            above(ways, prod);
            for &(r, m) in distinct {
                let p2 = prod * r;
                if p2 > theta {
                    *next.entry(p2.to_bits()).or_insert(0.0) += ways * m;
                } else {
                    below(ways * m, p2);
                }
            }
        }
        frontier = next;
    }
}

/// Group a ratio multiset into `(ratio, multiplicity)` classes.
pub fn distinct_ratios(ratios: &[f64]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &r in ratios {
        match out.iter_mut().find(|x| (x.0 - r).abs() < 1e-15) {
            Some(x) => x.1 += 1.0,
            None => out.push((r, 1.0)),
        }
    }
    out
}
