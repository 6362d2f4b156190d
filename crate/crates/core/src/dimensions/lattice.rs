//! Lattice/nonlattice classification of ratio lists.
//!
//! A ratio list is lattice when the multiplicative group generated by its
//! distinct values has rank one, i.e. all pairwise ratios of `log r_i` are
//! rational. Rationality is tested by continued fractions with denominator
//! bound 64 at tolerance 1e-12.

use serde::{Deserialize, Serialize};

use crate::geometry::drum::RatioList;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum LatticeClass {
    Lattice {
        /// Generator of the rank-1 group, in (0,1).
        r: f64,
        /// Oscillatory period `2π/log(1/r)`.
        period: f64,
    },
    Nonlattice {
        /// The witness pair of ratios whose log-ratio resisted a small
        /// rational approximation.
        witness: (f64, f64),
        /// Best rational approximant found for the witness log-ratio and
        /// its absolute error (the caveat record).
        best_approx: (i64, i64),
        approx_error: f64,
    },
}

/// Best rational approximation `p/q` with `q <= q_max` by continued
/// fractions; returns `(p, q, |x - p/q|)`.
pub fn rational_approx(x: f64, q_max: i64) -> (i64, i64, f64) {
    let mut a = x.floor();
    let mut frac = x - a;
    // convergents p/q
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, a as i64, 1i64);
    let mut best = (p1, q1, (x - p1 as f64).abs());
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        a = inv.floor();
        frac = inv - a;
        let p2 = a as i64 * p1 + p0;
        let q2 = a as i64 * q1 + q0;
        if q2 > q_max || q2 <= 0 {
            break;
        }
        let err = (x - p2 as f64 / q2 as f64).abs();
        if err < best.2 {
            best = (p2, q2, err);
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    best
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Classify a ratio list as lattice (returning the group generator and the
/// oscillatory period) or nonlattice (with the best rational approximant
/// recorded for the witness pair).
pub fn classify_lattice(ratios: &RatioList) -> LatticeClass {
    let mut distinct: Vec<f64> = Vec::new();
    for &r in &ratios.ratios {
        if !distinct.iter().any(|&d| (d - r).abs() < 1e-15) {
            distinct.push(r);
        }
    }
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let base = distinct[0];
    let lb = (1.0 / base).ln();
    if distinct.len() == 1 {
        return LatticeClass::Lattice { r: base, period: 2.0 * std::f64::consts::PI / lb };
    }
    // log(1/r_i)/log(1/r_1) must all be rational p_i/q_i
    let mut fracs: Vec<(i64, i64)> = vec![(1, 1)];
    for &r in &distinct[1..] {
        let x = (1.0 / r).ln() / lb;
        let (p, q, err) = rational_approx(x, 64);
        if err > 1e-12 {
            return LatticeClass::Nonlattice {
                witness: (base, r),
                best_approx: (p, q),
                approx_error: err,
            };
        }
        fracs.push((p, q));
    }
    // generator: log(1/r) = log(1/r_1)/L with L = lcm of denominators,
    // reduced by the gcd of the resulting integer exponents
    let l = fracs.iter().fold(1i64, |acc, &(_, q)| lcm(acc, q));
    let ks: Vec<i64> = fracs.iter().map(|&(p, q)| p * (l / q)).collect();
    let g = ks.iter().fold(0i64, |acc, &k| gcd(acc, k));
    let unit = lb / l as f64 * g as f64;
    let r = (-unit).exp();
    LatticeClass::Lattice { r, period: 2.0 * std::f64::consts::PI / unit }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rl(v: Vec<f64>) -> RatioList {
        RatioList::new(v, 1).unwrap()
    }

    #[test]
    fn cantor_is_lattice_with_period_two_pi_over_log3() {
        let c = classify_lattice(&rl(vec![1.0 / 3.0, 1.0 / 3.0]));
        match c {
            LatticeClass::Lattice { r, period } => {
                assert!((r - 1.0 / 3.0).abs() < 1e-12);
                let want = 2.0 * std::f64::consts::PI / (3f64).ln();
                assert!((period - want).abs() < 1e-10, "{period} vs {want}");
            }
            _ => panic!("expected lattice"),
        }
    }

    #[test]
    fn powers_of_two_collapse_to_half() {
        // {1/4, 1/8}: both powers of 1/2
        let c = classify_lattice(&rl(vec![0.25, 0.125]));
        match c {
            LatticeClass::Lattice { r, period } => {
                assert!((r - 0.5).abs() < 1e-12, "{r}");
                let want = 2.0 * std::f64::consts::PI / (2f64).ln();
                assert!((period - want).abs() < 1e-10);
            }
            _ => panic!("expected lattice"),
        }
    }

    #[test]
    fn half_third_is_nonlattice() {
        let c = classify_lattice(&rl(vec![0.5, 1.0 / 3.0]));
        match c {
            LatticeClass::Nonlattice { best_approx, approx_error, .. } => {
                assert!(approx_error > 1e-12);
                assert!(best_approx.1 <= 64);
            }
            _ => panic!("expected nonlattice"),
        }
    }

    #[test]
    fn rational_approx_finds_small_fractions() {
        let (p, q, e) = rational_approx(1.5, 64);
        assert_eq!((p, q), (3, 2));
        assert!(e < 1e-15);
        let (p, q, _) = rational_approx(2.0 / 3.0, 64);
        assert_eq!((p, q), (2, 3));
    }
}
