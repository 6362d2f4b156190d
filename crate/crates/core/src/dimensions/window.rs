//! Rectangular windows with vertical-line screens.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The rectangle `[σ_min, σ_max] × [−τ_max, τ_max]`; the screen is the
/// vertical line `Re s = σ_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub tau_max: f64,
}

impl Window {
    pub fn new(sigma_min: f64, sigma_max: f64, tau_max: f64) -> Result<Self> {
        if !(sigma_min < sigma_max) || !(tau_max > 0.0) {
            return Err(Error::InvalidInput(format!(
                "window needs σ_min < σ_max and τ_max > 0, got [{sigma_min}, {sigma_max}] × {tau_max}"
            )));
        }
        Ok(Self { sigma_min, sigma_max, tau_max })
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min
            && s.re <= self.sigma_max
            && s.im.abs() <= self.tau_max
    }

    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma_min, -self.tau_max),
            Complex64::new(self.sigma_max, -self.tau_max),
            Complex64::new(self.sigma_max, self.tau_max),
            Complex64::new(self.sigma_min, self.tau_max),
        ]
    }

    /// Screen abscissa (vertical line).
    pub fn screen(&self) -> f64 {
        self.sigma_min
    }
}

/// A complex dimension: a pole with its multiplicity and principal-part
/// Laurent coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDimension {
    pub omega: (f64, f64),
    pub multiplicity: u32,
    /// `laurent[i]` is the coefficient of `(s − ω)^{i - multiplicity}`,
    /// i.e. the vector runs k = −multiplicity … −1 and ends on the residue.
    pub laurent: Vec<(f64, f64)>,
}

impl ComplexDimension {
    pub fn omega(&self) -> Complex64 {
        Complex64::new(self.omega.0, self.omega.1)
    }

    /// `laurent[-1]`.
    pub fn residue(&self) -> Complex64 {
        let (re, im) = *self.laurent.last().expect("nonempty laurent data");
        Complex64::new(re, im)
    }

    /// Coefficient of `(s−ω)^k` for `k ∈ [−multiplicity, −1]`.
    pub fn coeff(&self, k: i32) -> Complex64 {
        let idx = (k + self.multiplicity as i32) as usize;
        let (re, im) = self.laurent[idx];
        Complex64::new(re, im)
    }

    pub fn is_real(&self) -> bool {
        self.omega.1.abs() < 1e-9
    }
}

/// Sort complex dimensions by (Re, Im), the deterministic merge order.
pub fn sort_dimensions(dims: &mut [ComplexDimension]) {
    dims.sort_by(|a, b| {
        (a.omega.0, a.omega.1)
            .partial_cmp(&(b.omega.0, b.omega.1))
            .unwrap()
    });
}
