//! Fractal zeta functions and complex dimensions of relative fractal drums.
//!
//! A relative fractal drum (RFD) is a pair `(A, Ω)` of a set and a
//! finite-volume region. Its distance zeta function `∫_Ω d(x,A)^{s-N} dx`
//! continues meromorphically, and the poles — the complex dimensions —
//! control the small-`t` behavior of the tube function `V(t) = |A_t ∩ Ω|`:
//! Minkowski measurability, gauge (log-corrected) measurability, contents
//! and log-periodic oscillations.
//!
//! The crate has three layers that check each other:
//! geometric backends measure `V(t)` and distances directly; closed-form
//! zeta expressions supply exact pole data; and the estimation module fits
//! dimensions, contents and oscillations from samples alone. See the
//! `examples/` directory for one runnable walk-through per capability.

pub mod criterion;
pub mod dimensions;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod report;
pub mod series;
pub mod tubeformula;
pub mod zeta;

pub use error::{Error, Result};
pub mod cli;
