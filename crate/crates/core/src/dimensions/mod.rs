//! Complex dimensions: Dirichlet-polynomial zeros by argument-principle
//! subdivision, lattice classification, and pole spectra with Laurent data.

pub mod lattice;
pub mod moran;
pub mod spectrum;
pub mod window;

pub use lattice::{classify_lattice, rational_approx, LatticeClass};
pub use moran::{dirichlet_zeros, moran_roots, winding_number, MoranRoots};
pub use spectrum::{spectrum, Spectrum, LAURENT_FLOOR};
pub use window::{ComplexDimension, Window};
