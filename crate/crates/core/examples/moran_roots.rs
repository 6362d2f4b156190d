//! Complex Moran roots: the lattice/nonlattice dichotomy in action.
//!
//! `Σ r_j^s = 1` puts all its roots on finitely many vertical lines when
//! the ratios generate a rank-1 multiplicative group (lattice case), and
//! leaves σ0 alone on the critical line otherwise. This example scans the
//! Cantor ratios {1/3, 1/3}, the golden-mean pair {1/2, 1/4} and the
//! nonlattice pair {1/2, 1/3}.
//!
//! Run with: cargo run --release --example moran_roots

use fractal_zeta::dimensions::{classify_lattice, moran_roots, LatticeClass, Window};
use fractal_zeta::geometry::RatioList;

fn main() -> fractal_zeta::Result<()> {
    for (name, ratios, window) in [
        ("cantor {1/3, 1/3}", vec![1.0 / 3.0, 1.0 / 3.0], Window::new(0.0, 1.0, 12.0)?),
        ("golden {1/2, 1/4}", vec![0.5, 0.25], Window::new(0.5, 0.9, 10.0)?),
        ("nonlattice {1/2, 1/3}", vec![0.5, 1.0 / 3.0], Window::new(0.5, 0.9, 12.0)?),
    ] {
        let rl = RatioList::new(ratios, 1)?;
        let found = moran_roots(&rl, &window, 1e-12)?;
        println!("{name}: σ0 = {:.12}", found.sigma0);
        match classify_lattice(&rl) {
            LatticeClass::Lattice { r, period } => {
                println!("  lattice, generator r = {r:.12}, oscillatory period {period:.6}")
            }
            LatticeClass::Nonlattice { witness, best_approx, approx_error } => println!(
                "  nonlattice; witness pair {witness:?}, best rational {}/{} off by {approx_error:.2e}",
                best_approx.0, best_approx.1
            ),
        }
        for root in &found.roots {
            println!(
                "  root {:+.9} {:+.9}i  (multiplicity {}, residue {:+.6})",
                root.omega.0,
                root.omega.1,
                root.multiplicity,
                root.residue().re
            );
        }
        println!();
    }
    Ok(())
}
