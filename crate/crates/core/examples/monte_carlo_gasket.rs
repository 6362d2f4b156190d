//! Seeded Monte Carlo tube volumes for the Sierpinski gasket, checked
//! against the exact collar formulas and the s = N identity.
//!
//! One distance profile (10^6 points here) serves every t: volumes are
//! read off by rank, bit-reproducibly for a fixed (drum, samples, seed).
//!
//! Run with: cargo run --release --example monte_carlo_gasket

use fractal_zeta::geometry::{RelativeFractalDrum, TubeMethod};
use fractal_zeta::zeta::distance_zeta_mc;
use num_complex::Complex64;

fn main() -> fractal_zeta::Result<()> {
    let drum = RelativeFractalDrum::gasket();
    let mc = TubeMethod::MonteCarlo { samples: 1_000_000, seed: 42 };

    println!("{:>8}  {:>12}  {:>12}  {:>9}", "t", "exact", "monte carlo", "pull");
    for &t in &[0.15, 0.05, 0.01, 0.002] {
        let exact = drum.tube_volume(t, &TubeMethod::Exact)?.0;
        let (est, sigma) = drum.tube_volume(t, &mc)?;
        println!(
            "{t:>8.3}  {exact:>12.7}  {est:>12.7}  {:>8.2}σ",
            (est - exact) / sigma
        );
    }

    // above the first hole's inradius 1/(4√3) the inner neighborhood fills
    // the triangle: V_inner = √3/4
    let t = 0.15;
    let inner = drum.tube_volume(t, &TubeMethod::Exact)?.0 - drum.outer_collar(t);
    println!();
    println!("inner V(0.15) = {inner:.7} (√3/4 = {:.7})", 3f64.sqrt() / 4.0);

    // s = N identity through the independent Monte Carlo integral
    let n = drum.ambient_dim() as f64;
    let (z, sigma) = distance_zeta_mc(&drum, Complex64::new(n, 0.0), 2_000_000, 42)?;
    let v_delta = drum.tube_volume(drum.delta(), &TubeMethod::Exact)?.0;
    println!(
        "ζ_MC(N) = {:.6} ± {sigma:.2e} vs V(δ) = {v_delta:.6} (δ = {})",
        z.re,
        drum.delta()
    );
    Ok(())
}
