//! Self-similar sprays and the factorization
//! `ζ_{A,Ω}(s) = ζ_{∂G,G}(s) / (1 − Σ r_j^s)`.
//!
//! A spray drum is an abstract union of scaled generator copies. Its zeta
//! factorizes through the generator's zeta and the scaling (Moran) factor,
//! and its measurability follows the lattice/nonlattice dichotomy when the
//! similarity dimension dominates the generator's.
//!
//! Run with: cargo run --release --example spray_factorization

use fractal_zeta::criterion::Verdict;
use fractal_zeta::geometry::{FractalString, RatioList, RelativeFractalDrum, TubeMethod};
use fractal_zeta::report::{run_analyze, AnalyzeOptions};
use fractal_zeta::zeta::catalog_expr;
use num_complex::Complex64;

fn main() -> fractal_zeta::Result<()> {
    // generator: the unit-interval drum ({0,1}, (0,1))
    let generator = RelativeFractalDrum::string_drum(FractalString::single_gap(1.0)?);

    for (name, ratios) in [
        ("lattice spray {1/3, 1/3}", vec![1.0 / 3.0, 1.0 / 3.0]),
        ("nonlattice spray {1/2, 1/3}", vec![0.5, 1.0 / 3.0]),
    ] {
        let rl = RatioList::new(ratios, 1)?;
        let spray = RelativeFractalDrum::spray(generator.clone(), rl)?;
        let (expr, _) = catalog_expr(&spray)?;
        println!("{name}");
        println!("  zeta: {expr}");

        // the exact spray tube volume enumerates scaled generator copies
        let t = 0.01;
        let v = spray.tube_volume(t, &TubeMethod::Exact)?.0;
        println!("  V({t}) = {v:.8}, |Ω| = {:.8}", spray.omega_volume());

        // at s = N the zeta recovers |Ω|
        let n = spray.ambient_dim() as f64;
        let z = expr.eval(Complex64::new(n, 0.0)).re;
        assert!((z - spray.omega_volume()).abs() < 1e-9);

        let report = run_analyze(&spray, &AnalyzeOptions::default())?;
        match report.verdict.as_ref().unwrap() {
            Verdict::Measurable { dim, content, .. } => {
                println!("  Measurable: D = {dim:.6}, content {content:.6}")
            }
            Verdict::NotMeasurable { dim, principal, .. } => println!(
                "  NotMeasurable: D = {dim:.6} with {} principal pole(s) found",
                principal.len()
            ),
            v => println!("  {v:?}"),
        }
        for note in &report.hypothesis_notes {
            println!("  note: {note}");
        }
        println!();
    }
    Ok(())
}
