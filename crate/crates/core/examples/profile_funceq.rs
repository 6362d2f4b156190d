//! Quadrature bias probe replicating the residual path round by round.

use fractal_zeta::geometry::RelativeFractalDrum;
use fractal_zeta::zeta::{catalog_expr, tube_zeta_numeric, QuadratureOpts, VolumeBackend};
use num_complex::Complex64;

fn main() {
    let drum = RelativeFractalDrum::cantor();
    let (expr, _) = catalog_expr(&drum).unwrap();
    let s = Complex64::new(0.6789297535714575, 2.0);
    let n = 1.0;
    let delta = drum.delta();
    let zeta_cf = expr.eval(s);
    let qtol = 1e-8 * 0.25 * (1.0 + zeta_cf.norm());
    println!("qtol = {qtol:.3e}");
    let analytic = (zeta_cf - ((s - n) * delta.ln()).exp() * 1.0) / (n - s);
    let mut ratio = 0.9f64;
    for round in 0..7 {
        let opts = QuadratureOpts { grid_ratio: ratio, min_samples: 400, tol: qtol, max_refine: 0 };
        let (num, err) = tube_zeta_numeric(&drum, s, delta, &opts, VolumeBackend::Exact).unwrap();
        println!(
            "round {round} ratio {ratio:.5}: true err {:.3e}, est err {err:.3e}",
            (num - analytic).norm()
        );
        ratio = ratio.sqrt();
    }
}
