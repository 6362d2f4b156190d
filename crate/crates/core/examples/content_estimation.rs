//! Empirical dimension, content and oscillation estimates from tube
//! samples alone — the route that works when no closed form exists.
//!
//! The a-string is Minkowski measurable (content 2√2 at a = 1), while the
//! Cantor string shows a genuine limsup/liminf gap and a log-periodic
//! oscillation of multiplicative period 3.
//!
//! Run with: cargo run --release --example content_estimation

use fractal_zeta::estimation::{box_dimension_fit, content_estimate, oscillation_probe, remainder_order_fit};
use fractal_zeta::geometry::{RelativeFractalDrum, TubeMethod, TubeSamples};

fn main() -> fractal_zeta::Result<()> {
    // a-string: single simple principal pole, clean power law
    let astring = RelativeFractalDrum::a_string(1.0)?;
    let samples = TubeSamples::sample(&astring, 0.05, 0.9, 220, &TubeMethod::Exact)?;
    let (d, derr) = box_dimension_fit(&samples, 1)?;
    let content = content_estimate(&samples, 1, d, 1);
    let osc = oscillation_probe(&samples, 1, d);
    println!("a-string (a = 1):");
    println!("  D = {d:.4} ± {derr:.4}  (exact 1/2)");
    println!(
        "  content mean {:.5} in [{:.5}, {:.5}]  (exact 2√2 = {:.5})",
        content.mean,
        content.lower,
        content.upper,
        2.0 * std::f64::consts::SQRT_2
    );
    println!("  oscillation amplitude {:.5} (none expected)", osc.amplitude);
    let fit = remainder_order_fit(&samples, 1, d, content.mean, 1)?;
    println!("  remainder order α = {:.3} ± {:.3} (next pole at 0 gives 1/2)", fit.alpha, fit.stderr);

    // Cantor string: lattice oscillations block the limit
    let cantor = RelativeFractalDrum::cantor();
    let samples = TubeSamples::sample(&cantor, 1.0 / 6.0, 0.9, 260, &TubeMethod::Exact)?;
    let (d, derr) = box_dimension_fit(&samples, 1)?;
    let content = content_estimate(&samples, 1, d, 1);
    let osc = oscillation_probe(&samples, 1, d);
    println!();
    println!("Cantor string:");
    println!("  D = {d:.4} ± {derr:.4}  (exact log 2/log 3 = {:.4})", 2f64.ln() / 3f64.ln());
    println!(
        "  normalized contents straddle [{:.4}, {:.4}]: no limit",
        content.lower, content.upper
    );
    println!(
        "  log-periodic oscillation: period {:.4} (log 3 = {:.4}), amplitude {:.4}",
        osc.period,
        3f64.ln(),
        osc.amplitude
    );
    Ok(())
}
