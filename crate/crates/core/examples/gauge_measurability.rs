//! Gauge (log-corrected) Minkowski measurability.
//!
//! The a = 1 fractal nest and the 1/2-square fractal both have a double
//! pole on their critical line: the plain content diverges, but dividing
//! by the gauge `h(t) = log(1/t)` restores a finite limit. The verdict
//! reads the gauge content off the leading Laurent coefficient; the nest's
//! exact tube volumes confirm it empirically.
//!
//! Run with: cargo run --release --example gauge_measurability

use fractal_zeta::criterion::Verdict;
use fractal_zeta::estimation::content_estimate;
use fractal_zeta::geometry::{RelativeFractalDrum, TubeMethod, TubeSamples};
use fractal_zeta::report::{run_analyze, AnalyzeOptions};

fn main() -> fractal_zeta::Result<()> {
    for (name, drum) in [
        ("fractal nest (a = 1)", RelativeFractalDrum::fractal_nest(1.0)?),
        ("1/2-square fractal", RelativeFractalDrum::half_square()),
    ] {
        let report = run_analyze(&drum, &AnalyzeOptions::default())?;
        match report.verdict.as_ref().unwrap() {
            Verdict::GaugeMeasurable { dim, order, gauge, content, .. } => println!(
                "{name}: D = {dim}, pole order {order}, gauge {gauge}, content {content:.6}"
            ),
            v => println!("{name}: unexpected verdict {v:?}"),
        }
        for note in &report.hypothesis_notes {
            println!("  note: {note}");
        }
    }

    // empirical confirmation on the nest: V(t)/(t log 1/t) → 2π while the
    // plain normalization V(t)/t diverges
    let nest = RelativeFractalDrum::fractal_nest(1.0)?;
    let samples = TubeSamples::sample(&nest, 0.02, 0.88, 150, &TubeMethod::Exact)?;
    let gauged = content_estimate(&samples, 2, 1.0, 2);
    let plain = content_estimate(&samples, 2, 1.0, 1);
    println!();
    println!("nest gauge-normalized content: mean {:.6} (2π = {:.6})", gauged.mean, std::f64::consts::TAU);
    println!("nest plain-normalized content keeps growing: upper {:.3}", plain.upper);
    Ok(())
}
