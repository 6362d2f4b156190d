//! End-to-end analysis of the Cantor string drum (C, (0,1)):
//! spectrum, measurability verdict, content bounds and the empirical
//! block, printed as the same JSON report the CLI emits.
//!
//! Run with: cargo run --release --example analyze_cantor

use fractal_zeta::geometry::RelativeFractalDrum;
use fractal_zeta::report::{report_to_json, run_analyze, AnalyzeOptions};

fn main() -> fractal_zeta::Result<()> {
    let drum = RelativeFractalDrum::cantor();
    let report = run_analyze(&drum, &AnalyzeOptions::default())?;

    println!("{}", report_to_json(&report)?);

    // headline numbers
    eprintln!();
    eprintln!("D = {} ({})", report.dimension.value, report.dimension.provenance);
    if let Some(v) = &report.verdict {
        eprintln!("verdict: {v:?}");
    }
    if let Some(b) = &report.bounds {
        eprintln!("content upper bound (C = {}): {:?}", b.tauberian_c, b.upper);
    }
    Ok(())
}
