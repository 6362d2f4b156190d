//! Command-line front end: drum descriptors in, JSON/CSV reports out.
//!
//! Exit codes: 0 success, 1 analysis failure, 2 input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::error::Error;
use crate::geometry::{RatioList, RelativeFractalDrum, TubeMethod, TubeSamples};
use crate::report::{run_analyze, report_to_json, AnalyzeOptions};
use crate::zeta::{catalog_expr, zeta_numeric, QuadratureOpts, VolumeBackend, ZetaKind};

pub mod checks;

#[derive(Parser)]
#[command(
    name = "fractal-zeta",
    about = "Fractal zeta functions, complex dimensions and Minkowski measurability of relative fractal drums",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// Seed for every stochastic backend (echoed in reports).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Target tolerance for numeric routes.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis: spectrum, verdict, bounds and estimation report.
    Analyze {
        /// Drum descriptor JSON file.
        #[arg(long)]
        drum: PathBuf,
        /// Window override σ_min,σ_max,τ_max.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        window: Option<Vec<f64>>,
        /// Monte Carlo samples for drums without exact backends.
        #[arg(long, default_value_t = 2_000_000)]
        mc_samples: u64,
    },
    /// Zeta values on a rectangular grid, as CSV `re_s,im_s,re_zeta,im_zeta`.
    Zeta {
        #[arg(long)]
        drum: PathBuf,
        /// Which zeta to evaluate.
        #[arg(long, default_value = "expr")]
        kind: String,
        /// Real-axis grid start:stop:count.
        #[arg(long, value_delimiter = ':', num_args = 3)]
        re: Vec<f64>,
        /// Imaginary-axis grid start:stop:count.
        #[arg(long, value_delimiter = ':', num_args = 3)]
        im: Vec<f64>,
        /// Monte Carlo samples when the numeric backend is stochastic.
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Tube volumes on a geometric grid:
    /// CSV `t,v_direct,err_direct,v_formula,tail_bound`.
    Tube {
        #[arg(long)]
        drum: PathBuf,
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// direct | formula | both
        #[arg(long, default_value = "both")]
        method: String,
        /// Fourier truncation for the catalog formulas.
        #[arg(long, default_value_t = 50)]
        k_terms: u32,
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Complex Moran roots in a strip, as JSON.
    Moran {
        /// Comma-separated contraction ratios.
        #[arg(long, value_delimiter = ',')]
        ratios: Vec<f64>,
        /// Strip bounds σ_min,σ_max.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        strip: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
    },
    /// Empirical estimates from tube samples, as JSON.
    Estimate {
        #[arg(long)]
        drum: Option<PathBuf>,
        /// Pre-recorded samples CSV (`t,volume,abs_error`).
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, default_value_t = 300)]
        points: usize,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Run an invariant suite: functional-equations | scaling |
    /// tube-exactness | moran | estimation-synthetic | all.
    Check { suite: String },
}

/// Entry point; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidInput(_) | Error::Json(_) | Error::UnknownSuite(_) => 2,
                Error::Io(_) => 2,
                _ => 1,
            }
        }
    }
}

fn load_drum(path: &PathBuf) -> crate::Result<RelativeFractalDrum> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    RelativeFractalDrum::from_descriptor(&value)
}

fn emit(global: &GlobalArgs, content: &str) -> crate::Result<()> {
    match &global.out {
        Some(path) => {
            std::fs::write(path, content)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> crate::Result<()> {
    let global = cli.global.clone();
    match cli.command {
        Command::Analyze { drum, window, mc_samples } => {
            let drum = load_drum(&drum)?;
            let window = match window {
                Some(v) => Some(crate::dimensions::Window::new(v[0], v[1], v[2])?),
                None => None,
            };
            let opts = AnalyzeOptions {
                seed: global.seed,
                tol: global.tol,
                mc_samples,
                window,
            };
            let report = run_analyze(&drum, &opts)?;
            emit(&global, &report_to_json(&report)?)
        }
        Command::Zeta { drum, kind, re, im, mc_samples } => {
            let drum = load_drum(&drum)?;
            if re.len() != 3 || im.len() != 3 {
                return Err(Error::InvalidInput("--re and --im need start:stop:count".into()));
            }
            let backend = match mc_samples {
                Some(n) => VolumeBackend::MonteCarlo { samples: n, seed: global.seed },
                None => VolumeBackend::Exact,
            };
            let opts = QuadratureOpts::with_tol(global.tol);
            let expr = catalog_expr(&drum).ok();
            let mut csv = String::from("re_s,im_s,re_zeta,im_zeta\n");
            let (rn, inn) = (re[2] as usize, im[2] as usize);
            for i in 0..rn.max(1) {
                let sr = if rn > 1 { re[0] + (re[1] - re[0]) * i as f64 / (rn - 1) as f64 } else { re[0] };
                for j in 0..inn.max(1) {
                    let si = if inn > 1 {
                        im[0] + (im[1] - im[0]) * j as f64 / (inn - 1) as f64
                    } else {
                        im[0]
                    };
                    let s = Complex64::new(sr, si);
                    let v = match kind.as_str() {
                        "expr" => expr
                            .as_ref()
                            .map(|(e, _)| e.eval(s))
                            .ok_or_else(|| Error::NoClosedForm("no expression".into()))?,
                        "distance" => zeta_numeric(&drum, ZetaKind::Distance, s, &opts, backend)?.0,
                        "tube" => zeta_numeric(&drum, ZetaKind::Tube, s, &opts, backend)?.0,
                        "mellin" => zeta_numeric(&drum, ZetaKind::Mellin, s, &opts, backend)?.0,
                        "geometric" => {
                            zeta_numeric(&drum, ZetaKind::Geometric, s, &opts, backend)?.0
                        }
                        other => {
                            return Err(Error::InvalidInput(format!("unknown zeta kind {other}")))
                        }
                    };
                    csv.push_str(&format!("{sr:e},{si:e},{:e},{:e}\n", v.re, v.im));
                }
            }
            emit(&global, &csv)
        }
        Command::Tube { drum, tmin, tmax, points, method, k_terms, mc_samples } => {
            let drum = load_drum(&drum)?;
            if !(tmin > 0.0 && tmax > tmin) {
                return Err(Error::InvalidInput("need 0 < tmin < tmax".into()));
            }
            let want_direct = method == "direct" || method == "both";
            let want_formula = method == "formula" || method == "both";
            if !want_direct && !want_formula {
                return Err(Error::InvalidInput(format!("unknown tube method {method}")));
            }
            let tube_method = match mc_samples {
                Some(n) => TubeMethod::MonteCarlo { samples: n, seed: global.seed },
                None => TubeMethod::Exact,
            };
            let mut csv = String::from("t,v_direct,err_direct,v_formula,tail_bound\n");
            let ratio = (tmin / tmax).powf(1.0 / (points.max(2) - 1) as f64);
            let samples = if want_direct {
                Some(TubeSamples::sample(&drum, tmax, ratio, points, &tube_method)?)
            } else {
                None
            };
            for k in 0..points {
                let t = tmax * ratio.powi(k as i32);
                let (vd, ed) = match &samples {
                    Some(s) => (s.entries[k].volume, s.entries[k].abs_error),
                    None => (f64::NAN, f64::NAN),
                };
                let (vf, tb) = if want_formula {
                    match crate::tubeformula::catalog_exact_tube(&drum, t, k_terms) {
                        Ok((v, b)) => (v, b),
                        Err(_) => (f64::NAN, f64::NAN),
                    }
                } else {
                    (f64::NAN, f64::NAN)
                };
                csv.push_str(&format!("{t:e},{vd:e},{ed:e},{vf:e},{tb:e}\n"));
            }
            emit(&global, &csv)
        }
        Command::Moran { ratios, strip, tmax } => {
            if strip.len() != 2 {
                return Err(Error::InvalidInput("--strip needs σ_min,σ_max".into()));
            }
            let rl = RatioList::new(ratios, 1)?;
            let window = crate::dimensions::Window::new(strip[0], strip[1], tmax)?;
            let roots = crate::dimensions::moran_roots(&rl, &window, global.tol.min(1e-10))?;
            let rows: Vec<serde_json::Value> = roots
                .roots
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "re": r.omega.0,
                        "im": r.omega.1,
                        "multiplicity": r.multiplicity,
                        "residue_re": r.residue().re,
                        "residue_im": r.residue().im,
                    })
                })
                .collect();
            let out = serde_json::json!({
                "roots": rows,
                "sigma0": roots.sigma0,
                "lattice": crate::dimensions::classify_lattice(&rl),
            });
            emit(&global, &serde_json::to_string_pretty(&out)?)
        }
        Command::Estimate { drum, samples, points, tmax, mc_samples } => {
            let tube = match (&drum, &samples) {
                (_, Some(path)) => TubeSamples::from_csv(&std::fs::read_to_string(path)?)?,
                (Some(path), None) => {
                    let drum = load_drum(path)?;
                    let method = match mc_samples {
                        Some(n) => TubeMethod::MonteCarlo { samples: n, seed: global.seed },
                        None => TubeMethod::Exact,
                    };
                    let tmax = tmax.unwrap_or(drum.delta());
                    TubeSamples::sample(&drum, tmax, 0.9, points, &method)?
                }
                (None, None) => {
                    return Err(Error::InvalidInput("need --drum or --samples".into()))
                }
            };
            let dim_info = drum
                .as_ref()
                .and_then(|p| load_drum(p).ok())
                .and_then(|d| d.box_dimension().map(|v| (d.ambient_dim(), v)));
            let (n, d, derr) = match dim_info {
                Some((n, d)) => (n, d, 0.0),
                None => {
                    let n = 1; // samples alone default to ambient dimension 1
                    let (d, e) = crate::estimation::box_dimension_fit(&tube, n)?;
                    (n, d, e)
                }
            };
            let m = crate::estimation::gauge_order_probe(&tube, n, d);
            let content = crate::estimation::content_estimate(&tube, n, d, m);
            let osc = crate::estimation::oscillation_probe(&tube, n, d);
            let alpha = crate::estimation::remainder_order_fit(&tube, n, d, content.mean, m).ok();
            let out = serde_json::json!({
                "D": d,
                "stderr": derr,
                "content": content,
                "gauge_order": m,
                "oscillation": { "period": osc.period, "amplitude": osc.amplitude },
                "kappa": serde_json::Value::Null,
                "alpha": alpha.as_ref().map(|a| a.alpha),
                "alpha_oscillatory": alpha.as_ref().map(|a| a.oscillatory),
            });
            emit(&global, &serde_json::to_string_pretty(&out)?)
        }
        Command::Check { suite } => {
            let results = checks::run_suite(&suite, global.seed)?;
            let mut all_pass = true;
            let mut text = String::new();
            for r in &results {
                all_pass &= r.pass;
                text.push_str(&format!(
                    "[{}] {:<44} {:>8.2}s  {}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.seconds,
                    r.detail
                ));
            }
            emit(&global, &text)?;
            if !all_pass {
                return Err(Error::CheckFailed(suite));
            }
            Ok(())
        }
    }
}
