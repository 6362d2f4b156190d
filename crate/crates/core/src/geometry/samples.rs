//! Tube-function samples on a geometric grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::drum::{RelativeFractalDrum, TubeMethod};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeSample {
    pub t: f64,
    pub volume: f64,
    pub abs_error: f64,
}

/// `(t, V(t), error)` triples on a geometric grid `t_k = t_max ρ^k`,
/// strictly decreasing in `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeSamples {
    pub entries: Vec<TubeSample>,
}

impl TubeSamples {
    pub fn from_entries(entries: Vec<TubeSample>) -> Result<Self> {
        if entries.windows(2).any(|w| w[1].t >= w[0].t) {
            return Err(Error::InvalidInput("t grid must be strictly decreasing".into()));
        }
        if entries.iter().any(|e| !(e.t > 0.0) || e.volume < 0.0 || e.abs_error < 0.0) {
            return Err(Error::InvalidInput("bad sample entry".into()));
        }
        Ok(Self { entries })
    }

    /// Sample a drum on `t_k = t_max ρ^k`, `k = 0..count`. Monte Carlo
    /// backends reuse a single distance profile across the whole grid.
    pub fn sample(
        drum: &RelativeFractalDrum,
        t_max: f64,
        ratio: f64,
        count: usize,
        method: &TubeMethod,
    ) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidInput("grid ratio must lie in (0,1)".into()));
        }
        let mut entries = Vec::with_capacity(count);
        match method {
            TubeMethod::MonteCarlo { samples, seed } => {
                let profile = drum.distance_profile(*samples, *seed)?;
                let sat = drum.delta();
                for k in 0..count {
                    let t = t_max * ratio.powi(k as i32);
                    let tc = t.min(sat);
                    let (mut v, e) = profile.tube_volume(if drum.is_absolute() { tc } else { t });
                    if drum.is_absolute() {
                        v += drum.outer_collar(tc);
                    }
                    entries.push(TubeSample { t, volume: v, abs_error: e });
                }
            }
            _ => {
                for k in 0..count {
                    let t = t_max * ratio.powi(k as i32);
                    let (v, e) = drum.tube_volume(t, method)?;
                    entries.push(TubeSample { t, volume: v, abs_error: e });
                }
            }
        }
        Self::from_entries(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Decades of t spanned by the grid.
    pub fn decades(&self) -> f64 {
        if self.entries.len() < 2 {
            return 0.0;
        }
        (self.entries[0].t / self.entries[self.entries.len() - 1].t).log10()
    }

    /// Volumes must be nondecreasing in t (within summed error bars).
    pub fn check_monotone(&self) -> bool {
        self.entries.windows(2).all(|w| {
            w[1].volume <= w[0].volume + w[0].abs_error + w[1].abs_error + 1e-12
        })
    }

    /// CSV with header `t,volume,abs_error`, full double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,volume,abs_error\n");
        for e in &self.entries {
            out.push_str(&format!("{:e},{:e},{:e}\n", e.t, e.volume, e.abs_error));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 && line.trim() == "t,volume,abs_error" {
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidInput(format!("bad CSV line {}", i + 1)));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad number on line {}: {e}", i + 1)))
            };
            entries.push(TubeSample {
                t: parse(parts[0])?,
                volume: parse(parts[1])?,
                abs_error: parse(parts[2])?,
            });
        }
        Self::from_entries(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let s = TubeSamples::from_entries(vec![
            TubeSample { t: 0.1, volume: 0.5, abs_error: 0.0 },
            TubeSample { t: 0.01, volume: 0.25, abs_error: 1e-6 },
        ])
        .unwrap();
        let csv = s.to_csv();
        assert!(csv.starts_with("t,volume,abs_error\n"));
        let back = TubeSamples::from_csv(&csv).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn rejects_nonmonotone_grid() {
        let r = TubeSamples::from_entries(vec![
            TubeSample { t: 0.1, volume: 0.5, abs_error: 0.0 },
            TubeSample { t: 0.2, volume: 0.6, abs_error: 0.0 },
        ]);
        assert!(r.is_err());
    }
}
