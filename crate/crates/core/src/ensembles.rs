// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Seeded random jump operators and operator-norm concentration experiments.
//!
//! All ensembles are entrywise i.i.d. with mean zero and E|entry|² = 1, so
//! E‖G‖₂² = d². Trials are reproducible: trial i of dimension d draws from a
//! ChaCha8 stream keyed by splitmix64 mixing of (master seed, d, i), which
//! makes parallel and serial runs bit-identical.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::lindblad::JumpOperator;
use crate::tensor::{schatten_norm, ComplexMatrix, SchattenP};
use crate::{Error, Mat64, Result, C64};

/// Entrywise i.i.d. complex ensemble, calibrated to unit variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleKind {
    /// Re and Im parts independent N(0, ½).
    GinibreComplex,
    /// Uniform on the disc of the stored radius (√2 for unit variance).
    UniformComplex { scale: f64 },
    /// Uniform over {1, −1, i, −i}.
    RademacherComplex,
}

impl EnsembleKind {
    pub fn ginibre() -> Self {
        EnsembleKind::GinibreComplex
    }

    /// Uniform-disc ensemble with radius √2, so that E|z|² = 1.
    pub fn uniform_disc() -> Self {
        EnsembleKind::UniformComplex {
            scale: std::f64::consts::SQRT_2,
        }
    }

    pub fn rademacher() -> Self {
        EnsembleKind::RademacherComplex
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::GinibreComplex => "ginibre",
            EnsembleKind::UniformComplex { .. } => "uniform",
            EnsembleKind::RademacherComplex => "rademacher",
        }
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ginibre" => Ok(Self::ginibre()),
            "uniform" => Ok(Self::uniform_disc()),
            "rademacher" => Ok(Self::rademacher()),
            other => Err(Error::arg(format!("unknown ensemble kind '{other}'"))),
        }
    }
}

/// Master seed; per-trial streams are derived, never shared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed {
    pub master: u64,
}

impl RngSeed {
    pub fn new(master: u64) -> Self {
        RngSeed { master }
    }

    /// Stream for a single index: ChaCha8 seeded with
    /// splitmix64(master + splitmix64(index)).
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix64(self.master, index))
    }

    /// Stream keyed by two indices (e.g. dimension and trial).
    pub fn substream(&self, a: u64, b: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix64(mix64(self.master, a), b))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn mix64(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(splitmix64(index)))
}

/// One concentration-experiment sample.
#[derive(Debug, Clone, Copy)]
pub struct TailRecord {
    pub d: usize,
    pub trial: usize,
    /// ‖L‖∞² of the Frobenius-normalized draw.
    pub norm_sq: f64,
    /// d · ‖L‖∞².
    pub scaled: f64,
    /// 16/d + 8·log(2/δ)/d².
    pub bound: f64,
    pub violated: bool,
}

/// Per-dimension aggregation of the tail experiment.
#[derive(Debug, Clone, Copy)]
pub struct TailStats {
    pub d: usize,
    pub violation_rate: f64,
    pub median_scaled: f64,
}

#[derive(Debug, Clone)]
pub struct TailSummary {
    pub records: Vec<TailRecord>,
    pub per_d: Vec<TailStats>,
}

/// A d×d matrix with i.i.d. entries from the given ensemble.
pub fn sample_matrix(kind: EnsembleKind, d: usize, rng: &mut impl Rng) -> Mat64 {
    let mut data = Vec::with_capacity(d * d);
    match kind {
        EnsembleKind::GinibreComplex => {
            let sigma = std::f64::consts::FRAC_1_SQRT_2;
            for _ in 0..d * d {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                data.push(C64::new(sigma * re, sigma * im));
            }
        }
        EnsembleKind::UniformComplex { scale } => {
            for _ in 0..d * d {
                let r = scale * rng.gen::<f64>().sqrt();
                let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
                data.push(C64::new(r * phi.cos(), r * phi.sin()));
            }
        }
        EnsembleKind::RademacherComplex => {
            for _ in 0..d * d {
                data.push(match rng.gen_range(0..4) {
                    0 => C64::new(1.0, 0.0),
                    1 => C64::new(-1.0, 0.0),
                    2 => C64::new(0.0, 1.0),
                    _ => C64::new(0.0, -1.0),
                });
            }
        }
    }
    ComplexMatrix::new(d, d, data).expect("sampled entries are finite")
}

/// Frobenius normalization L = G/‖G‖₂; fails on the zero matrix.
pub fn normalize_frobenius(g: &Mat64) -> Result<JumpOperator<f64>> {
    let norm = g.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::arg("cannot normalize the zero matrix"));
    }
    JumpOperator::new(g.scaled_re(1.0 / norm))
}

/// Haar-random pure state as a unit column vector.
pub fn sample_haar_state(d: usize, rng: &mut impl Rng) -> Mat64 {
    let mut v = Vec::with_capacity(d);
    for _ in 0..d {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        v.push(C64::new(re, im));
    }
    let m = ComplexMatrix::new(d, 1, v).expect("sampled entries are finite");
    let n = m.frobenius_norm();
    m.scaled_re(1.0 / n)
}

/// Draws `trials` Frobenius-normalized samples per dimension and records
/// whether ‖L‖∞² exceeds 16/d + 8·log(2/δ)/d².
///
/// The record list is a pure function of the inputs, independent of
/// execution order and worker count.
pub fn tail_experiment(
    kind: EnsembleKind,
    d_list: &[usize],
    trials: usize,
    delta: f64,
    seed: RngSeed,
) -> Result<TailSummary> {
    if trials == 0 {
        return Err(Error::arg("at least one trial required"));
    }
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::arg("delta must lie in (0, 1)"));
    }
    let mut records = Vec::with_capacity(d_list.len() * trials);
    for &d in d_list {
        if d == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        let bound = 16.0 / d as f64 + 8.0 * (2.0 / delta).ln() / (d as f64 * d as f64);
        let mut rows: Vec<TailRecord> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = seed.substream(d as u64, trial as u64);
                let g = sample_matrix(kind, d, &mut rng);
                let sigma_max = schatten_norm(&g, SchattenP::Inf);
                let frob = g.frobenius_norm();
                let norm_sq = (sigma_max / frob).powi(2);
                TailRecord {
                    d,
                    trial,
                    norm_sq,
                    scaled: d as f64 * norm_sq,
                    bound,
                    violated: norm_sq > bound,
                }
            })
            .collect();
        rows.sort_by_key(|r| r.trial);
        records.extend(rows);
    }

    let per_d = d_list
        .iter()
        .map(|&d| {
            let group: Vec<&TailRecord> = records.iter().filter(|r| r.d == d).collect();
            let violations = group.iter().filter(|r| r.violated).count();
            let mut scaled: Vec<f64> = group.iter().map(|r| r.scaled).collect();
            scaled.sort_by(|a, b| a.partial_cmp(b).unwrap());
            TailStats {
                d,
                violation_rate: violations as f64 / group.len() as f64,
                median_scaled: median_of_sorted(&scaled),
            }
        })
        .collect();

    Ok(TailSummary { records, per_d })
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
