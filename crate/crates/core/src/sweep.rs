//! `σ_L` sweeps comparing the statevector oracle with the reduced-phase
//! estimator, and the classical null suite.
//!
//! Every sweep point reuses one set of standard normals `z_j` drawn from
//! `seed`: the oracle sees `Δ = z·σ_L/√2`, the reduced estimator `Δ = z·σ_L`.

use std::f64::consts::SQRT_2;
use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::chsh::{canonical_settings, ChshEstimate};
use crate::circular::PhaseDistribution;
use crate::estimator::{chsh_raw, chsh_reduced_with_kappa, gamma_from_deltas, Convention};
use crate::oracle::{chsh_oracle_from_deltas, qubit_sigma, standard_normals};
use crate::rng::stream;
use crate::stats::mean_se;
use crate::synth::{synth_pair, RecordModel, ResponseMap};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 7] =
    ["sigma_L", "S_oracle", "S_oracle_se", "S_reduced", "S_reduced_se", "kappa", "gamma_abs"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub kappa: f64,
    pub convention: Convention,
    /// Binomial shot count for the oracle; `None` gives exact expectations.
    pub shots: Option<u32>,
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub out_manifest: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sigma_min: 0.0,
            sigma_max: 2.4,
            steps: 100,
            samples: 500,
            seed: 7,
            kappa: 1.0,
            convention: Convention::AppendixFirstHarmonic,
            shots: None,
            out_csv: None,
            out_svg: None,
            out_manifest: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !self.sigma_min.is_finite() || !self.sigma_max.is_finite() || self.sigma_min < 0.0 {
            return bad(format!("σ range must be finite and ≥ 0, got [{}, {}]", self.sigma_min, self.sigma_max));
        }
        if self.sigma_min > self.sigma_max {
            return bad(format!("sigma_min {} exceeds sigma_max {}", self.sigma_min, self.sigma_max));
        }
        if self.steps < 2 {
            return bad(format!("need ≥ 2 steps, got {}", self.steps));
        }
        if self.samples < 2 {
            return bad(format!("need ≥ 2 samples per point, got {}", self.samples));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return bad(format!("κ must lie in [0, 1], got {}", self.kappa));
        }
        if self.shots == Some(0) {
            return bad("shot count must be positive".into());
        }
        Ok(())
    }

    /// `steps` evenly spaced values from `sigma_min` to `sigma_max` inclusive.
    pub fn sigmas(&self) -> Vec<f64> {
        let step = (self.sigma_max - self.sigma_min) / (self.steps - 1) as f64;
        let mut v: Vec<f64> = (0..self.steps).map(|i| self.sigma_min + i as f64 * step).collect();
        v[self.steps - 1] = self.sigma_max;
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub sigma_l: f64,
    pub oracle: ChshEstimate,
    pub reduced: ChshEstimate,
    pub kappa: f64,
    pub gamma_abs: f64,
}

/// Reduced-phase estimate from phase differences.
///
/// Under the appendix convention the SE is `2√2κ·std(cos 2Δ)/√n`, otherwise the
/// delta-method SE of `|γ̂|`.
pub fn reduced_from_deltas(deltas: &[f64], kappa: f64, convention: Convention) -> Result<(ChshEstimate, f64)> {
    let gamma = gamma_from_deltas(deltas, convention)?;
    let mut est = chsh_reduced_with_kappa(kappa, &gamma);
    if convention == Convention::AppendixFirstHarmonic {
        let contrib: Vec<f64> = deltas.iter().map(|d| (2.0 * d).cos()).collect();
        let (_, se) = mean_se(&contrib).expect("n ≥ 2");
        est.se = 2.0 * SQRT_2 * kappa * se;
    }
    Ok((est, gamma.modulus()))
}

fn sweep_point(cfg: &SweepConfig, z: &[f64], index: usize, sigma: f64) -> Result<SweepPoint> {
    let sq = qubit_sigma(sigma);
    let oracle_deltas: Vec<f64> = z.iter().map(|z| z * sq).collect();
    let mut shot_rng = stream(cfg.seed, 1000 + index as u64);
    let oracle =
        chsh_oracle_from_deltas(&oracle_deltas, &canonical_settings(), cfg.shots.map(|n| (n, &mut shot_rng)))?;
    let deltas: Vec<f64> = z.iter().map(|z| z * sigma).collect();
    let (reduced, gamma_abs) = reduced_from_deltas(&deltas, cfg.kappa, cfg.convention)?;
    Ok(SweepPoint { sigma_l: sigma, oracle, reduced, kappa: cfg.kappa, gamma_abs })
}

/// Runs every point; results are in `σ` order and independent of thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let z = standard_normals(cfg.samples, &mut stream(cfg.seed, 0));
    let sigmas = cfg.sigmas();
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(sigmas.len());
    if threads <= 1 {
        return sigmas.iter().enumerate().map(|(i, &s)| sweep_point(cfg, &z, i, s)).collect();
    }
    let chunk = sigmas.len().div_ceil(threads);
    let results: Vec<Result<Vec<SweepPoint>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = sigmas
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let z = &z;
                scope.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(k, &s)| sweep_point(cfg, z, c * chunk + k, s))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut points = Vec::with_capacity(sigmas.len());
    for r in results {
        points.extend(r?);
    }
    Ok(points)
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for p in points {
        let row = [p.sigma_l, p.oracle.s, p.oracle.se, p.reduced.s, p.reduced.se, p.kappa, p.gamma_abs];
        w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// First downward crossing of `level`, linearly interpolated.
pub fn first_crossing(xs: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    xs.windows(2).zip(ys.windows(2)).find_map(|(x, y)| {
        if y[0] >= level && y[1] < level {
            Some(x[0] + (y[0] - level) / (y[0] - y[1]) * (x[1] - x[0]))
        } else {
            None
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossings {
    pub oracle: Option<f64>,
    pub reduced: Option<f64>,
}

pub fn crossings(points: &[SweepPoint]) -> Crossings {
    let xs: Vec<f64> = points.iter().map(|p| p.sigma_l).collect();
    let o: Vec<f64> = points.iter().map(|p| p.oracle.s).collect();
    let r: Vec<f64> = points.iter().map(|p| p.reduced.s).collect();
    Crossings { oracle: first_crossing(&xs, &o, 2.0), reduced: first_crossing(&xs, &r, 2.0) }
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestPoint {
    pub sigma_l: f64,
    pub s_oracle: f64,
    pub s_oracle_se: f64,
    pub s_reduced: f64,
    pub s_reduced_se: f64,
    pub gamma_abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub config: SweepConfig,
    pub version: String,
    pub wall_time_s: f64,
    pub crossings: Crossings,
    pub points: Vec<ManifestPoint>,
}

impl RunManifest {
    pub fn new(config: &SweepConfig, points: &[SweepPoint], wall_time_s: f64) -> Self {
        Self {
            config: config.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            crossings: crossings(points),
            points: points
                .iter()
                .map(|p| ManifestPoint {
                    sigma_l: p.sigma_l,
                    s_oracle: p.oracle.s,
                    s_oracle_se: p.oracle.se,
                    s_reduced: p.reduced.s,
                    s_reduced_se: p.reduced.se,
                    gamma_abs: p.gamma_abs,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullSuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Decorrelated windows per trial record.
    pub windows: usize,
}

impl Default for NullSuiteConfig {
    fn default() -> Self {
        Self { trials: 100, seed: 1, windows: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullVariantReport {
    pub model: String,
    pub trials: usize,
    pub max_abs_s: f64,
    /// Largest `|S| − (2 + 4·SE)` over trials.
    pub worst_margin: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullReport {
    pub variants: Vec<NullVariantReport>,
    pub passed: bool,
}

/// Slack for exact ties at `|S| = 2` under rounding.
const BOUND_SLACK: f64 = 1e-12;

/// The classical models exercised by the null suite, for one trial.
pub fn null_models(trial_seed: u64) -> Vec<(&'static str, RecordModel, f64, f64)> {
    use rand::Rng;
    let mut r = stream(trial_seed, 7);
    let (p1, p2) = (r.random::<f64>() * std::f64::consts::TAU, r.random::<f64>() * std::f64::consts::TAU);
    let shared = |map_b| RecordModel::ClassicalSharedLambda {
        lambda: PhaseDistribution::Uniform,
        tau_c: 1.0,
        map_a: ResponseMap::Identity,
        map_b,
    };
    // (name, model, dt, samples per window)
    vec![
        ("deterministic", RecordModel::ClassicalDeterministic { phi1: p1, phi2: p2 }, 1.0, 1.0),
        ("shared-lambda-identity", shared(ResponseMap::Identity), 0.25, 4.0),
        ("shared-lambda-detuned", shared(ResponseMap::Offset(0.3)), 0.25, 4.0),
        ("phase-diffusion", RecordModel::PhaseDiffusion { rate: 0.25 }, 1.0, 10.0),
    ]
}

pub fn run_null_suite(cfg: &NullSuiteConfig) -> Result<NullReport> {
    if cfg.trials < 10 {
        return Err(Error::Config(format!("null suite needs ≥ 10 trials, got {}", cfg.trials)));
    }
    if cfg.windows < 100 {
        return Err(Error::Config(format!("null suite needs ≥ 100 windows, got {}", cfg.windows)));
    }
    let names: Vec<&str> = null_models(0).iter().map(|m| m.0).collect();
    let mut variants: Vec<NullVariantReport> = names
        .iter()
        .map(|n| NullVariantReport {
            model: n.to_string(),
            trials: cfg.trials,
            max_abs_s: 0.0,
            worst_margin: f64::NEG_INFINITY,
            failures: 0,
        })
        .collect();
    let settings = canonical_settings();
    for trial in 0..cfg.trials {
        let trial_seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(trial as u64);
        for (v, (_, model, dt, per_window)) in variants.iter_mut().zip(null_models(trial_seed)) {
            let duration = cfg.windows as f64 * per_window * dt;
            let rec = synth_pair(&model, duration, dt, trial_seed)?;
            let est = chsh_raw(&rec, &settings)?;
            let margin = est.s.abs() - (2.0 + 4.0 * est.se);
            v.max_abs_s = v.max_abs_s.max(est.s.abs());
            v.worst_margin = v.worst_margin.max(margin);
            if margin > BOUND_SLACK {
                v.failures += 1;
            }
        }
    }
    let passed = variants.iter().all(|v| v.failures == 0);
    Ok(NullReport { variants, passed })
}
