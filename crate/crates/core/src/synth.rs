//! Synthetic paired phase records and carrier modulation.
//!
//! Windowed models hold both phases constant over a coherence window of
//! `round(τ_c/dt)` samples and redraw them independently per window, so the
//! number of independent samples is `duration/τ_c`.

use std::f64::consts::TAU;
use std::io::{Read, Write};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::circular::{wrap, PhaseDistribution};
use crate::rng::stream;
use crate::{Error, Result};

/// Local response `φ = g(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ResponseMap {
    Identity,
    Offset(f64),
    /// Values of `g` on `len` equal cells of `[0, 2π)`.
    Tabulated(Vec<f64>),
}

impl ResponseMap {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Identity => Ok(()),
            Self::Offset(c) if c.is_finite() => Ok(()),
            Self::Tabulated(t) if !t.is_empty() && t.iter().all(|v| v.is_finite()) => Ok(()),
            _ => Err(Error::Config(format!("invalid response map {self:?}"))),
        }
    }

    pub fn apply(&self, lambda: f64) -> f64 {
        match self {
            Self::Identity => wrap(lambda),
            Self::Offset(c) => wrap(lambda + c),
            Self::Tabulated(t) => {
                let k = ((wrap(lambda) / TAU) * t.len() as f64) as usize;
                wrap(t[k.min(t.len() - 1)])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecordModel {
    /// Common phase `θ ~ U[0, 2π)` and `Δφ ~ N(0, σ_L²)` per window;
    /// `φ1 = θ + Δφ/2`, `φ2 = θ − Δφ/2`.
    QuantumLocked { sigma_l: f64, tau_c: f64 },
    /// Hidden variable `λ` per window, `φ1 = g1(λ)`, `φ2 = g2(λ)`.
    ClassicalSharedLambda { lambda: PhaseDistribution, tau_c: f64, map_a: ResponseMap, map_b: ResponseMap },
    ClassicalDeterministic { phi1: f64, phi2: f64 },
    /// Independent Brownian phases with `Var[dφ] = 2D·dt` and uniform start.
    PhaseDiffusion { rate: f64 },
}

impl RecordModel {
    pub fn describe(&self) -> String {
        match self {
            Self::QuantumLocked { sigma_l, tau_c } => format!("quantum-locked(sigma_l={sigma_l},tau_c={tau_c})"),
            Self::ClassicalSharedLambda { tau_c, map_a, map_b, .. } => {
                format!("shared-lambda(tau_c={tau_c},g1={},g2={})", map_name(map_a), map_name(map_b))
            }
            Self::ClassicalDeterministic { phi1, phi2 } => format!("deterministic(phi1={phi1},phi2={phi2})"),
            Self::PhaseDiffusion { rate } => format!("phase-diffusion(D={rate})"),
        }
    }

    fn tau_c(&self) -> Option<f64> {
        match self {
            Self::QuantumLocked { tau_c, .. } | Self::ClassicalSharedLambda { tau_c, .. } => Some(*tau_c),
            _ => None,
        }
    }

    pub fn validate(&self, duration: f64, dt: f64) -> Result<()> {
        if !(dt > 0.0) || !dt.is_finite() || !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::Config(format!("need duration > 0 and dt > 0, got ({duration}, {dt})")));
        }
        if let Some(tau) = self.tau_c() {
            if !(tau > 0.0) || !tau.is_finite() {
                return Err(Error::Config(format!("coherence window must be > 0, got {tau}")));
            }
            if duration < 10.0 * tau * (1.0 - 1e-12) {
                return Err(Error::Config(format!("duration {duration} is shorter than 10 coherence windows")));
            }
            if dt > tau / 4.0 * (1.0 + 1e-12) {
                return Err(Error::Config(format!("dt {dt} exceeds τ_c/4 = {}", tau / 4.0)));
            }
        }
        match self {
            Self::QuantumLocked { sigma_l, .. } if !(*sigma_l >= 0.0) || !sigma_l.is_finite() => {
                Err(Error::Config(format!("σ_L must be ≥ 0, got {sigma_l}")))
            }
            Self::ClassicalSharedLambda { lambda, map_a, map_b, .. } => {
                lambda.validate().map_err(|e| Error::Config(e.to_string()))?;
                map_a.validate()?;
                map_b.validate()
            }
            Self::ClassicalDeterministic { phi1, phi2 } if !phi1.is_finite() || !phi2.is_finite() => {
                Err(Error::Config("deterministic phases must be finite".into()))
            }
            Self::PhaseDiffusion { rate } if !(*rate >= 0.0) || !rate.is_finite() => {
                Err(Error::Config(format!("diffusion rate must be ≥ 0, got {rate}")))
            }
            _ => Ok(()),
        }
    }
}

fn map_name(m: &ResponseMap) -> String {
    match m {
        ResponseMap::Identity => "identity".into(),
        ResponseMap::Offset(c) => format!("offset({c})"),
        ResponseMap::Tabulated(t) => format!("table[{}]", t.len()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairedPhaseRecord {
    pub dt: f64,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    /// Samples per decorrelated window.
    pub batch_len: usize,
    pub seed: u64,
    pub model: String,
}

impl PairedPhaseRecord {
    pub fn new(dt: f64, phi1: Vec<f64>, phi2: Vec<f64>, batch_len: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Config(format!("dt must be > 0, got {dt}")));
        }
        if phi1.len() != phi2.len() {
            return Err(Error::Config("phase series differ in length".into()));
        }
        if phi1.len() < 2 {
            return Err(Error::InsufficientData(format!("record needs ≥ 2 samples, got {}", phi1.len())));
        }
        if batch_len == 0 {
            return Err(Error::Config("batch length must be ≥ 1".into()));
        }
        Ok(Self {
            dt,
            phi1: phi1.into_iter().map(wrap).collect(),
            phi2: phi2.into_iter().map(wrap).collect(),
            batch_len,
            seed: 0,
            model: "custom".into(),
        })
    }

    pub fn len(&self) -> usize {
        self.phi1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi1.is_empty()
    }

    pub fn n_windows(&self) -> usize {
        self.len().div_ceil(self.batch_len)
    }

    /// `φ1 − φ2` per sample, unwrapped.
    pub fn deltas(&self) -> Vec<f64> {
        self.phi1.iter().zip(&self.phi2).map(|(a, b)| a - b).collect()
    }

    /// First sample of every window.
    pub fn window_starts(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).step_by(self.batch_len)
    }

    /// Contiguous sub-record `[start, end)`; windows keep their length.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self {
            dt: self.dt,
            phi1: self.phi1[start..end].to_vec(),
            phi2: self.phi2[start..end].to_vec(),
            batch_len: self.batch_len,
            seed: self.seed,
            model: self.model.clone(),
        }
    }

    /// CSV with header `t,phi1,phi2` and 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "phi1", "phi2"])?;
        for i in 0..self.len() {
            w.write_record([
                format!("{:.16e}", i as f64 * self.dt),
                format!("{:.16e}", self.phi1[i]),
                format!("{:.16e}", self.phi2[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV format of [`write_csv`](Self::write_csv). Every sample is
    /// treated as its own window.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["t", "phi1", "phi2"] {
            return Err(Error::Config(format!("unexpected record header {:?}", headers)));
        }
        let (mut t, mut p1, mut p2) = (Vec::new(), Vec::new(), Vec::new());
        for row in r.deserialize() {
            let (ti, a, b): (f64, f64, f64) = row?;
            if !ti.is_finite() || !a.is_finite() || !b.is_finite() {
                return Err(Error::Config("non-finite value in record".into()));
            }
            t.push(ti);
            p1.push(a);
            p2.push(b);
        }
        if t.len() < 2 {
            return Err(Error::InsufficientData(format!("record has {} rows", t.len())));
        }
        let dt = t[1] - t[0];
        let mut rec = Self::new(dt, p1, p2, 1)?;
        rec.model = "imported".into();
        Ok(rec)
    }
}

/// Generates `floor(duration/dt)` samples; deterministic in all arguments.
pub fn synth_pair(model: &RecordModel, duration: f64, dt: f64, seed: u64) -> Result<PairedPhaseRecord> {
    model.validate(duration, dt)?;
    let n = (duration / dt + 1e-9).floor() as usize;
    if n < 2 {
        return Err(Error::Config(format!("duration/dt gives {n} samples, need ≥ 2")));
    }
    let mut phi1 = Vec::with_capacity(n);
    let mut phi2 = Vec::with_capacity(n);
    let batch_len;
    match model {
        RecordModel::QuantumLocked { sigma_l, tau_c } => {
            batch_len = window_len(*tau_c, dt);
            let mut rng = stream(seed, 0);
            while phi1.len() < n {
                let theta = rng.random::<f64>() * TAU;
                let z: f64 = rng.sample(StandardNormal);
                let d = sigma_l * z;
                let (a, b) = (wrap(theta + d / 2.0), wrap(theta - d / 2.0));
                fill(&mut phi1, &mut phi2, a, b, batch_len, n);
            }
        }
        RecordModel::ClassicalSharedLambda { lambda, tau_c, map_a, map_b } => {
            batch_len = window_len(*tau_c, dt);
            let mut rng = stream(seed, 0);
            let mut sampler = lambda.sampler()?;
            while phi1.len() < n {
                let l = sampler.draw(&mut rng);
                fill(&mut phi1, &mut phi2, map_a.apply(l), map_b.apply(l), batch_len, n);
            }
        }
        RecordModel::ClassicalDeterministic { phi1: a, phi2: b } => {
            batch_len = 1;
            phi1.resize(n, wrap(*a));
            phi2.resize(n, wrap(*b));
        }
        RecordModel::PhaseDiffusion { rate } => {
            batch_len = if *rate > 0.0 { ((2.5 / (rate * dt)).ceil() as usize).clamp(1, n) } else { n };
            let step = (2.0 * rate * dt).sqrt();
            for (k, out) in [(1u64, &mut phi1), (2u64, &mut phi2)] {
                let mut rng = stream(seed, k);
                let mut phi = rng.random::<f64>() * TAU;
                for _ in 0..n {
                    out.push(wrap(phi));
                    let z: f64 = rng.sample(StandardNormal);
                    phi = wrap(phi + step * z);
                }
            }
        }
    }
    Ok(PairedPhaseRecord { dt, phi1, phi2, batch_len, seed, model: model.describe() })
}

fn window_len(tau_c: f64, dt: f64) -> usize {
    ((tau_c / dt).round() as usize).max(1)
}

fn fill(phi1: &mut Vec<f64>, phi2: &mut Vec<f64>, a: f64, b: f64, batch: usize, n: usize) {
    let k = batch.min(n - phi1.len());
    phi1.extend(std::iter::repeat_n(a, k));
    phi2.extend(std::iter::repeat_n(b, k));
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoltageRecord {
    pub dt: f64,
    pub samples: Vec<f64>,
    pub carrier_hz: f64,
    pub amplitude: f64,
    pub noise_spread: f64,
}

/// `V_k(t) = a·cos(2π f_c t + φ_k(t)) + noise` for both sides.
pub fn modulate(
    record: &PairedPhaseRecord,
    carrier_hz: f64,
    amplitude: f64,
    noise_spread: f64,
    seed: u64,
) -> Result<(VoltageRecord, VoltageRecord)> {
    if !(carrier_hz > 0.0) || carrier_hz * record.dt >= 0.5 {
        return Err(Error::Config(format!(
            "carrier {carrier_hz} Hz aliases at dt = {} (need 0 < f_c·dt < 0.5)",
            record.dt
        )));
    }
    if !(noise_spread >= 0.0) || !amplitude.is_finite() {
        return Err(Error::Config("noise spread must be ≥ 0 and amplitude finite".into()));
    }
    let side = |phases: &[f64], k: u64| {
        let mut rng = stream(seed, 100 + k);
        let samples = phases
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let t = i as f64 * record.dt;
                let noise = if noise_spread > 0.0 { noise_spread * rng.sample::<f64, _>(StandardNormal) } else { 0.0 };
                amplitude * (TAU * carrier_hz * t + p).cos() + noise
            })
            .collect();
        VoltageRecord { dt: record.dt, samples, carrier_hz, amplitude, noise_spread }
    };
    Ok((side(&record.phi1, 1), side(&record.phi2, 2)))
}
