//! Phase extraction and the two CHSH estimators.
//!
//! The raw estimator time-averages `cos 2(φ1−A)·cos 2(φ2−B)` and is bounded by
//! 2 realization by realization. The reduced-phase estimator is
//! `S = 2√2·κ̂·|γ̂|`.

use std::f64::consts::{SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chsh::{canonical_settings, ChshEstimate, CorrelatorEstimate, EstimatorKind, SettingsQuad};
use crate::circular::{empirical_harmonic_moment, rotated_mean_se, wrap, MomentEstimate};
use crate::stats::batched_se;
use crate::synth::{PairedPhaseRecord, VoltageRecord};
use crate::{Error, Result};

pub const DEFAULT_BINS: usize = 64;
const MIN_WINDOWS: usize = 100;

/// Which Fourier component of `Δφ` defines `γ̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `mean e^{i2Δφ}`.
    SecondHarmonic,
    /// `mean e^{iΔφ}`.
    #[default]
    AppendixFirstHarmonic,
}

impl Convention {
    pub fn harmonic(self) -> i32 {
        match self {
            Self::SecondHarmonic => 2,
            Self::AppendixFirstHarmonic => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::SecondHarmonic => "second-harmonic",
            Self::AppendixFirstHarmonic => "appendix-first-harmonic",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "second-harmonic" => Ok(Self::SecondHarmonic),
            "appendix-first-harmonic" => Ok(Self::AppendixFirstHarmonic),
            _ => Err(Error::Config(format!("unknown convention {s:?}"))),
        }
    }
}

/// One side of a record.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    pub dt: f64,
    pub phases: Vec<f64>,
    pub batch_len: usize,
}

impl PairedPhaseRecord {
    pub fn side(&self, k: usize) -> PhaseRecord {
        let phases = if k == 0 { self.phi1.clone() } else { self.phi2.clone() };
        PhaseRecord { dt: self.dt, phases, batch_len: self.batch_len }
    }
}

/// Quadrature demodulation against `cos/sin(2π f t)` over consecutive windows
/// of `window` samples, one phase per window.
///
/// The in-phase and quadrature sums are corrected by the window's exact
/// cos/sin Gram matrix, so a pure tone gives its phase exactly for any window
/// alignment.
pub fn extract_phase(record: &VoltageRecord, reference_hz: f64, window: usize) -> Result<PhaseRecord> {
    let periods = window as f64 * reference_hz * record.dt;
    if window < 2 || !(periods >= 2.0) {
        return Err(Error::Config(format!(
            "demodulation window spans {periods} carrier periods, need ≥ 2"
        )));
    }
    let n_win = record.samples.len() / window;
    if n_win == 0 {
        return Err(Error::InsufficientData("record shorter than one window".into()));
    }
    let w = TAU * reference_hz;
    let mut phases = Vec::with_capacity(n_win);
    for k in 0..n_win {
        let (mut ic, mut qs, mut cc, mut ss, mut cs) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in k * window..(k + 1) * window {
            let (s, c) = (w * i as f64 * record.dt).sin_cos();
            let v = record.samples[i];
            ic += v * c;
            qs += v * s;
            cc += c * c;
            ss += s * s;
            cs += c * s;
        }
        // v ≈ x cos + y sin with x = a cos φ, y = −a sin φ
        let det = cc * ss - cs * cs;
        let x = (ss * ic - cs * qs) / det;
        let y = (cc * qs - cs * ic) / det;
        phases.push(wrap((-y).atan2(x)));
    }
    Ok(PhaseRecord { dt: record.dt * window as f64, phases, batch_len: 1 })
}

/// Demodulates both sides into a paired record with one sample per window.
pub fn extract_pair(
    v1: &VoltageRecord,
    v2: &VoltageRecord,
    reference_hz: f64,
    window: usize,
) -> Result<PairedPhaseRecord> {
    let a = extract_phase(v1, reference_hz, window)?;
    let b = extract_phase(v2, reference_hz, window)?;
    PairedPhaseRecord::new(a.dt, a.phases, b.phases, 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalStats {
    /// Normalised weights on `bins` equal cells of `[0, 2π)`.
    pub histogram: Vec<f64>,
    /// Second-harmonic moment `m̂` from raw samples.
    pub m: MomentEstimate,
    /// `√(1−|m̂|²)`, clipped to `[0, 1]`.
    pub factor: f64,
}

pub fn estimate_local(record: &PhaseRecord, bins: usize) -> Result<LocalStats> {
    if record.phases.len() < 100 {
        return Err(Error::InsufficientData(format!(
            "local statistics need ≥ 100 samples, got {}",
            record.phases.len()
        )));
    }
    if bins < 16 {
        return Err(Error::Config(format!("need ≥ 16 histogram bins, got {bins}")));
    }
    let mut histogram = vec![0.0; bins];
    for &p in &record.phases {
        let k = ((wrap(p) / TAU) * bins as f64) as usize;
        histogram[k.min(bins - 1)] += 1.0;
    }
    let n = record.phases.len() as f64;
    histogram.iter_mut().for_each(|h| *h /= n);
    let contributions: Vec<Complex64> =
        record.phases.iter().map(|p| Complex64::from_polar(1.0, 2.0 * p)).collect();
    let m = rotated_mean_se(&contributions, record.batch_len);
    let r2 = m.value.norm_sqr();
    let factor = if r2 >= 1.0 - 1e-12 { 0.0 } else { (1.0 - r2).sqrt().clamp(0.0, 1.0) };
    Ok(LocalStats { histogram, m, factor })
}

fn require_windows(record: &PairedPhaseRecord) -> Result<()> {
    if record.n_windows() < MIN_WINDOWS {
        return Err(Error::InsufficientData(format!(
            "need ≥ {MIN_WINDOWS} decorrelated windows, got {}",
            record.n_windows()
        )));
    }
    Ok(())
}

/// `mean e^{ih(φ1−φ2)}` with a window-batched delta-method SE.
pub fn estimate_gamma(record: &PairedPhaseRecord, convention: Convention) -> Result<MomentEstimate> {
    require_windows(record)?;
    let h = convention.harmonic() as f64;
    let contributions: Vec<Complex64> =
        record.phi1.iter().zip(&record.phi2).map(|(a, b)| Complex64::from_polar(1.0, h * (a - b))).collect();
    Ok(rotated_mean_se(&contributions, record.batch_len))
}

/// `γ̂` from independent phase differences.
pub fn gamma_from_deltas(deltas: &[f64], convention: Convention) -> Result<MomentEstimate> {
    empirical_harmonic_moment(deltas, convention.harmonic())
}

/// `X(t; A) = cos 2(φ(t) − A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicSignal {
    pub values: Vec<f64>,
    pub setting: f64,
}

impl DichotomicSignal {
    pub fn new(phases: &[f64], setting: f64) -> Self {
        Self { values: phases.iter().map(|p| (2.0 * (p - setting)).cos()).collect(), setting }
    }
}

/// Time average of `X1(t;A)·X2(t;B)` with one SE batch per window.
pub fn correlator_timeavg(record: &PairedPhaseRecord, a: f64, b: f64) -> Result<CorrelatorEstimate> {
    require_windows(record)?;
    let x1 = DichotomicSignal::new(&record.phi1, a);
    let x2 = DichotomicSignal::new(&record.phi2, b);
    let prod: Vec<f64> = x1.values.iter().zip(&x2.values).map(|(u, v)| u * v).collect();
    Ok(CorrelatorEstimate {
        value: prod.iter().sum::<f64>() / prod.len() as f64,
        se: batched_se(&prod, record.batch_len).unwrap_or(0.0),
    })
}

/// Raw time-averaged CHSH. The SE is batched over the per-sample CHSH
/// combination, which accounts for covariance between the four correlators.
pub fn chsh_raw(record: &PairedPhaseRecord, settings: &SettingsQuad) -> Result<ChshEstimate> {
    require_windows(record)?;
    let pairs = settings.pairs();
    let mut correlators = [CorrelatorEstimate { value: 0.0, se: 0.0 }; 4];
    for (c, (a, b)) in correlators.iter_mut().zip(pairs) {
        *c = correlator_timeavg(record, a, b)?;
    }
    let per_sample: Vec<f64> = record
        .phi1
        .iter()
        .zip(&record.phi2)
        .map(|(p, q)| {
            let x = (2.0 * (p - settings.a)).cos();
            let xp = (2.0 * (p - settings.a_prime)).cos();
            let y = (2.0 * (q - settings.b)).cos();
            let yp = (2.0 * (q - settings.b_prime)).cos();
            x * (y + yp) + xp * (y - yp)
        })
        .collect();
    let mut est = ChshEstimate::from_correlators(EstimatorKind::RawRecord, correlators, *settings);
    est.se = batched_se(&per_sample, record.batch_len).unwrap_or(0.0);
    Ok(est)
}

/// `S = 2√2·f_A·f_B·|γ̂|`.
pub fn chsh_reduced(local_a: &LocalStats, local_b: &LocalStats, gamma: &MomentEstimate) -> ChshEstimate {
    chsh_reduced_with_kappa(local_a.factor * local_b.factor, gamma)
}

/// Reduced-phase estimate for a known `κ`. Stored correlators are
/// `κ|γ̂|cos 2(A−B)` at the canonical settings.
pub fn chsh_reduced_with_kappa(kappa: f64, gamma: &MomentEstimate) -> ChshEstimate {
    let settings = canonical_settings();
    let v = kappa * gamma.modulus();
    let correlators = settings.pairs().map(|(a, b)| {
        let c = (2.0 * (a - b)).cos();
        CorrelatorEstimate { value: v * c, se: kappa * gamma.se * c.abs() }
    });
    let mut est = ChshEstimate::from_correlators(EstimatorKind::ReducedPhase, correlators, settings);
    est.s = 2.0 * SQRT_2 * v;
    est.se = 2.0 * SQRT_2 * kappa * gamma.se;
    est
}

/// `k` contiguous equal segments; trailing samples are dropped.
pub fn split_segments(record: &PairedPhaseRecord, k: usize) -> Result<Vec<PairedPhaseRecord>> {
    if k < 2 {
        return Err(Error::Config(format!("need ≥ 2 segments, got {k}")));
    }
    let len = record.len() / k;
    if len < 2 {
        return Err(Error::InsufficientData(format!(
            "record of {} samples is too short for {k} segments",
            record.len()
        )));
    }
    Ok((0..k).map(|i| record.slice(i * len, (i + 1) * len)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordAnalysis {
    pub raw: ChshEstimate,
    pub reduced: ChshEstimate,
    pub local_a: LocalStats,
    pub local_b: LocalStats,
    pub gamma: MomentEstimate,
}

/// Both estimators on one record. With `segments = Some(k)`, the calibration
/// (`P̂`, `κ̂`, `γ̂`) uses the first segment and the raw correlators the
/// remaining `k−1`.
pub fn analyze_record(
    record: &PairedPhaseRecord,
    convention: Convention,
    segments: Option<usize>,
    bins: usize,
) -> Result<RecordAnalysis> {
    let (calib, rest) = match segments {
        None => (record.clone(), record.clone()),
        Some(k) => {
            let segs = split_segments(record, k)?;
            let len = segs[0].len();
            (segs[0].clone(), record.slice(len, len * k))
        }
    };
    let local_a = estimate_local(&calib.side(0), bins)?;
    let local_b = estimate_local(&calib.side(1), bins)?;
    let gamma = estimate_gamma(&calib, convention)?;
    let reduced = chsh_reduced(&local_a, &local_b, &gamma);
    let raw = chsh_raw(&rest, &canonical_settings())?;
    Ok(RecordAnalysis { raw, reduced, local_a, local_b, gamma })
}

/// JSON form of a CHSH estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub kind: EstimatorKind,
    #[serde(rename = "S")]
    pub s: f64,
    pub se: f64,
    pub correlators: [f64; 4],
    pub correlator_se: [f64; 4],
    pub settings: [f64; 4],
    pub convention: Convention,
    pub n_windows: usize,
    pub seed: u64,
}

impl EstimateReport {
    pub fn new(est: &ChshEstimate, convention: Convention, n_windows: usize, seed: u64) -> Self {
        Self {
            kind: est.kind,
            s: est.s,
            se: est.se,
            correlators: est.correlators.map(|c| c.value),
            correlator_se: est.correlators.map(|c| c.se),
            settings: est.settings.as_array(),
            convention,
            n_windows,
            seed,
        }
    }
}
