//! Two-qubit statevector benchmark.
//!
//! Amplitudes are indexed `|q1 q0⟩`, i.e. bit 0 of the index is circuit qubit
//! 0. Pauli labels follow the usual little-endian string convention: the first
//! character acts on qubit 1, the second on qubit 0.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::chsh::{canonical_settings, ChshEstimate, CorrelatorEstimate, EstimatorKind, SettingsQuad};
use crate::rng::{stream, StreamRng};
use crate::stats::mean_se;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    amps: [Complex64; 4],
}

impl TwoQubitState {
    /// `|00⟩`.
    pub fn zero() -> Self {
        Self { amps: [ONE, ZERO, ZERO, ZERO] }
    }

    pub fn from_amplitudes(amps: [Complex64; 4]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidModel(format!("state norm² is {norm}, not 1")));
        }
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps.iter().zip(other.amps.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm()
    }

    fn apply_1q(&mut self, qubit: usize, u: [[Complex64; 2]; 2]) {
        let bit = 1 << qubit;
        for i in 0..4 {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | bit] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn h(&mut self, qubit: usize) {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        self.apply_1q(qubit, [[r, r], [r, -r]]);
    }

    /// `RZ(θ) = diag(e^{−iθ/2}, e^{iθ/2})`.
    pub fn rz(&mut self, qubit: usize, theta: f64) {
        let m = Complex64::from_polar(1.0, -theta / 2.0);
        self.apply_1q(qubit, [[m, ZERO], [ZERO, m.conj()]]);
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        let (c, t) = (1 << control, 1 << target);
        for i in 0..4 {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }
}

/// `H(0); CX(0→1); RZ(2Δ) on qubit 0` applied to `|00⟩`.
pub fn prepare_bell_with_phase(delta: f64) -> TwoQubitState {
    let mut s = TwoQubitState::zero();
    s.h(0);
    s.cx(0, 1);
    s.rz(0, 2.0 * delta);
    s
}

/// `(|00⟩ + e^{i2Δ}|11⟩)/√2`.
pub fn bell_with_phase_closed_form(delta: f64) -> TwoQubitState {
    let r = FRAC_1_SQRT_2;
    TwoQubitState {
        amps: [Complex64::new(r, 0.0), ZERO, ZERO, Complex64::from_polar(r, 2.0 * delta)],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub label: String,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliSum {
    pub terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new(terms: impl IntoIterator<Item = (&'static str, f64)>) -> Self {
        Self {
            terms: terms.into_iter().map(|(l, c)| PauliTerm { label: l.to_string(), coeff: c }).collect(),
        }
    }

    pub fn coeff(&self, label: &str) -> f64 {
        self.terms.iter().filter(|t| t.label == label).map(|t| t.coeff).sum()
    }
}

/// `cA·cB ZZ + cA·sB ZX + sA·cB XZ + sA·sB XX` with `cA = cos 2A`, etc.
pub fn ab_observable(a: f64, b: f64) -> PauliSum {
    let (sa, ca) = (2.0 * a).sin_cos();
    let (sb, cb) = (2.0 * b).sin_cos();
    PauliSum::new([("ZZ", ca * cb), ("ZX", ca * sb), ("XZ", sa * cb), ("XX", sa * sb)])
}

#[derive(Clone, Copy)]
enum Pauli {
    I,
    X,
    Y,
    Z,
}

fn parse_label(label: &str) -> Result<[Pauli; 2]> {
    let parse = |c: char| match c {
        'I' => Ok(Pauli::I),
        'X' => Ok(Pauli::X),
        'Y' => Ok(Pauli::Y),
        'Z' => Ok(Pauli::Z),
        _ => Err(Error::InvalidObservable(format!("bad Pauli character {c:?} in {label:?}"))),
    };
    let chars: Vec<char> = label.chars().collect();
    if chars.len() != 2 {
        return Err(Error::InvalidObservable(format!("label {label:?} must have 2 characters")));
    }
    // [qubit 0, qubit 1]
    Ok([parse(chars[1])?, parse(chars[0])?])
}

fn pauli_string_expectation(state: &TwoQubitState, ops: [Pauli; 2]) -> f64 {
    let mut acc = ZERO;
    for (k, amp) in state.amps.iter().enumerate() {
        // P|k⟩ = phase |k'⟩
        let mut target = k;
        let mut phase = ONE;
        for (q, op) in ops.iter().enumerate() {
            let bit = (k >> q) & 1;
            match op {
                Pauli::I => {}
                Pauli::X => target ^= 1 << q,
                Pauli::Y => {
                    target ^= 1 << q;
                    phase *= if bit == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) };
                }
                Pauli::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        acc += state.amps[target].conj() * phase * amp;
    }
    acc.re
}

/// `Σ coeff·⟨ψ|P|ψ⟩`.
pub fn pauli_expectation(state: &TwoQubitState, obs: &PauliSum) -> Result<f64> {
    let mut total = 0.0;
    for term in &obs.terms {
        total += term.coeff * pauli_string_expectation(state, parse_label(&term.label)?);
    }
    Ok(total)
}

/// `cos2A·cos2B + sin2A·sin2B·cos2Δ`.
pub fn e_analytic(a: f64, b: f64, delta: f64) -> f64 {
    let (sa, ca) = (2.0 * a).sin_cos();
    let (sb, cb) = (2.0 * b).sin_cos();
    ca * cb + sa * sb * (2.0 * delta).cos()
}

/// Analytic mean of the oracle CHSH value, `√2(1 + e^{−σ_L²})`.
pub fn oracle_s_closed_form(sigma_l: f64) -> f64 {
    SQRT_2 * (1.0 + (-sigma_l * sigma_l).exp())
}

/// Per-qubit spread `σ_L/√2` used by the oracle.
pub fn qubit_sigma(sigma_l: f64) -> f64 {
    sigma_l * FRAC_1_SQRT_2
}

pub fn standard_normals(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn shot_estimate(state: &TwoQubitState, obs: &PauliSum, shots: u32, rng: &mut StreamRng) -> Result<f64> {
    let mut total = 0.0;
    for term in &obs.terms {
        let exact = pauli_string_expectation(state, parse_label(&term.label)?);
        let p = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
        let k = Binomial::new(shots as u64, p)
            .map_err(|e| Error::Config(format!("binomial: {e}")))?
            .sample(rng);
        total += term.coeff * (2.0 * k as f64 / shots as f64 - 1.0);
    }
    Ok(total)
}

/// Oracle CHSH estimate from pre-drawn phase differences.
///
/// Correlator SEs are `std/√n` over the per-sample expectations; `S` carries
/// their root-sum-square.
pub fn chsh_oracle_from_deltas(
    deltas: &[f64],
    settings: &SettingsQuad,
    shots: Option<(u32, &mut StreamRng)>,
) -> Result<ChshEstimate> {
    if deltas.len() < 2 {
        return Err(Error::InsufficientData(format!("need ≥ 2 phase samples, got {}", deltas.len())));
    }
    let observables: Vec<PauliSum> = settings.pairs().iter().map(|&(a, b)| ab_observable(a, b)).collect();
    let mut per_obs: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(deltas.len())).collect();
    let mut shots = shots;
    if let Some((0, _)) = shots {
        return Err(Error::Config("shot count must be positive".into()));
    }
    for &d in deltas {
        let state = prepare_bell_with_phase(d);
        for (obs, out) in observables.iter().zip(per_obs.iter_mut()) {
            let e = match shots.as_mut() {
                None => pauli_expectation(&state, obs)?,
                Some((n, rng)) => shot_estimate(&state, obs, *n, rng)?,
            };
            out.push(e);
        }
    }
    let mut correlators = [CorrelatorEstimate { value: 0.0, se: 0.0 }; 4];
    for (c, vals) in correlators.iter_mut().zip(per_obs.iter()) {
        let (m, se) = mean_se(vals).expect("n ≥ 2");
        *c = CorrelatorEstimate { value: m, se };
    }
    Ok(ChshEstimate::from_correlators(EstimatorKind::Oracle, correlators, *settings))
}

/// Traditional CHSH at the canonical settings with `Δ ~ N(0, σ_L²/2)`.
///
/// Normals come from stream 0 of `seed`, shot noise from stream 1.
pub fn chsh_traditional(sigma_l: f64, n_samples: usize, seed: u64, shot_noise: Option<u32>) -> Result<ChshEstimate> {
    if !(sigma_l >= 0.0) || !sigma_l.is_finite() {
        return Err(Error::Config(format!("σ_L must be finite and ≥ 0, got {sigma_l}")));
    }
    if n_samples < 2 {
        return Err(Error::InsufficientData(format!("need ≥ 2 samples, got {n_samples}")));
    }
    let z = standard_normals(n_samples, &mut stream(seed, 0));
    let sq = qubit_sigma(sigma_l);
    let deltas: Vec<f64> = z.iter().map(|z| z * sq).collect();
    let mut shot_rng = stream(seed, 1);
    chsh_oracle_from_deltas(&deltas, &canonical_settings(), shot_noise.map(|n| (n, &mut shot_rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    type M4 = [[Complex64; 4]; 4];

    fn kron(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> M4 {
        let mut m = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] = a[r >> 1][c >> 1] * b[r & 1][c & 1];
            }
        }
        m
    }

    fn pauli_matrix(c: char) -> [[Complex64; 2]; 2] {
        let i = Complex64::new(0.0, 1.0);
        match c {
            'I' => [[ONE, ZERO], [ZERO, ONE]],
            'X' => [[ZERO, ONE], [ONE, ZERO]],
            'Y' => [[ZERO, -i], [i, ZERO]],
            'Z' => [[ONE, ZERO], [ZERO, -ONE]],
            _ => unreachable!(),
        }
    }

    /// `⟨ψ|M|ψ⟩` by explicit 4×4 matrix; the high index bit is qubit 1.
    fn dense_expectation(state: &TwoQubitState, label: &str) -> Complex64 {
        let ch: Vec<char> = label.chars().collect();
        let m = kron(pauli_matrix(ch[0]), pauli_matrix(ch[1]));
        let a = state.amplitudes();
        let mut acc = ZERO;
        for r in 0..4 {
            for c in 0..4 {
                acc += a[r].conj() * m[r][c] * a[c];
            }
        }
        acc
    }

    #[test]
    fn bell_examples() {
        let s = prepare_bell_with_phase(0.0);
        let r = FRAC_1_SQRT_2;
        let bell = TwoQubitState::from_amplitudes([Complex64::new(r, 0.0), ZERO, ZERO, Complex64::new(r, 0.0)])
            .unwrap();
        assert_abs_diff_eq!(s.overlap(&bell), 1.0, epsilon = 1e-12);
        let minus = TwoQubitState::from_amplitudes([Complex64::new(r, 0.0), ZERO, ZERO, Complex64::new(-r, 0.0)])
            .unwrap();
        assert_abs_diff_eq!(prepare_bell_with_phase(FRAC_PI_2).overlap(&minus), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(prepare_bell_with_phase(1.234).norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gate_state_matches_closed_form() {
        let mut rng = StreamRng::seed_from_u64(5);
        for _ in 0..100 {
            let d: f64 = rng.random_range(-10.0..10.0);
            let g = prepare_bell_with_phase(d);
            assert_abs_diff_eq!(g.overlap(&bell_with_phase_closed_form(d)), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn observable_examples() {
        let o = ab_observable(0.0, 0.0);
        assert_abs_diff_eq!(o.coeff("ZZ"), 1.0);
        for l in ["ZX", "XZ", "XX"] {
            assert_abs_diff_eq!(o.coeff(l), 0.0, epsilon = 1e-15);
        }
        let o = ab_observable(FRAC_PI_4, FRAC_PI_4);
        assert_abs_diff_eq!(o.coeff("XX"), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.coeff("ZZ"), 0.0, epsilon = 1e-15);
        let o = ab_observable(0.0, FRAC_PI_8);
        assert_abs_diff_eq!(o.coeff("ZZ"), FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(o.coeff("ZX"), FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn expectation_examples() {
        let zz = PauliSum::new([("ZZ", 1.0)]);
        assert_eq!(pauli_expectation(&TwoQubitState::zero(), &zz).unwrap(), 1.0);
        let xx = PauliSum::new([("XX", 1.0)]);
        for d in [0.0, 0.4, 2.0] {
            let s = prepare_bell_with_phase(d);
            assert_abs_diff_eq!(pauli_expectation(&s, &xx).unwrap(), (2.0 * d).cos(), epsilon = 1e-12);
            assert_abs_diff_eq!(dense_expectation(&s, "XX").re, (2.0 * d).cos(), epsilon = 1e-12);
        }
        let s = prepare_bell_with_phase(0.0);
        for (a, b) in [(0.0, 0.3), (1.0, -0.2)] {
            let e = pauli_expectation(&s, &ab_observable(a, b)).unwrap();
            assert_abs_diff_eq!(e, (2.0 * (a - b)).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn malformed_labels_rejected() {
        let s = TwoQubitState::zero();
        for bad in ["Z", "ZZZ", "ZQ", "zz", ""] {
            let e = pauli_expectation(&s, &PauliSum { terms: vec![PauliTerm { label: bad.into(), coeff: 1.0 }] });
            assert!(matches!(e, Err(Error::InvalidObservable(_))), "{bad}");
        }
    }

    #[test]
    fn all_pauli_strings_match_dense_matrices() {
        let mut rng = StreamRng::seed_from_u64(9);
        let labels: Vec<String> = "IXYZ"
            .chars()
            .flat_map(|a| "IXYZ".chars().map(move |b| format!("{a}{b}")))
            .collect();
        for _ in 0..50 {
            let raw: [Complex64; 4] = std::array::from_fn(|_| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let n = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            let s = TwoQubitState::from_amplitudes(raw.map(|a| a / n)).unwrap();
            for l in &labels {
                let fast = pauli_string_expectation(&s, parse_label(l).unwrap());
                let dense = dense_expectation(&s, l);
                assert_abs_diff_eq!(fast, dense.re, epsilon = 1e-12);
                assert_abs_diff_eq!(dense.im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_correlator_matches_statevector() {
        let mut rng = StreamRng::seed_from_u64(11);
        for _ in 0..100 {
            let (a, b, d): (f64, f64, f64) =
                (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
            let e = pauli_expectation(&prepare_bell_with_phase(d), &ab_observable(a, b)).unwrap();
            assert_abs_diff_eq!(e, e_analytic(a, b, d), epsilon = 1e-12);
        }
    }

    #[test]
    fn traditional_at_zero_sigma_is_tsirelson() {
        let e = chsh_traditional(0.0, 50, 3, None).unwrap();
        assert_abs_diff_eq!(e.s, 2.0 * SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(e.se, 0.0, epsilon = 1e-12);
        assert_eq!(e.kind, EstimatorKind::Oracle);
    }

    #[test]
    fn traditional_rejects_tiny_samples() {
        assert!(matches!(chsh_traditional(0.5, 1, 0, None), Err(Error::InsufficientData(_))));
        assert!(chsh_traditional(-0.1, 10, 0, None).is_err());
    }

    #[test]
    fn traditional_matches_closed_form() {
        for sigma in [0.93882, 2.4] {
            let e = chsh_traditional(sigma, 100_000, 17, None).unwrap();
            let expect = oracle_s_closed_form(sigma);
            assert!((e.s - expect).abs() < 3.0 * e.se, "σ={sigma}: {} vs {expect} ± {}", e.s, e.se);
        }
        assert_abs_diff_eq!(oracle_s_closed_form(0.93882), 2.0, epsilon = 1e-5);
        assert_abs_diff_eq!(oracle_s_closed_form(2.4), 1.41866, epsilon = 1e-5);
    }

    #[test]
    fn shot_noise_is_seeded_and_unbiased() {
        let a = chsh_traditional(0.5, 200, 4, Some(4000)).unwrap();
        let b = chsh_traditional(0.5, 200, 4, Some(4000)).unwrap();
        assert_eq!(a, b);
        let exact = chsh_traditional(0.5, 200, 4, None).unwrap();
        assert!((a.s - exact.s).abs() < 0.05);
        assert!(a.se > exact.se);
        assert!(chsh_traditional(0.5, 200, 4, Some(0)).is_err());
    }
}
