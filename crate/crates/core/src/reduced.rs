//! Quadrature realisation of the reduced two-dimensional measurement subspace.
//!
//! Each marginal `P(φ)` is discretised onto a uniform [`PhaseGrid`] as a
//! probability vector. The local basis is `|0⟩ ∝ 1` and the centred second
//! harmonic `|1⟩ ∝ (e^{i2φ} − m)/√(1−|m|²)`; the two-qubit amplitudes
//! `⟨αβ|Ψ⟩` are double sums over the grid against the locking kernel
//! `E(φ1 − φ2)`, evaluated as circular convolutions.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::circular::{wrap, wrapped_gaussian_density, LockingCoherence, PhaseDifferenceDensity, PhaseDistribution};
use crate::{Error, Result};

/// Uniform grid of `n` nodes `2πj/n` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseGrid {
    n: usize,
}

impl PhaseGrid {
    pub const MIN_NODES: usize = 64;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_NODES {
            return Err(Error::Config(format!(
                "phase grid needs at least {} nodes, got {n}",
                Self::MIN_NODES
            )));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.node(j))
    }

    /// Discretises `dist` into per-node probability masses summing to one.
    ///
    /// Smooth densities are sampled at the nodes; histograms are integrated
    /// exactly over each node's cell `[x_j − h/2, x_j + h/2)`; a point mass
    /// sits on its nearest node.
    pub fn masses(&self, dist: &PhaseDistribution) -> Result<Vec<f64>> {
        dist.validate()?;
        let n = self.n;
        let h = self.spacing();
        let mut w = match dist {
            PhaseDistribution::Uniform => vec![1.0; n],
            PhaseDistribution::WrappedGaussian { mean, sigma } => self
                .nodes()
                .map(|x| wrapped_gaussian_density(x, *mean, *sigma))
                .collect(),
            PhaseDistribution::PointMass { at } => {
                let mut w = vec![0.0; n];
                w[((wrap(*at) / h).round() as usize) % n] = 1.0;
                w
            }
            PhaseDistribution::Histogram(hist) => self
                .nodes()
                .map(|x| hist.mass_between(x - 0.5 * h, x + 0.5 * h))
                .collect(),
        };
        let total: f64 = w.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidModel("distribution has no mass on the grid".into()));
        }
        w.iter_mut().for_each(|v| *v /= total);
        Ok(w)
    }

    /// `Σ_j w_j e^{i2x_j}` for grid masses `w`.
    pub fn second_moment(&self, masses: &[f64]) -> Complex64 {
        masses
            .iter()
            .enumerate()
            .map(|(j, w)| Complex64::from_polar(*w, 2.0 * self.node(j)))
            .sum()
    }
}

/// Local coherence factor `κ = √(1−|m_A|²)·√(1−|m_B|²)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LocalCoherenceFactor(f64);

impl LocalCoherenceFactor {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::InvalidVisibility(kappa));
        }
        Ok(Self(kappa))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn side_factor(m: Complex64) -> Result<f64> {
    let r = m.norm();
    if !r.is_finite() || r > 1.0 + 1e-9 {
        return Err(Error::InvalidMoment(r));
    }
    Ok((1.0 - r * r).max(0.0).sqrt())
}

pub fn kappa_from_moments(m_a: Complex64, m_b: Complex64) -> Result<LocalCoherenceFactor> {
    Ok(LocalCoherenceFactor(side_factor(m_a)? * side_factor(m_b)?))
}

/// `|(1−|m|²) − Σ_j w_j |e^{i2x_j} − m|²|` with `m` taken on the same grid.
pub fn basis_variance_residual(dist: &PhaseDistribution, grid: &PhaseGrid) -> Result<f64> {
    let w = grid.masses(dist)?;
    let m = grid.second_moment(&w);
    let lhs = 1.0 - m.norm_sqr();
    let rhs: f64 = w
        .iter()
        .enumerate()
        .map(|(j, wj)| wj * (Complex64::from_polar(1.0, 2.0 * grid.node(j)) - m).norm_sqr())
        .sum();
    Ok((lhs - rhs).abs())
}

/// Amplitude-level phase-locking kernel `E(Δφ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LockingKernel {
    Constant(Complex64),
    /// `E = √p` for a phase-difference density `p`.
    SqrtDensity(PhaseDifferenceDensity),
    /// Samples `E(2πk/n)`, `k = 0..n`, interpolated linearly and periodically.
    Tabulated(Vec<Complex64>),
}

impl LockingKernel {
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Self {
        Self::Tabulated((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
    }

    /// Kernel values at the grid offsets `Δφ = jh`.
    pub fn on_grid(&self, grid: &PhaseGrid) -> Result<Vec<Complex64>> {
        let n = grid.len();
        match self {
            Self::Constant(c) => Ok(vec![*c; n]),
            Self::SqrtDensity(d) => {
                let h = grid.spacing();
                Ok(grid
                    .masses(&d.as_distribution())?
                    .into_iter()
                    .map(|w| Complex64::new((w / h).sqrt(), 0.0))
                    .collect())
            }
            Self::Tabulated(t) => {
                if t.is_empty() {
                    return Err(Error::InvalidModel("tabulated kernel is empty".into()));
                }
                let m = t.len();
                Ok(grid
                    .nodes()
                    .map(|x| {
                        let pos = x / TAU * m as f64;
                        let k = pos.floor() as usize % m;
                        let frac = pos - pos.floor();
                        t[k] * (1.0 - frac) + t[(k + 1) % m] * frac
                    })
                    .collect())
            }
        }
    }

    /// `Σ_j |E(jh)|² h`, the grid version of `∫|E|²`.
    pub fn square_norm(&self, grid: &PhaseGrid) -> Result<f64> {
        Ok(self.on_grid(grid)?.iter().map(|e| e.norm_sqr()).sum::<f64>() * grid.spacing())
    }

    /// Second Fourier coefficient of `|E|²` normalised to a density on the grid.
    pub fn locking_coherence(&self, grid: &PhaseGrid) -> Result<LockingCoherence> {
        let e = self.on_grid(grid)?;
        let total: f64 = e.iter().map(|v| v.norm_sqr()).sum();
        if total <= 0.0 {
            return Err(Error::DegenerateState("kernel vanishes on the grid".into()));
        }
        let c: Complex64 = e
            .iter()
            .enumerate()
            .map(|(j, v)| Complex64::from_polar(v.norm_sqr(), 2.0 * grid.node(j)))
            .sum();
        Ok(LockingCoherence(c / total))
    }
}

/// The four amplitudes `⟨αβ|Ψ⟩` and `Tr(ρ̃_red) = Σ|⟨αβ|Ψ⟩|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedOverlaps {
    pub o00: Complex64,
    pub o01: Complex64,
    pub o10: Complex64,
    pub o11: Complex64,
    pub trace: f64,
}

/// Threshold below which `1−|m|²` or the reduced trace count as zero.
const DEGENERACY_EPS: f64 = 1e-14;

/// Per-node weights `w_j` and `w_j (e^{−i2x_j} − m*)/√(1−|m|²)` of the two
/// local basis functions paired against the state amplitude.
fn basis_weights(grid: &PhaseGrid, dist: &PhaseDistribution) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let w = grid.masses(dist)?;
    let m = grid.second_moment(&w);
    let var = 1.0 - m.norm_sqr();
    if var <= DEGENERACY_EPS {
        return Err(Error::DegenerateState(
            "local phase is predetermined (|m| = 1), the |1⟩ mode is undefined".into(),
        ));
    }
    let norm = var.sqrt();
    let zero = w.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    let one = w
        .iter()
        .enumerate()
        .map(|(j, v)| *v * (Complex64::from_polar(1.0, -2.0 * grid.node(j)) - m.conj()) / norm)
        .collect();
    Ok((zero, one))
}

/// `(v ⊛ e)_j = Σ_k v_k e_{(j−k) mod n}` via FFT.
fn circular_convolve(planner: &mut FftPlanner<f64>, v: &[Complex64], e_hat: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    let mut buf = v.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    buf.iter_mut().zip(e_hat).for_each(|(b, e)| *b *= e);
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|b| *b *= scale);
    buf
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn reduced_overlaps(
    p_a: &PhaseDistribution,
    p_b: &PhaseDistribution,
    kernel: &LockingKernel,
    grid: &PhaseGrid,
) -> Result<ReducedOverlaps> {
    let (a0, a1) = basis_weights(grid, p_a)?;
    let (b0, b1) = basis_weights(grid, p_b)?;
    let mut planner = FftPlanner::new();
    let mut e_hat = kernel.on_grid(grid)?;
    planner.plan_fft_forward(e_hat.len()).process(&mut e_hat);

    let c0 = circular_convolve(&mut planner, &b0, &e_hat);
    let c1 = circular_convolve(&mut planner, &b1, &e_hat);
    let o00 = dot(&a0, &c0);
    let o01 = dot(&a0, &c1);
    let o10 = dot(&a1, &c0);
    let o11 = dot(&a1, &c1);
    let trace = o00.norm_sqr() + o01.norm_sqr() + o10.norm_sqr() + o11.norm_sqr();
    if trace <= DEGENERACY_EPS {
        return Err(Error::DegenerateState(format!("reduced trace {trace:e} vanishes")));
    }
    Ok(ReducedOverlaps { o00, o01, o10, o11, trace })
}

/// Normalised matrix coherence `⟨00|ρ_red|11⟩` and the unnormalised trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoherence {
    pub value: Complex64,
    pub trace: f64,
}

pub fn reduced_coherence(
    p_a: &PhaseDistribution,
    p_b: &PhaseDistribution,
    kernel: &LockingKernel,
    grid: &PhaseGrid,
) -> Result<ReducedCoherence> {
    let o = reduced_overlaps(p_a, p_b, kernel, grid)?;
    Ok(ReducedCoherence { value: o.o00 * o.o11.conj() / o.trace, trace: o.trace })
}

/// Side-by-side values of the state-level coherence and the factorised
/// visibility `κγ`, for numerical study of when the two agree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationReport {
    /// `⟨00|ρ_red|11⟩` from the overlap integrals.
    pub matrix_coherence: Complex64,
    /// Twice the matrix coherence, on the visibility scale.
    pub state_visibility: Complex64,
    pub kappa: f64,
    pub gamma: Complex64,
    pub kappa_gamma: Complex64,
    /// `|state_visibility − κγ|`.
    pub discrepancy: f64,
}

pub fn factorization_report(
    p_a: &PhaseDistribution,
    p_b: &PhaseDistribution,
    kernel: &LockingKernel,
    grid: &PhaseGrid,
) -> Result<FactorizationReport> {
    let coh = reduced_coherence(p_a, p_b, kernel, grid)?;
    let m_a = grid.second_moment(&grid.masses(p_a)?);
    let m_b = grid.second_moment(&grid.masses(p_b)?);
    let kappa = kappa_from_moments(m_a, m_b)?.value();
    let gamma = kernel.locking_coherence(grid)?.value();
    let state_visibility = coh.value * 2.0;
    let kappa_gamma = gamma * kappa;
    Ok(FactorizationReport {
        matrix_coherence: coh.value,
        state_visibility,
        kappa,
        gamma,
        kappa_gamma,
        discrepancy: (state_visibility - kappa_gamma).norm(),
    })
}

/// Two-qubit X-state in the ordered basis `|00⟩, |01⟩, |10⟩, |11⟩`.
///
/// The `|00⟩⟨11|` matrix element is stored as half the visibility `V`, so a
/// state with `|V| = 1` and `p00 = p11 = ½` is the Bell state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    populations: [f64; 4],
    coherence: Complex64,
}

impl XState {
    pub fn new(populations: [f64; 4], visibility: Complex64) -> Result<Self> {
        if populations.iter().any(|p| !p.is_finite() || *p < -1e-12) {
            return Err(Error::InvalidModel("X-state populations must be >= 0".into()));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidModel(format!("X-state populations sum to {total}, not 1")));
        }
        let coherence = visibility / 2.0;
        let bound = (populations[0].max(0.0) * populations[3].max(0.0)).sqrt();
        if coherence.norm() > bound + 1e-10 {
            return Err(Error::InvalidVisibility(visibility.norm()));
        }
        Ok(Self { populations, coherence })
    }

    pub fn populations(&self) -> [f64; 4] {
        self.populations
    }

    pub fn visibility(&self) -> Complex64 {
        self.coherence * 2.0
    }

    /// `p00 − p01 − p10 + p11`.
    pub fn zz(&self) -> f64 {
        let [p00, p01, p10, p11] = self.populations;
        p00 - p01 - p10 + p11
    }

    pub fn density_matrix(&self) -> [[Complex64; 4]; 4] {
        let z = Complex64::new(0.0, 0.0);
        let mut rho = [[z; 4]; 4];
        for (i, p) in self.populations.iter().enumerate() {
            rho[i][i] = Complex64::new(*p, 0.0);
        }
        rho[0][3] = self.coherence;
        rho[3][0] = self.coherence.conj();
        rho
    }
}

/// Bell-diagonal X-state with visibility `V = κγ`: populations
/// `p00 = p11 = (1+|V|)/4`, `p01 = p10 = (1−|V|)/4` and coherence `V/2`.
///
/// For real nonnegative `V` the exact trace correlator of this state is
/// `V·cos 2(A−B)`; `V = 1` is the Bell state and `V = 0` the maximally mixed
/// state.
pub fn xstate_from_visibility(kappa: LocalCoherenceFactor, gamma: LockingCoherence) -> Result<XState> {
    let v = gamma.value() * kappa.value();
    let r = v.norm();
    if r > 1.0 + 1e-12 {
        return Err(Error::InvalidVisibility(r));
    }
    let r = r.min(1.0);
    let same = (1.0 + r) / 4.0;
    let diff = (1.0 - r) / 4.0;
    XState::new([same, diff, diff, same], v)
}
