//! Circular statistics: phase distributions on `[0, 2π)`, seeded sampling,
//! angular-harmonic moments and the locking coherence of a phase-difference
//! density.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng;
use crate::{Error, Result};

/// Number of `2π` images summed on each side when evaluating a wrapped
/// Gaussian density.
pub const WRAP_IMAGES: i32 = 6;

/// Default node count of the periodic rectangle rule.
pub const DEFAULT_QUADRATURE_NODES: usize = 4096;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_signed(angle: f64) -> f64 {
    let r = wrap(angle + PI) - PI;
    if r >= PI {
        r - TAU
    } else {
        r
    }
}

/// Density of a Gaussian with spread `sigma` wrapped onto the circle,
/// evaluated at `x` for a distribution centred on `mean`.
pub fn wrapped_gaussian_density(x: f64, mean: f64, sigma: f64) -> f64 {
    let d = wrap_signed(x - mean);
    let norm = 1.0 / ((TAU).sqrt() * sigma);
    (-WRAP_IMAGES..=WRAP_IMAGES)
        .map(|k| {
            let u = (d + TAU * k as f64) / sigma;
            norm * (-0.5 * u * u).exp()
        })
        .sum()
}

/// Piecewise-constant density on the circle.
///
/// `edges` are strictly increasing and span at most `2π`; the region outside
/// `[edges[0], edges[last])` (mod `2π`) carries no mass. Weights are
/// normalised to sum to one on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    weights: Vec<f64>,
}

impl Histogram {
    pub fn new(edges: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || edges.len() != weights.len() + 1 {
            return Err(Error::InvalidModel(format!(
                "histogram needs len(edges) = len(weights) + 1 >= 2, got {} edges and {} weights",
                edges.len(),
                weights.len()
            )));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModel(
                "histogram edges must be finite and strictly increasing".into(),
            ));
        }
        if edges[edges.len() - 1] - edges[0] > TAU + 1e-12 {
            return Err(Error::InvalidModel("histogram edges span more than 2π".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidModel(
                "histogram weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(Error::InvalidModel("histogram weights are not normalizable".into()));
        }
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { edges, weights })
    }

    /// `bins` equal-width bins covering `[0, 2π)`.
    pub fn uniform_bins(weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        let edges = (0..=n).map(|i| TAU * i as f64 / n.max(1) as f64).collect();
        Self::new(edges, weights)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn moment(&self, harmonic: i32) -> Complex64 {
        let h = harmonic as f64;
        self.edges
            .windows(2)
            .zip(&self.weights)
            .map(|(e, w)| {
                let (a, b) = (e[0], e[1]);
                let ib = Complex64::new(0.0, h * b).exp();
                let ia = Complex64::new(0.0, h * a).exp();
                (ib - ia) / Complex64::new(0.0, h * (b - a)) * *w
            })
            .sum()
    }

    /// Probability mass in the arc `[u, v]`, `u <= v`, measured on the
    /// unwrapped line so that arcs crossing `2π` are handled.
    pub fn mass_between(&self, u: f64, v: f64) -> f64 {
        self.unwrapped_cdf(v) - self.unwrapped_cdf(u)
    }

    fn unwrapped_cdf(&self, x: f64) -> f64 {
        let start = self.edges[0];
        let turns = ((x - start) / TAU).floor();
        let y = x - start - turns * TAU;
        turns + self.cdf_within_turn(start + y)
    }

    fn cdf_within_turn(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (e, w) in self.edges.windows(2).zip(&self.weights) {
            if x >= e[1] {
                acc += w;
            } else {
                if x > e[0] {
                    acc += w * (x - e[0]) / (e[1] - e[0]);
                }
                break;
            }
        }
        acc
    }

    fn sample_one<R: Rng + ?Sized>(&self, index: &WeightedIndex<f64>, rng: &mut R) -> f64 {
        let k = index.sample(rng);
        let u: f64 = rng.random();
        wrap(self.edges[k] + u * (self.edges[k + 1] - self.edges[k]))
    }
}

/// Single-subsystem phase distribution `P(φ)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseDistribution {
    Uniform,
    WrappedGaussian { mean: f64, sigma: f64 },
    PointMass { at: f64 },
    Histogram(Histogram),
}

impl PhaseDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Uniform | Self::Histogram(_) => Ok(()),
            Self::WrappedGaussian { mean, sigma } => {
                if !mean.is_finite() || !sigma.is_finite() || *sigma <= 0.0 {
                    Err(Error::InvalidModel(format!(
                        "wrapped Gaussian needs finite mean and sigma > 0, got ({mean}, {sigma})"
                    )))
                } else {
                    Ok(())
                }
            }
            Self::PointMass { at } => {
                if at.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidModel("point mass location must be finite".into()))
                }
            }
        }
    }

    /// `∫ P(φ) e^{ihφ} dφ`, in closed form for every variant.
    pub fn harmonic_moment(&self, harmonic: i32) -> Result<Complex64> {
        self.validate()?;
        if harmonic < 0 {
            return Err(Error::InvalidHarmonic(harmonic));
        }
        if harmonic == 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let h = harmonic as f64;
        Ok(match self {
            Self::Uniform => Complex64::new(0.0, 0.0),
            Self::PointMass { at } => Complex64::new(0.0, h * at).exp(),
            Self::WrappedGaussian { mean, sigma } => {
                Complex64::new(0.0, h * mean).exp() * (-0.5 * h * h * sigma * sigma).exp()
            }
            Self::Histogram(hist) => hist.moment(harmonic),
        })
    }

    /// `n` wrapped samples; identical `(self, n, seed)` reproduce the same
    /// sequence.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::InsufficientData("sample count must be at least 1".into()));
        }
        let mut rng = rng::stream(seed, 0);
        let mut sampler = self.sampler()?;
        Ok((0..n).map(|_| sampler.draw(&mut rng)).collect())
    }

    /// Reusable sampler for drawing one phase at a time from a caller-owned
    /// stream.
    pub fn sampler(&self) -> Result<PhaseSampler<'_>> {
        self.validate()?;
        let index = match self {
            Self::Histogram(h) => Some(
                WeightedIndex::new(h.weights.iter().copied())
                    .map_err(|e| Error::InvalidModel(e.to_string()))?,
            ),
            _ => None,
        };
        Ok(PhaseSampler { model: self, index })
    }
}

pub struct PhaseSampler<'a> {
    model: &'a PhaseDistribution,
    index: Option<WeightedIndex<f64>>,
}

impl PhaseSampler<'_> {
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        match self.model {
            PhaseDistribution::Uniform => wrap(rng.random::<f64>() * TAU),
            PhaseDistribution::PointMass { at } => wrap(*at),
            PhaseDistribution::WrappedGaussian { mean, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                wrap(mean + sigma * z)
            }
            PhaseDistribution::Histogram(h) => {
                h.sample_one(self.index.as_ref().expect("histogram sampler index"), rng)
            }
        }
    }
}

/// A complex mean together with its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: Complex64,
    pub se: f64,
}

impl MomentEstimate {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

/// Arithmetic mean of `e^{ihφ_j}`.
///
/// The standard error is the sample standard deviation of the real parts of
/// the contributions after rotating them onto the direction of the mean,
/// divided by `√N`. That is the first-order (delta-method) error of `|mean|`.
pub fn empirical_harmonic_moment(phases: &[f64], harmonic: i32) -> Result<MomentEstimate> {
    if harmonic < 0 {
        return Err(Error::InvalidHarmonic(harmonic));
    }
    if phases.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "harmonic moment needs at least 2 samples, got {}",
            phases.len()
        )));
    }
    let h = harmonic as f64;
    let contributions: Vec<Complex64> =
        phases.iter().map(|p| Complex64::new(0.0, h * p).exp()).collect();
    Ok(rotated_mean_se(&contributions, 1))
}

/// Mean of complex contributions and the batched standard error of their real
/// parts rotated onto the mean's direction.
pub(crate) fn rotated_mean_se(contributions: &[Complex64], batch_len: usize) -> MomentEstimate {
    let n = contributions.len() as f64;
    let value = contributions.iter().sum::<Complex64>() / n;
    let rot = if value.norm() > 0.0 {
        Complex64::from_polar(1.0, -value.arg())
    } else {
        Complex64::new(1.0, 0.0)
    };
    let reals: Vec<f64> = contributions.iter().map(|c| (c * rot).re).collect();
    let se = crate::stats::batched_se(&reals, batch_len).unwrap_or(0.0);
    MomentEstimate { value, se }
}

/// Phase-difference density `p(Δφ)` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseDifferenceDensity {
    WrappedGaussian { sigma: f64 },
    PointMass { at: f64 },
    Uniform,
    Histogram(Histogram),
}

impl PhaseDifferenceDensity {
    /// The same density viewed as a distribution of the angle `Δφ`.
    pub fn as_distribution(&self) -> PhaseDistribution {
        match self {
            Self::WrappedGaussian { sigma } => {
                PhaseDistribution::WrappedGaussian { mean: 0.0, sigma: *sigma }
            }
            Self::PointMass { at } => PhaseDistribution::PointMass { at: *at },
            Self::Uniform => PhaseDistribution::Uniform,
            Self::Histogram(h) => PhaseDistribution::Histogram(h.clone()),
        }
    }
}

/// Locking coherence `γ`, the second Fourier coefficient of `p(Δφ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LockingCoherence(pub Complex64);

impl LockingCoherence {
    pub fn real(g: f64) -> Self {
        Self(Complex64::new(g, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

/// `γ = ∫ p(Δφ) e^{i2Δφ} dΔφ` on the default quadrature.
pub fn gamma_of_density(density: &PhaseDifferenceDensity) -> Result<LockingCoherence> {
    gamma_of_density_with(density, DEFAULT_QUADRATURE_NODES)
}

/// As [`gamma_of_density`] with an explicit node count. Smooth densities go
/// through the periodic rectangle rule; point masses, uniform and histogram
/// densities are integrated exactly.
pub fn gamma_of_density_with(
    density: &PhaseDifferenceDensity,
    nodes: usize,
) -> Result<LockingCoherence> {
    let dist = density.as_distribution();
    dist.validate()?;
    match density {
        PhaseDifferenceDensity::WrappedGaussian { sigma } => {
            if nodes < 2 {
                return Err(Error::Config("quadrature needs at least 2 nodes".into()));
            }
            let h = TAU / nodes as f64;
            let sum: Complex64 = (0..nodes)
                .map(|j| {
                    let x = j as f64 * h;
                    Complex64::new(0.0, 2.0 * x).exp() * wrapped_gaussian_density(x, 0.0, *sigma)
                })
                .sum();
            Ok(LockingCoherence(sum * h))
        }
        _ => dist.harmonic_moment(2).map(LockingCoherence),
    }
}

/// `γ(σ_L) = exp(−2σ_L²)` for Gaussian phase locking.
pub fn gaussian_gamma_closed_form(sigma_l: f64) -> Result<f64> {
    if !sigma_l.is_finite() || sigma_l < 0.0 {
        return Err(Error::InvalidModel(format!("σ_L must be >= 0, got {sigma_l}")));
    }
    Ok((-2.0 * sigma_l * sigma_l).exp())
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    /// Independent route: plain rectangle rule of the model's density.
    fn quadrature_moment(density: impl Fn(f64) -> f64, harmonic: f64, nodes: usize) -> Complex64 {
        let h = TAU / nodes as f64;
        (0..nodes)
            .map(|j| {
                let x = j as f64 * h;
                Complex64::new(0.0, harmonic * x).exp() * density(x) * h
            })
            .sum()
    }

    #[test]
    fn wrap_is_idempotent_and_half_open() {
        for x in [-1e-17, -TAU, TAU, 3.0 * TAU + 0.5, -0.25, 1e300] {
            let w = wrap(x);
            assert!((0.0..TAU).contains(&w), "{x} -> {w}");
            assert_eq!(wrap(w), w);
        }
    }

    #[test]
    fn point_mass_samples_are_constant() {
        let s = PhaseDistribution::PointMass { at: FRAC_PI_4 }.sample(3, 11).unwrap();
        assert_eq!(s, vec![FRAC_PI_4; 3]);
    }

    #[test]
    fn sampling_is_reproducible() {
        let m = PhaseDistribution::WrappedGaussian { mean: 1.0, sigma: 0.7 };
        assert_eq!(m.sample(1000, 3).unwrap(), m.sample(1000, 3).unwrap());
        assert_ne!(m.sample(1000, 3).unwrap(), m.sample(1000, 4).unwrap());
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(matches!(
            PhaseDistribution::Uniform.sample(0, 1),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn uniform_second_harmonic_within_clt_bound() {
        // |mean e^{i2φ}| ~ Rayleigh with scale 1/sqrt(2N); 3/sqrt(N) is a
        // 1 - e^{-18} quantile, so every seed must pass.
        let n = 100_000;
        for seed in 0..20 {
            let s = PhaseDistribution::Uniform.sample(n, seed).unwrap();
            let m = empirical_harmonic_moment(&s, 2).unwrap();
            assert!(m.modulus() < 3.0 / (n as f64).sqrt(), "seed {seed}: {}", m.modulus());
        }
    }

    #[test]
    fn wrapped_gaussian_circular_mean_near_zero() {
        let s = PhaseDistribution::WrappedGaussian { mean: 0.0, sigma: 0.5 }
            .sample(100_000, 5)
            .unwrap();
        let m1 = empirical_harmonic_moment(&s, 1).unwrap();
        assert!(wrap_signed(m1.value.arg()).abs() < 0.01);
    }

    #[test]
    fn closed_form_moments() {
        assert_eq!(
            PhaseDistribution::Uniform.harmonic_moment(2).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let pm = PhaseDistribution::PointMass { at: FRAC_PI_4 }.harmonic_moment(2).unwrap();
        assert_abs_diff_eq!(pm.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pm.im, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pm.norm(), 1.0, epsilon = 1e-15);

        let wg = PhaseDistribution::WrappedGaussian { mean: 0.0, sigma: 0.5 };
        let closed = wg.harmonic_moment(2).unwrap();
        assert_abs_diff_eq!(closed.re, 0.606_530_659_712_633_4, epsilon = 1e-15);
        let quad = quadrature_moment(|x| wrapped_gaussian_density(x, 0.0, 0.5), 2.0, 8192);
        assert_abs_diff_eq!(closed.re, quad.re, epsilon = 1e-13);
        assert_abs_diff_eq!(quad.im, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn harmonic_zero_and_negative() {
        let wg = PhaseDistribution::WrappedGaussian { mean: 0.3, sigma: 0.2 };
        assert_eq!(wg.harmonic_moment(0).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(wg.harmonic_moment(-2), Err(Error::InvalidHarmonic(-2))));
    }

    #[test]
    fn histogram_moment_matches_fine_quadrature() {
        let hist = Histogram::new(vec![0.5, 1.0, 2.5, 4.0], vec![1.0, 3.0, 2.0]).unwrap();
        let density = {
            let h = hist.clone();
            move |x: f64| {
                for (e, w) in h.edges().windows(2).zip(h.weights()) {
                    if x >= e[0] && x < e[1] {
                        return w / (e[1] - e[0]);
                    }
                }
                0.0
            }
        };
        let exact = PhaseDistribution::Histogram(hist).harmonic_moment(2).unwrap();
        // discontinuous integrand: rectangle rule converges as O(h)
        let quad = quadrature_moment(density, 2.0, 1 << 20);
        assert!((exact - quad).norm() < 1e-5, "{exact} vs {quad}");
    }

    #[test]
    fn histogram_rejects_bad_weights() {
        assert!(Histogram::uniform_bins(vec![0.0, 0.0]).is_err());
        assert!(Histogram::uniform_bins(vec![1.0, -1.0, 1.0]).is_err());
        assert!(Histogram::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(Histogram::new(vec![0.0, 7.0], vec![1.0]).is_err());
        let h = Histogram::uniform_bins(vec![2.0, 6.0]).unwrap();
        assert!((h.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_mass_between_wraps() {
        let h = Histogram::uniform_bins(vec![1.0; 4]).unwrap();
        assert_abs_diff_eq!(h.mass_between(0.0, TAU), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h.mass_between(-PI / 2.0, PI / 2.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(h.mass_between(TAU - 0.1, TAU + 0.1), 0.2 / TAU, epsilon = 1e-15);
    }

    #[test]
    fn histogram_samples_follow_weights() {
        let h = Histogram::uniform_bins(vec![0.0, 1.0, 0.0, 3.0]).unwrap();
        let s = PhaseDistribution::Histogram(h).sample(40_000, 2).unwrap();
        let q = s.iter().filter(|p| **p >= 1.5 * PI).count() as f64 / 40_000.0;
        assert!((q - 0.75).abs() < 0.01);
        assert!(s.iter().all(|p| *p >= PI / 2.0 && (*p < PI || *p >= 1.5 * PI)));
    }

    #[test]
    fn empirical_moment_edge_cases() {
        let m = empirical_harmonic_moment(&[0.0; 8], 2).unwrap();
        assert_eq!(m.value, Complex64::new(1.0, 0.0));
        assert_eq!(m.se, 0.0);

        let sym = [0.0, PI / 2.0, PI, 1.5 * PI];
        assert!(empirical_harmonic_moment(&sym, 2).unwrap().modulus() < 1e-15);

        assert!(matches!(empirical_harmonic_moment(&[], 2), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn empirical_moment_converges_to_closed_form() {
        let wg = PhaseDistribution::WrappedGaussian { mean: 0.0, sigma: 0.5 };
        let s = wg.sample(100_000, 8).unwrap();
        let m = empirical_harmonic_moment(&s, 2).unwrap();
        assert!((m.modulus() - 0.606_530_66).abs() < 0.01);
        // delta-method SE is the right order of magnitude
        assert!(m.se > 0.0 && m.se < 0.01);
    }

    #[test]
    fn gamma_limits() {
        let g = gamma_of_density(&PhaseDifferenceDensity::PointMass { at: 0.0 }).unwrap();
        assert_eq!(g.value(), Complex64::new(1.0, 0.0));
        let g = gamma_of_density(&PhaseDifferenceDensity::Uniform).unwrap();
        assert_eq!(g.modulus(), 0.0);
    }

    #[test]
    fn gamma_at_violation_threshold() {
        let sigma = 0.41628;
        let g = gamma_of_density(&PhaseDifferenceDensity::WrappedGaussian { sigma }).unwrap();
        assert_abs_diff_eq!(g.value().re, 0.70711, epsilon = 1e-5);
        assert_abs_diff_eq!(g.value().im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_gamma_values() {
        assert_eq!(gaussian_gamma_closed_form(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(gaussian_gamma_closed_form(0.5).unwrap(), 0.60653, epsilon = 1e-5);
        assert_abs_diff_eq!(gaussian_gamma_closed_form(1.0).unwrap(), 0.13534, epsilon = 1e-5);
        assert!(gaussian_gamma_closed_form(-0.1).is_err());
        for sigma in [0.5, 1.0] {
            let q = gamma_of_density(&PhaseDifferenceDensity::WrappedGaussian { sigma }).unwrap();
            assert_abs_diff_eq!(
                q.value().re,
                gaussian_gamma_closed_form(sigma).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn wrapped_gaussian_quadrature_agrees_over_range() {
        let mut sigma = 0.05;
        while sigma <= 2.4 + 1e-12 {
            let q = gamma_of_density_with(&PhaseDifferenceDensity::WrappedGaussian { sigma }, 8192)
                .unwrap();
            let c = gaussian_gamma_closed_form(sigma).unwrap();
            assert!((q.value().re - c).abs() < 1e-6, "σ = {sigma}");
            sigma += 0.05;
        }
    }

    #[test]
    fn wrapped_density_integrates_to_one() {
        for sigma in [0.05, 0.5, 2.4] {
            let h = TAU / 4096.0;
            let total: f64 =
                (0..4096).map(|j| wrapped_gaussian_density(j as f64 * h, 1.0, sigma) * h).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn model() -> impl Strategy<Value = PhaseDistribution> {
            prop_oneof![
                Just(PhaseDistribution::Uniform),
                (-10.0..10.0f64, 0.01..3.0f64)
                    .prop_map(|(mean, sigma)| PhaseDistribution::WrappedGaussian { mean, sigma }),
                (-10.0..10.0f64).prop_map(|at| PhaseDistribution::PointMass { at }),
                prop::collection::vec(0.0..1.0f64, 1..40).prop_filter_map("normalizable", |w| {
                    Histogram::uniform_bins(w).ok().map(PhaseDistribution::Histogram)
                }),
            ]
        }

        proptest! {
            #[test]
            fn moments_bounded_by_one(m in model(), h in 1i32..=4) {
                let v = m.harmonic_moment(h).unwrap().norm();
                prop_assert!(v <= 1.0 + 1e-12);
                if matches!(m, PhaseDistribution::PointMass { .. }) {
                    prop_assert!((v - 1.0).abs() < 1e-12);
                } else {
                    prop_assert!(v < 1.0 - 1e-12);
                }
            }

            #[test]
            fn wrap_idempotent(x in -1e6..1e6f64) {
                let w = wrap(x);
                prop_assert_eq!(wrap(w), w);
                prop_assert!((0.0..TAU).contains(&w));
            }
        }
    }
}
