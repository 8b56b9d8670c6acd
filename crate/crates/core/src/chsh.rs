//! CHSH observable algebra.
//!
//! Settings act through `cos 2A σ_z + sin 2A σ_x`, so every correlator is
//! π-periodic in each setting.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circular::LockingCoherence;
use crate::reduced::{LocalCoherenceFactor, XState};
use crate::{Error, Result};

/// The four settings `(A, A′, B, B′)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingsQuad {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl SettingsQuad {
    pub fn new(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Self {
        Self { a, a_prime, b, b_prime }
    }

    /// `(A,B), (A,B′), (A′,B), (A′,B′)` in CHSH order.
    pub fn pairs(&self) -> [(f64, f64); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }

    pub fn rotated(&self, delta: f64) -> Self {
        Self::new(self.a + delta, self.a_prime + delta, self.b + delta, self.b_prime + delta)
    }
}

/// `(A, A′, B, B′) = (0, π/4, π/8, −π/8)`, optimal for `E = cos 2(A−B)`.
pub fn canonical_settings() -> SettingsQuad {
    SettingsQuad::new(0.0, FRAC_PI_4, FRAC_PI_8, -FRAC_PI_8)
}

/// Product-state correlator `cos 2A · cos 2B`.
pub fn correlator_diagonal(a: f64, b: f64) -> f64 {
    (2.0 * a).cos() * (2.0 * b).cos()
}

/// `Re[V e^{−i2(A−B)}]`.
pub fn correlator_visibility(visibility: Complex64, a: f64, b: f64) -> Result<f64> {
    let r = visibility.norm();
    if r > 1.0 + 1e-12 {
        return Err(Error::InvalidVisibility(r));
    }
    Ok((visibility * Complex64::from_polar(1.0, -2.0 * (a - b))).re)
}

/// `Tr[ρ Â(A) ⊗ B̂(B)]` for an X-state, in closed form.
///
/// Only the `ZZ` and `XX` Pauli channels survive for settings in the Z/X
/// plane: `(p00−p01−p10+p11) cos2A cos2B + 2 Re⟨00|ρ|11⟩ sin2A sin2B`.
pub fn correlator_xstate_exact(state: &XState, a: f64, b: f64) -> f64 {
    let (sa, ca) = (2.0 * a).sin_cos();
    let (sb, cb) = (2.0 * b).sin_cos();
    state.zz() * ca * cb + state.visibility().re * sa * sb
}

/// `S = E(A,B) + E(A,B′) + E(A′,B) − E(A′,B′)`.
pub fn chsh_combine(e_ab: f64, e_ab_prime: f64, e_a_prime_b: f64, e_a_prime_b_prime: f64) -> f64 {
    e_ab + e_ab_prime + e_a_prime_b - e_a_prime_b_prime
}

/// CHSH value of a correlator function at the given settings.
pub fn chsh_at(correlator: impl Fn(f64, f64) -> f64, settings: &SettingsQuad) -> f64 {
    let [p0, p1, p2, p3] = settings.pairs();
    chsh_combine(
        correlator(p0.0, p0.1),
        correlator(p1.0, p1.1),
        correlator(p2.0, p2.1),
        correlator(p3.0, p3.1),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    RawRecord,
    ReducedPhase,
    Oracle,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::RawRecord => "raw-record",
            Self::ReducedPhase => "reduced-phase",
            Self::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorEstimate {
    pub value: f64,
    pub se: f64,
}

/// A CHSH value with its four correlators in `pairs()` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    pub kind: EstimatorKind,
    pub s: f64,
    pub se: f64,
    pub correlators: [CorrelatorEstimate; 4],
    pub settings: SettingsQuad,
}

impl ChshEstimate {
    /// Combines four correlators; `S` is their CHSH sum and the SE their
    /// root-sum-square.
    pub fn from_correlators(kind: EstimatorKind, correlators: [CorrelatorEstimate; 4], settings: SettingsQuad) -> Self {
        let [e0, e1, e2, e3] = correlators.map(|c| c.value);
        let se = correlators.iter().map(|c| c.se * c.se).sum::<f64>().sqrt();
        Self { kind, s: chsh_combine(e0, e1, e2, e3), se, correlators, settings }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMax {
    pub s_max: f64,
    pub violates: bool,
}

/// `S_max = 2√2 |κγ|`; violation is the strict inequality `|κγ| > 1/√2`.
pub fn s_max_visibility(kappa: LocalCoherenceFactor, gamma: LockingCoherence) -> SMax {
    let v = kappa.value() * gamma.modulus();
    SMax { s_max: 2.0 * SQRT_2 * v, violates: v > FRAC_1_SQRT_2 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    /// Largest `|S|` on the grid.
    pub s: f64,
    pub argmax: SettingsQuad,
}

/// Exhaustive maximum of `|S|` over the setting grid `{kπ/n}⁴ ⊂ [0, π)⁴`,
/// `n = round(π / resolution)`.
///
/// For fixed `(B, B′)` the two `A` choices decouple, so the search is exact
/// over the full 4-angle grid at `O(n³)` cost. Ties resolve to the
/// lexicographically smallest `(A, A′, B, B′)`.
pub fn grid_max_chsh(correlator: impl Fn(f64, f64) -> f64, resolution: f64) -> Result<GridMax> {
    if !(resolution > 0.0) || resolution > PI / 90.0 + 1e-15 {
        return Err(Error::Config(format!(
            "grid resolution must be in (0, π/90], got {resolution}"
        )));
    }
    let n = (PI / resolution).round() as usize;
    let step = PI / n as f64;
    let table: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| correlator(i as f64 * step, j as f64 * step)).collect())
        .collect();

    // (|S|, [a, a', b, b'])
    let mut best: Option<(f64, [usize; 4])> = None;
    let mut consider = |value: f64, idx: [usize; 4]| {
        let better = match best {
            None => true,
            Some((v, i)) => value > v || (value == v && idx < i),
        };
        if better {
            best = Some((value, idx));
        }
    };

    for b in 0..n {
        for bp in 0..n {
            let (mut hi_a, mut lo_a) = ((f64::NEG_INFINITY, 0), (f64::INFINITY, 0));
            let (mut hi_ap, mut lo_ap) = ((f64::NEG_INFINITY, 0), (f64::INFINITY, 0));
            for (a, row) in table.iter().enumerate() {
                let sum = row[b] + row[bp];
                let diff = row[b] - row[bp];
                if sum > hi_a.0 {
                    hi_a = (sum, a);
                }
                if sum < lo_a.0 {
                    lo_a = (sum, a);
                }
                if diff > hi_ap.0 {
                    hi_ap = (diff, a);
                }
                if diff < lo_ap.0 {
                    lo_ap = (diff, a);
                }
            }
            consider((hi_a.0 + hi_ap.0).abs(), [hi_a.1, hi_ap.1, b, bp]);
            consider((lo_a.0 + lo_ap.0).abs(), [lo_a.1, lo_ap.1, b, bp]);
        }
    }
    let (s, idx) = best.expect("non-empty grid");
    let angle = |k: usize| k as f64 * step;
    Ok(GridMax {
        s,
        argmax: SettingsQuad::new(angle(idx[0]), angle(idx[1]), angle(idx[2]), angle(idx[3])),
    })
}
