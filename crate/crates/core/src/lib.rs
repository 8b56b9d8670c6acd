//! Bell-CHSH analysis of continuous, phase-resolved measurement records.
//!
//! The crate is organised bottom-up:
//!
//! * [`circular`] – phase distributions on the circle, sampling and angular
//!   harmonic moments, the locking coherence `γ` of a phase-difference density.
//! * [`reduced`] – grid quadrature for the reduced two-dimensional measurement
//!   subspace: local coherence `κ`, the `|00⟩`/`|11⟩` overlaps and X-states.
//! * [`chsh`] – correlator forms, the CHSH combination, `S_max` and brute-force
//!   setting search.
//! * [`oracle`] – exact two-qubit statevector benchmark (`H`, `CX`, `RZ(2Δ)`).
//! * [`synth`] – synthetic paired phase records (quantum-locked and classical
//!   null models) and carrier modulation into voltage traces.
//! * [`estimator`] – phase extraction, local/nonlocal statistics and the raw
//!   and reduced-phase CHSH estimators.
//! * [`sweep`] – the `σ_L` sweep, classical null suite and CSV/SVG emission
//!   used by the command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chsh;
pub mod circular;
mod error;
pub mod estimator;
pub mod oracle;
pub mod reduced;
pub mod rng;
pub mod stats;
pub mod svg;
pub mod sweep;
pub mod synth;

pub use error::{Error, Result};
pub use num_complex::Complex64;
