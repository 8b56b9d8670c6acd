//! Browser bindings: a σ_L sweep plot, the visibility threshold explorer and a
//! record-level estimator demo.
//!
//! The `*_json`/`*_svg` functions are plain Rust and the `#[wasm_bindgen]`
//! exports wrap them.

use phasebell::chsh::{canonical_settings, s_max_visibility};
use phasebell::circular::LockingCoherence;
use phasebell::estimator::{analyze_record, Convention, DEFAULT_BINS};
use phasebell::reduced::LocalCoherenceFactor;
use phasebell::svg::render_sweep_svg;
use phasebell::sweep::{crossings, run_sweep, SweepConfig};
use phasebell::synth::{synth_pair, RecordModel};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest record the demo will synthesise, in coherence windows.
pub const MAX_WINDOWS: f64 = 200_000.0;

/// Sweep plot for `σ_L ∈ [0, sigma_max]`.
pub fn sweep_svg(sigma_max: f64, steps: usize, samples: usize, seed: u64, convention: &str, kappa: f64) -> Result<String, String> {
    let cfg = SweepConfig {
        sigma_max,
        steps,
        samples,
        seed,
        kappa,
        convention: convention.parse().map_err(|e: phasebell::Error| e.to_string())?,
        ..Default::default()
    };
    if samples > 100_000 || steps > 400 {
        return Err("at most 100000 samples and 400 steps in the browser".into());
    }
    let pts = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let c = crossings(&pts);
    let fmt = |x: Option<f64>| x.map_or("none".into(), |v| format!("{v:.3}"));
    let title = format!("oracle crosses S=2 at σ_L={}, reduced at σ_L={}", fmt(c.oracle), fmt(c.reduced));
    Ok(render_sweep_svg(&pts, &title))
}

/// `S_max`, violation flag and canonical correlators for given `κ` and `|γ|`.
pub fn visibility_json(kappa: f64, gamma: f64) -> Result<String, String> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(format!("|γ| must lie in [0, 1], got {gamma}"));
    }
    let k = LocalCoherenceFactor::new(kappa).map_err(|e| e.to_string())?;
    let r = s_max_visibility(k, LockingCoherence::real(gamma));
    let v = kappa * gamma;
    let correlators: Vec<f64> = canonical_settings().pairs().iter().map(|(a, b)| v * (2.0 * (a - b)).cos()).collect();
    Ok(json!({ "visibility": v, "s_max": r.s_max, "violates": r.violates, "correlators": correlators }).to_string())
}

/// Synthesises a quantum-locked record and returns both CHSH estimates.
pub fn record_demo_json(sigma_l: f64, windows: f64, seed: u64, convention: &str) -> Result<String, String> {
    if !(200.0..=MAX_WINDOWS).contains(&windows) {
        return Err(format!("windows must lie in [200, {MAX_WINDOWS}]"));
    }
    let conv: Convention = convention.parse().map_err(|e: phasebell::Error| e.to_string())?;
    let rec = synth_pair(&RecordModel::QuantumLocked { sigma_l, tau_c: 1.0 }, windows, 0.25, seed)
        .map_err(|e| e.to_string())?;
    let a = analyze_record(&rec, conv, Some(2), DEFAULT_BINS).map_err(|e| e.to_string())?;
    Ok(json!({
        "raw": { "S": a.raw.s, "se": a.raw.se },
        "reduced": { "S": a.reduced.s, "se": a.reduced.se },
        "kappa": a.local_a.factor * a.local_b.factor,
        "gamma_abs": a.gamma.modulus(),
        "n_windows": rec.n_windows(),
    })
    .to_string())
}

#[wasm_bindgen(js_name = sweepSvg)]
pub fn sweep_svg_js(
    sigma_max: f64,
    steps: usize,
    samples: usize,
    seed: u32,
    convention: &str,
    kappa: f64,
) -> Result<String, JsError> {
    sweep_svg(sigma_max, steps, samples, seed as u64, convention, kappa).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = visibility)]
pub fn visibility_js(kappa: f64, gamma: f64) -> Result<String, JsError> {
    visibility_json(kappa, gamma).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = recordDemo)]
pub fn record_demo_js(sigma_l: f64, windows: f64, seed: u32, convention: &str) -> Result<String, JsError> {
    record_demo_json(sigma_l, windows, seed as u64, convention).map_err(|e| JsError::new(&e))
}
