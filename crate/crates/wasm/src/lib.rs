//! Browser bindings: a phase map, the bulk dispersion and the open-chain
//! spectrum.

use kitaev_core::model::{dispersion, momentum_grid};
use kitaev_core::phases::{classify, PhaseKind};
use kitaev_core::realspace::{build_system, open_spectrum, EnergyUnit};
use kitaev_core::ModelParams;
use wasm_bindgen::prelude::*;

const KINDS: [PhaseKind; 6] = [
    PhaseKind::GappedTopoNeg,
    PhaseKind::GappedTopoPos,
    PhaseKind::GappedTrivial,
    PhaseKind::GaplessBoundary,
    PhaseKind::DegeneracyLine,
    PhaseKind::Coalescing,
];

fn params(t: f64, mu: f64, da: f64, db: f64) -> Result<ModelParams, String> {
    ModelParams::new(t, mu, da, db).map_err(|e| e.to_string())
}

/// Name of a phase code returned by [`phase_map`].
#[wasm_bindgen]
pub fn phase_name(code: u8) -> String {
    KINDS
        .get(code as usize)
        .map_or("unknown", |k| k.as_str())
        .to_string()
}

/// Phase codes on a steps x steps grid over delta_a, delta_b in [-range, range],
/// row-major with delta_b (rows) decreasing from the top.
#[wasm_bindgen]
pub fn phase_map(t: f64, mu: f64, range: f64, steps: usize) -> Result<Vec<u8>, String> {
    if !(2..=1024).contains(&steps) {
        return Err(format!("steps must be in 2..=1024, got {steps}"));
    }
    let base = params(t, mu, 0.0, 0.0)?;
    let at = |i: usize| -range + 2.0 * range * i as f64 / (steps - 1) as f64;
    let mut out = Vec::with_capacity(steps * steps);
    for row in 0..steps {
        let db = at(steps - 1 - row);
        for col in 0..steps {
            let q = base.with_pairing(at(col), db).map_err(|e| e.to_string())?;
            let kind = classify(&q).kind;
            out.push(KINDS.iter().position(|&k| k == kind).unwrap() as u8);
        }
    }
    Ok(out)
}

/// Interleaved (k, re eps, im eps) over nk momenta.
#[wasm_bindgen]
pub fn dispersion_curve(t: f64, mu: f64, da: f64, db: f64, nk: usize) -> Result<Vec<f64>, String> {
    if !(2..=65_536).contains(&nk) {
        return Err(format!("nk must be in 2..=65536, got {nk}"));
    }
    let q = params(t, mu, da, db)?;
    Ok(momentum_grid(nk)
        .flat_map(|k| {
            let e = dispersion(&q, k).epsilon;
            [k, e.re, e.im]
        })
        .collect())
}

/// Sorted open-chain energies (quarter units) for n sites.
#[wasm_bindgen]
pub fn open_chain_spectrum(
    t: f64,
    mu: f64,
    da: f64,
    db: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if n > 200 {
        return Err(format!("n must be at most 200 in the browser, got {n}"));
    }
    let q = params(t, mu, da, db)?;
    let sys = build_system(&q, n).map_err(|e| e.to_string())?;
    open_spectrum(&sys, EnergyUnit::Quarter).map_err(|e| e.to_string())
}
