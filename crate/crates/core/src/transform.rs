//! Spectral ↔ temporal transforms between mode amplitudes and envelopes.
//!
//! Convention: `φ(t) = −i √(δω/2π) Σ_l c_l e^{iΔ_l(t−t₀)}` and its inverse
//! `c_l = i √(δω/2π) ∫ φ(t) e^{−iΔ_l(t−t₀)} dt`. With these signs the rising
//! exponential `√Γ e^{−Γ(t₀−t)/2} Θ(t₀−t)` maps onto the ideal state and the
//! atom is driven as `ḟ₀ = −(Γ/2) f₀ + √Γ φ(t)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::atom::AtomParams;
use crate::envelope::TemporalEnvelope;
use crate::error::{Error, Result};
use crate::grid::ModeGrid;
use crate::state::{PhotonState, StateLabel};
use crate::sum;

/// Fraction of spectral power used to measure an envelope's bandwidth.
const BANDWIDTH_POWER_FRACTION: f64 = 0.99;

/// Projects a normalized envelope onto the grid by trapezoid quadrature and
/// renormalizes. Analytic envelopes are sampled with step `π/(8·W/2)`.
pub fn envelope_state(
    grid: &Arc<ModeGrid>,
    env: &TemporalEnvelope,
    atom: &AtomParams,
) -> Result<PhotonState> {
    grid.check_atom(atom)?;
    if env.is_vacuum() {
        return Err(Error::Unnormalized { norm: 0.0 });
    }
    env.check_normalized()?;
    let max_step = PI / (8.0 * grid.max_detuning());
    let segments = env.quadrature_segments(max_step);
    let t0 = atom.t0();
    let prefactor = C64::new(0.0, (grid.spacing() / (2.0 * PI)).sqrt());

    let raw: Vec<C64> = grid
        .detunings()
        .par_iter()
        .map(|&delta| {
            let integral: C64 = segments
                .iter()
                .map(|(times, values)| trapezoid_fourier(times, values, delta, t0))
                .sum();
            prefactor * integral
        })
        .collect();

    let warning = bandwidth_warning(grid, &raw);
    PhotonState::from_amplitudes(
        grid,
        raw,
        C64::new(0.0, 0.0),
        StateLabel::Envelope { warning },
    )
}

/// `∫ φ(t) e^{−iΔ(t−t₀)} dt` by the trapezoid rule on the given samples.
fn trapezoid_fourier(times: &[f64], values: &[C64], delta: f64, t0: f64) -> C64 {
    let n = times.len();
    if n < 2 {
        return C64::new(0.0, 0.0);
    }
    let uniform = {
        let h = times[1] - times[0];
        times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
    };
    let mut acc = C64::new(0.0, 0.0);
    if uniform {
        let h = (times[n - 1] - times[0]) / (n - 1) as f64;
        let step = C64::from_polar(1.0, -delta * h);
        let mut phase = C64::from_polar(1.0, -delta * (times[0] - t0));
        for (k, v) in values.iter().enumerate() {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            acc += v * phase * w;
            phase *= step;
        }
        acc * h
    } else {
        for k in 0..n - 1 {
            let h = times[k + 1] - times[k];
            let a = values[k] * C64::from_polar(1.0, -delta * (times[k] - t0));
            let b = values[k + 1] * C64::from_polar(1.0, -delta * (times[k + 1] - t0));
            acc += (a + b) * (0.5 * h);
        }
        acc
    }
}

fn bandwidth_warning(grid: &ModeGrid, raw: &[C64]) -> Option<String> {
    let probs: Vec<f64> = raw.iter().map(|c| c.norm_sqr()).collect();
    let total = sum::pairwise(&probs);
    if !(total > 0.0) {
        return None;
    }
    let c = grid.center_index();
    let mut inside = probs[c];
    let mut k = 0;
    while inside < BANDWIDTH_POWER_FRACTION * total && k < c {
        k += 1;
        inside += probs[c - k] + probs[c + k];
    }
    let bandwidth = k as f64 * grid.spacing();
    let limit = 0.25 * grid.bandwidth();
    (bandwidth > limit).then(|| {
        format!("envelope bandwidth {bandwidth:.3} exceeds W/4 = {limit:.3}; spectrum may alias")
    })
}

/// Half-width of the recurrence-free window around t₀, `(2π/δω)/4`.
pub fn recurrence_half_window(grid: &ModeGrid) -> f64 {
    0.25 * grid.recurrence_time()
}

/// Temporal envelope of the photon part of `state` at the requested times.
pub fn temporal_profile(
    state: &PhotonState,
    atom: &AtomParams,
    times: &[f64],
) -> Result<TemporalEnvelope> {
    let grid = state.grid();
    grid.check_atom(atom)?;
    let t0 = atom.t0();
    let half = recurrence_half_window(grid);
    if let Some(&t) = times.iter().find(|&&t| (t - t0).abs() > half) {
        return Err(Error::OutsideRecurrenceWindow {
            t,
            lo: t0 - half,
            hi: t0 + half,
        });
    }
    let prefactor = C64::new(0.0, -(grid.spacing() / (2.0 * PI)).sqrt());
    let det = grid.detunings();
    let amps = state.mode_amps();
    let values: Vec<C64> = times
        .par_iter()
        .map(|&t| {
            let tau = t - t0;
            prefactor
                * sum::pairwise_map(det.len(), &|l| amps[l] * C64::from_polar(1.0, det[l] * tau))
        })
        .collect();
    TemporalEnvelope::from_samples(times.to_vec(), values)
}
