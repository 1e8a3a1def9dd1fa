use std::sync::Arc;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use wavepacket_core::analytic::{
    far_field_variance, truncated_excitation_prob, FarFieldPoint, VarianceScale,
};
use wavepacket_core::propagator::{locate_peak, propagate, PropagatorConfig};
use wavepacket_core::transform::{envelope_state, temporal_profile};
use wavepacket_core::{AtomParams, ModeGrid, PhotonState, TemporalEnvelope};

/// Envelope of the real catalog Gaussian amplitudes relative to the real
/// Gaussian pulse.
const CATALOG_PHASE: C64 = C64::new(0.0, -1.0);

fn small_grid(atom: &AtomParams) -> Arc<ModeGrid> {
    Arc::new(ModeGrid::new(atom, 40.0, 801).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn global_phase_leaves_probability_unchanged(alpha in -10.0f64..10.0, sigma in 0.8f64..3.0) {
        let atom = AtomParams::natural();
        let grid = small_grid(&atom);
        let state = PhotonState::gaussian(&grid, &atom, sigma).unwrap();
        let cfg = PropagatorConfig::new(&atom, -4.0, 2.0).with_dt(0.005).with_stride(5);
        let a = propagate(&state, &atom, &cfg).unwrap();
        let b = propagate(&state.with_global_phase(alpha), &atom, &cfg).unwrap();
        for (p, q) in a.prob.iter().zip(&b.prob) {
            prop_assert!((p - q).abs() <= 1e-14);
        }
    }

    #[test]
    fn shifted_envelope_is_phase_ramp(shift in -3.0f64..3.0, sigma in 0.8f64..3.0) {
        let atom = AtomParams::natural();
        let grid = small_grid(&atom);
        let env = TemporalEnvelope::gaussian(sigma, shift).unwrap();
        let projected = envelope_state(&grid, &env, &atom).unwrap();
        let reference = PhotonState::gaussian(&grid, &atom, sigma).unwrap();
        let worst = projected
            .mode_amps()
            .iter()
            .zip(reference.mode_amps())
            .zip(grid.detunings())
            .map(|((c, r), &d)| (c * CATALOG_PHASE - r * C64::from_polar(1.0, -d * shift)).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst < 1e-6, "{}", worst);
    }

    #[test]
    fn gaussian_round_trip(sigma in 0.8f64..3.0) {
        let atom = AtomParams::natural();
        let grid = small_grid(&atom);
        let state = PhotonState::gaussian(&grid, &atom, sigma).unwrap();
        let env = TemporalEnvelope::gaussian(sigma, 0.0).unwrap();
        let times: Vec<f64> = (-80..=80).map(|k| k as f64 * 0.1).collect();
        let profile = temporal_profile(&state, &atom, &times).unwrap();
        for &t in &times {
            prop_assert!((profile.value(t) - CATALOG_PHASE * env.value(t)).norm() < 1e-6);
        }
    }
}

proptest! {
    #[test]
    fn ideal_and_reflected_share_moduli(factor in 20.0f64..200.0, half in 100usize..800) {
        let atom = AtomParams::natural();
        let grid = Arc::new(ModeGrid::new(&atom, factor, 2 * half + 1).unwrap());
        let ideal = PhotonState::ideal(&grid, &atom).unwrap();
        let reflected = PhotonState::reflected(&grid, &atom).unwrap();
        for (a, b) in ideal.mode_amps().iter().zip(reflected.mode_amps()) {
            prop_assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn truncation_curve_is_monotone(a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (p, q) = (truncated_excitation_prob(lo).unwrap(), truncated_excitation_prob(hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&p) && p <= q);
    }

    #[test]
    fn variance_vanishes_ahead_of_wavefront(r in 10.0f64..1e4, theta in 0.0f64..3.2, lead in 1e-9f64..50.0) {
        let atom = AtomParams::natural().with_omega0(1e4).unwrap();
        let t = -r + lead;
        let p = FarFieldPoint::new(r, theta, 1.0, t).unwrap();
        prop_assert_eq!(far_field_variance(&p, &atom, VarianceScale::Normalized).unwrap(), 0.0);
    }

    #[test]
    fn refined_peak_dominates_samples(values in prop::collection::vec(0.0f64..1.0, 1..40)) {
        let times: Vec<f64> = (0..values.len()).map(|k| 0.1 * k as f64).collect();
        let (t, p) = locate_peak(&times, &values).unwrap();
        let best = values.iter().copied().fold(f64::MIN, f64::max);
        prop_assert!(p >= best);
        prop_assert!(t >= times[0] && t <= times[times.len() - 1]);
    }
}
