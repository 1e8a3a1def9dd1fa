//! Uniform detuning grid standing in for the resonant mode continuum.
//!
//! Every mode couples with the same real constant `g`, fixed by requiring that
//! the discretized flat continuum reproduce the decay rate:
//! `2π g² / δω = Γ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::atom::AtomParams;
use crate::error::{Error, Result};

/// Default total detuning span, in units of Γ.
pub const DEFAULT_BANDWIDTH_FACTOR: f64 = 400.0;
/// Default number of modes; odd so that Δ = 0 is a grid point.
pub const DEFAULT_N_MODES: usize = 4001;
/// Smallest bandwidth (in units of Γ) accepted unless a lower floor is requested.
pub const MIN_BANDWIDTH_FACTOR: f64 = 20.0;
pub const MIN_MODES: usize = 101;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGrid {
    gamma: f64,
    bandwidth: f64,
    spacing: f64,
    coupling: f64,
    detunings: Vec<f64>,
}

impl ModeGrid {
    /// Builds a grid spanning `bandwidth_factor · Γ` with `n_modes` modes.
    pub fn new(atom: &AtomParams, bandwidth_factor: f64, n_modes: usize) -> Result<Self> {
        Self::with_floor(atom, bandwidth_factor, n_modes, MIN_BANDWIDTH_FACTOR)
    }

    /// Like [`ModeGrid::new`] with a custom bandwidth floor.
    pub fn with_floor(
        atom: &AtomParams,
        bandwidth_factor: f64,
        n_modes: usize,
        floor: f64,
    ) -> Result<Self> {
        if n_modes.is_multiple_of(2) {
            return Err(Error::EvenModeCount(n_modes));
        }
        if n_modes < MIN_MODES {
            return Err(Error::TooFewModes {
                min: MIN_MODES,
                got: n_modes,
            });
        }
        if !bandwidth_factor.is_finite() || bandwidth_factor < floor {
            return Err(Error::BandwidthTooNarrow {
                factor: bandwidth_factor,
                floor,
            });
        }
        let gamma = atom.gamma();
        let bandwidth = bandwidth_factor * gamma;
        let half = (n_modes - 1) / 2;
        let spacing = bandwidth / (n_modes - 1) as f64;
        let coupling = (gamma * spacing / (2.0 * PI)).sqrt();
        // integer offsets from the center keep Δ = 0 exact and the grid symmetric
        let detunings = (0..n_modes)
            .map(|l| (l as f64 - half as f64) * spacing)
            .collect();
        Ok(Self {
            gamma,
            bandwidth,
            spacing,
            coupling,
            detunings,
        })
    }

    /// Grid at the default resolution.
    pub fn default_for(atom: &AtomParams) -> Result<Self> {
        Self::new(atom, DEFAULT_BANDWIDTH_FACTOR, DEFAULT_N_MODES)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total detuning span W.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// Mode spacing δω.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn n_modes(&self) -> usize {
        self.detunings.len()
    }

    pub fn center_index(&self) -> usize {
        self.detunings.len() / 2
    }

    /// Largest |Δ| on the grid, W/2.
    pub fn max_detuning(&self) -> f64 {
        0.5 * self.bandwidth
    }

    /// Artificial revival time 2π/δω of the discretized continuum.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing
    }

    /// Decay rate recovered from the coupling, 2π g²/δω.
    pub fn recovered_gamma(&self) -> f64 {
        2.0 * PI * self.coupling * self.coupling / self.spacing
    }

    pub(crate) fn check_atom(&self, atom: &AtomParams) -> Result<()> {
        if (self.gamma - atom.gamma()).abs() > 1e-12 * self.gamma {
            return Err(Error::GridMismatch {
                grid: self.gamma,
                atom: atom.gamma(),
            });
        }
        Ok(())
    }
}
