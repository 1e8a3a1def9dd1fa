//! One-excitation states of the atom plus mode continuum and the catalog of
//! initial photon states.
//!
//! Mode amplitudes are interaction-picture values referenced to t₀: a free
//! photon keeps constant amplitudes, and the field reaching the atom at time
//! `t` is the superposition `Σ c_l e^{iΔ_l(t−t₀)}`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::grid::ModeGrid;
use crate::sum;

/// Minimum number of grid points within ±3σ of a Gaussian spectrum.
pub const MIN_GAUSSIAN_POINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateLabel {
    Ideal,
    Reflected,
    Gaussian { sigma: f64 },
    Envelope { warning: Option<String> },
    ExcitedAtom,
    Vacuum,
    Custom,
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ideal => write!(f, "ideal"),
            Self::Reflected => write!(f, "reflected"),
            Self::Gaussian { sigma } => write!(f, "gaussian{{sigma={sigma}}}"),
            Self::Envelope { warning: None } => write!(f, "envelope"),
            Self::Envelope { warning: Some(w) } => write!(f, "envelope[warning: {w}]"),
            Self::ExcitedAtom => write!(f, "excited-atom"),
            Self::Vacuum => write!(f, "vacuum"),
            Self::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhotonState {
    grid: Arc<ModeGrid>,
    mode_amps: Vec<C64>,
    atom_amp: C64,
    label: StateLabel,
    raw_norm: f64,
}

impl PhotonState {
    /// Normalizes `raw` continuum-normalized amplitudes and records their
    /// captured mass.
    fn normalized(grid: &Arc<ModeGrid>, raw: Vec<C64>, label: StateLabel) -> Self {
        let raw_norm = sum::norm_sqr(&raw);
        let scale = 1.0 / raw_norm.sqrt();
        let mode_amps = raw.into_iter().map(|c| c * scale).collect();
        Self {
            grid: Arc::clone(grid),
            mode_amps,
            atom_amp: C64::new(0.0, 0.0),
            label,
            raw_norm,
        }
    }

    /// The time-reversed dipole wave, `c_l ∝ −g/(Δ_l + iΓ/2)`.
    pub fn ideal(grid: &Arc<ModeGrid>, atom: &AtomParams) -> Result<Self> {
        grid.check_atom(atom)?;
        let (g, half) = (grid.coupling(), 0.5 * atom.gamma());
        let raw = grid
            .detunings()
            .iter()
            .map(|&d| -g / C64::new(d, half))
            .collect();
        Ok(Self::normalized(grid, raw, StateLabel::Ideal))
    }

    /// The reflected dipole wave, `c_l ∝ −g/(Δ_l − iΓ/2)`.
    pub fn reflected(grid: &Arc<ModeGrid>, atom: &AtomParams) -> Result<Self> {
        grid.check_atom(atom)?;
        let (g, half) = (grid.coupling(), 0.5 * atom.gamma());
        let raw = grid
            .detunings()
            .iter()
            .map(|&d| -g / C64::new(d, -half))
            .collect();
        Ok(Self::normalized(grid, raw, StateLabel::Reflected))
    }

    /// Gaussian mode distribution `c_l = N g e^{−Δ_l²/σ²}` with the continuum
    /// normalization `N = (8π)^{1/4}/√(Γσ)`.
    pub fn gaussian(grid: &Arc<ModeGrid>, atom: &AtomParams, sigma: f64) -> Result<Self> {
        grid.check_atom(atom)?;
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("must be finite and positive, got {sigma}"),
            });
        }
        let points = grid
            .detunings()
            .iter()
            .filter(|d| d.abs() <= 3.0 * sigma)
            .count();
        if points < MIN_GAUSSIAN_POINTS {
            return Err(Error::UnderResolved { sigma, points });
        }
        let n = gaussian_normalization(atom.gamma(), sigma);
        let g = grid.coupling();
        let raw = grid
            .detunings()
            .iter()
            .map(|&d| C64::new(n * g * (-(d * d) / (sigma * sigma)).exp(), 0.0))
            .collect();
        Ok(Self::normalized(grid, raw, StateLabel::Gaussian { sigma }))
    }

    /// Atom excited, field in vacuum.
    pub fn excited_atom(grid: &Arc<ModeGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            mode_amps: vec![C64::new(0.0, 0.0); grid.n_modes()],
            atom_amp: C64::new(1.0, 0.0),
            label: StateLabel::ExcitedAtom,
            raw_norm: 1.0,
        }
    }

    /// Zero vector; an unnormalized diagnostic input.
    pub fn vacuum(grid: &Arc<ModeGrid>) -> Self {
        Self {
            grid: Arc::clone(grid),
            mode_amps: vec![C64::new(0.0, 0.0); grid.n_modes()],
            atom_amp: C64::new(0.0, 0.0),
            label: StateLabel::Vacuum,
            raw_norm: 0.0,
        }
    }

    /// State from explicit amplitudes, renormalized to unit total norm.
    pub fn from_amplitudes(
        grid: &Arc<ModeGrid>,
        mode_amps: Vec<C64>,
        atom_amp: C64,
        label: StateLabel,
    ) -> Result<Self> {
        if mode_amps.len() != grid.n_modes() {
            return Err(Error::InvalidParameter {
                name: "mode_amps",
                reason: format!(
                    "expected {} amplitudes, got {}",
                    grid.n_modes(),
                    mode_amps.len()
                ),
            });
        }
        let raw_norm = sum::norm_sqr(&mode_amps) + atom_amp.norm_sqr();
        if !(raw_norm.is_finite() && raw_norm > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mode_amps",
                reason: format!("cannot normalize a state of norm {raw_norm}"),
            });
        }
        let scale = 1.0 / raw_norm.sqrt();
        Ok(Self {
            grid: Arc::clone(grid),
            mode_amps: mode_amps.into_iter().map(|c| c * scale).collect(),
            atom_amp: atom_amp * scale,
            label,
            raw_norm,
        })
    }

    pub fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    pub fn mode_amps(&self) -> &[C64] {
        &self.mode_amps
    }

    pub fn atom_amp(&self) -> C64 {
        self.atom_amp
    }

    pub fn label(&self) -> &StateLabel {
        &self.label
    }

    /// Norm captured on the grid before renormalization. For the Lorentzian
    /// states this is the truncated Lorentzian mass.
    pub fn raw_norm(&self) -> f64 {
        self.raw_norm
    }

    /// `|f₀|² + Σ|c_l|²`.
    pub fn norm(&self) -> f64 {
        self.atom_amp.norm_sqr() + sum::norm_sqr(&self.mode_amps)
    }

    pub fn mode_probabilities(&self) -> Vec<f64> {
        self.mode_amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Multiplies every amplitude by `e^{iα}`.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        let phase = C64::from_polar(1.0, alpha);
        Self {
            mode_amps: self.mode_amps.iter().map(|c| c * phase).collect(),
            atom_amp: self.atom_amp * phase,
            ..self.clone()
        }
    }
}

/// `(8π)^{1/4}/√(Γσ)`.
pub fn gaussian_normalization(gamma: f64, sigma: f64) -> f64 {
    (8.0 * PI).powf(0.25) / (gamma * sigma).sqrt()
}
