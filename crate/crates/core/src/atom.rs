//! Physical parameters of the two-level emitter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio Γ/ω₀ below which the rotating-wave treatment is considered valid.
pub const RWA_RATIO_LIMIT: f64 = 1e-3;

/// Decay rate, transition frequency and absorption-completion time.
///
/// Γ fixes the unit system: the dynamics depend on Γ alone, ω₀ only enters the
/// far-field variance prefactor and the rotating-wave validity flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    gamma: f64,
    omega0: Option<f64>,
    t0: f64,
}

impl AtomParams {
    pub fn new(gamma: f64, t0: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: format!("decay rate must be finite and positive, got {gamma}"),
            });
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t0",
                reason: format!("must be finite, got {t0}"),
            });
        }
        Ok(Self {
            gamma,
            omega0: None,
            t0,
        })
    }

    /// Γ = 1, t₀ = 0, no transition frequency.
    pub fn natural() -> Self {
        Self {
            gamma: 1.0,
            omega0: None,
            t0: 0.0,
        }
    }

    pub fn with_omega0(mut self, omega0: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega0",
                reason: format!("transition frequency must be finite and positive, got {omega0}"),
            });
        }
        self.omega0 = Some(omega0);
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega0(&self) -> Option<f64> {
        self.omega0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// True when ω₀ is known and Γ/ω₀ < 1e-3.
    pub fn rotating_wave_valid(&self) -> bool {
        self.omega0
            .is_some_and(|w| self.gamma / w < RWA_RATIO_LIMIT)
    }

    /// Excited-state lifetime 1/Γ.
    pub fn lifetime(&self) -> f64 {
        1.0 / self.gamma
    }
}

impl Default for AtomParams {
    fn default() -> Self {
        Self::natural()
    }
}
