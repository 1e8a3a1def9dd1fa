//! Closed-form amplitudes of the one-excitation problem.
//!
//! All expressions take real couplings `g`, so `g* = g`. Times are absolute;
//! t₀ comes from [`AtomParams`].

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::atom::AtomParams;
use crate::envelope::TemporalEnvelope;
use crate::error::{Error, Result};
use crate::quadrature;

/// Relative tolerance of the envelope convolution quadrature.
pub const QUADRATURE_REL_TOL: f64 = 1e-8;

/// Θ with Θ(0) = 1.
fn step(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// `e^{−Γ|t−t₀|/2}`: decay for t > t₀, perfect absorption for t < t₀.
pub fn decay_amplitude(t: f64, atom: &AtomParams) -> C64 {
    C64::new((-0.5 * atom.gamma() * (t - atom.t0()).abs()).exp(), 0.0)
}

/// Mode amplitude accompanying [`decay_amplitude`]:
/// `g (e^{−Γ|τ|/2} e^{−iΔτ} − 1) / (Δ − i(Γ/2) sgn τ)` with τ = t − t₀ and
/// sgn(0) = +1.
pub fn mode_amplitude_ideal(delta: f64, t: f64, atom: &AtomParams, g: f64) -> C64 {
    let tau = t - atom.t0();
    let half = 0.5 * atom.gamma();
    let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
    let numerator = C64::from_polar((-half * tau.abs()).exp(), -delta * tau) - 1.0;
    g * numerator / C64::new(delta, -half * sign)
}

fn check_order(t: f64, t_in: f64) -> Result<()> {
    if t < t_in {
        return Err(Error::BeforeStart { t, t_in });
    }
    Ok(())
}

/// Excited amplitude for the time-reversed dipole wave switched on at `t_in`.
pub fn f0_timereversed(t: f64, t_in: f64, atom: &AtomParams) -> Result<C64> {
    check_order(t, t_in)?;
    let (gamma, t0) = (atom.gamma(), atom.t0());
    if t_in > t0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let value = if t <= t0 {
        (-0.5 * gamma * (t0 - t)).exp() * -(-gamma * (t - t_in)).exp_m1()
    } else {
        (-0.5 * gamma * (t - t0)).exp() * -(-gamma * (t0 - t_in)).exp_m1()
    };
    Ok(C64::new(value, 0.0))
}

/// Excited amplitude for the reflected (not time-reversed) dipole wave.
/// Vanishes on `[t_in, t₀]` when `t_in ≤ t₀`.
pub fn f0_reflected(t: f64, t_in: f64, atom: &AtomParams) -> Result<C64> {
    check_order(t, t_in)?;
    let (gamma, t0) = (atom.gamma(), atom.t0());
    let envelope = (-0.5 * gamma * (t - t0)).exp();
    let value = if t_in > t0 {
        -gamma * (t - t_in) * envelope
    } else {
        -gamma * (t - t0) * step(t - t0) * envelope
    };
    Ok(C64::new(value, 0.0))
}

/// `(1 − e^{−ΓT})²`, the excitation reached at t₀ after an interaction time T.
pub fn truncated_excitation_prob(gamma_t: f64) -> Result<f64> {
    if !(gamma_t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma_T",
            reason: format!("must be non-negative, got {gamma_t}"),
        });
    }
    Ok((-gamma_t).exp_m1().powi(2))
}

/// `√Γ ∫_{t_in}^{t} e^{−Γ(t−t')/2} φ(t') dt'` by adaptive Simpson.
pub fn f0_from_envelope(
    env: &TemporalEnvelope,
    t: f64,
    t_in: f64,
    atom: &AtomParams,
) -> Result<C64> {
    env.check_normalized()?;
    check_order(t, t_in)?;
    Ok(convolve(env, t_in, t, C64::new(0.0, 0.0), atom))
}

/// [`f0_from_envelope`] on an ascending time grid starting at or after `t_in`,
/// stepping the exact solution from sample to sample.
pub fn f0_series(
    env: &TemporalEnvelope,
    times: &[f64],
    t_in: f64,
    atom: &AtomParams,
) -> Result<Vec<C64>> {
    env.check_normalized()?;
    if let Some(&first) = times.first() {
        check_order(first, t_in)?;
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: "must be ascending".into(),
        });
    }
    let mut out = Vec::with_capacity(times.len());
    let (mut t_prev, mut f) = (t_in, C64::new(0.0, 0.0));
    for &t in times {
        f = convolve(env, t_prev, t, f, atom);
        out.push(f);
        t_prev = t;
    }
    Ok(out)
}

/// Advances `f(a)` to `f(b)` under `ḟ = −(Γ/2) f + √Γ φ`.
fn convolve(env: &TemporalEnvelope, a: f64, b: f64, f_a: C64, atom: &AtomParams) -> C64 {
    let gamma = atom.gamma();
    let kernel = |s: f64| env.value(s) * (-0.5 * gamma * (b - s)).exp();
    let bps = env.breakpoints();
    let integral = quadrature::integrate(kernel, a, b, &bps, QUADRATURE_REL_TOL);
    f_a * (-0.5 * gamma * (b - a)).exp() + integral * gamma.sqrt()
}

/// Physical constants used for the dimensional variance prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub eps0: f64,
    pub c: f64,
}

impl Units {
    /// ħ = ε₀ = c = 1.
    pub const NATURAL: Units = Units {
        hbar: 1.0,
        eps0: 1.0,
        c: 1.0,
    };
    pub const SI: Units = Units {
        hbar: 1.054_571_817e-34,
        eps0: 8.854_187_812_8e-12,
        c: 299_792_458.0,
    };
}

impl Default for Units {
    fn default() -> Self {
        Self::NATURAL
    }
}

/// Observation point far from the atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarFieldPoint {
    /// Distance |x| from the atom.
    pub r: f64,
    /// Polar angle between the dipole axis and x.
    pub theta: f64,
    /// Projection e·e_θ of the probed polarization.
    pub e_dot_etheta: f64,
    pub t: f64,
}

impl FarFieldPoint {
    pub fn new(r: f64, theta: f64, e_dot_etheta: f64, t: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: format!("must be positive, got {r}"),
            });
        }
        if !(-1.0..=1.0).contains(&e_dot_etheta) {
            return Err(Error::InvalidParameter {
                name: "e_dot_etheta",
                reason: format!("must lie in [-1, 1], got {e_dot_etheta}"),
            });
        }
        if !(theta.is_finite() && t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: "non-finite input".into(),
            });
        }
        Ok(Self {
            r,
            theta,
            e_dot_etheta,
            t,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VarianceScale {
    /// Drop the prefactor `ħω₀·6Γ/(16π ε₀ c r²)`.
    Normalized,
    Dimensional(Units),
}

/// Normally ordered variance `⟨:(e·F)²:⟩` of the incoming time-reversed
/// dipole wave before absorption completes. Valid far from the atom
/// (r ≥ 10 c/ω₀) and in the rotating-wave regime Γ ≪ ω₀.
pub fn far_field_variance(
    p: &FarFieldPoint,
    atom: &AtomParams,
    scale: VarianceScale,
) -> Result<f64> {
    let omega0 = atom.omega0().ok_or(Error::InvalidParameter {
        name: "omega0",
        reason: "the far-field variance needs the transition frequency".into(),
    })?;
    let units = match scale {
        VarianceScale::Normalized => Units::NATURAL,
        VarianceScale::Dimensional(u) => u,
    };
    let min_r = 10.0 * units.c / omega0;
    if p.r < min_r {
        return Err(Error::NotFarField { r: p.r, min_r });
    }
    let gamma = atom.gamma();
    let lag = atom.t0() - p.t - p.r / units.c;
    if lag < 0.0 {
        return Ok(0.0);
    }
    let angular = p.theta.sin().powi(2) * p.e_dot_etheta.powi(2);
    let shape = angular * (-gamma * lag).exp();
    Ok(match scale {
        VarianceScale::Normalized => shape,
        VarianceScale::Dimensional(u) => {
            u.hbar * omega0 * 6.0 * gamma / (16.0 * PI * u.eps0 * u.c * p.r * p.r) * shape
        }
    })
}
