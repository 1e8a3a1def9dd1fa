//! Temporal representation of a one-photon wavepacket.
//!
//! `φ(t)` is the field amplitude driving the atom: in the one-excitation sector
//! the excited amplitude obeys `ḟ₀ = −(Γ/2) f₀ + √Γ φ(t)`, so a unit-norm
//! envelope carries exactly one photon past the atom.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::atom::AtomParams;
use crate::error::{Error, Result};

/// Tolerance on `∫|φ|² dt = 1`.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Exponential tails are cut where |φ|² has fallen by e^{-TAIL_LIFETIMES}.
const TAIL_LIFETIMES: f64 = 36.0;
/// Gaussian tails are cut at this many temporal standard deviations of |φ|².
const GAUSSIAN_TAIL_SIGMAS: f64 = 9.0;

#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeShape {
    /// `√(Γ/(1−e^{−ΓT})) e^{−Γ(edge−t)/2}` on `[edge−T, edge]`, or on
    /// `(−∞, edge]` without a duration.
    RisingExponential {
        gamma: f64,
        edge: f64,
        duration: Option<f64>,
    },
    /// `√Γ e^{−Γ(t−edge)/2}` on `[edge, ∞)`.
    DecayingExponential { gamma: f64, edge: f64 },
    /// `(σ²/2π)^{1/4} e^{−σ²(t−center)²/4}`, the transform of `e^{−Δ²/σ²}`.
    Gaussian { sigma: f64, center: f64 },
}

impl EnvelopeShape {
    fn value(&self, t: f64) -> f64 {
        match *self {
            Self::RisingExponential {
                gamma,
                edge,
                duration,
            } => {
                // Θ(0) = 1 on both edges
                if t > edge {
                    return 0.0;
                }
                let scale = match duration {
                    Some(d) => {
                        if t < edge - d {
                            return 0.0;
                        }
                        (gamma / -(-gamma * d).exp_m1()).sqrt()
                    }
                    None => gamma.sqrt(),
                };
                scale * (-0.5 * gamma * (edge - t)).exp()
            }
            Self::DecayingExponential { gamma, edge } => {
                if t < edge {
                    0.0
                } else {
                    gamma.sqrt() * (-0.5 * gamma * (t - edge)).exp()
                }
            }
            Self::Gaussian { sigma, center } => {
                let x = t - center;
                (sigma * sigma / (2.0 * PI)).powf(0.25) * (-0.25 * sigma * sigma * x * x).exp()
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        match *self {
            Self::RisingExponential {
                gamma,
                edge,
                duration,
            } => {
                let tail = TAIL_LIFETIMES / gamma;
                (edge - duration.map_or(tail, |d| d.min(tail)), edge)
            }
            Self::DecayingExponential { gamma, edge } => (edge, edge + TAIL_LIFETIMES / gamma),
            Self::Gaussian { sigma, center } => {
                let half = GAUSSIAN_TAIL_SIGMAS / sigma;
                (center - half, center + half)
            }
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Self::RisingExponential { edge, duration, .. } => match duration {
                Some(d) => vec![edge - d, edge],
                None => vec![edge],
            },
            Self::DecayingExponential { edge, .. } => vec![edge],
            Self::Gaussian { .. } => Vec::new(),
        }
    }

    fn shifted(&self, by: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::RisingExponential { edge, .. } | Self::DecayingExponential { edge, .. } => {
                *edge += by
            }
            Self::Gaussian { center, .. } => *center += by,
        }
        out
    }
}

/// Closed-form envelope with a constant global phase factor.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticEnvelope {
    pub shape: EnvelopeShape,
    pub phase: C64,
}

/// Envelope known on a set of sample times, linearly interpolated and zero
/// outside the sampled span.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEnvelope {
    times: Vec<f64>,
    values: Vec<C64>,
}

impl SampledEnvelope {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    fn value(&self, t: f64) -> C64 {
        let ts = &self.times;
        if t < ts[0] || t > ts[ts.len() - 1] {
            return C64::new(0.0, 0.0);
        }
        let k = ts.partition_point(|&x| x <= t);
        if k == ts.len() {
            return self.values[ts.len() - 1];
        }
        let k = k.max(1);
        let (t0, t1) = (ts[k - 1], ts[k]);
        let w = (t - t0) / (t1 - t0);
        self.values[k - 1] * (1.0 - w) + self.values[k] * w
    }

    fn norm_sq(&self) -> f64 {
        self.times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].norm_sqr() + v[1].norm_sqr()))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TemporalEnvelope {
    Analytic(AnalyticEnvelope),
    Sampled(SampledEnvelope),
}

impl TemporalEnvelope {
    /// Rising exponential ending sharply at t₀: the time-reversed dipole wave.
    pub fn time_reversed(atom: &AtomParams) -> Self {
        Self::analytic(
            EnvelopeShape::RisingExponential {
                gamma: atom.gamma(),
                edge: atom.t0(),
                duration: None,
            },
            C64::new(1.0, 0.0),
        )
    }

    /// Time-reversed dipole wave cut to the last `duration` before t₀ and
    /// renormalized to one photon.
    pub fn truncated_time_reversed(atom: &AtomParams, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidParameter {
                name: "duration",
                reason: format!("must be finite and positive, got {duration}"),
            });
        }
        Ok(Self::analytic(
            EnvelopeShape::RisingExponential {
                gamma: atom.gamma(),
                edge: atom.t0(),
                duration: Some(duration),
            },
            C64::new(1.0, 0.0),
        ))
    }

    /// Decaying exponential starting at t₀: the reflected, not time-reversed,
    /// dipole wave. The minus sign matches the amplitudes `−g/(Δ − iΓ/2)`.
    pub fn reflected(atom: &AtomParams) -> Self {
        Self::analytic(
            EnvelopeShape::DecayingExponential {
                gamma: atom.gamma(),
                edge: atom.t0(),
            },
            C64::new(-1.0, 0.0),
        )
    }

    /// Real Gaussian pulse centred on `center` whose spectrum is `∝ e^{−Δ²/σ²}`.
    pub fn gaussian(sigma: f64, center: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("must be finite and positive, got {sigma}"),
            });
        }
        Ok(Self::analytic(
            EnvelopeShape::Gaussian { sigma, center },
            C64::new(1.0, 0.0),
        ))
    }

    pub fn analytic(shape: EnvelopeShape, phase: C64) -> Self {
        Self::Analytic(AnalyticEnvelope { shape, phase })
    }

    /// Envelope from samples. Times must be strictly increasing; the result is
    /// not required to be normalized (see [`TemporalEnvelope::check_normalized`]).
    pub fn from_samples(times: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidSamples(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidSamples("need at least two samples".into()));
        }
        if times.iter().any(|t| !t.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples("non-finite sample".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSamples(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(Self::Sampled(SampledEnvelope { times, values }))
    }

    /// Samples `f` on `times`.
    pub fn from_fn(times: Vec<f64>, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = times.iter().map(|&t| f(t)).collect();
        Self::from_samples(times, values)
    }

    /// The all-zero envelope (no photon).
    pub fn vacuum() -> Self {
        Self::Sampled(SampledEnvelope {
            times: vec![0.0, 1.0],
            values: vec![C64::new(0.0, 0.0); 2],
        })
    }

    pub fn value(&self, t: f64) -> C64 {
        match self {
            Self::Analytic(a) => a.phase * a.shape.value(t),
            Self::Sampled(s) => s.value(t),
        }
    }

    /// `∫|φ|² dt`: exact for analytic forms, trapezoid on the samples otherwise.
    pub fn norm_sq(&self) -> f64 {
        match self {
            Self::Analytic(a) => a.phase.norm_sqr(),
            Self::Sampled(s) => s.norm_sq(),
        }
    }

    pub fn is_vacuum(&self) -> bool {
        match self {
            Self::Analytic(a) => a.phase.norm_sqr() == 0.0,
            Self::Sampled(s) => s.values.iter().all(|v| v.norm_sqr() == 0.0),
        }
    }

    /// Accepts unit-norm envelopes and the vacuum; rejects everything else.
    pub fn check_normalized(&self) -> Result<()> {
        if self.is_vacuum() {
            return Ok(());
        }
        let norm = self.norm_sq();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized { norm });
        }
        Ok(())
    }

    /// Rescales a sampled envelope to unit trapezoid norm.
    pub fn normalized(self) -> Result<Self> {
        let norm = self.norm_sq();
        if !(norm > 0.0) {
            return Err(Error::Unnormalized { norm });
        }
        let scale = 1.0 / norm.sqrt();
        Ok(match self {
            Self::Analytic(mut a) => {
                a.phase *= scale;
                Self::Analytic(a)
            }
            Self::Sampled(mut s) => {
                s.values.iter_mut().for_each(|v| *v *= scale);
                Self::Sampled(s)
            }
        })
    }

    /// Same pulse arriving `by` later.
    pub fn shifted(&self, by: f64) -> Self {
        match self {
            Self::Analytic(a) => Self::Analytic(AnalyticEnvelope {
                shape: a.shape.shifted(by),
                phase: a.phase,
            }),
            Self::Sampled(s) => Self::Sampled(SampledEnvelope {
                times: s.times.iter().map(|t| t + by).collect(),
                values: s.values.clone(),
            }),
        }
    }

    /// Interval outside which the envelope is zero or negligible.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Analytic(a) => a.shape.support(),
            Self::Sampled(s) => (s.times[0], s.times[s.times.len() - 1]),
        }
    }

    /// Points where the envelope or its derivative may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Analytic(a) => a.shape.breakpoints(),
            Self::Sampled(s) => s.times.clone(),
        }
    }

    /// Piecewise-smooth sample segments for trapezoid quadrature. Analytic
    /// envelopes are sampled with a step no larger than `max_step`, with a
    /// sample on every breakpoint; segments never straddle a jump.
    pub(crate) fn quadrature_segments(&self, max_step: f64) -> Vec<(Vec<f64>, Vec<C64>)> {
        match self {
            Self::Sampled(s) => vec![(s.times.clone(), s.values.clone())],
            Self::Analytic(_) => {
                let (lo, hi) = self.support();
                let mut cuts: Vec<f64> = self
                    .breakpoints()
                    .into_iter()
                    .filter(|&b| b > lo && b < hi)
                    .collect();
                cuts.insert(0, lo);
                cuts.push(hi);
                cuts.windows(2)
                    .filter(|w| w[1] > w[0])
                    .map(|w| {
                        let (a, b) = (w[0], w[1]);
                        let n = ((b - a) / max_step).ceil().max(1.0) as usize;
                        let h = (b - a) / n as f64;
                        // evaluate just inside the segment so that the jump
                        // side of a breakpoint belongs to its own segment
                        let eps = 1e-12 * (b - a);
                        let times: Vec<f64> = (0..=n).map(|k| a + k as f64 * h).collect();
                        let values = times
                            .iter()
                            .map(|&t| self.value(t.clamp(a + eps, b - eps)))
                            .collect();
                        (times, values)
                    })
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid_norm(env: &TemporalEnvelope, h: f64) -> f64 {
        env.quadrature_segments(h)
            .iter()
            .map(|(t, v)| {
                t.windows(2)
                    .zip(v.windows(2))
                    .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].norm_sqr() + v[1].norm_sqr()))
                    .sum::<f64>()
            })
            .sum()
    }

    #[test]
    fn analytic_forms_are_normalized() {
        let atom = AtomParams::natural();
        for env in [
            TemporalEnvelope::time_reversed(&atom),
            TemporalEnvelope::reflected(&atom),
            TemporalEnvelope::truncated_time_reversed(&atom, 2.0).unwrap(),
            TemporalEnvelope::gaussian(1.46, 0.0).unwrap(),
            TemporalEnvelope::gaussian(0.3, 2.0).unwrap(),
        ] {
            assert_eq!(env.norm_sq(), 1.0);
            let num = trapezoid_norm(&env, 1e-4);
            assert!((num - 1.0).abs() < 1e-7, "{env:?}: {num}");
        }
    }

    #[test]
    fn step_convention_at_edges() {
        let atom = AtomParams::natural();
        let rising = TemporalEnvelope::time_reversed(&atom);
        assert_eq!(rising.value(0.0).re, 1.0);
        assert_eq!(rising.value(1e-9).re, 0.0);
        let refl = TemporalEnvelope::reflected(&atom);
        assert_eq!(refl.value(0.0).re, -1.0);
        assert_eq!(refl.value(-1e-9).re, 0.0);
        let trunc = TemporalEnvelope::truncated_time_reversed(&atom, 1.0).unwrap();
        assert!(trunc.value(-1.0).re > 0.0);
        assert_eq!(trunc.value(-1.0 - 1e-9).re, 0.0);
    }

    #[test]
    fn sampled_interpolation_and_norm() {
        let env = TemporalEnvelope::from_samples(
            vec![0.0, 1.0, 2.0],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(env.value(0.5).re, 0.5);
        assert_eq!(env.value(2.5).re, 0.0);
        assert_eq!(env.norm_sq(), 1.0);
        assert!(env.check_normalized().is_ok());
        let scaled = env.clone().normalized().unwrap();
        assert_eq!(scaled, env);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(TemporalEnvelope::from_samples(vec![0.0], vec![C64::new(1.0, 0.0)]).is_err());
        assert!(
            TemporalEnvelope::from_samples(vec![0.0, 0.0], vec![C64::new(1.0, 0.0); 2]).is_err()
        );
        let env =
            TemporalEnvelope::from_samples(vec![0.0, 1.0], vec![C64::new(2.0, 0.0); 2]).unwrap();
        assert!(matches!(
            env.check_normalized(),
            Err(Error::Unnormalized { .. })
        ));
        assert!(TemporalEnvelope::vacuum().check_normalized().is_ok());
    }

    #[test]
    fn shifting_moves_the_edge() {
        let atom = AtomParams::natural();
        let env = TemporalEnvelope::time_reversed(&atom).shifted(2.0);
        assert_eq!(env.breakpoints(), vec![2.0]);
        assert_eq!(env.value(2.0).re, 1.0);
    }
}
