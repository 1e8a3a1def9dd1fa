//! Fixed-step integration of the coupled amplitude equations
//!
//! ```text
//! ḟ₀  = −i g Σ_l c_l e^{ iΔ_l(t−t₀)}
//! ċ_l = −i g f₀      e^{−iΔ_l(t−t₀)}
//! ```
//!
//! on a [`ModeGrid`]. Every stage derivative of the mode vector is a scalar
//! times `e^{−iΔ_l(t−t₀)}`, so a classical RK4 step collapses to three phased
//! sums over the modes plus a single update pass. The result is the same
//! scheme as textbook RK4, evaluated in a fixed (pairwise) summation order.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::grid::ModeGrid;
use crate::state::{PhotonState, StateLabel};
use crate::sum;

/// Default step in units of 1/Γ.
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_SAMPLE_STRIDE: usize = 10;
/// Integration aborts once |norm − norm(t_start)| exceeds this.
pub const NORM_ABORT: f64 = 1e-4;

/// Phases are recomputed exactly every this many steps and advanced by
/// multiplication in between.
const PHASE_REFRESH: usize = 64;
const BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta.
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorConfig {
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub sample_stride: usize,
    pub method: Method,
}

impl PropagatorConfig {
    /// Window `[t_start, t_end]` with `dt = 0.001/Γ` and stride 10.
    pub fn new(atom: &AtomParams, t_start: f64, t_end: f64) -> Self {
        Self {
            dt: DEFAULT_DT / atom.gamma(),
            t_start,
            t_end,
            sample_stride: DEFAULT_SAMPLE_STRIDE,
            method: Method::Rk4,
        }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride;
        self
    }

    /// Largest admissible step, `min(0.01/Γ, (π/2)/(W/2))`.
    pub fn max_dt(grid: &ModeGrid) -> f64 {
        (0.01 / grid.gamma()).min(0.5 * PI / grid.max_detuning())
    }

    /// Checks the step bound and the recurrence guard; returns the step count.
    pub fn validate(&self, grid: &ModeGrid) -> Result<usize> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        let max_dt = Self::max_dt(grid);
        if self.dt > max_dt * (1.0 + 1e-12) {
            return bad(format!(
                "dt = {} exceeds min(0.01/Γ, (π/2)/W_max) = {max_dt}",
                self.dt
            ));
        }
        if !(self.t_start.is_finite() && self.t_end.is_finite() && self.t_end > self.t_start) {
            return bad(format!("empty window [{}, {}]", self.t_start, self.t_end));
        }
        let span = self.t_end - self.t_start;
        let guard = 0.5 * grid.recurrence_time();
        if span >= guard {
            return bad(format!(
                "window length {span} reaches the recurrence guard (2π/δω)/2 = {guard}"
            ));
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be at least 1".into());
        }
        let steps = (span / self.dt).round();
        if (steps * self.dt - span).abs() > 1e-9 * span {
            return bad(format!(
                "window length {span} is not a multiple of dt = {}",
                self.dt
            ));
        }
        Ok(steps as usize)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub label: StateLabel,
    pub n_modes: usize,
    pub bandwidth: f64,
    pub spacing: f64,
    pub config: PropagatorConfig,
}

/// Sampled evolution of the atomic amplitude. The full mode vector is kept
/// only at `t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub f0: Vec<C64>,
    pub prob: Vec<f64>,
    pub norm: Vec<f64>,
    pub final_modes: Vec<C64>,
    pub final_atom_amp: C64,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest |norm(t) − norm(t_start)| over the samples.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.norm.first().copied().unwrap_or(0.0);
        self.norm.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max)
    }

    /// Final state as a [`PhotonState`] on the same grid, renormalized.
    pub fn final_state(&self, grid: &Arc<ModeGrid>) -> Result<PhotonState> {
        PhotonState::from_amplitudes(
            grid,
            self.final_modes.clone(),
            self.final_atom_amp,
            self.meta.label.clone(),
        )
    }
}

/// Integrates `state` over the configured window.
pub fn propagate(
    state: &PhotonState,
    atom: &AtomParams,
    cfg: &PropagatorConfig,
) -> Result<Trajectory> {
    let grid = state.grid();
    grid.check_atom(atom)?;
    let n_steps = cfg.validate(grid)?;
    let Method::Rk4 = cfg.method;

    let det = grid.detunings();
    let n = det.len();
    let g = grid.coupling();
    let h = cfg.dt;
    let t0 = atom.t0();
    let minus_ig = C64::new(0.0, -g);

    let half_rot: Vec<C64> = det
        .iter()
        .map(|&d| C64::from_polar(1.0, 0.5 * d * h))
        .collect();
    // Σ_l e^{iΔ_l h/2}
    let d1 = sum::pairwise(&half_rot);
    let n_f = n as f64;

    let mut c = state.mode_amps().to_vec();
    let mut f = state.atom_amp();
    let mut phase = vec![C64::new(0.0, 0.0); n];
    let n_blocks = n.div_ceil(BLOCK);
    let mut partial = vec![[C64::new(0.0, 0.0); 3]; n_blocks];

    let capacity = n_steps / cfg.sample_stride + 2;
    let mut out = Trajectory {
        times: Vec::with_capacity(capacity),
        f0: Vec::with_capacity(capacity),
        prob: Vec::with_capacity(capacity),
        norm: Vec::with_capacity(capacity),
        final_modes: Vec::new(),
        final_atom_amp: C64::new(0.0, 0.0),
        meta: TrajectoryMeta {
            label: state.label().clone(),
            n_modes: n,
            bandwidth: grid.bandwidth(),
            spacing: grid.spacing(),
            config: *cfg,
        },
    };
    let norm0 = f.norm_sqr() + sum::norm_sqr(&c);
    let mut record = |k: usize, f: C64, c: &[C64]| -> Result<()> {
        let t = cfg.t_start + k as f64 * h;
        let norm = f.norm_sqr() + sum::norm_sqr(c);
        let drift = (norm - norm0).abs();
        if drift > NORM_ABORT {
            return Err(Error::NormDrift {
                t,
                drift,
                limit: NORM_ABORT,
            });
        }
        out.times.push(t);
        out.f0.push(f);
        out.prob.push(f.norm_sqr());
        out.norm.push(norm);
        Ok(())
    };
    record(0, f, &c)?;

    for k in 0..n_steps {
        if k % PHASE_REFRESH == 0 {
            let tau = cfg.t_start + k as f64 * h - t0;
            for (p, &d) in phase.iter_mut().zip(det) {
                *p = C64::from_polar(1.0, d * tau);
            }
        }

        // S(t), S(t + h/2), S(t + h) of the current mode vector
        for (b, acc) in partial.iter_mut().enumerate() {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n);
            let mut s = [C64::new(0.0, 0.0); 3];
            for l in lo..hi {
                let p = phase[l];
                let ph = p * half_rot[l];
                let pf = ph * half_rot[l];
                let cl = c[l];
                s[0] += cl * p;
                s[1] += cl * ph;
                s[2] += cl * pf;
            }
            *acc = s;
        }
        let s0 = tree_sum(&partial, 0);
        let s_half = tree_sum(&partial, 1);
        let s_full = tree_sum(&partial, 2);

        let k1 = minus_ig * s0;
        let a1 = minus_ig * f;
        let f2 = f + k1 * (0.5 * h);
        let k2 = minus_ig * (s_half + a1 * d1 * (0.5 * h));
        let a2 = minus_ig * f2;
        let f3 = f + k2 * (0.5 * h);
        let k3 = minus_ig * (s_half + a2 * (0.5 * h * n_f));
        let a3 = minus_ig * f3;
        let f4 = f + k3 * h;
        let k4 = minus_ig * (s_full + a3 * d1 * h);
        let a4 = minus_ig * f4;

        f += (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        let w1 = a1 * (h / 6.0);
        let w23 = (a2 + a3) * (h / 3.0);
        let w4 = a4 * (h / 6.0);
        for l in 0..n {
            let p = phase[l];
            let ph = p * half_rot[l];
            let pf = ph * half_rot[l];
            c[l] += w1 * p.conj() + w23 * ph.conj() + w4 * pf.conj();
            phase[l] = pf;
        }

        let step = k + 1;
        if step % cfg.sample_stride == 0 || step == n_steps {
            record(step, f, &c)?;
        }
    }

    out.final_modes = c;
    out.final_atom_amp = f;
    Ok(out)
}

fn tree_sum(partial: &[[C64; 3]], j: usize) -> C64 {
    fn go(xs: &[[C64; 3]], j: usize) -> C64 {
        match xs.len() {
            0 => C64::new(0.0, 0.0),
            1 => xs[0][j],
            len => go(&xs[..len / 2], j) + go(&xs[len / 2..], j),
        }
    }
    go(partial, j)
}

/// Global maximum of `values` with parabolic refinement through the three
/// samples around the discrete argmax. Ties go to the earliest sample; a
/// maximum on the boundary is returned as sampled.
pub fn locate_peak(times: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if times.is_empty() || times.len() != values.len() {
        return Err(Error::EmptyTrajectory);
    }
    let mut k = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[k] {
            k = i;
        }
    }
    if k == 0 || k + 1 == values.len() {
        return Ok((times[k], values[k]));
    }
    let (x0, x1, x2) = (times[k - 1], times[k], times[k + 1]);
    let (y0, y1, y2) = (values[k - 1], values[k], values[k + 1]);
    // vertex of the interpolating parabola
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    if !(curvature < 0.0) {
        return Ok((x1, y1));
    }
    let slope_at_x1 = d01 + curvature * (x1 - x0);
    let offset = -slope_at_x1 / (2.0 * curvature);
    let t_peak = (x1 + offset).clamp(x0, x2);
    let dt = t_peak - x1;
    let p_peak = y1 + slope_at_x1 * dt + curvature * dt * dt;
    Ok((t_peak, p_peak.max(y1)))
}

/// Peak excitation `(t_max, p_max)` of a trajectory.
pub fn max_excitation(traj: &Trajectory) -> Result<(f64, f64)> {
    locate_peak(&traj.times, &traj.prob)
}
