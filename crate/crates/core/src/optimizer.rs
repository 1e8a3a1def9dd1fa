//! Derivative-free maximization of the peak excitation probability over
//! one- or few-parameter pulse families.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::f0_series;
use crate::atom::AtomParams;
use crate::envelope::TemporalEnvelope;
use crate::error::{Error, Result};
use crate::grid::ModeGrid;
use crate::propagator::{locate_peak, propagate, PropagatorConfig};
use crate::state::PhotonState;
use crate::transform::envelope_state;

/// Interaction window of the Gaussian family, relative to t₀ in units of 1/Γ.
pub const GAUSSIAN_WINDOW: (f64, f64) = (-6.0, 3.0);
/// Time the truncated-exponential family keeps integrating after t₀.
pub const TRUNCATION_TAIL: f64 = 2.0;
/// Sampling step of the analytic objective, in units of 1/Γ.
pub const ANALYTIC_STEP: f64 = 0.01;
/// Relative parameter tolerance of [`refine`].
pub const REFINE_TOLERANCE: f64 = 1e-3;

const MAX_GOLDEN_ITERATIONS: usize = 200;
const MAX_SIMPLEX_ITERATIONS: usize = 2000;
const INITIAL_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveMode {
    AnalyticQuadrature,
    NumericPropagation,
}

impl fmt::Display for ObjectiveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AnalyticQuadrature => "analytic-quadrature",
            Self::NumericPropagation => "numeric-propagation",
        })
    }
}

/// Pulse that the arrival-offset family slides in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasePulse {
    Ideal,
    Reflected,
    Gaussian { sigma: f64 },
}

impl BasePulse {
    fn envelope(&self, atom: &AtomParams) -> Result<TemporalEnvelope> {
        match *self {
            Self::Ideal => Ok(TemporalEnvelope::time_reversed(atom)),
            Self::Reflected => Ok(TemporalEnvelope::reflected(atom)),
            Self::Gaussian { sigma } => TemporalEnvelope::gaussian(sigma, atom.t0()),
        }
    }

    fn state(&self, grid: &Arc<ModeGrid>, atom: &AtomParams) -> Result<PhotonState> {
        match *self {
            Self::Ideal => PhotonState::ideal(grid, atom),
            Self::Reflected => PhotonState::reflected(grid, atom),
            Self::Gaussian { sigma } => PhotonState::gaussian(grid, atom, sigma),
        }
    }
}

type EnvelopeBuilder = dyn Fn(&[f64]) -> Result<TemporalEnvelope> + Send + Sync;

/// User-supplied family: parameters → normalized envelope, with a fixed
/// interaction window.
#[derive(Clone)]
pub struct CustomFamily {
    pub name: String,
    pub window: (f64, f64),
    pub builder: Arc<EnvelopeBuilder>,
}

impl fmt::Debug for CustomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFamily")
            .field("name", &self.name)
            .field("window", &self.window)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum FamilyKind {
    /// σ of a Gaussian centred on t₀, window [`GAUSSIAN_WINDOW`].
    GaussianWidth,
    /// Interaction time T of the ideal pulse: the atom is coupled from t₀ − T.
    TruncatedExponentialDuration,
    /// Delay τ of `base`, with the atom coupled on a fixed window.
    ArrivalOffset {
        base: BasePulse,
        window: (f64, f64),
    },
    Custom(CustomFamily),
}

impl FamilyKind {
    pub fn name(&self) -> &str {
        match self {
            Self::GaussianWidth => "gaussian-width",
            Self::TruncatedExponentialDuration => "truncated-exponential-duration",
            Self::ArrivalOffset { .. } => "arrival-offset",
            Self::Custom(c) => &c.name,
        }
    }
}

/// Parametrized pulse family with closed parameter bounds. Times are in the
/// units of `atom`; window offsets are relative to t₀.
#[derive(Debug, Clone)]
pub struct PulseFamily {
    kind: FamilyKind,
    bounds: Vec<(f64, f64)>,
    atom: AtomParams,
}

impl PulseFamily {
    pub fn new(kind: FamilyKind, bounds: Vec<(f64, f64)>, atom: AtomParams) -> Result<Self> {
        let expected = match &kind {
            FamilyKind::Custom(_) => None,
            _ => Some(1),
        };
        if bounds.is_empty() || expected.is_some_and(|n| n != bounds.len()) {
            return Err(Error::InvalidParameter {
                name: "bounds",
                reason: format!(
                    "{} takes {} parameter(s), got {}",
                    kind.name(),
                    expected.unwrap_or(1),
                    bounds.len()
                ),
            });
        }
        for &(lo, hi) in &bounds {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidParameter {
                    name: "bounds",
                    reason: format!("[{lo}, {hi}] is not a finite closed interval"),
                });
            }
        }
        let window = match &kind {
            FamilyKind::ArrivalOffset { window, .. } => Some(*window),
            FamilyKind::Custom(c) => Some(c.window),
            _ => None,
        };
        if let Some((a, b)) = window {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::InvalidParameter {
                    name: "window",
                    reason: format!("[{a}, {b}] is empty"),
                });
            }
        }
        Ok(Self { kind, bounds, atom })
    }

    pub fn gaussian_width(atom: AtomParams, bounds: (f64, f64)) -> Result<Self> {
        Self::new(FamilyKind::GaussianWidth, vec![bounds], atom)
    }

    pub fn truncated_exponential(atom: AtomParams, bounds: (f64, f64)) -> Result<Self> {
        Self::new(FamilyKind::TruncatedExponentialDuration, vec![bounds], atom)
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn atom(&self) -> &AtomParams {
        &self.atom
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn contains(&self, param: &[f64]) -> bool {
        param.len() == self.dim()
            && param
                .iter()
                .zip(&self.bounds)
                .all(|(x, &(lo, hi))| (lo..=hi).contains(x))
    }

    /// Absolute interaction window `[t_in, t_end]` for `param`.
    pub fn window(&self, param: &[f64]) -> (f64, f64) {
        let (t0, tau) = (self.atom.t0(), self.atom.lifetime());
        match &self.kind {
            FamilyKind::GaussianWidth => {
                (t0 + GAUSSIAN_WINDOW.0 * tau, t0 + GAUSSIAN_WINDOW.1 * tau)
            }
            FamilyKind::TruncatedExponentialDuration => (t0 - param[0], t0 + TRUNCATION_TAIL * tau),
            FamilyKind::ArrivalOffset { window, .. } => (t0 + window.0, t0 + window.1),
            FamilyKind::Custom(c) => (t0 + c.window.0, t0 + c.window.1),
        }
    }

    /// Incoming pulse for `param`.
    pub fn envelope(&self, param: &[f64]) -> Result<TemporalEnvelope> {
        match &self.kind {
            FamilyKind::GaussianWidth => TemporalEnvelope::gaussian(param[0], self.atom.t0()),
            FamilyKind::TruncatedExponentialDuration => {
                Ok(TemporalEnvelope::time_reversed(&self.atom))
            }
            FamilyKind::ArrivalOffset { base, .. } => {
                Ok(base.envelope(&self.atom)?.shifted(param[0]))
            }
            FamilyKind::Custom(c) => (c.builder)(param),
        }
    }

    /// Incoming pulse for `param` as a state on `grid`.
    pub fn state(&self, param: &[f64], grid: &Arc<ModeGrid>) -> Result<PhotonState> {
        let atom = &self.atom;
        match &self.kind {
            FamilyKind::GaussianWidth => PhotonState::gaussian(grid, atom, param[0]),
            FamilyKind::TruncatedExponentialDuration => PhotonState::ideal(grid, atom),
            FamilyKind::ArrivalOffset { base, .. } => {
                let base = base.state(grid, atom)?;
                let shift = param[0];
                let modes = base
                    .mode_amps()
                    .iter()
                    .zip(grid.detunings())
                    .map(|(c, &d)| c * C64::from_polar(1.0, -d * shift))
                    .collect();
                PhotonState::from_amplitudes(grid, modes, base.atom_amp(), base.label().clone())
            }
            FamilyKind::Custom(_) => envelope_state(grid, &self.envelope(param)?, atom),
        }
    }
}

/// How a parameter is turned into a peak probability.
#[derive(Debug, Clone)]
pub struct Objective {
    mode: ObjectiveMode,
    grid: Option<Arc<ModeGrid>>,
    step: f64,
    stride: usize,
}

impl Objective {
    /// Exact convolution sampled every 0.01/Γ.
    pub fn analytic(atom: &AtomParams) -> Self {
        Self {
            mode: ObjectiveMode::AnalyticQuadrature,
            grid: None,
            step: ANALYTIC_STEP * atom.lifetime(),
            stride: 1,
        }
    }

    /// Full propagation on `grid` with the default propagator step.
    pub fn numeric(grid: Arc<ModeGrid>, atom: &AtomParams) -> Self {
        let cfg = PropagatorConfig::new(atom, 0.0, 1.0);
        Self {
            mode: ObjectiveMode::NumericPropagation,
            grid: Some(grid),
            step: cfg.dt,
            stride: cfg.sample_stride,
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn mode(&self) -> ObjectiveMode {
        self.mode
    }

    /// Peak probability and its time for one parameter.
    pub fn evaluate(&self, family: &PulseFamily, param: &[f64]) -> Result<Evaluation> {
        if !family.contains(param) {
            return Err(Error::OutOfBounds {
                value: param.to_vec(),
                bounds: family.bounds.clone(),
            });
        }
        let atom = family.atom();
        let (t_in, t_end) = family.window(param);
        // whole steps from t_in, reaching at least t_end
        let n_steps = (((t_end - t_in) / self.step) - 1e-9).ceil().max(1.0) as usize;
        let (t_max, value) = match &self.grid {
            None => {
                let env = family.envelope(param)?;
                let times: Vec<f64> = (0..=n_steps).map(|k| t_in + k as f64 * self.step).collect();
                let f0 = f0_series(&env, &times, t_in, atom)?;
                let prob: Vec<f64> = f0.iter().map(|f| f.norm_sqr()).collect();
                locate_peak(&times, &prob)?
            }
            Some(grid) => {
                let state = family.state(param, grid)?;
                let cfg = PropagatorConfig {
                    dt: self.step,
                    t_start: t_in,
                    t_end: t_in + n_steps as f64 * self.step,
                    sample_stride: self.stride,
                    method: crate::propagator::Method::Rk4,
                };
                let traj = propagate(&state, atom, &cfg)?;
                locate_peak(&traj.times, &traj.prob)?
            }
        };
        Ok(Evaluation {
            param: param.to_vec(),
            value,
            t_max,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub param: Vec<f64>,
    pub value: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub param: Vec<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub family: String,
    pub objective_mode: ObjectiveMode,
    pub best_param: Vec<f64>,
    pub best_value: f64,
    pub best_time: f64,
    pub evaluations: Vec<Evaluation>,
    pub failures: Vec<Failure>,
}

impl OptimizationResult {
    fn from_log(
        family: &PulseFamily,
        mode: ObjectiveMode,
        log: Vec<Result<Evaluation, Failure>>,
    ) -> Result<Self> {
        let attempted = log.len();
        let (mut evaluations, mut failures) = (Vec::new(), Vec::new());
        for entry in log {
            match entry {
                Ok(e) => evaluations.push(e),
                Err(f) => failures.push(f),
            }
        }
        let mut best: Option<&Evaluation> = None;
        for e in &evaluations {
            if best.is_none_or(|b| e.value > b.value) {
                best = Some(e);
            }
        }
        let best = best.cloned().ok_or(Error::AllPointsFailed(attempted))?;
        Ok(Self {
            family: family.kind().name().to_owned(),
            objective_mode: mode,
            best_param: best.param,
            best_value: best.value,
            best_time: best.t_max,
            evaluations,
            failures,
        })
    }

    /// Concatenated logs of two runs on the same family; the best entry is
    /// recomputed with earlier entries winning ties.
    pub fn merged(self, later: OptimizationResult) -> OptimizationResult {
        let mut out = self;
        if later.best_value > out.best_value {
            out.best_param = later.best_param;
            out.best_value = later.best_value;
            out.best_time = later.best_time;
        }
        out.evaluations.extend(later.evaluations);
        out.failures.extend(later.failures);
        out
    }
}

fn attempt(
    objective: &Objective,
    family: &PulseFamily,
    param: &[f64],
) -> Result<Evaluation, Failure> {
    objective.evaluate(family, param).map_err(|e| Failure {
        param: param.to_vec(),
        reason: e.to_string(),
    })
}

/// Uniform grid of `n_points` per axis (tensor product in several
/// dimensions). Points are evaluated in parallel; the log is in grid order.
pub fn scan(
    family: &PulseFamily,
    n_points: usize,
    objective: &Objective,
) -> Result<OptimizationResult> {
    if n_points < 3 {
        return Err(Error::InvalidParameter {
            name: "n_points",
            reason: format!("need at least 3, got {n_points}"),
        });
    }
    let axes: Vec<Vec<f64>> = family
        .bounds()
        .iter()
        .map(|&(lo, hi)| {
            (0..n_points)
                .map(|k| {
                    if k + 1 == n_points {
                        hi
                    } else {
                        lo + (hi - lo) * k as f64 / (n_points - 1) as f64
                    }
                })
                .collect()
        })
        .collect();
    let total = n_points.pow(family.dim() as u32);
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut idx| {
            let mut p = vec![0.0; family.dim()];
            for (d, axis) in axes.iter().enumerate().rev() {
                p[d] = axis[idx % n_points];
                idx /= n_points;
            }
            p
        })
        .collect();
    let log: Vec<_> = points
        .par_iter()
        .map(|p| attempt(objective, family, p))
        .collect();
    OptimizationResult::from_log(family, objective.mode(), log)
}

/// Local maximization from `seed`: golden-section search in one dimension,
/// Nelder–Mead otherwise, to a parameter tolerance of 1e-3 of the bound
/// width. The seed itself is evaluated first, so the result never falls
/// below it.
pub fn refine(
    family: &PulseFamily,
    seed: &[f64],
    objective: &Objective,
) -> Result<OptimizationResult> {
    if !family.contains(seed) {
        return Err(Error::OutOfBounds {
            value: seed.to_vec(),
            bounds: family.bounds().to_vec(),
        });
    }
    let mut search = Search {
        family,
        objective,
        log: Vec::new(),
    };
    if family.dim() == 1 {
        search.golden(seed[0]);
    } else {
        search.simplex(seed);
    }
    OptimizationResult::from_log(family, objective.mode(), search.log)
}

/// [`scan`] followed by [`refine`] from the scan's best point, with both
/// logs concatenated.
pub fn optimize(
    family: &PulseFamily,
    n_points: usize,
    objective: &Objective,
) -> Result<OptimizationResult> {
    let coarse = scan(family, n_points, objective)?;
    let fine = refine(family, &coarse.best_param.clone(), objective)?;
    Ok(coarse.merged(fine))
}

struct Search<'a> {
    family: &'a PulseFamily,
    objective: &'a Objective,
    log: Vec<Result<Evaluation, Failure>>,
}

impl Search<'_> {
    /// Objective value; failures count as −∞.
    fn eval(&mut self, param: &[f64]) -> f64 {
        let entry = attempt(self.objective, self.family, param);
        let v = entry.as_ref().map_or(f64::NEG_INFINITY, |e| e.value);
        self.log.push(entry);
        v
    }

    fn golden(&mut self, seed: f64) {
        let (lo, hi) = self.family.bounds()[0];
        let width = hi - lo;
        let f_seed = self.eval(&[seed]);
        if width == 0.0 {
            return;
        }

        // walk uphill with doubling steps until the objective drops
        let mut step = INITIAL_STEP * width;
        let up = (seed + step).min(hi);
        let down = (seed - step).max(lo);
        let f_up = if up > seed {
            self.eval(&[up])
        } else {
            f64::NEG_INFINITY
        };
        let (dir, mut b, mut fb) = if f_up > f_seed {
            (1.0, up, f_up)
        } else {
            let f_down = if down < seed {
                self.eval(&[down])
            } else {
                f64::NEG_INFINITY
            };
            if !(f_down > f_seed) {
                self.section(down, up);
                return;
            }
            (-1.0, down, f_down)
        };
        let mut behind = seed;
        let ahead = loop {
            step *= 2.0;
            let next = (b + dir * step).clamp(lo, hi);
            if next == b {
                break b;
            }
            let f_next = self.eval(&[next]);
            if f_next > fb {
                (behind, b, fb) = (b, next, f_next);
            } else {
                break next;
            }
        };
        if dir > 0.0 {
            self.section(behind, ahead);
        } else {
            self.section(ahead, behind);
        }
    }

    /// Golden-section search on `[a, c]` down to the refine tolerance.
    fn section(&mut self, mut a: f64, mut c: f64) {
        let (lo, hi) = self.family.bounds()[0];
        let tol = REFINE_TOLERANCE * (hi - lo);
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = c - inv_phi * (c - a);
        let mut x2 = a + inv_phi * (c - a);
        let mut f1 = self.eval(&[x1]);
        let mut f2 = self.eval(&[x2]);
        for _ in 0..MAX_GOLDEN_ITERATIONS {
            if c - a <= tol {
                break;
            }
            if f1 >= f2 {
                c = x2;
                (x2, f2) = (x1, f1);
                x1 = c - inv_phi * (c - a);
                f1 = self.eval(&[x1]);
            } else {
                a = x1;
                (x1, f1) = (x2, f2);
                x2 = a + inv_phi * (c - a);
                f2 = self.eval(&[x2]);
            }
        }
        self.eval(&[0.5 * (a + c)]);
    }

    fn simplex(&mut self, seed: &[f64]) {
        let bounds = self.family.bounds().to_vec();
        let d = seed.len();
        let clamp = |p: &mut Vec<f64>| {
            for (x, &(lo, hi)) in p.iter_mut().zip(&bounds) {
                *x = x.clamp(lo, hi);
            }
        };
        let mut pts: Vec<Vec<f64>> = vec![seed.to_vec()];
        for i in 0..d {
            let (lo, hi) = bounds[i];
            let step = INITIAL_STEP * (hi - lo);
            let mut p = seed.to_vec();
            p[i] = if p[i] + step <= hi {
                p[i] + step
            } else {
                p[i] - step
            };
            clamp(&mut p);
            pts.push(p);
        }
        let mut vals: Vec<f64> = pts.clone().iter().map(|p| self.eval(p)).collect();

        for _ in 0..MAX_SIMPLEX_ITERATIONS {
            // order best (largest) first; stable so ties keep insertion order
            let mut order: Vec<usize> = (0..=d).collect();
            order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]));
            pts = order.iter().map(|&i| pts[i].clone()).collect();
            vals = order.iter().map(|&i| vals[i]).collect();

            let converged = (0..d).all(|k| {
                let (lo, hi) = bounds[k];
                let spread = pts
                    .iter()
                    .map(|p| (p[k] - pts[0][k]).abs())
                    .fold(0.0, f64::max);
                spread <= REFINE_TOLERANCE * (hi - lo)
            });
            if converged {
                break;
            }

            let centroid: Vec<f64> = (0..d)
                .map(|k| pts[..d].iter().map(|p| p[k]).sum::<f64>() / d as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                let mut p: Vec<f64> = (0..d)
                    .map(|k| centroid[k] + t * (pts[d][k] - centroid[k]))
                    .collect();
                clamp(&mut p);
                p
            };
            let reflected = along(-1.0);
            let fr = self.eval(&reflected);
            if fr > vals[0] {
                let expanded = along(-2.0);
                let fe = self.eval(&expanded);
                if fe > fr {
                    (pts[d], vals[d]) = (expanded, fe);
                } else {
                    (pts[d], vals[d]) = (reflected, fr);
                }
            } else if fr > vals[d - 1] {
                (pts[d], vals[d]) = (reflected, fr);
            } else {
                let contracted = if fr > vals[d] {
                    along(-0.5)
                } else {
                    along(0.5)
                };
                let fc = self.eval(&contracted);
                if fc > vals[d].max(fr) {
                    (pts[d], vals[d]) = (contracted, fc);
                } else {
                    for i in 1..=d {
                        let mut p: Vec<f64> =
                            (0..d).map(|k| 0.5 * (pts[0][k] + pts[i][k])).collect();
                        clamp(&mut p);
                        vals[i] = self.eval(&p);
                        pts[i] = p;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::truncated_excitation_prob;

    fn atom() -> AtomParams {
        AtomParams::natural()
    }

    #[test]
    fn gaussian_scan_and_refine() {
        let family = PulseFamily::gaussian_width(atom(), (0.2, 5.0)).unwrap();
        let obj = Objective::analytic(&atom());
        let coarse = scan(&family, 97, &obj).unwrap();
        assert_eq!(coarse.evaluations.len(), 97);
        assert!(
            (coarse.best_param[0] - 1.46).abs() < 0.05,
            "{:?}",
            coarse.best_param
        );
        assert!((coarse.best_value - 0.80).abs() < 0.01);

        let fine = refine(&family, &[1.0], &obj).unwrap();
        assert!(
            (fine.best_param[0] - 1.4625).abs() < 0.01,
            "{:?}",
            fine.best_param
        );
        assert!(
            (fine.best_value - 0.800982).abs() < 1e-4,
            "{}",
            fine.best_value
        );
        assert!((fine.best_time - 1.0).abs() < 0.05, "{}", fine.best_time);

        let again = refine(&family, &coarse.best_param, &obj).unwrap();
        assert!(again.best_value >= coarse.best_value - 1e-12);
    }

    #[test]
    fn gaussian_curve_is_unimodal() {
        let family = PulseFamily::gaussian_width(atom(), (0.2, 5.0)).unwrap();
        let res = scan(&family, 97, &Objective::analytic(&atom())).unwrap();
        let v: Vec<f64> = res.evaluations.iter().map(|e| e.value).collect();
        let interior_maxima = (1..v.len() - 1)
            .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
            .count();
        assert_eq!(interior_maxima, 1);
    }

    #[test]
    fn truncation_curve_matches_closed_form() {
        let family = PulseFamily::truncated_exponential(atom(), (0.0, 8.0)).unwrap();
        let res = scan(&family, 33, &Objective::analytic(&atom())).unwrap();
        for e in &res.evaluations {
            let expected = truncated_excitation_prob(e.param[0]).unwrap();
            assert!((e.value - expected).abs() < 5e-3, "{:?} vs {expected}", e);
        }
        let up = refine(&family, &[4.0], &Objective::analytic(&atom())).unwrap();
        assert_eq!(up.best_param, vec![8.0]);
    }

    #[test]
    fn constant_family_returns_first_point() {
        let custom = CustomFamily {
            name: "constant".into(),
            window: (-6.0, 3.0),
            builder: Arc::new(|_| TemporalEnvelope::gaussian(1.46, 0.0)),
        };
        let family =
            PulseFamily::new(FamilyKind::Custom(custom), vec![(0.0, 1.0)], atom()).unwrap();
        let res = scan(&family, 3, &Objective::analytic(&atom())).unwrap();
        let v: Vec<f64> = res.evaluations.iter().map(|e| e.value).collect();
        assert!(v.iter().all(|&x| x == v[0]));
        assert_eq!(res.best_param, vec![0.0]);
    }

    #[test]
    fn simplex_finds_two_parameter_optimum() {
        // width and centre of a Gaussian; the centre only matters through the window
        let custom = CustomFamily {
            name: "gaussian-width-centre".into(),
            window: (-6.0, 3.0),
            builder: Arc::new(|p: &[f64]| TemporalEnvelope::gaussian(p[0], p[1])),
        };
        let family = PulseFamily::new(
            FamilyKind::Custom(custom),
            vec![(0.5, 3.0), (-1.0, 1.0)],
            atom(),
        )
        .unwrap();
        let res = refine(&family, &[1.0, 0.5], &Objective::analytic(&atom())).unwrap();
        assert!(
            (res.best_param[0] - 1.4625).abs() < 0.02,
            "{:?}",
            res.best_param
        );
        assert!((res.best_value - 0.800982).abs() < 1e-3);
    }

    #[test]
    fn rejections() {
        let a = atom();
        assert!(PulseFamily::gaussian_width(a, (2.0, 1.0)).is_err());
        assert!(PulseFamily::gaussian_width(a, (0.0, f64::INFINITY)).is_err());
        let family = PulseFamily::gaussian_width(a, (0.2, 5.0)).unwrap();
        let obj = Objective::analytic(&a);
        assert!(matches!(
            scan(&family, 2, &obj),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            refine(&family, &[6.0], &obj),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn failing_points_are_recorded() {
        // σ = 0 is not a valid width
        let family = PulseFamily::gaussian_width(atom(), (0.0, 2.0)).unwrap();
        let res = scan(&family, 5, &Objective::analytic(&atom())).unwrap();
        assert_eq!(res.failures.len(), 1);
        assert_eq!(res.evaluations.len(), 4);
        let bad = PulseFamily::gaussian_width(atom(), (0.0, 0.0)).unwrap();
        assert!(matches!(
            scan(&bad, 3, &Objective::analytic(&atom())),
            Err(Error::AllPointsFailed(3))
        ));
    }
}
