//! Scenario execution. Each scenario yields its artifacts in memory; writing
//! them is left to the caller so every file has exactly one producer.

use std::sync::Arc;

use serde::Serialize;
use wavepacket_core::analytic::{far_field_variance, FarFieldPoint, VarianceScale};
use wavepacket_core::optimizer::{
    self, BasePulse, FamilyKind, Objective, OptimizationResult, PulseFamily,
};
use wavepacket_core::propagator::{max_excitation, propagate, PropagatorConfig, Trajectory};
use wavepacket_core::transform::{envelope_state, temporal_profile};
use wavepacket_core::{AtomParams, ModeGrid, PhotonState, StateLabel, TemporalEnvelope};

use crate::config::{self, Config, FamilySpec, ObjectiveSpec, OutputKind, PulseSpec, Scenario};
use crate::error::{CliError, CliResult};
use crate::output::{sha256_hex, Csv, Scale, GENERATOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every declared output.
    Run,
    /// Only the optimization of scenarios that configure one.
    Optimize,
}

#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub source_name: String,
    pub config: Config,
    pub hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub name: String,
    pub artifacts: Vec<Artifact>,
    pub summary: Vec<String>,
    pub warnings: Vec<String>,
}

/// Parses a config and checks every physics invariant that can be checked
/// without running anything.
pub fn load(source_name: &str, text: &str) -> CliResult<LoadedConfig> {
    let config = config::parse(text, source_name)?;
    let loaded = LoadedConfig {
        source_name: source_name.to_owned(),
        hash: sha256_hex(text.as_bytes()),
        config,
    };
    for i in 0..loaded.config.scenarios.len() {
        Prepared::new(&loaded, i)?;
    }
    Ok(loaded)
}

/// Whether `mode` has anything to do for the scenario.
pub fn selects(scenario: &Scenario, mode: Mode) -> bool {
    match mode {
        Mode::Run => !scenario.outputs.is_empty(),
        Mode::Optimize => scenario.optimization.is_some(),
    }
}

struct Prepared<'a> {
    loaded: &'a LoadedConfig,
    index: usize,
    scenario: &'a Scenario,
    atom: AtomParams,
    grid: Arc<ModeGrid>,
    propagator: Option<PropagatorConfig>,
}

impl<'a> Prepared<'a> {
    fn new(loaded: &'a LoadedConfig, index: usize) -> CliResult<Self> {
        let cfg = &loaded.config;
        let scenario = &cfg.scenarios[index];
        let physics = |field: &str, e: &dyn std::fmt::Display| CliError::Physics {
            source_name: loaded.source_name.clone(),
            path: format!(
                "scenario[{index}]{}{field}",
                if field.is_empty() { "" } else { "." }
            ),
            message: e.to_string(),
        };
        let mut atom = AtomParams::natural();
        if let Some(w0) = cfg.atom.omega0 {
            atom = atom.with_omega0(w0).map_err(|e| CliError::Physics {
                source_name: loaded.source_name.clone(),
                path: "atom.omega0".into(),
                message: e.to_string(),
            })?;
        }
        let g = scenario.grid(&cfg.grid);
        let grid =
            ModeGrid::new(&atom, g.bandwidth_factor, g.n_modes).map_err(|e| physics("grid", &e))?;
        let propagates =
            scenario.wants(OutputKind::Trajectory) || scenario.wants(OutputKind::Spectrum);
        let propagator = match scenario.window {
            Some(w) if propagates => {
                let p = scenario.propagator(&cfg.propagator);
                let pc = PropagatorConfig::new(&atom, w.t_start, w.t_end)
                    .with_dt(p.dt)
                    .with_stride(p.sample_stride);
                pc.validate(&grid).map_err(|e| physics("propagator", &e))?;
                Some(pc)
            }
            _ => None,
        };
        if let Some(v) = &scenario.variance {
            if atom.omega0().is_none() {
                return Err(physics("variance", &"far-field variance needs atom.omega0"));
            }
            for &theta in &v.thetas {
                let p = FarFieldPoint::new(v.r, theta, v.e_dot_etheta, 0.0)
                    .map_err(|e| physics("variance", &e))?;
                far_field_variance(&p, &atom, VarianceScale::Normalized)
                    .map_err(|e| physics("variance.r", &e))?;
            }
        }
        if let Some(o) = &scenario.optimization {
            family(o, &atom).map_err(|e| physics("optimization", &e))?;
        }
        Ok(Self {
            loaded,
            index,
            scenario,
            atom,
            grid: Arc::new(grid),
            propagator,
        })
    }

    fn physics(&self, message: impl std::fmt::Display) -> CliError {
        CliError::Physics {
            source_name: self.loaded.source_name.clone(),
            path: format!("scenario[{}] `{}`", self.index, self.scenario.name),
            message: message.to_string(),
        }
    }
}

/// Runs scenario `index` of `loaded`. With `strict`, warnings are errors.
pub fn execute(
    loaded: &LoadedConfig,
    index: usize,
    mode: Mode,
    strict: bool,
) -> CliResult<Outcome> {
    let prep = Prepared::new(loaded, index)?;
    let sc = prep.scenario;
    let scale = Scale::from_units(loaded.config.units);
    let csv = |columns: &[&str]| Csv::new(&loaded.hash, &sc.name, &scale, columns);
    let mut out = Outcome {
        name: sc.name.clone(),
        ..Outcome::default()
    };
    if !prep.atom.rotating_wave_valid() && prep.atom.omega0().is_some() {
        out.warnings.push(format!(
            "Γ/ω₀ = {} is not small; the rotating-wave model is questionable",
            prep.atom.gamma() / prep.atom.omega0().unwrap_or(f64::NAN)
        ));
    }
    let file = |kind: &str, ext: &str| format!("{}.{kind}.{ext}", sc.name);

    if mode == Mode::Run {
        let state = match sc.pulse {
            Some(p)
                if sc.outputs.iter().any(|o| {
                    matches!(
                        o,
                        OutputKind::Trajectory | OutputKind::Spectrum | OutputKind::TemporalProfile
                    )
                }) =>
            {
                let state = build_state(p, &prep.grid, &prep.atom).map_err(|e| prep.physics(e))?;
                if let StateLabel::Envelope { warning: Some(w) } = state.label() {
                    out.warnings.push(w.clone());
                }
                Some(state)
            }
            _ => None,
        };

        let trajectory: Option<Trajectory> = match (&state, prep.propagator) {
            (Some(s), Some(cfg)) => {
                Some(propagate(s, &prep.atom, &cfg).map_err(|e| prep.physics(e))?)
            }
            _ => None,
        };

        if sc.wants(OutputKind::Trajectory) {
            let traj = trajectory.as_ref().expect("validated at load");
            let mut w = csv(&["t", "re_f0", "im_f0", "prob", "norm"]);
            for k in 0..traj.len() {
                let f = traj.f0[k];
                w.row(&[
                    scale.time(traj.times[k]),
                    f.re,
                    f.im,
                    traj.prob[k],
                    traj.norm[k],
                ]);
            }
            out.artifacts.push(Artifact {
                file_name: file("trajectory", "csv"),
                contents: w.finish(),
            });
            let (t, p) = max_excitation(traj).map_err(|e| prep.physics(e))?;
            out.summary
                .push(format!("max prob {p:.6} at t = {}", scale.time(t)));
        }

        if sc.wants(OutputKind::Spectrum) {
            let traj = trajectory.as_ref().expect("validated at load");
            let spacing = prep.grid.spacing();
            let mut w = csv(&["delta", "re_c", "im_c", "prob_density"]);
            for (c, &d) in traj.final_modes.iter().zip(prep.grid.detunings()) {
                w.row(&[
                    scale.frequency(d),
                    c.re,
                    c.im,
                    c.norm_sqr() / scale.frequency(spacing),
                ]);
            }
            out.artifacts.push(Artifact {
                file_name: file("spectrum", "csv"),
                contents: w.finish(),
            });
        }

        if sc.wants(OutputKind::TemporalProfile) {
            let state = state.as_ref().expect("validated at load");
            let win = sc.window.expect("validated at load");
            let step = sc.profile.unwrap_or_default().step;
            let times = sample_range(win.t_start, win.t_end, step);
            let profile =
                temporal_profile(state, &prep.atom, &times).map_err(|e| prep.physics(e))?;
            let root = scale.gamma.sqrt();
            let mut w = csv(&["t", "re_phi", "im_phi", "intensity"]);
            for &t in &times {
                let v = profile.value(t) * root;
                w.row(&[scale.time(t), v.re, v.im, v.norm_sqr()]);
            }
            out.artifacts.push(Artifact {
                file_name: file("profile", "csv"),
                contents: w.finish(),
            });
        }

        if sc.wants(OutputKind::VarianceMap) {
            let v = sc.variance.as_ref().expect("validated at load");
            let mut w = csv(&["t", "tau", "theta", "variance"]);
            let front = prep.atom.t0() - v.r;
            for &theta in &v.thetas {
                for tau in sample_range(v.tau_start, v.tau_end, v.step) {
                    let p = FarFieldPoint::new(v.r, theta, v.e_dot_etheta, front + tau)
                        .map_err(|e| prep.physics(e))?;
                    let var = far_field_variance(&p, &prep.atom, VarianceScale::Normalized)
                        .map_err(|e| prep.physics(e))?;
                    w.row(&[scale.time(front + tau), scale.duration(tau), theta, var]);
                }
            }
            out.artifacts.push(Artifact {
                file_name: file("variance", "csv"),
                contents: w.finish(),
            });
        }
    }

    let optimize_now = match mode {
        Mode::Run => sc.wants(OutputKind::Optimization),
        Mode::Optimize => sc.optimization.is_some(),
    };
    if optimize_now {
        let opt = sc.optimization.as_ref().expect("validated at load");
        let fam = family(opt, &prep.atom).map_err(|e| prep.physics(e))?;
        let objective = match opt.objective {
            ObjectiveSpec::AnalyticQuadrature => Objective::analytic(&prep.atom),
            ObjectiveSpec::NumericPropagation => {
                let dt = sc.propagator(&loaded.config.propagator).dt;
                Objective::numeric(Arc::clone(&prep.grid), &prep.atom).with_step(dt)
            }
        };
        let result = if opt.refine {
            optimizer::optimize(&fam, opt.n_points, &objective)
        } else {
            optimizer::scan(&fam, opt.n_points, &objective)
        }
        .map_err(|e| prep.physics(e))?;
        if !result.failures.is_empty() {
            out.warnings.push(format!(
                "{} parameter point(s) failed to evaluate",
                result.failures.len()
            ));
        }
        out.summary.push(format!(
            "best parameter {:?} -> peak {:.6} at t = {}",
            result.best_param, result.best_value, result.best_time
        ));
        let doc = OptimizationFile {
            generator: GENERATOR,
            config_sha256: &loaded.hash,
            scenario: &sc.name,
            units: "natural",
            result: &result,
        };
        let mut text =
            serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        out.artifacts.push(Artifact {
            file_name: file("optimization", "json"),
            contents: text,
        });
    }

    if strict && !out.warnings.is_empty() {
        return Err(prep.physics(format!("strict mode: {}", out.warnings.join("; "))));
    }
    Ok(out)
}

#[derive(Serialize)]
struct OptimizationFile<'a> {
    generator: &'a str,
    config_sha256: &'a str,
    scenario: &'a str,
    units: &'a str,
    result: &'a OptimizationResult,
}

fn build_state(
    pulse: PulseSpec,
    grid: &Arc<ModeGrid>,
    atom: &AtomParams,
) -> wavepacket_core::Result<PhotonState> {
    match pulse {
        PulseSpec::Ideal => PhotonState::ideal(grid, atom),
        PulseSpec::Reflected => PhotonState::reflected(grid, atom),
        PulseSpec::Gaussian { sigma } => PhotonState::gaussian(grid, atom, sigma),
        PulseSpec::ExcitedAtom => Ok(PhotonState::excited_atom(grid)),
        PulseSpec::Vacuum => Ok(PhotonState::vacuum(grid)),
        PulseSpec::TruncatedExponential { duration } => envelope_state(
            grid,
            &TemporalEnvelope::truncated_time_reversed(atom, duration)?,
            atom,
        ),
    }
}

fn family(
    opt: &config::OptimizationSpec,
    atom: &AtomParams,
) -> wavepacket_core::Result<PulseFamily> {
    let kind = match opt.family {
        FamilySpec::GaussianWidth => FamilyKind::GaussianWidth,
        FamilySpec::TruncatedExponentialDuration => FamilyKind::TruncatedExponentialDuration,
        FamilySpec::ArrivalOffset => {
            let base = match opt.base {
                Some(PulseSpec::Reflected) => BasePulse::Reflected,
                Some(PulseSpec::Gaussian { sigma }) => BasePulse::Gaussian { sigma },
                _ => BasePulse::Ideal,
            };
            let w = opt.window.expect("validated at parse");
            FamilyKind::ArrivalOffset {
                base,
                window: (w.t_start, w.t_end),
            }
        }
    };
    PulseFamily::new(kind, vec![(opt.bounds[0], opt.bounds[1])], *atom)
}

/// `start, start + step, …` up to `end` (inclusive within rounding).
fn sample_range(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}
