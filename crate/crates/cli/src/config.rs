//! Versioned TOML scenario schema.
//!
//! All physics runs in natural units (Γ = 1, t₀ = 0); the optional `[units]`
//! table only rescales time and frequency columns of the written files.

use std::collections::BTreeSet;

use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    pub units: Option<UnitsSpec>,
    #[serde(default)]
    pub atom: AtomSpec,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub propagator: PropagatorSpec,
    #[serde(default, rename = "scenario")]
    pub scenarios: Vec<Scenario>,
}

/// Output rescaling: times become `t0 + t/gamma`, detunings `gamma·Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsSpec {
    pub gamma: f64,
    #[serde(default)]
    pub t0: f64,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    /// Transition frequency in units of Γ (far-field outputs only).
    pub omega0: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_bandwidth_factor")]
    pub bandwidth_factor: f64,
    #[serde(default = "default_n_modes")]
    pub n_modes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            bandwidth_factor: default_bandwidth_factor(),
            n_modes: default_n_modes(),
        }
    }
}

fn default_bandwidth_factor() -> f64 {
    wavepacket_core::grid::DEFAULT_BANDWIDTH_FACTOR
}

fn default_n_modes() -> usize {
    wavepacket_core::grid::DEFAULT_N_MODES
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagatorSpec {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
}

impl Default for PropagatorSpec {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            sample_stride: default_stride(),
        }
    }
}

fn default_dt() -> f64 {
    wavepacket_core::propagator::DEFAULT_DT
}

fn default_stride() -> usize {
    wavepacket_core::propagator::DEFAULT_SAMPLE_STRIDE
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverride {
    pub bandwidth_factor: Option<f64>,
    pub n_modes: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagatorOverride {
    pub dt: Option<f64>,
    pub sample_stride: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PulseSpec {
    Ideal,
    Reflected,
    Gaussian { sigma: f64 },
    ExcitedAtom,
    TruncatedExponential { duration: f64 },
    Vacuum,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub t_start: f64,
    pub t_end: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Trajectory,
    Spectrum,
    TemporalProfile,
    VarianceMap,
    Optimization,
}

impl OutputKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Trajectory => "trajectory",
            Self::Spectrum => "spectrum",
            Self::TemporalProfile => "temporal-profile",
            Self::VarianceMap => "variance-map",
            Self::Optimization => "optimization",
        }
    }

    fn needs_pulse(self) -> bool {
        matches!(
            self,
            Self::Trajectory | Self::Spectrum | Self::TemporalProfile
        )
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    #[serde(default = "default_profile_step")]
    pub step: f64,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self {
            step: default_profile_step(),
        }
    }
}

fn default_profile_step() -> f64 {
    0.01
}

/// Far-field variance samples. Times are retarded: `tau = t − (t₀ − r)`, so
/// the wavefront passes at `tau = 0` and the field is present for `tau ≤ 0`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarianceSpec {
    pub r: f64,
    pub thetas: Vec<f64>,
    #[serde(default = "one")]
    pub e_dot_etheta: f64,
    pub tau_start: f64,
    pub tau_end: f64,
    pub step: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilySpec {
    GaussianWidth,
    TruncatedExponentialDuration,
    ArrivalOffset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveSpec {
    #[default]
    AnalyticQuadrature,
    NumericPropagation,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizationSpec {
    pub family: FamilySpec,
    pub bounds: Vec<f64>,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    #[serde(default)]
    pub objective: ObjectiveSpec,
    #[serde(default = "yes")]
    pub refine: bool,
    /// Pulse slid by the arrival-offset family.
    pub base: Option<PulseSpec>,
    /// Interaction window of the arrival-offset family, relative to t₀.
    pub window: Option<WindowSpec>,
}

fn default_n_points() -> usize {
    33
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub pulse: Option<PulseSpec>,
    pub window: Option<WindowSpec>,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
    pub grid: Option<GridOverride>,
    pub propagator: Option<PropagatorOverride>,
    pub profile: Option<ProfileSpec>,
    pub variance: Option<VarianceSpec>,
    pub optimization: Option<OptimizationSpec>,
}

impl Scenario {
    pub fn grid(&self, base: &GridSpec) -> GridSpec {
        let o = self.grid.unwrap_or_default();
        GridSpec {
            bandwidth_factor: o.bandwidth_factor.unwrap_or(base.bandwidth_factor),
            n_modes: o.n_modes.unwrap_or(base.n_modes),
        }
    }

    pub fn propagator(&self, base: &PropagatorSpec) -> PropagatorSpec {
        let o = self.propagator.unwrap_or_default();
        PropagatorSpec {
            dt: o.dt.unwrap_or(base.dt),
            sample_stride: o.sample_stride.unwrap_or(base.sample_stride),
        }
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }
}

/// Parses and structurally validates a config. `source_name` prefixes every
/// diagnostic.
pub fn parse(text: &str, source_name: &str) -> CliResult<Config> {
    let schema = |path: String, message: String| CliError::Schema {
        source_name: source_name.to_owned(),
        path,
        message,
    };
    let de = toml::Deserializer::parse(text)
        .map_err(|e| schema("<toml>".into(), e.to_string().trim().to_owned()))?;
    let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().message().trim().to_owned();
        schema(if path == "." { "<root>".into() } else { path }, message)
    })?;
    validate(&config).map_err(|(path, message)| schema(path, message))?;
    Ok(config)
}

fn validate(config: &Config) -> Result<(), (String, String)> {
    let fail = |path: &str, message: String| Err((path.to_owned(), message));
    if config.schema_version != SCHEMA_VERSION {
        return fail(
            "schema_version",
            format!(
                "unsupported version {}, expected {SCHEMA_VERSION}",
                config.schema_version
            ),
        );
    }
    if let Some(u) = config.units {
        if !(u.gamma.is_finite() && u.gamma > 0.0) {
            return fail(
                "units.gamma",
                format!("must be finite and positive, got {}", u.gamma),
            );
        }
        if !u.t0.is_finite() {
            return fail("units.t0", "must be finite".into());
        }
    }
    let mut names = BTreeSet::new();
    for (i, sc) in config.scenarios.iter().enumerate() {
        let at = |field: &str| format!("scenario[{i}].{field}");
        let valid_name = !sc.name.is_empty()
            && sc
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            && !sc.name.starts_with('.');
        if !valid_name {
            return fail(
                &at("name"),
                format!(
                    "`{}` must be non-empty and use only [A-Za-z0-9._-]",
                    sc.name
                ),
            );
        }
        if !names.insert(sc.name.as_str()) {
            return fail(
                &at("name"),
                format!("duplicate scenario name `{}`", sc.name),
            );
        }
        let mut seen = BTreeSet::new();
        for (k, out) in sc.outputs.iter().enumerate() {
            if !seen.insert(*out) {
                return fail(
                    &at(&format!("outputs[{k}]")),
                    format!("`{}` listed twice", out.name()),
                );
            }
            if out.needs_pulse() {
                if sc.pulse.is_none() {
                    return fail(&at("pulse"), format!("required by output `{}`", out.name()));
                }
                if sc.window.is_none() {
                    return fail(
                        &at("window"),
                        format!("required by output `{}`", out.name()),
                    );
                }
            }
        }
        if let Some(w) = sc.window {
            if !(w.t_start.is_finite() && w.t_end.is_finite() && w.t_start < w.t_end) {
                return fail(
                    &at("window"),
                    format!("t_start = {} must be below t_end = {}", w.t_start, w.t_end),
                );
            }
        }
        if sc.wants(OutputKind::VarianceMap) && sc.variance.is_none() {
            return fail(&at("variance"), "required by output `variance-map`".into());
        }
        if let Some(v) = &sc.variance {
            if v.thetas.is_empty() {
                return fail(
                    &at("variance.thetas"),
                    "must list at least one angle".into(),
                );
            }
            if !(v.tau_start.is_finite() && v.tau_end.is_finite() && v.tau_start <= v.tau_end) {
                return fail(
                    &at("variance.tau_start"),
                    "tau_start must not exceed tau_end".into(),
                );
            }
            if !(v.step.is_finite() && v.step > 0.0) {
                return fail(
                    &at("variance.step"),
                    format!("must be positive, got {}", v.step),
                );
            }
        }
        if let Some(p) = sc.profile {
            if !(p.step.is_finite() && p.step > 0.0) {
                return fail(
                    &at("profile.step"),
                    format!("must be positive, got {}", p.step),
                );
            }
        }
        if sc.wants(OutputKind::Optimization) && sc.optimization.is_none() {
            return fail(
                &at("optimization"),
                "required by output `optimization`".into(),
            );
        }
        if let Some(o) = &sc.optimization {
            if o.bounds.len() != 2 {
                return fail(
                    &at("optimization.bounds"),
                    format!("expected [min, max], got {} values", o.bounds.len()),
                );
            }
            let (lo, hi) = (o.bounds[0], o.bounds[1]);
            if !(lo.is_finite() && hi.is_finite()) {
                return fail(&at("optimization.bounds"), "must be finite".into());
            }
            if lo > hi {
                return fail(
                    &at("optimization.bounds"),
                    format!("min = {lo} exceeds max = {hi}"),
                );
            }
            if o.n_points < 3 {
                return fail(
                    &at("optimization.n_points"),
                    format!("need at least 3, got {}", o.n_points),
                );
            }
            let arrival = o.family == FamilySpec::ArrivalOffset;
            if arrival != o.base.is_some() || arrival != o.window.is_some() {
                return fail(
                    &at("optimization"),
                    "`base` and `window` are required for, and only for, family `arrival-offset`"
                        .into(),
                );
            }
            if let Some(base) = o.base {
                if !matches!(
                    base,
                    PulseSpec::Ideal | PulseSpec::Reflected | PulseSpec::Gaussian { .. }
                ) {
                    return fail(
                        &at("optimization.base"),
                        "must be ideal, reflected or gaussian".into(),
                    );
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> (String, String) {
        match parse(text, "test") {
            Err(CliError::Schema { path, message, .. }) => (path, message),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config() {
        let c = parse("schema_version = 1\n", "test").unwrap();
        assert!(c.scenarios.is_empty());
        assert_eq!(c.grid.n_modes, 4001);
    }

    #[test]
    fn field_paths() {
        let (path, _) = err(
            "schema_version = 1\n[[scenario]]\nname = \"a\"\npulse = { kind = \"gaussian\" }\n",
        );
        assert_eq!(path, "scenario[0].pulse");
        let (path, msg) = err("schema_version = 1\n[grid]\nn_mode = 3\n");
        assert_eq!(path, "grid.n_mode");
        assert!(msg.contains("unknown field"), "{msg}");
        let (path, _) = err("schema_version = 2\n");
        assert_eq!(path, "schema_version");
        let text = "schema_version = 1\n[[scenario]]\nname = \"a\"\noutputs = [\"optimization\"]\n\
                    [scenario.optimization]\nfamily = \"gaussian-width\"\nbounds = [5.0, 0.2]\n";
        let (path, msg) = err(text);
        assert_eq!(path, "scenario[0].optimization.bounds");
        assert!(msg.contains("exceeds"));
    }

    #[test]
    fn outputs_need_their_inputs() {
        let (path, _) = err("schema_version = 1\n[[scenario]]\nname = \"a\"\noutputs = [\"trajectory\"]\npulse = { kind = \"ideal\" }\n");
        assert_eq!(path, "scenario[0].window");
        let (path, _) = err("schema_version = 1\n[[scenario]]\nname = \"a/b\"\n");
        assert_eq!(path, "scenario[0].name");
    }
}
