//! Scenario files shipped with the binary.

pub struct Bundled {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub const BUNDLED: &[Bundled] = &[
    Bundled {
        name: "fig1",
        description: "time-reversed dipole wave absorbed over Γ·T = 2, 3, 5",
        text: include_str!("../scenarios/fig1.toml"),
    },
    Bundled {
        name: "fig2",
        description: "reflected dipole wave: causal response, peak at t0 + 2/Γ",
        text: include_str!("../scenarios/fig2.toml"),
    },
    Bundled {
        name: "gaussian",
        description: "Gaussian width optimization and trajectory at the optimum",
        text: include_str!("../scenarios/gaussian.toml"),
    },
    Bundled {
        name: "truncation",
        description: "peak excitation versus interaction time",
        text: include_str!("../scenarios/truncation.toml"),
    },
    Bundled {
        name: "emission",
        description: "spontaneous emission trajectory, emitted spectrum and ideal pulse profile",
        text: include_str!("../scenarios/emission.toml"),
    },
    Bundled {
        name: "variance",
        description: "far-field variance of the incoming dipole wave",
        text: include_str!("../scenarios/variance.toml"),
    },
];

/// Looks a bundled scenario up by name, with or without `.toml`.
pub fn find(name: &str) -> Option<&'static Bundled> {
    let stem = name.strip_suffix(".toml").unwrap_or(name);
    BUNDLED.iter().find(|b| b.name == stem)
}
