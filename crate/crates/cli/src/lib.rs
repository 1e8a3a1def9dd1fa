//! Config-driven runner around `wavepacket_core`: TOML scenarios in,
//! deterministic CSV/JSON out.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod scenarios;

use std::path::Path;

pub use error::{CliError, CliResult};

/// Reads `arg` as a file path, falling back to a bundled scenario of that
/// name. Returns a display name and the config text.
pub fn resolve_config(arg: &str) -> CliResult<(String, String)> {
    let path = Path::new(arg);
    if path.exists() {
        return std::fs::read_to_string(path)
            .map(|text| (arg.to_owned(), text))
            .map_err(|e| CliError::Schema {
                source_name: arg.to_owned(),
                path: "<file>".into(),
                message: format!("cannot read: {e}"),
            });
    }
    scenarios::find(arg)
        .map(|b| (format!("{}.toml (bundled)", b.name), b.text.to_owned()))
        .ok_or_else(|| CliError::Schema {
            source_name: arg.to_owned(),
            path: "<file>".into(),
            message: "no such file and no bundled scenario of that name (see `list-scenarios`)"
                .into(),
        })
}
