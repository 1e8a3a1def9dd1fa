use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use wavepacket_cli::runner::{self, Mode};
use wavepacket_cli::{resolve_config, scenarios, CliError};

#[derive(Parser)]
#[command(
    name = "wavepacket",
    version,
    about = "Single-photon absorption scenarios: TOML in, CSV/JSON out"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output files.
    #[arg(long, global = true, env = "WAVEPACKET_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads for independent scenarios and scan points.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Reserved; the runner has no randomness, so this is rejected.
    #[arg(long, global = true)]
    seedless: bool,
    /// Treat warnings as errors.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every declared output of the given configs.
    Run {
        #[arg(required = true)]
        configs: Vec<String>,
    },
    /// Run only the optimizations of the given configs.
    Optimize {
        #[arg(required = true)]
        configs: Vec<String>,
    },
    /// List the bundled scenario files.
    ListScenarios,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}

fn real_main(cli: Cli) -> Result<u8> {
    if cli.seedless {
        eprintln!("error: --seedless is reserved: no randomness exists in this program");
        return Ok(2);
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let (configs, mode) = match &cli.command {
        Command::ListScenarios => {
            for b in scenarios::BUNDLED {
                println!("{:<12} {}", b.name, b.description);
            }
            return Ok(0);
        }
        Command::Run { configs } => (configs, Mode::Run),
        Command::Optimize { configs } => (configs, Mode::Optimize),
    };

    let mut loaded = Vec::new();
    for arg in configs {
        let (name, text) = resolve_config(arg)?;
        loaded.push(runner::load(&name, &text)?);
    }

    let mut names = BTreeSet::new();
    let mut tasks = Vec::new();
    for (c, l) in loaded.iter().enumerate() {
        for (s, sc) in l.config.scenarios.iter().enumerate() {
            if !names.insert(sc.name.clone()) {
                return Err(CliError::Schema {
                    source_name: l.source_name.clone(),
                    path: format!("scenario[{s}].name"),
                    message: format!("`{}` already defined by an earlier config", sc.name),
                }
                .into());
            }
            if runner::selects(sc, mode) {
                tasks.push((c, s));
            }
        }
    }
    if mode == Mode::Optimize && tasks.is_empty() {
        return Err(CliError::Schema {
            source_name: configs.join(", "),
            path: "scenario".into(),
            message: "no scenario has an [scenario.optimization] table".into(),
        }
        .into());
    }

    let outcomes: Vec<_> = tasks
        .par_iter()
        .map(|&(c, s)| runner::execute(&loaded[c], s, mode, cli.strict))
        .collect();

    let mut status = 0u8;
    for outcome in outcomes {
        match outcome {
            Ok(o) => {
                if !o.artifacts.is_empty() {
                    std::fs::create_dir_all(&cli.out_dir)
                        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
                }
                for a in &o.artifacts {
                    let path = cli.out_dir.join(&a.file_name);
                    std::fs::write(&path, &a.contents)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("[{}] wrote {}", o.name, path.display());
                }
                for line in &o.summary {
                    println!("[{}] {line}", o.name);
                }
                for w in &o.warnings {
                    eprintln!("[{}] warning: {w}", o.name);
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                status = status.max(e.exit_code() as u8);
            }
        }
    }
    Ok(status)
}
