use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use becsim::config::{parse_experiment, parse_scan, ExperimentConfig, System};
use becsim::output::write_file;
use becsim::presets::{preset, PRESETS};
use becsim::runner::run_experiment;
use becsim::scan::run_scan;
use becsim::CliError;

#[derive(Parser)]
#[command(name = "becsim", version, about = "Driven double-well and tilted-lattice condensate dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Integrator tolerance (overrides the config)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads for independent runs and scan points
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Two-well dynamics from presets (fig1 … fig4, or `all`) or JSON configs
    Run {
        #[arg(required = true)]
        targets: Vec<String>,
    },
    /// Resonance table over an (ω, drive) grid
    Scan { config: PathBuf },
    /// Lattice dynamics from a JSON config
    Lattice { config: PathBuf },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn resolve(target: &str, tol: Option<f64>) -> Result<(ExperimentConfig, Option<&'static str>), CliError> {
    let (mut cfg, name) = match PRESETS.iter().find(|p| **p == target) {
        Some(p) => (preset(p)?, Some(*p)),
        None => (parse_experiment(&read(Path::new(target))?)?, None),
    };
    if let Some(tol) = tol {
        cfg.tolerance = tol;
        cfg.validate()?;
    }
    Ok((cfg, name))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run { targets } => {
            let expanded: Vec<&str> = targets
                .iter()
                .flat_map(|t| if t == "all" { PRESETS.to_vec() } else { vec![t.as_str()] })
                .collect();
            let jobs = expanded.iter().map(|t| resolve(t, cli.tol)).collect::<Result<Vec<_>, _>>()?;
            if let Some((cfg, _)) = jobs.iter().find(|(c, _)| matches!(c.system, System::Lattice(_))) {
                return Err(CliError::Config(format!("{} is a lattice config; use the lattice subcommand", cfg.name)));
            }
            let mut names: Vec<&str> = jobs.iter().map(|(c, _)| c.name.as_str()).collect();
            names.sort_unstable();
            if names.windows(2).any(|w| w[0] == w[1]) {
                return Err(CliError::Config("two runs share an output name".into()));
            }
            let written = jobs
                .par_iter()
                .map(|(cfg, name)| run_experiment(cfg, *name)?.write(&cli.out))
                .collect::<Result<Vec<_>, _>>()?;
            written.iter().flatten().for_each(|p| println!("{}", p.display()));
        }
        Command::Scan { config } => {
            let cfg = parse_scan(&read(config)?)?;
            let table = run_scan(&cfg)?;
            let path = write_file(&cli.out, &format!("{}.csv", cfg.name), &table.to_csv())?;
            println!("{}", path.display());
        }
        Command::Lattice { config } => {
            let (cfg, _) = resolve(&config.to_string_lossy(), cli.tol)?;
            if !matches!(cfg.system, System::Lattice(_)) {
                return Err(CliError::Config("lattice subcommand needs a lattice system".into()));
            }
            for p in run_experiment(&cfg, None)?.write(&cli.out)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("becsim: cannot start {k} worker threads: {e}");
            return ExitCode::from(becsim::EXIT_CONFIG as u8);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("becsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
