use anyhow::Context;
use calderon_born_cli::commands::{cmd_born_fourier, cmd_born_profile, cmd_kappa_star, cmd_spectrum, Env};
use calderon_born_cli::config::{ConfigError, RunConfig};
use calderon_born_cli::exit_code;
use calderon_born_cli::figures::{failures, reproduce, Settings};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Radial DtN spectra and Born reconstructions on the unit ball.
#[derive(Parser)]
#[command(name = "calderon-born", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory (default: `output_dir` from the config, else `out`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Recompute spectra instead of reading the cache
    #[arg(long)]
    no_cache: bool,
    /// Worker threads
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// DtN spectrum table
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Fourier transform of the Born approximation on the xi grid
    BornFourier {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Radial profile of the Born approximation, CSV and SVG
    BornProfile {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Fixed-point iteration for kappa*
    KappaStar {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce a figure and compare with its reference values
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        figure: u32,
        /// Numerical settings (L, tol, backend, grid, kappa_star) to use instead of the pinned ones
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn setup(common: &Common, cfg: Option<&RunConfig>) -> anyhow::Result<Env> {
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(ConfigError("--threads must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("starting thread pool")?;
    }
    let out = common
        .out
        .clone()
        .or_else(|| cfg.and_then(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    let cache = !common.no_cache && cfg.is_none_or(|c| c.cache);
    Ok(Env::new(out, cache))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Spectrum { config, common } => {
            let cfg = RunConfig::load(&config)?;
            let path = cmd_spectrum(&cfg, &setup(&common, Some(&cfg))?)?;
            println!("wrote {}", path.display());
        }
        Command::BornFourier { config, common } => {
            let cfg = RunConfig::load(&config)?;
            let path = cmd_born_fourier(&cfg, &setup(&common, Some(&cfg))?)?;
            println!("wrote {}", path.display());
        }
        Command::BornProfile { config, common } => {
            let cfg = RunConfig::load(&config)?;
            let res = cmd_born_profile(&cfg, &setup(&common, Some(&cfg))?)?;
            println!("kappa {:.8}  L1 error {:.6}", res.kappa, res.l1);
            println!("wrote {} and {}", res.files.0.display(), res.files.1.display());
        }
        Command::KappaStar { config, common } => {
            let cfg = RunConfig::load(&config)?;
            let (path, ks) = cmd_kappa_star(&cfg, &setup(&common, Some(&cfg))?)?;
            println!("kappa* = {:.10} after {} iterates", ks.kappa_star, ks.iterates.len());
            println!("wrote {}", path.display());
        }
        Command::Reproduce { figure, config, common } => {
            let cfg = config.as_deref().map(RunConfig::load).transpose()?;
            let settings = cfg.as_ref().map(Settings::from_config).unwrap_or_default();
            let env = setup(&common, cfg.as_ref())?;
            let report = reproduce(figure, &settings, &env)?;
            for c in &report.checks {
                let expected = c.expected.map(|e| format!(" expected {e}")).unwrap_or_default();
                println!(
                    "{} {}: computed {:.6}{} tolerance {:.4e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.computed,
                    expected,
                    c.tolerance
                );
            }
            println!("wrote {}", env.out.join(format!("fig{figure}")).join("report.json").display());
            if let Some(f) = failures(&report) {
                return Err(f.into());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
