//! One function per subcommand. Each writes its tables under the output directory.

use crate::cache::SpectrumCache;
use crate::config::{ConfigError, RunConfig};
use crate::output::{num, render_csv, render_svg, write_file, Cell, Provenance, Series};
use calderon_born::born::{born_coefficients, fourier_series_eval};
use calderon_born::forward::DtnSpectrum;
use calderon_born::recon::{
    approximate_potential, invert_profile, kappa_star, uniform_grid, KappaChoice, KappaStarResult, RadialProfile,
};
use calderon_born::Error;
use std::path::{Path, PathBuf};

pub struct Env {
    pub out: PathBuf,
    pub cache: SpectrumCache,
}

impl Env {
    pub fn new(out: PathBuf, cache: bool) -> Env {
        let cache = SpectrumCache::new(&out, cache);
        Env { out, cache }
    }
}

pub fn provenance(cfg: &RunConfig) -> Provenance {
    Provenance::new(cfg.hash())
        .with(format!("d {} kappa {} L {} tol {:e}", cfg.d, num(cfg.energy()), cfg.lmax, cfg.tol))
}

fn spectrum(cfg: &RunConfig, env: &Env) -> anyhow::Result<DtnSpectrum> {
    env.cache.spectrum(&cfg.potential, cfg.d, cfg.energy(), cfg.lmax, cfg.tol)
}

pub fn cmd_spectrum(cfg: &RunConfig, env: &Env) -> anyhow::Result<PathBuf> {
    let spec = spectrum(cfg, env)?;
    let rows: Vec<Vec<Cell>> = (0..spec.lambda.len())
        .map(|l| {
            vec![
                Cell::Int(l),
                Cell::Num(spec.lambda[l]),
                Cell::Num(spec.lambda_free[l]),
                Cell::Num(spec.delta[l]),
                Cell::Text(format!("{:?}", spec.status[l])),
            ]
        })
        .collect();
    let path = env.out.join("spectrum.csv");
    write_file(&path, &render_csv(&provenance(cfg), &["ell", "lambda_q", "lambda_free", "delta", "status"], &rows))?;
    Ok(path)
}

pub fn cmd_born_fourier(cfg: &RunConfig, env: &Env) -> anyhow::Result<PathBuf> {
    let series = born_coefficients(&spectrum(cfg, env)?)?;
    let mut rows = Vec::with_capacity(cfg.xi.n);
    for xi in cfg.xi.points() {
        let v = fourier_series_eval(&series, xi, cfg.xi.tol)?;
        rows.push(vec![Cell::Num(xi), Cell::Num(v.value), Cell::Num(v.tail_bound)]);
    }
    let path = env.out.join("born_fourier.csv");
    write_file(&path, &render_csv(&provenance(cfg), &["xi", "F_qB", "tail_bound"], &rows))?;
    Ok(path)
}

/// Profile table and chart with the true potential overlaid.
pub fn write_profile(dir: &Path, stem: &str, title: &str, prov: &Provenance, profile: &RadialProfile, q: &[f64]) -> anyhow::Result<(PathBuf, PathBuf)> {
    let rows: Vec<Vec<Cell>> = (0..profile.grid.len())
        .map(|i| {
            vec![
                Cell::Num(profile.grid[i]),
                Cell::Num(profile.values[i]),
                Cell::Num(profile.error_profile[i]),
                Cell::Num(q[i]),
            ]
        })
        .collect();
    let csv = dir.join(format!("{stem}.csv"));
    write_file(&csv, &render_csv(prov, &["r", "profile", "error", "q"], &rows))?;
    let svg = dir.join(format!("{stem}.svg"));
    let chart = render_svg(
        title,
        "r",
        &[
            Series { label: "q", x: &profile.grid, y: q, color: "#1f77b4" },
            Series { label: "reconstruction", x: &profile.grid, y: &profile.values, color: "#ff7f0e" },
        ],
    );
    write_file(&svg, &chart)?;
    Ok((csv, svg))
}

pub struct ProfileOutput {
    pub kappa: f64,
    pub l1: f64,
    pub files: (PathBuf, PathBuf),
}

pub fn cmd_born_profile(cfg: &RunConfig, env: &Env) -> anyhow::Result<ProfileOutput> {
    let grid = uniform_grid(cfg.grid.r_min, cfg.grid.n);
    let spec = spectrum(cfg, env)?;
    let (kappa, profile, title) = match cfg.kappa_policy {
        Some(choice) => {
            let choice = match choice {
                KappaChoice::Star => KappaChoice::Given(converged_star(&spec, cfg)?.kappa_star),
                c => c,
            };
            let a = approximate_potential(&spec, Some(&cfg.potential), choice, &cfg.backend, &grid, cfg.kappa_star.tol)?;
            (a.kappa, a.profile, format!("-k + (q+k)^B_k, k = {:.6}", a.kappa))
        }
        None => {
            let p = invert_profile(&born_coefficients(&spec)?, &cfg.backend, &grid)?;
            (spec.kappa, p, format!("q^B_k, k = {:.6}", spec.kappa))
        }
    };
    let q: Vec<f64> = grid.iter().map(|&r| cfg.potential.value(r)).collect();
    let prov = provenance(cfg).with(format!("reconstruction kappa {}", num(kappa)));
    let files = write_profile(&env.out, "born_profile", &title, &prov, &profile, &q)?;
    let l1 = profile.l1_distance(&cfg.potential, cfg.d)?;
    Ok(ProfileOutput { kappa, l1, files })
}

fn converged_star(spec0: &DtnSpectrum, cfg: &RunConfig) -> anyhow::Result<KappaStarResult> {
    let ks = kappa_star(spec0, cfg.kappa_star.tol, cfg.kappa_star.max_iter)?;
    if !ks.converged {
        return Err(Error::NonConvergence { what: "kappa_star", detail: format!("{} iterates", ks.iterates.len()) }.into());
    }
    Ok(ks)
}

pub fn star_trace_csv(prov: &Provenance, ks: &KappaStarResult) -> String {
    let rows: Vec<Vec<Cell>> = ks
        .iterates
        .iter()
        .enumerate()
        .map(|(i, &k)| vec![Cell::Int(i), Cell::Num(k), Cell::Num(ks.residuals.get(i).copied().unwrap_or(f64::NAN))])
        .collect();
    let prov = prov.clone().with(format!("kappa_star {} converged {}", num(ks.kappa_star), ks.converged));
    render_csv(&prov, &["iter", "kappa", "residual"], &rows)
}

/// Writes the trace even when the iteration fails to converge.
pub fn cmd_kappa_star(cfg: &RunConfig, env: &Env) -> anyhow::Result<(PathBuf, KappaStarResult)> {
    if cfg.energy() != 0.0 {
        return Err(ConfigError("kappa-star needs the zero-energy spectrum (kappa = 0)".into()).into());
    }
    let spec = spectrum(cfg, env)?;
    let ks = kappa_star(&spec, cfg.kappa_star.tol, cfg.kappa_star.max_iter)?;
    let path = env.out.join("kappa_star.csv");
    write_file(&path, &star_trace_csv(&provenance(cfg), &ks))?;
    if !ks.converged {
        return Err(Error::NonConvergence { what: "kappa_star", detail: format!("{} iterates, trace in {}", ks.iterates.len(), path.display()) }.into());
    }
    Ok((path, ks))
}
