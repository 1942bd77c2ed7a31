//! Pinned end-to-end pipelines for the four published figures.

use crate::commands::{star_trace_csv, write_profile, Env};
use crate::config::{sha256_hex, GridSpec, RunConfig};
use crate::output::{num, write_file, Provenance};
use calderon_born::born::born_coefficients;
use calderon_born::forward::SOLVER_VERSION;
use calderon_born::recon::{
    approximate_potential, compare_profiles, invert_profile, kappa_star, uniform_grid, Backend, KappaChoice, RadialProfile,
};
use calderon_born::{Error, RadialPotential};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Relative tolerance on reference L1 errors.
pub const L1_TOL: f64 = 0.05;
/// Absolute tolerance on reference κ* values.
pub const KAPPA_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    #[serde(rename = "L")]
    pub lmax: usize,
    pub tol: f64,
    pub backend: Backend,
    pub grid: GridSpec,
    /// Guard band around the perturbation radius in the locality checks.
    pub guard: f64,
    pub star_tol: f64,
    pub star_max_iter: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            lmax: 60,
            tol: 1e-11,
            backend: Backend::default(),
            grid: GridSpec::default(),
            guard: 0.05,
            star_tol: 1e-10,
            star_max_iter: 100,
        }
    }
}

impl Settings {
    /// Numerical settings taken from a run config; its potential and energy are ignored.
    pub fn from_config(cfg: &RunConfig) -> Settings {
        Settings {
            lmax: cfg.lmax,
            tol: cfg.tol,
            backend: cfg.backend,
            grid: cfg.grid,
            star_tol: cfg.kappa_star.tol,
            star_max_iter: cfg.kappa_star.max_iter,
            ..Settings::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `|computed − expected| ≤ tolerance·|expected|`
    Relative,
    /// `|computed − expected| ≤ tolerance`
    Absolute,
    /// `computed` counts the violations of strict decrease.
    StrictlyDecreasing,
    /// `computed ≤ tolerance`, the tolerance being the combined error estimate.
    WithinErrorEstimate,
    /// `computed > tolerance`
    AboveErrorEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub rule: Rule,
    pub computed: f64,
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, rule: Rule, computed: f64, expected: Option<f64>, tolerance: f64) -> Check {
        let e = expected.unwrap_or(0.0);
        let pass = match rule {
            Rule::Relative => (computed - e).abs() <= tolerance * e.abs(),
            Rule::Absolute => (computed - e).abs() <= tolerance,
            Rule::StrictlyDecreasing => computed == 0.0,
            Rule::WithinErrorEstimate => computed <= tolerance,
            Rule::AboveErrorEstimate => computed > tolerance,
        };
        Check { name: name.into(), rule, computed, expected, tolerance, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub name: String,
    pub kappa: f64,
    /// The energy was chosen from the true potential.
    pub oracle_assisted: bool,
    pub l1_error: Option<f64>,
    pub error_estimate: f64,
    pub csv: String,
    pub svg: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub figure: u32,
    pub solver_version: String,
    pub settings_sha256: String,
    pub settings: Settings,
    pub panels: Vec<Panel>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Some checks of a reproduced figure failed (exit code 4).
#[derive(Debug)]
pub struct ReproductionFailed {
    pub figure: u32,
    pub failed: Vec<String>,
}

impl fmt::Display for ReproductionFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "figure {} outside tolerance: {}", self.figure, self.failed.join("; "))
    }
}

impl std::error::Error for ReproductionFailed {}

pub fn fig1_potential() -> RadialPotential {
    RadialPotential::piecewise(vec![1.0 / 3.0, 2.0 / 3.0, 1.0], vec![2.0, 1.0, 2.0]).expect("valid potential")
}

pub fn fig2_potential() -> RadialPotential {
    RadialPotential::cosine(1.0, 2.0, -5.0)
}

/// `q₁, q₂, q₃` with `q₃ = 3`, `q₂ = q₃ − χ_(0,2/3)`, `q₁ = q₂ − χ_(0,1/3)`.
pub fn fig4_triple() -> [RadialPotential; 3] {
    [
        RadialPotential::piecewise(vec![1.0 / 3.0, 2.0 / 3.0, 1.0], vec![1.0, 2.0, 3.0]).expect("valid potential"),
        RadialPotential::piecewise(vec![2.0 / 3.0, 1.0], vec![2.0, 3.0]).expect("valid potential"),
        RadialPotential::constant(3.0),
    ]
}

/// Reference L1 errors for the energies 0, boundary, midrange and κ*.
const FIG1_L1: [f64; 4] = [0.66066, 0.12155, 0.05551, 0.05084];
const FIG1_STAR: f64 = -1.73614;
const FIG2_L1: [f64; 4] = [16.4772, 0.51683, 0.07038, 0.07200];
const FIG2_STAR: f64 = 4.96727;
const FIG3_KAPPA: [f64; 4] = [0.0, -10.0, -100.0, -1000.0];
const FIG3_L1: [f64; 4] = [0.66066, 0.56134, 0.35731, 0.17218];

const D: usize = 3;

struct Ctx<'a> {
    env: &'a Env,
    dir: std::path::PathBuf,
    settings: &'a Settings,
    prov: Provenance,
    grid: Vec<f64>,
}

impl Ctx<'_> {
    fn panel(&self, name: &str, title: &str, kappa: f64, oracle: bool, q: &RadialPotential, p: &RadialProfile) -> anyhow::Result<Panel> {
        let qv: Vec<f64> = self.grid.iter().map(|&r| q.value(r)).collect();
        let prov = self.prov.clone().with(format!("panel {name} kappa {}", num(kappa)));
        write_profile(&self.dir, name, title, &prov, p, &qv)?;
        Ok(Panel {
            name: name.into(),
            kappa,
            oracle_assisted: oracle,
            l1_error: Some(p.l1_distance(q, D)?),
            error_estimate: p.error_estimate,
            csv: format!("{name}.csv"),
            svg: format!("{name}.svg"),
        })
    }
}

/// Run figure `figure` (1 to 4), write its panels and `report.json` under
/// `<out>/fig<N>`, and return the report.
pub fn reproduce(figure: u32, settings: &Settings, env: &Env) -> anyhow::Result<Report> {
    let settings_sha256 = sha256_hex(&serde_json::to_vec(settings)?);
    let ctx = Ctx {
        env,
        dir: env.out.join(format!("fig{figure}")),
        settings,
        prov: Provenance::new(settings_sha256.clone())
            .with(format!("figure {figure} d {D} L {} tol {:e}", settings.lmax, settings.tol)),
        grid: uniform_grid(settings.grid.r_min, settings.grid.n),
    };
    let (panels, checks) = match figure {
        1 => energy_choices(&ctx, &fig1_potential(), FIG1_L1, FIG1_STAR)?,
        2 => energy_choices(&ctx, &fig2_potential(), FIG2_L1, FIG2_STAR)?,
        3 => high_energy(&ctx)?,
        4 => locality(&ctx)?,
        _ => return Err(Error::Invalid(format!("no figure {figure}; choose 1 to 4")).into()),
    };
    let passed = checks.iter().all(|c| c.pass);
    let report = Report {
        schema_version: REPORT_SCHEMA_VERSION,
        figure,
        solver_version: SOLVER_VERSION.into(),
        settings_sha256,
        settings: settings.clone(),
        panels,
        checks,
        passed,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write_file(&ctx.dir.join("report.json"), &json)?;
    Ok(report)
}

pub fn failures(report: &Report) -> Option<ReproductionFailed> {
    let failed: Vec<String> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    (!failed.is_empty()).then_some(ReproductionFailed { figure: report.figure, failed })
}

fn energy_choices(ctx: &Ctx, q: &RadialPotential, l1: [f64; 4], star: f64) -> anyhow::Result<(Vec<Panel>, Vec<Check>)> {
    let s = ctx.settings;
    let spec0 = ctx.env.cache.spectrum(q, D, 0.0, s.lmax, s.tol)?;
    let ks = kappa_star(&spec0, s.star_tol, s.star_max_iter)?;
    write_file(&ctx.dir.join("kappa_star.csv"), &star_trace_csv(&ctx.prov, &ks))?;
    if !ks.converged {
        return Err(Error::NonConvergence { what: "kappa_star", detail: format!("{} iterates", ks.iterates.len()) }.into());
    }
    let choices = [
        ("a_kappa_zero", KappaChoice::Given(0.0)),
        ("b_boundary", KappaChoice::Boundary),
        ("c_midrange", KappaChoice::Midrange),
        ("d_kappa_star", KappaChoice::Given(ks.kappa_star)),
    ];
    let approx: Vec<_> = choices
        .par_iter()
        .map(|(_, c)| approximate_potential(&spec0, Some(q), *c, &s.backend, &ctx.grid, s.star_tol))
        .collect::<Result<_, _>>()?;
    let mut panels = Vec::new();
    let mut checks = Vec::new();
    for (((name, _), a), expected) in choices.iter().zip(&approx).zip(l1) {
        let title = format!("-k + (q+k)^B_k, k = {:.5}", a.kappa);
        let p = ctx.panel(name, &title, a.kappa, a.oracle_assisted, q, &a.profile)?;
        checks.push(Check::new(format!("L1 error {name}"), Rule::Relative, p.l1_error.unwrap(), Some(expected), L1_TOL));
        panels.push(p);
    }
    checks.push(Check::new("kappa_star", Rule::Absolute, ks.kappa_star, Some(star), KAPPA_TOL));
    Ok((panels, checks))
}

fn high_energy(ctx: &Ctx) -> anyhow::Result<(Vec<Panel>, Vec<Check>)> {
    let s = ctx.settings;
    let q = fig1_potential();
    let profiles: Vec<RadialProfile> = FIG3_KAPPA
        .par_iter()
        .map(|&k| -> anyhow::Result<RadialProfile> {
            let spec = ctx.env.cache.spectrum(&q, D, k, s.lmax, s.tol)?;
            Ok(invert_profile(&born_coefficients(&spec)?, &s.backend, &ctx.grid)?)
        })
        .collect::<anyhow::Result<_>>()?;
    let mut panels = Vec::new();
    let mut checks = Vec::new();
    for ((&k, p), expected) in FIG3_KAPPA.iter().zip(&profiles).zip(FIG3_L1) {
        let name = format!("kappa_{}", (-k) as i64);
        let panel = ctx.panel(&name, &format!("q^B_k, k = {k}"), k, false, &q, p)?;
        checks.push(Check::new(format!("L1 error {name}"), Rule::Relative, panel.l1_error.unwrap(), Some(expected), L1_TOL));
        panels.push(panel);
    }
    let l1: Vec<f64> = panels.iter().map(|p| p.l1_error.unwrap()).collect();
    let violations = l1.windows(2).filter(|w| !(w[1] < w[0])).count();
    checks.push(Check::new("L1 errors strictly decreasing", Rule::StrictlyDecreasing, violations as f64, Some(0.0), 0.0));
    Ok((panels, checks))
}

fn locality(ctx: &Ctx) -> anyhow::Result<(Vec<Panel>, Vec<Check>)> {
    const KAPPA: f64 = -1.0;
    let s = ctx.settings;
    let qs = fig4_triple();
    let profiles: Vec<RadialProfile> = qs
        .par_iter()
        .map(|q| -> anyhow::Result<RadialProfile> {
            let spec = ctx.env.cache.spectrum(q, D, KAPPA, s.lmax, s.tol)?;
            Ok(invert_profile(&born_coefficients(&spec)?, &s.backend, &ctx.grid)?)
        })
        .collect::<anyhow::Result<_>>()?;
    let mut panels = Vec::new();
    for (i, (q, p)) in qs.iter().zip(&profiles).enumerate() {
        let name = format!("q{}", i + 1);
        panels.push(ctx.panel(&name, &format!("q{}^B_k, k = -1", i + 1), KAPPA, false, q, p)?);
    }
    let mut checks = Vec::new();
    for (i, j, b) in [(0, 1, 1.0 / 3.0), (1, 2, 2.0 / 3.0), (0, 2, 2.0 / 3.0)] {
        let rep = compare_profiles(profiles[i].clone(), profiles[j].clone(), b, KAPPA, s.guard);
        let pair = format!("q{} q{}", i + 1, j + 1);
        checks.push(Check::new(format!("{pair} agree on ({:.4}, 1)", b + s.guard), Rule::WithinErrorEstimate, rep.outer_diff, None, rep.outer_error));
        checks.push(Check::new(format!("{pair} differ on (0, {:.4})", b - s.guard), Rule::AboveErrorEstimate, rep.inner_diff, None, rep.inner_error));
    }
    Ok((panels, checks))
}
