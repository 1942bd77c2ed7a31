//! Physical-space Born profiles, the zero-mass energy shift, the
//! approximation pipeline and the high-energy sweep.

use crate::born::{born_coefficients, fourier_at_zero, fourier_series_eval, BornSeries, SeriesCoefficients};
use crate::error::{Error, Result};
use crate::forward::{dtn_spectrum, DtnSpectrum, EntryStatus};
use crate::potential::RadialPotential;
use crate::quad;
use crate::specfun::{ball_volume, gamma, nu_d, radial_weight, reduced_bessel};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Regularization parameter choice for the collocation backend.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ridge {
    /// Corner of the L-curve over a fixed 12-point grid.
    Lcurve,
    /// Fixed value, relative to the largest singular value. `0` means no ridge.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CollocationParams {
    pub cells: usize,
    pub r_min: f64,
    pub ridge: Ridge,
}

impl Default for CollocationParams {
    fn default() -> Self {
        CollocationParams { cells: 200, r_min: 0.01, ridge: Ridge::Lcurve }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HankelParams {
    /// Frequency cutoff `S`; `None` picks the largest certifiable one.
    pub cutoff: Option<f64>,
    /// Gaussian window width; `None` uses `1/S` (window `e^{−1/2}` at the cutoff).
    pub sigma: Option<f64>,
    pub nodes: usize,
    /// Admissible tail and rounding error per Fourier sample when choosing `S`.
    pub accuracy: f64,
    /// Upper end of the cutoff search.
    pub max_cutoff: f64,
}

impl Default for HankelParams {
    fn default() -> Self {
        HankelParams { cutoff: None, sigma: None, nodes: 10_000, accuracy: 1e-6, max_cutoff: 200.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Backend {
    WindowedHankel(HankelParams),
    MomentCollocation(CollocationParams),
}

impl Default for Backend {
    fn default() -> Self {
        Backend::MomentCollocation(CollocationParams::default())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    WindowedHankel { sigma: f64, cutoff: f64 },
    MomentCollocation { cells: usize, ridge: f64 },
}

/// Piecewise-constant function on `edges`, right-closed cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFunction {
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl CellFunction {
    fn index(&self, r: f64) -> usize {
        let n = self.values.len();
        self.edges[1..].partition_point(|&e| e < r).min(n - 1)
    }
}

/// Uniform evaluation grid on `[r_min, 1]`.
pub fn uniform_grid(r_min: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| r_min + (1.0 - r_min) * i as f64 / (n - 1) as f64).collect()
}

/// Sampled radial function on `(r_min, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub provenance: Provenance,
    /// `max` of `error_profile`.
    pub error_estimate: f64,
    pub error_profile: Vec<f64>,
    /// Underlying cell function for the collocation backend.
    pub cells: Option<CellFunction>,
    /// Largest moment mismatch of the collocation solution, in units of the averaged rows.
    pub moment_residual: Option<f64>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Invalid("empty grid".into()));
    }
    if !(grid[0] > 0.0) || grid[grid.len() - 1] > 1.0 {
        return Err(Error::Invalid("grid must lie in (0, 1]".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("grid must be strictly increasing".into()));
    }
    Ok(())
}

impl RadialProfile {
    pub fn value_at(&self, r: f64) -> f64 {
        if let Some(c) = &self.cells {
            return c.values[c.index(r)];
        }
        interp(&self.grid, &self.values, r)
    }

    pub fn error_at(&self, r: f64) -> f64 {
        if let Some(c) = &self.cells {
            return c.errors[c.index(r)];
        }
        interp(&self.grid, &self.error_profile, r)
    }

    /// Profile plus a constant.
    pub fn shifted(mut self, c: f64) -> RadialProfile {
        self.values.iter_mut().for_each(|v| *v += c);
        if let Some(cf) = &mut self.cells {
            cf.values.iter_mut().for_each(|v| *v += c);
        }
        self
    }

    fn edges(&self) -> Vec<f64> {
        match &self.cells {
            Some(c) => c.edges.clone(),
            None => self.grid.clone(),
        }
    }

    /// `‖p − q‖_{L¹(B^d)}`, extending the profile by its first value below the grid.
    pub fn l1_distance(&self, q: &RadialPotential, d: usize) -> Result<f64> {
        let mut edges = vec![0.0];
        edges.extend(self.edges().into_iter().chain(q.breakpoints()).filter(|&x| x > 0.0 && x < 1.0));
        edges.push(1.0);
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();
        let p = d as i32 - 1;
        let v = quad::adaptive_cells(|r| (self.value_at(r) - q.value(r)).abs() * r.powi(p), &edges, 1e-14, 1e-10)?;
        Ok(crate::specfun::sphere_area(d) * v.value)
    }

    /// `∫ p·(φ_ℓ(√κ r)/φ_ℓ(√κ))² r^{d−1} dr` over the profile's support, `ℓ = 0..=lmax`.
    pub fn normalized_moments(&self, d: usize, kappa: f64, lmax: usize) -> Result<Vec<f64>> {
        let edges = self.edges();
        let p = d as i32 - 1;
        (0..=lmax)
            .map(|ell| {
                let f = |r: f64| self.value_at(r) * radial_weight(ell, d, kappa, r) * r.powi(p);
                Ok(quad::adaptive_cells(f, &edges, 1e-300, 1e-12)?.value)
            })
            .collect()
    }

    /// Grid points of `self` inside `(a, b)`: largest difference to `other` and
    /// the largest combined error estimate there.
    pub fn compare_on(&self, other: &RadialProfile, a: f64, b: f64) -> (f64, f64) {
        let (mut diff, mut err) = (0.0_f64, 0.0_f64);
        for &r in self.grid.iter().filter(|&&r| r > a && r < b) {
            diff = diff.max((self.value_at(r) - other.value_at(r)).abs());
            err = err.max(self.error_at(r) + other.error_at(r));
        }
        (diff, err)
    }
}

fn interp(x: &[f64], y: &[f64], r: f64) -> f64 {
    let n = x.len();
    if r <= x[0] {
        return y[0];
    }
    if r >= x[n - 1] {
        return y[n - 1];
    }
    let i = x.partition_point(|&v| v <= r) - 1;
    let t = (r - x[i]) / (x[i + 1] - x[i]);
    y[i] + t * (y[i + 1] - y[i])
}

/// Invert a Born series into a radial profile of `q^B_κ` on `grid`.
///
/// Any coefficient sequence works: for moments of a function `f` the result
/// approximates `f` itself.
pub fn invert_profile<S: SeriesCoefficients + ?Sized>(series: &S, backend: &Backend, grid: &[f64]) -> Result<RadialProfile> {
    check_grid(grid)?;
    match backend {
        Backend::MomentCollocation(p) => collocation(series, p, grid),
        Backend::WindowedHankel(p) => hankel(series, p, grid),
    }
}

struct Filtered {
    z: DVector<f64>,
    residual: f64,
    norm: f64,
}

fn collocation<S: SeriesCoefficients + ?Sized>(series: &S, p: &CollocationParams, grid: &[f64]) -> Result<RadialProfile> {
    if p.cells == 0 || !(p.r_min > 0.0 && p.r_min < 1.0) {
        return Err(Error::Invalid("collocation needs cells > 0 and r_min in (0, 1)".into()));
    }
    let (d, kappa, m) = (series.dimension(), series.energy(), p.cells);
    let n = series.reduced().len();
    // normalized moments δ_ℓ = m_ℓ/H_ν(κ)² and their errors
    let h2: Vec<f64> = (0..n).map(|l| reduced_bessel(l as f64 + nu_d(d), kappa).powi(2)).collect();
    let delta: Vec<f64> = (0..n).map(|l| series.reduced()[l] / h2[l]).collect();
    let delta_err: Vec<f64> = (0..n).map(|l| series.reduced_error(l) / h2[l]).collect();
    let edges: Vec<f64> = (0..=m).map(|j| p.r_min + (1.0 - p.r_min) * j as f64 / m as f64).collect();
    let rule = quad::gl20();
    let pw = d as i32 - 1;
    // A_{ℓj} = ∫_{cell j} (φ_ℓ(√κ r)/φ_ℓ(√κ))² r^{d−1} dr
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|ell| {
            (0..m)
                .map(|j| {
                    rule.mapped(edges[j], edges[j + 1])
                        .map(|(r, w)| w * radial_weight(ell, d, kappa, r) * r.powi(pw))
                        .sum()
                })
                .collect()
        })
        .collect();
    let vol: Vec<f64> = (0..m).map(|j| (edges[j + 1].powi(d as i32) - edges[j].powi(d as i32)) / d as f64).collect();
    // each row becomes a weighted average of q^B; columns are scaled to the L²(B^d) norm
    let mut a = DMatrix::zeros(n, m);
    let mut b = DVector::zeros(n);
    for ell in 0..n {
        let s: f64 = rows[ell].iter().sum();
        if !(s > 0.0) {
            return Err(Error::IllConditioned { cond: f64::INFINITY });
        }
        for j in 0..m {
            a[(ell, j)] = rows[ell][j] / s / vol[j].sqrt();
        }
        b[ell] = delta[ell] / s;
    }
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let sig = &svd.singular_values;
    let smax = sig.max();
    let smin = sig.iter().cloned().fold(f64::INFINITY, f64::min);
    let beta = u.transpose() * &b;
    let outside = (&b - u * &beta).norm();
    let solve = |lam: f64| -> Filtered {
        let mut coef = DVector::zeros(sig.len());
        let mut res2 = outside * outside;
        for i in 0..sig.len() {
            let s = sig[i];
            if s <= 0.0 {
                res2 += beta[i] * beta[i];
                continue;
            }
            let f = s * s / (s * s + lam * lam);
            coef[i] = f * beta[i] / s;
            res2 += ((1.0 - f) * beta[i]).powi(2);
        }
        let z = vt.transpose() * &coef;
        let norm = z.norm();
        Filtered { z, residual: res2.sqrt(), norm }
    };
    let noise: Vec<f64> = (0..n).map(|ell| delta_err[ell] / rows[ell].iter().sum::<f64>()).collect();
    let (lam, sol) = match p.ridge {
        Ridge::Fixed(0.0) => {
            let cond = smax / smin;
            if !(cond <= 1e12) {
                return Err(Error::IllConditioned { cond });
            }
            (0.0, solve(0.0))
        }
        Ridge::Fixed(rel) => (rel * smax, solve(rel * smax)),
        Ridge::Lcurve => {
            let lams: Vec<f64> = (0..12).map(|i| smax * 10f64.powf(-12.0 + i as f64)).collect();
            let pts: Vec<(f64, f64)> = lams
                .iter()
                .map(|&l| {
                    let s = solve(l);
                    (s.residual.max(1e-300).ln(), s.norm.max(1e-300).ln())
                })
                .collect();
            let k = lcurve_corner(&pts);
            (lams[k], solve(lams[k]))
        }
    };
    // bias proxy: spread of the solutions from a decade weaker to two decades stronger ridge
    let lam_ref = if lam > 0.0 { lam } else { 1e-12 * smax };
    let neighbours: Vec<Filtered> = [1e-1, 10.0, 100.0].iter().map(|f| solve(f * lam_ref)).collect();
    // data errors taken as independent, 3σ, pointwise in the unscaled unknowns
    let mut kern = DMatrix::zeros(sig.len(), n);
    for i in 0..sig.len() {
        let s = sig[i];
        if s > 0.0 {
            let g = s / (s * s + lam * lam);
            for ell in 0..n {
                kern[(i, ell)] = g * u[(ell, i)] * noise[ell];
            }
        }
    }
    let prop = vt.transpose() * kern;
    let gain: Vec<f64> = (0..m).map(|j| 3.0 * prop.row(j).norm() / vol[j].sqrt()).collect();
    let to_values = |z: &DVector<f64>| -> Vec<f64> { (0..m).map(|j| z[j] / vol[j].sqrt()).collect() };
    let values = to_values(&sol.z);
    let mut errors = gain;
    let mut spread = vec![0.0_f64; m];
    for nb in &neighbours {
        let v = to_values(&nb.z);
        for j in 0..m {
            spread[j] = spread[j].max((v[j] - values[j]).abs());
        }
    }
    errors.iter_mut().zip(&spread).for_each(|(e, s)| *e += s);
    let xv = DVector::from_iterator(m, (0..m).map(|j| values[j] * vol[j].sqrt()));
    let resid = (&a * xv - &b).amax();
    for e in errors.iter_mut() {
        *e += resid;
    }
    let cells = CellFunction { edges, values, errors };
    let mut out = RadialProfile {
        grid: grid.to_vec(),
        values: Vec::new(),
        provenance: Provenance::MomentCollocation { cells: m, ridge: lam },
        error_estimate: 0.0,
        error_profile: Vec::new(),
        cells: Some(cells),
        moment_residual: Some(resid),
    };
    out.values = grid.iter().map(|&r| out.value_at(r)).collect();
    out.error_profile = grid.iter().map(|&r| out.error_at(r)).collect();
    out.error_estimate = out.error_profile.iter().cloned().fold(0.0, f64::max);
    Ok(out)
}

/// Index of the largest convex Menger curvature among interior points,
/// points ordered by increasing ridge.
fn lcurve_corner(pts: &[(f64, f64)]) -> usize {
    let mut best = (pts.len() / 2, f64::NEG_INFINITY);
    for i in 1..pts.len() - 1 {
        let (p, q, r) = (pts[i - 1], pts[i], pts[i + 1]);
        let cross = (q.0 - p.0) * (r.1 - q.1) - (q.1 - p.1) * (r.0 - q.0);
        let l = ((q.0 - p.0).hypot(q.1 - p.1)) * ((r.0 - q.0).hypot(r.1 - q.1)) * ((r.0 - p.0).hypot(r.1 - p.1));
        if l > 0.0 {
            let k = 2.0 * cross / l;
            if k > best.1 {
                best = (i, k);
            }
        }
    }
    best.0
}

/// Largest `S` on a unit grid such that every sample up to `S` has tail and
/// rounding bounds below `accuracy`.
pub fn certified_cutoff<S: SeriesCoefficients + ?Sized>(series: &S, accuracy: f64, max_cutoff: f64) -> f64 {
    let scale = fourier_at_zero(series).abs().max(1.0);
    let mut last = 0.0;
    let mut s = 0.5;
    while s <= max_cutoff {
        match fourier_series_eval(series, s, None) {
            Ok(v) if v.tail_bound + v.rounding <= accuracy * scale => last = s,
            _ => break,
        }
        s += 0.5;
    }
    last
}

fn hankel_once<S: SeriesCoefficients + ?Sized>(series: &S, grid: &[f64], cutoff: f64, sigma: f64, nodes: usize) -> Result<Vec<f64>> {
    let d = series.dimension();
    let nu = nu_d(d);
    let panels = (nodes / 20).max(1);
    let rule = quad::gl20();
    let h = cutoff / panels as f64;
    let pts: Vec<(f64, f64)> = (0..panels)
        .flat_map(|k| rule.mapped(k as f64 * h, (k + 1) as f64 * h).collect::<Vec<_>>())
        .collect();
    let samples: Vec<Result<f64>> = pts
        .par_iter()
        .map(|&(s, w)| {
            let f = fourier_series_eval(series, s, None)?.value;
            Ok(w * f * (-0.5 * sigma * sigma * s * s).exp() * s.powf(2.0 * nu + 1.0))
        })
        .collect();
    let samples: Vec<f64> = samples.into_iter().collect::<Result<_>>()?;
    // r^{−ν} J_ν(rs) s^{ν+1} = s^{2ν+1} 2^{−ν} H_ν((rs)²)/Γ(ν+1)
    let c = (2.0 * PI).powf(-(d as f64) / 2.0) * 2f64.powf(-nu) / gamma(nu + 1.0);
    let vals = grid
        .par_iter()
        .map(|&r| {
            let mut acc = 0.0;
            for (k, &(s, _)) in pts.iter().enumerate() {
                acc += samples[k] * reduced_bessel(nu, (r * s).powi(2));
            }
            c * acc
        })
        .collect();
    Ok(vals)
}

fn hankel<S: SeriesCoefficients + ?Sized>(series: &S, p: &HankelParams, grid: &[f64]) -> Result<RadialProfile> {
    let cutoff = match p.cutoff {
        Some(s) => s,
        None => certified_cutoff(series, p.accuracy, p.max_cutoff),
    };
    if !(cutoff >= 2.0) {
        return Err(Error::NonConvergence {
            what: "windowed Hankel inversion",
            detail: format!("no certifiable frequency range (cutoff {cutoff})"),
        });
    }
    let sigma = p.sigma.unwrap_or(1.0 / cutoff);
    let fine = hankel_once(series, grid, cutoff, sigma, p.nodes)?;
    let coarse = hankel_once(series, grid, 0.5 * cutoff, 2.0 * sigma, p.nodes)?;
    let error_profile: Vec<f64> = fine.iter().zip(&coarse).map(|(a, b)| (a - b).abs()).collect();
    if fine.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence { what: "windowed Hankel inversion", detail: "non-finite profile".into() });
    }
    Ok(RadialProfile {
        grid: grid.to_vec(),
        values: fine,
        provenance: Provenance::WindowedHankel { sigma, cutoff },
        error_estimate: error_profile.iter().cloned().fold(0.0, f64::max),
        error_profile,
        cells: None,
        moment_residual: None,
    })
}

/// Trace of the zero-mass fixed-point iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaStarResult {
    pub kappa_star: f64,
    pub iterates: Vec<f64>,
    /// `|F(q+κ_n)^B_{κ_n}(0)|` at each iterate.
    pub residuals: Vec<f64>,
    pub converged: bool,
    /// Iterates moved off a free Dirichlet eigenvalue.
    pub perturbed: Vec<usize>,
}

fn series_at(spec0: &DtnSpectrum, kappa: f64) -> Result<BornSeries> {
    let s = spec0.at_energy(kappa)?;
    if s.status.contains(&EntryStatus::NearDirichletPole) {
        return Err(Error::DirichletPole { ell: 0, kappa, radius: 1.0 });
    }
    born_coefficients(&s)
}

/// `κ_{n+1} = κ_n − F(q+κ_n)^B_{κ_n}(0)/|B^d|`, from the spectrum at `κ = 0` only.
///
/// Running out of iterations is reported through `converged = false`.
pub fn kappa_star(spec0: &DtnSpectrum, tol: f64, max_iter: usize) -> Result<KappaStarResult> {
    if spec0.kappa != 0.0 {
        return Err(Error::Invalid(format!("spectrum must be taken at kappa = 0, got {}", spec0.kappa)));
    }
    let vol = ball_volume(spec0.d);
    let mut kappa = 0.0_f64;
    let mut out = KappaStarResult { kappa_star: 0.0, iterates: vec![], residuals: vec![], converged: false, perturbed: vec![] };
    for n in 0..max_iter {
        let mut series = series_at(spec0, kappa);
        let mut tries = 0;
        while matches!(series, Err(Error::DirichletPole { .. })) && tries < 8 {
            kappa += tol.max(1e-10) * (1 << tries) as f64;
            series = series_at(spec0, kappa);
            tries += 1;
            if !out.perturbed.contains(&n) {
                out.perturbed.push(n);
            }
        }
        let f0 = fourier_at_zero(&series?);
        out.iterates.push(kappa);
        out.residuals.push(f0.abs());
        let next = kappa - f0 / vol;
        if !next.is_finite() {
            return Err(Error::NonConvergence { what: "kappa_star", detail: format!("iterate {n} not finite") });
        }
        let step = (next - kappa).abs();
        kappa = next;
        if step < tol {
            out.converged = true;
            break;
        }
    }
    out.kappa_star = kappa;
    Ok(out)
}

/// Energy used by [`approximate_potential`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaChoice {
    Given(f64),
    /// `−q(1⁻)`; needs the potential.
    Boundary,
    /// `−(sup q + inf q)/2`; needs the potential.
    Midrange,
    Star,
}

/// Output of [`approximate_potential`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Approximation {
    pub kappa: f64,
    /// `−κ + (q+κ)^B_κ`.
    pub profile: RadialProfile,
    /// The energy came from the (normally unknown) potential.
    pub oracle_assisted: bool,
    pub kappa_star: Option<KappaStarResult>,
}

/// `−κ + (q+κ)^B_κ` from the spectrum at zero energy.
pub fn approximate_potential(
    spec0: &DtnSpectrum,
    q: Option<&RadialPotential>,
    choice: KappaChoice,
    backend: &Backend,
    grid: &[f64],
    star_tol: f64,
) -> Result<Approximation> {
    let need_q = || q.ok_or_else(|| Error::Invalid("this energy choice needs the potential".into()));
    let (kappa, oracle, star) = match choice {
        KappaChoice::Given(k) => (k, false, None),
        KappaChoice::Boundary => (-need_q()?.boundary_value(), true, None),
        KappaChoice::Midrange => {
            let (lo, hi) = need_q()?.range();
            (-(lo + hi) / 2.0, true, None)
        }
        KappaChoice::Star => {
            let ks = kappa_star(spec0, star_tol, 100)?;
            if !ks.converged {
                return Err(Error::NonConvergence { what: "kappa_star", detail: format!("{} iterates", ks.iterates.len()) });
            }
            (ks.kappa_star, false, Some(ks))
        }
    };
    let series = if kappa == spec0.kappa { born_coefficients(spec0)? } else { series_at(spec0, kappa)? };
    let profile = invert_profile(&series, backend, grid)?.shifted(-kappa);
    Ok(Approximation { kappa, profile, oracle_assisted: oracle, kappa_star: star })
}

/// `F f(|ξ| = s) = (2π)^{d/2} s^{−ν} ∫₀¹ f(r) J_ν(rs) r^{d/2} dr` by quadrature.
pub fn radial_fourier(q: &RadialPotential, d: usize, s: f64) -> Result<f64> {
    let nu = nu_d(d);
    let c = (2.0 * PI).powf(d as f64 / 2.0) * 2f64.powf(-nu) / gamma(nu + 1.0);
    let p = d as i32 - 1;
    let mut edges = q.cell_edges();
    // resolve oscillations
    let pieces = (s / 4.0).ceil() as usize;
    if pieces > 1 {
        let mut fine = Vec::new();
        for w in edges.windows(2) {
            for k in 0..pieces {
                fine.push(w[0] + (w[1] - w[0]) * k as f64 / pieces as f64);
            }
        }
        fine.push(1.0);
        edges = fine;
    }
    let f = |r: f64| q.value(r) * r.powi(p) * reduced_bessel(nu, (r * s).powi(2));
    Ok(c * quad::adaptive_cells(f, &edges, 1e-14, 1e-12)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepStatus {
    Certified,
    TailNotCertified,
    PrecisionLoss,
}

/// One energy of [`high_energy_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa: f64,
    /// `sup_ξ |F q^B_κ(ξ) − F q(ξ)|` over the grid.
    pub sup_error: f64,
    pub max_tail: f64,
    pub max_rounding: f64,
    pub status: SweepStatus,
}

/// Fourier-side distance between `q^B_κ` and `q` along a list of energies.
pub fn high_energy_sweep(
    q: &RadialPotential,
    d: usize,
    kappas: &[f64],
    xi_grid: &[f64],
    lmax: usize,
    tol: f64,
) -> Result<Vec<SweepRow>> {
    let sup = q.sup_norm();
    if let Some(&k) = kappas.iter().find(|&&k| k > -sup) {
        return Err(Error::Domain(format!("energy {k} above -sup|q| = {}", -sup)));
    }
    let exact: Vec<f64> = xi_grid.iter().map(|&s| radial_fourier(q, d, s)).collect::<Result<_>>()?;
    kappas
        .par_iter()
        .map(|&kappa| {
            let spec = dtn_spectrum(q, d, kappa, lmax, tol, None)?;
            let series = born_coefficients(&spec)?;
            let mut row = SweepRow { kappa, sup_error: 0.0, max_tail: 0.0, max_rounding: 0.0, status: SweepStatus::Certified };
            for (k, &s) in xi_grid.iter().enumerate() {
                let v = fourier_series_eval(&series, s, None)?;
                row.sup_error = row.sup_error.max((v.value - exact[k]).abs());
                row.max_tail = row.max_tail.max(v.tail_bound);
                row.max_rounding = row.max_rounding.max(v.rounding);
            }
            // the error is only meaningful if it dominates the evaluation budget
            if !(row.max_tail <= 0.1 * row.sup_error) && row.max_tail > 1e-12 {
                row.status = SweepStatus::TailNotCertified;
            }
            if !(row.max_rounding <= 0.1 * row.sup_error) && row.max_rounding > 1e-12 {
                row.status = SweepStatus::PrecisionLoss;
            }
            Ok(row)
        })
        .collect()
}

/// Comparison of two Born profiles inside and outside a radius `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub b: f64,
    pub guard: f64,
    pub kappa: f64,
    /// Over grid points in `(b + guard, 1)`.
    pub outer_diff: f64,
    pub outer_error: f64,
    pub agree_outside: bool,
    /// Over grid points in `(0, b − guard)`.
    pub inner_diff: f64,
    pub inner_error: f64,
    pub differ_inside: bool,
    pub profiles: [RadialProfile; 2],
}

/// Born profiles of two potentials that agree on `{b < r < 1}`.
#[allow(clippy::too_many_arguments)]
pub fn locality_check(
    q1: &RadialPotential,
    q2: &RadialPotential,
    b: f64,
    d: usize,
    kappa: f64,
    lmax: usize,
    tol: f64,
    backend: &Backend,
    grid: &[f64],
    guard: f64,
) -> Result<LocalityReport> {
    let profile = |q: &RadialPotential| -> Result<RadialProfile> {
        let spec = dtn_spectrum(q, d, kappa, lmax, tol, None)?;
        invert_profile(&born_coefficients(&spec)?, backend, grid)
    };
    Ok(compare_profiles(profile(q1)?, profile(q2)?, b, kappa, guard))
}

/// Locality comparison of two already reconstructed profiles.
pub fn compare_profiles(p1: RadialProfile, p2: RadialProfile, b: f64, kappa: f64, guard: f64) -> LocalityReport {
    let (outer_diff, outer_error) = p1.compare_on(&p2, b + guard, 1.0 + 1e-12);
    let (inner_diff, inner_error) = p1.compare_on(&p2, 0.0, b - guard);
    LocalityReport {
        b,
        guard,
        kappa,
        outer_diff,
        outer_error,
        agree_outside: outer_diff <= outer_error,
        inner_diff,
        inner_error,
        differ_inside: inner_diff > inner_error,
        profiles: [p1, p2],
    }
}
