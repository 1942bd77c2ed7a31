//! Forward map: DtN eigenvalues `λ_ℓ[q,κ]` of `−Δ + q − κ` on the unit ball.
//!
//! The radial solution `b_ℓ` is tracked through its log-derivative
//! `u = r b′/b`, integrated in `s = ln r`:
//! `du/ds = −u² + (2−d)u + ℓ(ℓ+d−2) + r²(q(r) − κ)`.
//! Where `b_ℓ` has an interior zero the solver switches to `v = 1/u`.

use crate::born::normalized_moment;
use crate::error::{Error, Result};
use crate::ode::{integrate, Outcome, Tolerances};
use crate::potential::{HalfLinePotential, RadialPotential};
use crate::specfun::{bessel_ratio, bessel_zero, nu_d};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Inner cutoff for the Frobenius start.
pub const INNER_CUTOFF: f64 = 1e-6;

pub const SOLVER_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryStatus {
    #[serde(rename = "OK")]
    Ok,
    NearDirichletPole,
    LinearizedTail,
}

impl std::fmt::Display for EntryStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EntryStatus::Ok => "OK",
            EntryStatus::NearDirichletPole => "NearDirichletPole",
            EntryStatus::LinearizedTail => "LinearizedTail",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub tol: f64,
    pub inner_cutoff: f64,
    pub linearize_from: Option<usize>,
    pub version: String,
}

/// DtN eigenvalues for `ℓ = 0..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtnSpectrum {
    pub d: usize,
    pub kappa: f64,
    pub lambda: Vec<f64>,
    pub lambda_free: Vec<f64>,
    /// `λ_ℓ[q,κ] − λ_ℓ[0,κ]`, computed directly where available.
    pub delta: Vec<f64>,
    /// Estimated absolute error of each `delta` entry.
    pub error: Vec<f64>,
    pub status: Vec<EntryStatus>,
    pub meta: SolverMeta,
}

impl DtnSpectrum {
    pub fn lmax(&self) -> usize {
        self.lambda.len() - 1
    }

    /// Read the same eigenvalues as a spectrum at energy `kappa`.
    ///
    /// `−Δ + q` and `−Δ + (q+κ) − κ` coincide, so `λ_ℓ[q,0] = λ_ℓ[q+κ,κ]`: only
    /// the free reference changes.
    pub fn at_energy(&self, kappa: f64) -> Result<DtnSpectrum> {
        let mut lambda_free = Vec::with_capacity(self.lambda.len());
        let mut status = Vec::with_capacity(self.lambda.len());
        for ell in 0..self.lambda.len() {
            lambda_free.push(dtn_free(ell, self.d, kappa)?);
            status.push(pole_status(ell, self.d, kappa));
        }
        let delta = self.lambda.iter().zip(&lambda_free).map(|(a, b)| a - b).collect();
        let error = (0..self.lambda.len())
            .map(|l| self.error[l] + 4.0 * f64::EPSILON * (self.lambda[l].abs() + lambda_free[l].abs()))
            .collect();
        Ok(DtnSpectrum {
            d: self.d,
            kappa,
            lambda: self.lambda.clone(),
            lambda_free,
            delta,
            error,
            status,
            meta: self.meta.clone(),
        })
    }

    /// First `L+1` entries.
    pub fn truncated(&self, lmax: usize) -> DtnSpectrum {
        let n = (lmax + 1).min(self.lambda.len());
        DtnSpectrum {
            d: self.d,
            kappa: self.kappa,
            lambda: self.lambda[..n].to_vec(),
            lambda_free: self.lambda_free[..n].to_vec(),
            delta: self.delta[..n].to_vec(),
            error: self.error[..n].to_vec(),
            status: self.status[..n].to_vec(),
            meta: self.meta.clone(),
        }
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    Ok(())
}

fn pole_scale(ell: usize, kappa: f64) -> f64 {
    1.0 + ell as f64 + kappa.abs()
}

fn pole_status(ell: usize, d: usize, kappa: f64) -> EntryStatus {
    let r = bessel_ratio(ell as f64 + nu_d(d), kappa);
    if r.abs() > 1e3 * pole_scale(ell, kappa) {
        EntryStatus::NearDirichletPole
    } else {
        EntryStatus::Ok
    }
}

/// Free eigenvalue `λ_ℓ[0,κ] = ℓ − √κ J_{ℓ+ν+1}(√κ)/J_{ℓ+ν}(√κ)`.
///
/// One continued fraction in `κ` covers both signs; for `κ < 0` it equals
/// `ℓ + √|κ| I_{ℓ+ν+1}(√|κ|)/I_{ℓ+ν}(√|κ|)`.
pub fn dtn_free(ell: usize, d: usize, kappa: f64) -> Result<f64> {
    check_dim(d)?;
    if kappa == 0.0 {
        return Ok(ell as f64);
    }
    let r = bessel_ratio(ell as f64 + nu_d(d), kappa);
    if !r.is_finite() || r.abs() > 1e8 * pole_scale(ell, kappa) {
        return Err(Error::DirichletPole { ell, kappa, radius: 1.0 });
    }
    Ok(ell as f64 - r)
}

/// Evaluate `q` strictly inside the cell `[lo, hi]` so breakpoint values never leak across.
#[derive(Clone, Copy)]
struct Cell {
    lo: f64,
    hi: f64,
}

impl Cell {
    fn clamp(&self, r: f64) -> f64 {
        let a = self.lo + 1e-13 * self.lo.max(1e-300);
        let b = self.hi * (1.0 - 1e-13);
        r.clamp(a, b.max(a))
    }
}

fn radial_cells(q: &RadialPotential, eps: f64) -> Vec<Cell> {
    let mut edges = vec![eps];
    edges.extend(q.breakpoints().into_iter().filter(|&b| b > eps * (1.0 + 1e-9)));
    edges.push(1.0);
    edges.dedup();
    edges.windows(2).map(|w| Cell { lo: w[0], hi: w[1] }).collect()
}

fn switch_threshold(q: &RadialPotential, ell: usize, d: usize, kappa: f64) -> f64 {
    10.0 * (ell + d) as f64 + 10.0 * (q.sup_norm() + kappa.abs()).sqrt() + 10.0
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    LogDerivative,
    Inverse,
}

/// `u(1)` for one ODE tolerance; `Ok(None)` means `b_ℓ(1)` vanishes numerically.
fn riccati_endpoint(
    q: &RadialPotential,
    ell: usize,
    d: usize,
    kappa: f64,
    eps: f64,
    rtol: f64,
) -> Result<Option<f64>> {
    let c = (ell * (ell + d - 2)) as f64;
    let a = 2.0 - d as f64;
    let big = switch_threshold(q, ell, d, kappa);
    let tol = Tolerances::new(rtol, rtol * 1e-2);
    let qe = q.value(eps);
    let mut x = ell as f64 + eps * eps * (qe - kappa) / (2 * ell + d) as f64;
    let mut mode = Mode::LogDerivative;
    for cell in radial_cells(q, eps) {
        let (sa, sb) = (cell.lo.ln(), cell.hi.ln());
        let mut s0 = sa;
        loop {
            let pot = |s: f64| {
                let r = s.exp();
                r * r * (q.value(cell.clamp(r)) - kappa)
            };
            let out = match mode {
                Mode::LogDerivative => integrate(
                    |s, y: &[f64; 1]| [-y[0] * y[0] + a * y[0] + c + pot(s)],
                    s0,
                    sb,
                    [x],
                    tol,
                    |_, y| y[0].abs() > big,
                )?,
                Mode::Inverse => integrate(
                    |s, y: &[f64; 1]| [1.0 - a * y[0] - (c + pot(s)) * y[0] * y[0]],
                    s0,
                    sb,
                    [x],
                    tol,
                    |_, y| y[0].abs() > 2.0 / big,
                )?,
            };
            match out {
                Outcome::Done(y) => {
                    x = y[0];
                    break;
                }
                Outcome::Stopped(s, y) => {
                    x = 1.0 / y[0];
                    s0 = s;
                    mode = if mode == Mode::LogDerivative {
                        Mode::Inverse
                    } else {
                        Mode::LogDerivative
                    };
                }
            }
        }
    }
    Ok(match mode {
        Mode::LogDerivative => Some(x),
        Mode::Inverse => {
            if x.abs() < 1.0 / (1e8 * pole_scale(ell, kappa)) {
                None
            } else {
                Some(1.0 / x)
            }
        }
    })
}

fn ode_rtol(tol: f64) -> f64 {
    (tol * 1e-2).clamp(1e-13, 1e-9)
}

/// `λ_ℓ[q,κ]` from the Riccati equation, checked against a run at 16× tighter tolerance.
pub fn dtn_eigenvalue(
    q: &RadialPotential,
    ell: usize,
    d: usize,
    kappa: f64,
    tol: f64,
) -> Result<(f64, EntryStatus)> {
    dtn_eigenvalue_with_cutoff(q, ell, d, kappa, tol, INNER_CUTOFF)
}

/// As [`dtn_eigenvalue`] with an explicit inner cutoff `ε`.
pub fn dtn_eigenvalue_with_cutoff(
    q: &RadialPotential,
    ell: usize,
    d: usize,
    kappa: f64,
    tol: f64,
    eps: f64,
) -> Result<(f64, EntryStatus)> {
    eigenvalue_and_error(q, ell, d, kappa, tol, eps).map(|(v, s, _)| (v, s))
}

/// Value, status and the difference between the two certification runs.
fn eigenvalue_and_error(
    q: &RadialPotential,
    ell: usize,
    d: usize,
    kappa: f64,
    tol: f64,
    eps: f64,
) -> Result<(f64, EntryStatus, f64)> {
    check_dim(d)?;
    q.validate()?;
    let rt = ode_rtol(tol);
    let coarse = riccati_endpoint(q, ell, d, kappa, eps, rt)?;
    let fine = riccati_endpoint(q, ell, d, kappa, eps, rt / 16.0)?;
    let (Some(c), Some(f)) = (coarse, fine) else {
        return Err(Error::DirichletPole { ell, kappa, radius: 1.0 });
    };
    if (f - c).abs() > tol * f.abs().max(1.0) {
        return Err(Error::NonConvergence {
            what: "Riccati integration",
            detail: format!("l = {ell}: runs differ by {:e}", (f - c).abs()),
        });
    }
    let status = if f.abs() > 1e3 * pole_scale(ell, kappa) {
        EntryStatus::NearDirichletPole
    } else {
        EntryStatus::Ok
    };
    Ok((f, status, (f - c).abs() + 16.0 * f64::EPSILON * f.abs()))
}

/// `w(1)` for the difference variable `w = u_q − u_0`; `Ok(None)` if `u_q` blows up.
fn difference_endpoint(
    q: &RadialPotential,
    ell: usize,
    d: usize,
    kappa: f64,
    rtol: f64,
) -> Result<Option<f64>> {
    let eps = INNER_CUTOFF;
    let a = 2.0 - d as f64;
    let nu = ell as f64 + nu_d(d);
    let big = switch_threshold(q, ell, d, kappa);
    let tol = Tolerances::new(rtol, 1e-30);
    let mut w = eps * eps * q.value(eps) / (2 * ell + d) as f64;
    for cell in radial_cells(q, eps) {
        let rhs = |s: f64, y: &[f64; 1]| {
            let r = s.exp();
            let r2 = r * r;
            let u0 = ell as f64 - bessel_ratio(nu, kappa * r2);
            [(a - 2.0 * u0 - y[0]) * y[0] + r2 * q.value(cell.clamp(r))]
        };
        match integrate(rhs, cell.lo.ln(), cell.hi.ln(), [w], tol, |_, y| y[0].abs() > big)? {
            Outcome::Done(y) => w = y[0],
            Outcome::Stopped(..) => return Ok(None),
        }
    }
    Ok(Some(w))
}

/// `δ_ℓ = λ_ℓ[q,κ] − λ_ℓ[0,κ]` without forming the two eigenvalues.
///
/// Falls back to the difference of [`dtn_eigenvalue`] and [`dtn_free`] when
/// the free solution or `b_ℓ` has a zero inside the ball.
pub fn dtn_difference(q: &RadialPotential, ell: usize, d: usize, kappa: f64, tol: f64) -> Result<f64> {
    dtn_difference_with_error(q, ell, d, kappa, tol).map(|(v, _)| v)
}

/// [`dtn_difference`] together with an estimate of its absolute error.
pub fn dtn_difference_with_error(
    q: &RadialPotential,
    ell: usize,
    d: usize,
    kappa: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    check_dim(d)?;
    q.validate()?;
    let nu = ell as f64 + nu_d(d);
    let free_has_node = kappa > 0.0 && kappa.sqrt() >= bessel_zero(nu, 1) * (1.0 - 1e-12);
    let free = dtn_free(ell, d, kappa)?;
    let subtract = || -> Result<(f64, f64)> {
        let (v, _, e) = eigenvalue_and_error(q, ell, d, kappa, tol, INNER_CUTOFF)?;
        Ok((v - free, e + 4.0 * f64::EPSILON * (v.abs() + free.abs())))
    };
    if free_has_node {
        return subtract();
    }
    let rt = ode_rtol(tol);
    let coarse = difference_endpoint(q, ell, d, kappa, rt)?;
    let fine = difference_endpoint(q, ell, d, kappa, rt / 16.0)?;
    let (Some(c), Some(f)) = (coarse, fine) else {
        return subtract();
    };
    let floor = 1e-3 * q.sup_norm() / (2 * ell + d) as f64;
    if (f - c).abs() > tol * (f.abs() + floor) {
        return Err(Error::NonConvergence {
            what: "difference Riccati integration",
            detail: format!("l = {ell}: runs differ by {:e}", (f - c).abs()),
        });
    }
    Ok((f, (f - c).abs() + 16.0 * f64::EPSILON * f.abs()))
}

/// Error bound `‖q‖²/(2(ℓ+ν)((ℓ+ν)² − ‖q‖ − κ))` between `δ_ℓ` and the
/// normalized moment, valid for `κ ≤ −‖q‖_∞`.
pub fn linearization_bound(sup_q: f64, ell: usize, d: usize, kappa: f64) -> f64 {
    let m = ell as f64 + nu_d(d);
    let den = 2.0 * m * (m * m - sup_q - kappa);
    if den <= 0.0 {
        f64::INFINITY
    } else {
        sup_q * sup_q / den
    }
}

/// Batch driver for `ℓ = 0..=lmax`.
///
/// With `linearize_from = Some(ℓc)`, entries `ℓ ≥ ℓc` whose linearization
/// bound is below `tol` use the normalized moment instead of the ODE
/// (status `LinearizedTail`); only possible for `κ ≤ −‖q‖_∞`.
pub fn dtn_spectrum(
    q: &RadialPotential,
    d: usize,
    kappa: f64,
    lmax: usize,
    tol: f64,
    linearize_from: Option<usize>,
) -> Result<DtnSpectrum> {
    check_dim(d)?;
    q.validate()?;
    let sup = q.sup_norm();
    let entries: Vec<Result<(f64, f64, f64, EntryStatus)>> = (0..=lmax)
        .into_par_iter()
        .map(|ell| {
            let free = dtn_free(ell, d, kappa)?;
            let mut status = pole_status(ell, d, kappa);
            let linearize = matches!(linearize_from, Some(c) if ell >= c)
                && kappa <= -sup
                && linearization_bound(sup, ell, d, kappa) <= tol;
            let (delta, err) = if linearize {
                status = EntryStatus::LinearizedTail;
                (normalized_moment(q, ell, d, kappa)?, linearization_bound(sup, ell, d, kappa))
            } else {
                dtn_difference_with_error(q, ell, d, kappa, tol)?
            };
            Ok((free, delta, err, status))
        })
        .collect();
    let mut spec = DtnSpectrum {
        d,
        kappa,
        lambda: Vec::with_capacity(lmax + 1),
        lambda_free: Vec::with_capacity(lmax + 1),
        delta: Vec::with_capacity(lmax + 1),
        error: Vec::with_capacity(lmax + 1),
        status: Vec::with_capacity(lmax + 1),
        meta: SolverMeta {
            tol,
            inner_cutoff: INNER_CUTOFF,
            linearize_from,
            version: SOLVER_VERSION.to_string(),
        },
    };
    for e in entries {
        let (free, delta, err, status) = e?;
        spec.lambda.push(free + delta);
        spec.lambda_free.push(free);
        spec.delta.push(delta);
        spec.error.push(err);
        spec.status.push(status);
    }
    Ok(spec)
}

/// Smallest `ℓ` at which the linearization bound, scaled by `|φ_ℓ(√κ)²|`,
/// drops below `1e−14·|c₀|`; `None` if `κ > −‖q‖_∞` or no such `ℓ ≤ lmax`.
pub fn default_linearize_cutoff(
    q: &RadialPotential,
    d: usize,
    kappa: f64,
    lmax: usize,
    c0: f64,
) -> Option<usize> {
    let sup = q.sup_norm();
    if kappa > -sup {
        return None;
    }
    (0..=lmax).find(|&ell| {
        let phi2 = crate::specfun::phi_squared(ell, d, kappa, 1.0).map(f64::abs).unwrap_or(f64::INFINITY);
        linearization_bound(sup, ell, d, kappa) * phi2 < 1e-14 * c0.abs()
    })
}

/// Weyl–Titchmarsh function `m_Q(−z²)` of the half-line problem
/// `−v″ + Q v = −z² v`, from the decaying condition `v′(T) = −z v(T)`
/// integrated back to `t = 0`. Checked by repeating with `2T`.
pub fn m_function(qh: &HalfLinePotential, z: f64, t_max: f64, tol: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain(format!("m_function needs z > 0, got {z}")));
    }
    if !(t_max > 0.0) {
        return Err(Error::Domain(format!("truncation length {t_max} must be positive")));
    }
    let a = m_function_once(qh, z, t_max)?;
    let b = m_function_once(qh, z, 2.0 * t_max)?;
    if (a - b).abs() > tol * b.abs().max(1.0) {
        return Err(Error::NonConvergence {
            what: "m-function truncation",
            detail: format!("T = {t_max} and 2T differ by {:e}", (a - b).abs()),
        });
    }
    Ok(b)
}

fn m_function_once(qh: &HalfLinePotential, z: f64, t_max: f64) -> Result<f64> {
    let mut edges = vec![0.0];
    edges.extend(qh.breakpoints().into_iter().filter(|&t| t > 0.0 && t < t_max));
    edges.push(t_max);
    let tol = Tolerances::new(1e-12, 1e-14);
    let z2 = z * z;
    let mut y = -z;
    for w in edges.windows(2).rev() {
        let cell = Cell { lo: (-w[1]).exp(), hi: (-w[0]).exp() };
        let rhs = |t: f64, v: &[f64; 1]| {
            let r = cell.clamp((-t).exp());
            [r * r * (qh.source.value(r) - qh.kappa) + z2 - v[0] * v[0]]
        };
        match integrate(rhs, w[1], w[0], [y], tol, |_, _| false)? {
            Outcome::Done(v) => y = v[0],
            Outcome::Stopped(..) => unreachable!(),
        }
    }
    Ok(y)
}
