//! Special functions: real-order Bessel functions, the entire function
//! `φ_ℓ(z) = J_{ℓ+ν}(z)/z^ν` (with `ν = (d−2)/2`), generalized Legendre
//! polynomials and zonal functions.

mod bessel;
mod gamma;
mod legendre;

pub use bessel::{bessel_i, bessel_j, bessel_ratio, bessel_zero, reduced_bessel};
pub use gamma::{gamma, ln_gamma};
pub use legendre::{
    ball_volume, dim_spherical, dim_spherical_f64, homogeneous_legendre, legendre_p, sphere_area,
    zonal, Scaled,
};

use crate::error::{Error, Result};

/// `ν_d = (d−2)/2`.
pub fn nu_d(d: usize) -> f64 {
    (d as f64 - 2.0) / 2.0
}

/// `ln(1 / (4^ν Γ(ν+1)²))` with `ν = ℓ + ν_d`; the κ-free size of `φ_ℓ²/(κ r²)^ℓ`.
pub fn ln_phi_sq_scale(ell: usize, d: usize) -> f64 {
    let nu = ell as f64 + nu_d(d);
    -2.0 * (nu * std::f64::consts::LN_2 + ln_gamma(nu + 1.0))
}

/// Real-valued `φ_ℓ(√κ r)`.
///
/// For `κ ≥ 0` this is `J_{ℓ+ν}(√κ r)/(√κ r)^ν`. For `κ < 0` the value with
/// `√κ = i√|κ|` is `i^ℓ` times a real number; the real factor is returned, so
/// odd `ℓ` lose the phase. Anything quadratic in `φ_ℓ` should go through
/// [`phi_squared`], which is exact for every sign of κ.
pub fn phi(ell: usize, d: usize, kappa: f64, r: f64) -> Result<f64> {
    check_args(d, r)?;
    let nu = ell as f64 + nu_d(d);
    let h = reduced_bessel(nu, kappa * r * r);
    let x = (kappa.abs()).sqrt() * r;
    if x == 0.0 {
        return Ok(if ell == 0 { (0.5 * ln_phi_sq_scale(0, d)).exp() } else { 0.0 });
    }
    let ln_pref = ell as f64 * x.ln() + 0.5 * ln_phi_sq_scale(ell, d);
    let v = h * ln_pref.exp();
    if !v.is_finite() {
        return Err(Error::Overflow { ell, kappa, r });
    }
    Ok(v)
}

/// `φ_ℓ(√κ r)²`, real for all real κ (carries the sign `(−1)^ℓ` when κ < 0).
pub fn phi_squared(ell: usize, d: usize, kappa: f64, r: f64) -> Result<f64> {
    let v = phi(ell, d, kappa, r)?;
    let sq = v * v;
    if !sq.is_finite() {
        return Err(Error::Overflow { ell, kappa, r });
    }
    Ok(if kappa < 0.0 && ell % 2 == 1 { -sq } else { sq })
}

/// `(φ_ℓ(√κ r)/φ_ℓ(√κ))²`, the normalized radial free solution squared.
/// Finite whenever `φ_ℓ(√κ) ≠ 0`, no under/overflow for large ℓ.
pub fn radial_weight(ell: usize, d: usize, kappa: f64, r: f64) -> f64 {
    let nu = ell as f64 + nu_d(d);
    let ratio = reduced_bessel(nu, kappa * r * r) / reduced_bessel(nu, kappa);
    r.powi(2 * ell as i32) * ratio * ratio
}

fn check_args(d: usize, r: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension d = {d} must be at least 2")));
    }
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius r = {r} must be non-negative")));
    }
    Ok(())
}
