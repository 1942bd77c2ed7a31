//! Forward and Born-inverse numerics for the radial Calderón problem at fixed
//! energy on the unit ball `B^d`.
//!
//! The forward map sends a radial potential `q` to the Dirichlet-to-Neumann
//! eigenvalues `λ_ℓ[q,κ]`; the Born approximation `q^B_κ` is the radial
//! function whose κ-moments equal the differences `λ_ℓ[q,κ] − λ_ℓ[0,κ]`.

pub mod error;
pub mod specfun;

pub use error::{Error, Result};
pub mod potential;
pub mod quad;

pub use potential::{l1_annulus, HalfLinePotential, Interp, RadialPotential};
pub mod born;
pub mod forward;
mod ode;
pub mod recon;
