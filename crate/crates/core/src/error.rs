use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("floating-point overflow evaluating phi_{ell} at kappa = {kappa}, r = {r}")]
    Overflow { ell: usize, kappa: f64, r: f64 },

    /// κ is (numerically) a Dirichlet eigenvalue in sector ℓ.
    #[error("Dirichlet pole in sector l = {ell} at kappa = {kappa} (radial solution vanishes at r = {radius})")]
    DirichletPole { ell: usize, kappa: f64, radius: f64 },

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("series tail at |xi| = {xi} not certified: bound {bound:e} exceeds tolerance {tol:e}")]
    TailNotCertified { xi: f64, bound: f64, tol: f64 },

    #[error("rounding error at |xi| = {xi} is {bound:e}, above tolerance {tol:e}")]
    PrecisionLoss { xi: f64, bound: f64, tol: f64 },

    #[error("ill-conditioned system (condition estimate {cond:e})")]
    IllConditioned { cond: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
