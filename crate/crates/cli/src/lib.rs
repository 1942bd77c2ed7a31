//! Experiment runner around `calderon_born`: configs, cached spectra, CSV/SVG
//! output and the figure reproductions.

pub mod cache;
pub mod commands;
pub mod config;
pub mod figures;
pub mod output;

use calderon_born::Error;

/// Process exit code for a failed command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<config::ConfigError>().is_some() {
        return 2;
    }
    if err.downcast_ref::<figures::ReproductionFailed>().is_some() {
        return 4;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Domain(_) | Error::Invalid(_)) => 2,
        Some(_) => 3,
        None => 1,
    }
}
