//! Content-addressed spectrum cache, one JSON file per spectrum.

use crate::config::sha256_hex;
use anyhow::Context;
use calderon_born::forward::{dtn_spectrum, DtnSpectrum, SOLVER_VERSION};
use calderon_born::RadialPotential;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CACHE_ENV: &str = "CALDERON_BORN_CACHE";

#[derive(Serialize)]
struct Key<'a> {
    d: usize,
    kappa: f64,
    potential: &'a RadialPotential,
    lmax: usize,
    tol: f64,
    version: &'a str,
}

pub struct SpectrumCache {
    dir: Option<PathBuf>,
}

impl SpectrumCache {
    /// `CALDERON_BORN_CACHE` if set, else `<out>/cache`; `enabled = false` disables it.
    pub fn new(out: &Path, enabled: bool) -> SpectrumCache {
        let dir = enabled.then(|| std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| out.join("cache")));
        SpectrumCache { dir }
    }

    pub fn disabled() -> SpectrumCache {
        SpectrumCache { dir: None }
    }

    pub fn key(q: &RadialPotential, d: usize, kappa: f64, lmax: usize, tol: f64) -> String {
        let key = Key { d, kappa, potential: q, lmax, tol, version: SOLVER_VERSION };
        sha256_hex(&serde_json::to_vec(&key).expect("key serializes"))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("spectrum-{key}.json")))
    }

    /// Cached spectrum, or compute and store it.
    pub fn spectrum(&self, q: &RadialPotential, d: usize, kappa: f64, lmax: usize, tol: f64) -> anyhow::Result<DtnSpectrum> {
        let key = Self::key(q, d, kappa, lmax, tol);
        if let Some(path) = self.path(&key) {
            if let Ok(text) = std::fs::read_to_string(&path) {
                if let Ok(spec) = serde_json::from_str::<DtnSpectrum>(&text) {
                    if spec.meta.version == SOLVER_VERSION {
                        return Ok(spec);
                    }
                }
            }
        }
        let spec = dtn_spectrum(q, d, kappa, lmax, tol, None)?;
        if let Some(path) = self.path(&key) {
            store(&path, &spec).with_context(|| format!("writing cache entry {}", path.display()))?;
        }
        Ok(spec)
    }
}

fn store(path: &Path, spec: &DtnSpectrum) -> anyhow::Result<()> {
    let dir = path.parent().expect("cache path has a parent");
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(&serde_json::to_vec(spec)?)?;
    tmp.flush()?;
    tmp.persist(path)?;
    Ok(())
}
