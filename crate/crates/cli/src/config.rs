//! Run configuration: parsing, validation and the canonical hash.

use calderon_born::recon::{Backend, KappaChoice};
use calderon_born::RadialPotential;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::path::{Path, PathBuf};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Invalid or unreadable configuration (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub r_min: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { r_min: 0.01, n: 400 }
    }
}

/// `|ξ|` samples `0, max/(n−1), …, max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct XiSpec {
    pub max: f64,
    pub n: usize,
    /// Fail when tail or rounding bound exceeds this.
    pub tol: Option<f64>,
}

impl Default for XiSpec {
    fn default() -> Self {
        XiSpec { max: 20.0, n: 81, tol: None }
    }
}

impl XiSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.max];
        }
        (0..self.n).map(|i| self.max * i as f64 / (self.n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StarSpec {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for StarSpec {
    fn default() -> Self {
        StarSpec { tol: 1e-10, max_iter: 100 }
    }
}

fn default_version() -> u32 {
    CONFIG_SCHEMA_VERSION
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    pub d: usize,
    /// Energy of the spectrum; defaults to 0.
    #[serde(default)]
    pub kappa: Option<f64>,
    /// Approximation `−κ + (q+κ)^B_κ` from the zero-energy spectrum.
    #[serde(default)]
    pub kappa_policy: Option<KappaChoice>,
    pub potential: RadialPotential,
    #[serde(rename = "L")]
    pub lmax: usize,
    pub tol: f64,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub xi: XiSpec,
    #[serde(default)]
    pub kappa_star: StarSpec,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_true")]
    pub cache: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    pub fn energy(&self) -> f64 {
        self.kappa.unwrap_or(0.0)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(bad(format!("unsupported schema_version {}", self.schema_version)));
        }
        if !(2..=16).contains(&self.d) {
            return Err(bad(format!("d = {} outside 2..=16", self.d)));
        }
        if self.kappa.is_some_and(|k| !k.is_finite()) {
            return Err(bad("kappa must be finite"));
        }
        if self.kappa_policy.is_some() && self.energy() != 0.0 {
            return Err(bad("kappa_policy works from the zero-energy spectrum; drop kappa or set it to 0"));
        }
        if let Some(KappaChoice::Given(k)) = self.kappa_policy {
            if !k.is_finite() {
                return Err(bad("given kappa must be finite"));
            }
        }
        if self.lmax > 400 {
            return Err(bad(format!("L = {} above 400", self.lmax)));
        }
        if !(1e-14..=1e-3).contains(&self.tol) {
            return Err(bad(format!("tol = {} outside [1e-14, 1e-3]", self.tol)));
        }
        self.potential.validate().map_err(|e| bad(e.to_string()))?;
        let g = &self.grid;
        if !(g.r_min > 0.0 && g.r_min < 1.0) || g.n < 2 || g.n > 100_000 {
            return Err(bad("grid needs 0 < r_min < 1 and 2 <= n <= 100000"));
        }
        let x = &self.xi;
        if !(x.max >= 0.0 && x.max.is_finite()) || x.n == 0 || x.n > 100_000 {
            return Err(bad("xi needs max >= 0 and 1 <= n <= 100000"));
        }
        if x.tol.is_some_and(|t| !(t > 0.0)) {
            return Err(bad("xi.tol must be positive"));
        }
        if !(self.kappa_star.tol > 0.0) || self.kappa_star.max_iter == 0 {
            return Err(bad("kappa_star needs tol > 0 and max_iter >= 1"));
        }
        match &self.backend {
            Backend::MomentCollocation(p) => {
                if p.cells == 0 || p.cells > 20_000 || !(p.r_min > 0.0 && p.r_min < 1.0) {
                    return Err(bad("moment_collocation needs 1 <= cells <= 20000 and 0 < r_min < 1"));
                }
            }
            Backend::WindowedHankel(p) => {
                if p.nodes < 20 || !(p.accuracy > 0.0) || !(p.max_cutoff > 0.0) {
                    return Err(bad("windowed_hankel needs nodes >= 20, accuracy > 0, max_cutoff > 0"));
                }
                if p.cutoff.is_some_and(|s| !(s > 0.0)) || p.sigma.is_some_and(|s| !(s > 0.0)) {
                    return Err(bad("windowed_hankel cutoff and sigma must be positive"));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, without output location and cache toggle.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output_dir = None;
        c.cache = true;
        sha256_hex(&serde_json::to_vec(&c).expect("config serializes"))
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{
        "d": 3,
        "potential": {"type": "piecewise", "breaks": [0.3333333333333333, 0.6666666666666666, 1.0], "values": [2.0, 1.0, 2.0]},
        "L": 40,
        "tol": 1e-10
    }"#;

    #[test]
    fn parses_minimal() {
        let c = RunConfig::from_json(FIG1).unwrap();
        assert_eq!(c.energy(), 0.0);
        assert_eq!(c.backend, Backend::default());
        assert_eq!(c.grid, GridSpec::default());
    }

    #[test]
    fn rejects_unknown_keys() {
        let t = FIG1.replace("\"L\": 40", "\"L\": 40, \"extra\": 1");
        let e = RunConfig::from_json(&t).unwrap_err();
        assert!(e.downcast_ref::<ConfigError>().is_some());
        let t = FIG1.replace("\"L\": 40", "\"L\": 40, \"backend\": {\"type\": \"moment_collocation\", \"cels\": 3}");
        assert!(RunConfig::from_json(&t).is_err());
    }

    #[test]
    fn backend_and_policy_forms() {
        let t = FIG1.replace(
            "\"L\": 40",
            "\"L\": 40, \"kappa_policy\": {\"given\": -1.5}, \"backend\": {\"type\": \"windowed_hankel\", \"nodes\": 400}",
        );
        let c = RunConfig::from_json(&t).unwrap();
        assert_eq!(c.kappa_policy, Some(KappaChoice::Given(-1.5)));
        assert!(matches!(c.backend, Backend::WindowedHankel(p) if p.nodes == 400));
        let t = FIG1.replace("\"L\": 40", "\"L\": 40, \"kappa_policy\": \"star\"");
        assert_eq!(RunConfig::from_json(&t).unwrap().kappa_policy, Some(KappaChoice::Star));
    }

    #[test]
    fn rejects_bad_values() {
        for (from, to) in [
            ("\"d\": 3", "\"d\": 1"),
            ("\"tol\": 1e-10", "\"tol\": 0.5"),
            ("\"L\": 40", "\"L\": 40, \"kappa\": 1.0, \"kappa_policy\": \"star\""),
            ("[2.0, 1.0, 2.0]", "[2.0, 1.0]"),
        ] {
            assert!(RunConfig::from_json(&FIG1.replace(from, to)).is_err(), "{to}");
        }
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = RunConfig::from_json(FIG1).unwrap();
        let mut b = a.clone();
        b.output_dir = Some("elsewhere".into());
        b.cache = false;
        assert_eq!(a.hash(), b.hash());
        let mut c = a.clone();
        c.tol = 1e-11;
        assert_ne!(a.hash(), c.hash());
    }
}
