//! `--config` files. Every key mirrors a command-line flag; flags win.
//!
//! ```toml
//! h = 0.005          # grid step (default 0.01)
//! tol = 1e-6         # overrides every check tolerance (default: per check)
//! quiet = false
//!
//! [synth]
//! psi = "1.0471975511965976+0.4i"
//! edges = "trig"
//! domain = [0.0, 1.0, 0.0, 1.0]
//!
//! [verify]
//! regular_floor = 0.25
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

pub const DEFAULT_H: f64 = 0.01;
pub const DEFAULT_DOMAIN: [f64; 4] = [0.0, 1.0, 0.0, 1.0];

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub h: Option<f64>,
    pub tol: Option<f64>,
    pub quiet: Option<bool>,
    #[serde(default)]
    pub synth: SynthConfig,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub export: ExportConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub psi: Option<String>,
    pub mu_bottom: Option<PathBuf>,
    pub nu_left: Option<PathBuf>,
    pub cauchy: Option<PathBuf>,
    pub edges: Option<String>,
    pub metric: Option<PathBuf>,
    pub domain: Option<[f64; 4]>,
    pub base: Option<[f64; 4]>,
    pub regular_floor: Option<f64>,
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub spec: Option<String>,
    pub domain: Option<[f64; 4]>,
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub plane: Option<String>,
    pub regular_floor: Option<f64>,
    pub checks: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportConfig {
    pub format: Option<String>,
    pub projection: Option<String>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
