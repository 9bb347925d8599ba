use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use adams_core::algnov::AlgNovWindow;
use adams_core::prime::Prime;

use crate::error::{Result, WorkbenchError};

/// Default cache directory when neither a flag nor a config file names one.
pub const CACHE_ENV: &str = "ADAMS_WORKBENCH_CACHE";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Tsv,
    #[default]
    JsonLines,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkbenchConfig {
    pub prime: u32,
    pub s_max: u32,
    pub t_max: u32,
    pub k_max: u32,
    pub r_max: u32,
    /// Digits of `p`-adic precision; `None` means `k_max + r_max + 2`.
    pub precision: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

impl Default for WorkbenchConfig {
    fn default() -> Self {
        WorkbenchConfig {
            prime: 3,
            s_max: 8,
            t_max: 26,
            k_max: 6,
            r_max: 4,
            precision: None,
            cache_dir: None,
            format: Format::JsonLines,
        }
    }
}

/// Partial settings, from command-line flags or a TOML file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub prime: Option<u32>,
    pub s_max: Option<u32>,
    pub t_max: Option<u32>,
    pub k_max: Option<u32>,
    pub r_max: Option<u32>,
    pub precision: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigOverrides {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::io(path, e))?;
        toml::from_str(&text).map_err(|e| WorkbenchError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&self, cfg: &mut WorkbenchConfig) {
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = &self.$f {
                    cfg.$f = v.clone();
                }
            )*};
        }
        set!(prime, s_max, t_max, k_max, r_max, format);
        if self.precision.is_some() {
            cfg.precision = self.precision;
        }
        if self.cache_dir.is_some() {
            cfg.cache_dir = self.cache_dir.clone();
        }
    }
}

impl WorkbenchConfig {
    /// Defaults, then the cache environment variable, then `flags`, then the
    /// config file (which wins over flags).
    pub fn resolve(flags: &ConfigOverrides, file: Option<&Path>) -> Result<Self> {
        let mut cfg = WorkbenchConfig {
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
            ..Default::default()
        };
        flags.apply(&mut cfg);
        if let Some(path) = file {
            ConfigOverrides::from_toml_file(path)?.apply(&mut cfg);
        }
        Ok(cfg)
    }

    /// Checks the invariants and returns warnings for tolerated deviations.
    pub fn validate(&self) -> Result<Vec<String>> {
        Prime::new(self.prime).map_err(|e| WorkbenchError::Config(e.to_string()))?;
        if self.r_max < 2 {
            return Err(WorkbenchError::Config(format!("r_max = {} but pages start at E_2", self.r_max)));
        }
        let mut warnings = Vec::new();
        let wanted = self.window().default_precision();
        if let Some(n) = self.precision.filter(|&n| n < wanted) {
            warnings.push(format!(
                "precision {n} is below k_max + r_max + 2 = {wanted}; late pages may fail with a precision error"
            ));
        }
        Ok(warnings)
    }

    pub fn prime(&self) -> Result<Prime> {
        Prime::new(self.prime).map_err(|e| WorkbenchError::Config(e.to_string()))
    }

    pub fn window(&self) -> AlgNovWindow {
        AlgNovWindow {
            precision: self.precision,
            ..AlgNovWindow::new(self.s_max, self.t_max, self.k_max, self.r_max)
        }
    }
}
