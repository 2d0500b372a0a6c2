use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Settings read from `saito.toml`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    order: Option<u32>,
    b_max: Option<u32>,
    format: Option<Format>,
    out: Option<PathBuf>,
    verbose: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub order: u32,
    pub b_max: u32,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub verbose: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            order: 6,
            b_max: 6,
            format: Format::Json,
            out: None,
            verbose: false,
        }
    }
}

impl Config {
    /// Reads `explicit`, or `./saito.toml` when present, over the defaults.
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = match explicit {
            Some(p) => Some(p.to_path_buf()),
            None => Some(PathBuf::from("saito.toml")).filter(|p| p.exists()),
        };
        let mut cfg = Self::default();
        let Some(path) = path else {
            return Ok(cfg);
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if let Some(k) = file.order {
            cfg.order = k;
        }
        if let Some(b) = file.b_max {
            cfg.b_max = b;
        }
        if let Some(f) = file.format {
            cfg.format = f;
        }
        cfg.out = file.out;
        if let Some(v) = file.verbose {
            cfg.verbose = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.order < 1 {
            return Err(CliError::Usage("order must be at least 1".into()));
        }
        if self.b_max < 1 {
            return Err(CliError::Usage("b_max must be at least 1".into()));
        }
        Ok(())
    }
}
