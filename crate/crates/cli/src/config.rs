//! Pipeline settings from `key=value` files and flags.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use animst_core::centrality::EigenConfig;
use animst_core::DEFAULT_CATEGORIES;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub n_categories: usize,
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
    pub seed: u64,
    pub pair_cache: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let eigen = EigenConfig::default();
        PipelineConfig {
            n_categories: DEFAULT_CATEGORIES,
            eigen_tol: eigen.tol,
            eigen_max_iter: eigen.max_iter,
            seed: 0,
            pair_cache: true,
        }
    }
}

impl PipelineConfig {
    pub fn write(&self, w: &mut dyn Write) -> io::Result<()> {
        writeln!(w, "n_categories={}", self.n_categories)?;
        writeln!(w, "eigen_tol={:e}", self.eigen_tol)?;
        writeln!(w, "eigen_max_iter={}", self.eigen_max_iter)?;
        writeln!(w, "seed={}", self.seed)?;
        writeln!(
            w,
            "pair_cache={}",
            if self.pair_cache { "on" } else { "off" }
        )
    }
}

pub fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" | "yes" | "1" => Ok(true),
        "off" | "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected on or off, got {s:?}")),
    }
}

/// Settings present in a config file; absent keys keep their defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub n_categories: Option<usize>,
    pub eigen_tol: Option<f64>,
    pub eigen_max_iter: Option<usize>,
    pub seed: Option<u64>,
    pub pair_cache: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Core(animst_core::Error::Io {
                path: path.to_owned(),
                source: e,
            })
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = ConfigFile::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| CliError::Usage(format!("config line {}: {m}", n + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            let invalid = || bad(&format!("invalid value {value:?} for {key}"));
            match key {
                "n_categories" => cfg.n_categories = Some(value.parse().map_err(|_| invalid())?),
                "eigen_tol" => cfg.eigen_tol = Some(value.parse().map_err(|_| invalid())?),
                "eigen_max_iter" => {
                    cfg.eigen_max_iter = Some(value.parse().map_err(|_| invalid())?)
                }
                "seed" => cfg.seed = Some(value.parse().map_err(|_| invalid())?),
                "pair_cache" => cfg.pair_cache = Some(parse_switch(value).map_err(|_| invalid())?),
                // Recorded in build manifests; not a setting.
                "format_version" | "k" => {}
                _ => return Err(bad(&format!("unknown key {key:?}"))),
            }
        }
        Ok(cfg)
    }

    pub fn apply(&self, mut base: PipelineConfig) -> PipelineConfig {
        if let Some(v) = self.n_categories {
            base.n_categories = v;
        }
        if let Some(v) = self.eigen_tol {
            base.eigen_tol = v;
        }
        if let Some(v) = self.eigen_max_iter {
            base.eigen_max_iter = v;
        }
        if let Some(v) = self.seed {
            base.seed = v;
        }
        if let Some(v) = self.pair_cache {
            base.pair_cache = v;
        }
        base
    }
}
