use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use entclt::fisher::{DEFAULT_DE_BRUIJN_CAP, DEFAULT_T_NODES};
use entclt::report::DEFAULT_TOL;

pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings for one invocation. Values come from the built-in defaults, then
/// the file named by `ENTCLT_CONFIG`, then command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_grid: Vec<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub t_nodes: usize,
    pub spatial_tol: f64,
    pub format: Format,
    /// Largest support (in cells) a partial sum may reach.
    pub cap: usize,
    /// Largest `n` accepted by the de Bruijn check.
    pub de_bruijn_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_grid: (0..10).map(|i| 1 << i).collect(),
            tolerances: BTreeMap::new(),
            t_nodes: DEFAULT_T_NODES,
            spatial_tol: 1e-9,
            format: Format::Csv,
            cap: DEFAULT_CAP,
            de_bruijn_cap: DEFAULT_DE_BRUIJN_CAP,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let config: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            bail!("n grid is empty");
        }
        if self.n_grid[0] < 1 {
            bail!("n grid values must be at least 1");
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            bail!("n grid must be strictly increasing");
        }
        if self.t_nodes == 0 {
            bail!("quadrature needs at least one t node");
        }
        if !(self.spatial_tol > 0.0) {
            bail!("spatial tolerance must be positive");
        }
        for (name, tol) in &self.tolerances {
            if !(tol.is_finite() && *tol >= 0.0) {
                bail!("tolerance {name} must be a nonnegative number");
            }
        }
        Ok(())
    }

    /// Tolerance for the named check, falling back to `default`.
    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn default_tol(&self, name: &str) -> f64 {
        self.tol(name, DEFAULT_TOL)
    }
}

/// Parses `1,2,4` into a grid.
pub fn parse_grid(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|part| part.trim().parse::<usize>().with_context(|| format!("bad n value {part:?}")))
        .collect()
}

/// Parses `name=value`.
pub fn parse_tol(s: &str) -> Result<(String, f64)> {
    let (name, value) = s.split_once('=').with_context(|| format!("expected name=value, got {s:?}"))?;
    let value: f64 = value.trim().parse().with_context(|| format!("bad tolerance value in {s:?}"))?;
    Ok((name.trim().to_string(), value))
}
