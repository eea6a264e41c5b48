//! Experiment configuration: JSON file, flag overrides, defaults.
//!
//! Unknown keys are rejected at every level. Flags win over file values;
//! the `SSB_LAB_OUT` environment variable overrides the output directory
//! from the file but loses to an explicit `--out`.

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default)]
    pub degeneracy: Option<f64>,
    #[serde(default)]
    pub residual: Option<f64>,
}

/// Per-experiment parameters. Every field is optional; defaults are filled
/// per experiment and echoed in the report. `a` doubles as the sextic width
/// parameter when `a_sextic` is not given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamConfig {
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub a_sextic: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub alphas: Option<Vec<f64>>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub omega_plus: Option<f64>,
    #[serde(default)]
    pub omega_minus: Option<f64>,
    #[serde(default)]
    pub mass: Option<f64>,
    #[serde(default)]
    pub hbar: Option<f64>,
    #[serde(default)]
    pub separations: Option<Vec<f64>>,
    #[serde(default)]
    pub level: Option<u32>,
    #[serde(default)]
    pub trials: Option<u32>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// On-disk experiment configuration.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub tolerances: Option<ToleranceConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub params: Option<ParamConfig>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("invalid config {}", path.display()))?;
        Ok(cfg)
    }
}

/// Flag-level overrides collected by the command line parser.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid_n: Option<usize>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub tol_degeneracy: Option<f64>,
    pub tol_residual: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub params: ParamConfig,
}

/// Fully resolved settings for one run, echoed verbatim into the report.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub experiment: String,
    pub grid: Option<GridConfig>,
    pub degeneracy_tol: f64,
    pub residual_tol: Option<f64>,
    pub output: String,
    pub jobs: usize,
    pub params: BTreeMap<String, serde_json::Value>,
}

pub struct Resolver {
    file: ExperimentConfig,
    flags: Overrides,
}

fn pick<T: Copy>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

impl Resolver {
    pub fn new(
        experiment: &str,
        file: ExperimentConfig,
        flags: Overrides,
    ) -> anyhow::Result<Resolver> {
        if let Some(name) = &file.experiment {
            if name != experiment {
                bail!("config file names experiment '{name}' but '{experiment}' was requested");
            }
        }
        Ok(Resolver { file, flags })
    }

    pub fn grid(&self, default: GridConfig) -> GridConfig {
        let base = self.file.grid.unwrap_or(default);
        GridConfig {
            xmin: self.flags.grid_min.unwrap_or(base.xmin),
            xmax: self.flags.grid_max.unwrap_or(base.xmax),
            n: self.flags.grid_n.unwrap_or(base.n),
        }
    }

    pub fn degeneracy_tol(&self) -> f64 {
        pick(
            self.flags.tol_degeneracy,
            self.file.tolerances.and_then(|t| t.degeneracy),
            1e-8,
        )
    }

    pub fn residual_tol(&self) -> Option<f64> {
        self.flags
            .tol_residual
            .or(self.file.tolerances.and_then(|t| t.residual))
    }

    pub fn jobs(&self) -> usize {
        pick(self.flags.jobs, self.file.jobs, num_threads_default())
    }

    /// Output directory: `--out` > `SSB_LAB_OUT` > config > `out`.
    pub fn output(&self) -> PathBuf {
        if let Some(out) = &self.flags.out {
            return out.clone();
        }
        if let Ok(env_out) = std::env::var("SSB_LAB_OUT") {
            if !env_out.is_empty() {
                return PathBuf::from(env_out);
            }
        }
        self.file
            .output
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    fn file_params(&self) -> ParamConfig {
        self.file.params.clone().unwrap_or_default()
    }

    pub fn f64_param(&self, get: impl Fn(&ParamConfig) -> Option<f64>, default: f64) -> f64 {
        get(&self.flags.params)
            .or_else(|| get(&self.file_params()))
            .unwrap_or(default)
    }

    pub fn u32_param(&self, get: impl Fn(&ParamConfig) -> Option<u32>, default: u32) -> u32 {
        get(&self.flags.params)
            .or_else(|| get(&self.file_params()))
            .unwrap_or(default)
    }

    pub fn u64_param(&self, get: impl Fn(&ParamConfig) -> Option<u64>, default: u64) -> u64 {
        get(&self.flags.params)
            .or_else(|| get(&self.file_params()))
            .unwrap_or(default)
    }

    pub fn list_param(
        &self,
        get: impl Fn(&ParamConfig) -> Option<Vec<f64>>,
        default: &[f64],
    ) -> Vec<f64> {
        get(&self.flags.params)
            .or_else(|| get(&self.file_params()))
            .unwrap_or_else(|| default.to_vec())
    }

    /// Sextic width parameter: `a_sextic` preferred, `a` accepted.
    pub fn a_sextic(&self, default: f64) -> f64 {
        self.f64_param(|p| p.a_sextic.or(p.a), default)
    }
}

pub fn num_threads_default() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
