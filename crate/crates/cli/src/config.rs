//! Run configuration. The full key reference is `docs/README.md`; the JSON
//! Schema is `docs/config.schema.json`.

use std::path::PathBuf;

use clap::ValueEnum;
use jastrow_core::models::{ModelJson, ModelSpec};
use jastrow_core::sampler::{Binning, ChainParams};
use jastrow_core::Error as CoreError;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Grid,
    Sample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Grid => "grid",
            Command::Sample => "sample",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelJson,
    #[serde(default)]
    pub verify: Option<VerifyBlock>,
    #[serde(default)]
    pub grid: Option<GridBlock>,
    #[serde(default)]
    pub sample: Option<SampleBlock>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_points() -> usize {
    20
}
fn default_h() -> f64 {
    jastrow_core::constants::FD_STEP
}
fn default_symmetry_points() -> usize {
    200
}
fn default_probe_range() -> f64 {
    jastrow_core::sampler::GATE_PROBE_RANGE
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default = "default_h")]
    pub h: f64,
    #[serde(default = "default_symmetry_points")]
    pub symmetry_points: usize,
    #[serde(default = "default_probe_range")]
    pub probe_range: f64,
}

/// `[min, max, count]`; a count of 1 yields `min` alone.
#[derive(Debug, Clone, Copy, Deserialize)]
pub struct Axis(pub f64, pub f64, pub usize);

impl Axis {
    pub fn values(self) -> Result<Vec<f64>, Failure> {
        let Axis(lo, hi, n) = self;
        if n == 0 || !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(Failure::Usage(format!("bad axis [{lo}, {hi}, {n}]")));
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        Ok((0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridBlock {
    /// V and normalized |ψ| over relative coordinates (u, v) = (x₁ - x₂, x₂ - x₃).
    Surface { u: Axis, v: Axis },
    /// V₂ and normalized χ along a single bond.
    Profile { x: Axis },
}

fn default_chains() -> usize {
    1
}
fn default_thinning() -> usize {
    1
}
fn default_beta() -> u32 {
    2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBlock {
    pub n_steps: usize,
    pub burn_in: usize,
    #[serde(default = "default_thinning")]
    pub thinning: usize,
    #[serde(default)]
    pub step_scale: Option<f64>,
    #[serde(default = "default_chains")]
    pub n_chains: usize,
    #[serde(default)]
    pub binning: Option<Binning>,
    #[serde(default = "default_beta")]
    pub wigner_beta: u32,
}

impl SampleBlock {
    pub fn chain_params(&self, seed: u64) -> ChainParams {
        ChainParams {
            n_steps: self.n_steps,
            burn_in: self.burn_in,
            thinning: self.thinning,
            step_scale: self.step_scale,
            seed,
        }
    }

    pub fn binning(&self) -> Binning {
        self.binning.unwrap_or_default()
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("config: {e}")))
    }

    /// Ensure exactly one command block is present and that it is `cmd`'s.
    pub fn check_command(&self, cmd: Command) -> Result<(), Failure> {
        let present: Vec<&str> = [
            self.verify.as_ref().map(|_| "verify"),
            self.grid.as_ref().map(|_| "grid"),
            self.sample.as_ref().map(|_| "sample"),
        ]
        .into_iter()
        .flatten()
        .collect();
        match present.as_slice() {
            [one] if *one == cmd.name() => Ok(()),
            [one] => Err(Failure::Usage(format!(
                "config has a '{one}' block but the command is '{}'",
                cmd.name()
            ))),
            _ => Err(Failure::Usage(format!(
                "config must contain exactly one of verify/grid/sample, found {present:?}"
            ))),
        }
    }

    /// Build the model. An α ≤ 1/2 is a gate failure; other problems are
    /// configuration errors.
    pub fn model(&self) -> Result<ModelSpec, Failure> {
        ModelSpec::try_from(self.model.clone()).map_err(|e| match e {
            CoreError::AlphaTooSmall(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(format!("model: {other}")),
        })
    }
}
