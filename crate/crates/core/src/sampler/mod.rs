//! Metropolis sampling of |ψ|² on the ordered sector and nearest-neighbor
//! spacing statistics.
//!
//! Proposals move one particle by a Gaussian step, so the proposal is
//! symmetric and the acceptance probability is min(1, exp(2Δ log ψ)).
//! Proposals leaving the sector are rejected for every α, including α = 1
//! where the sector boundary is not a node of the physical problem.

mod reference;
mod spacing;

pub use reference::{reference_curve, wigner_constants, ReferenceKind};
pub use spacing::{
    bin_averages, bulk_gaps, histogram, pooled_spacings, spacings, split_chain_l1, Binning,
    SpacingHistogram,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{log_psi, Configuration, Geometry, ModelSpec};
use crate::verify::check_normalizability;

/// Tail range used by the normalizability gate for line models.
pub const GATE_PROBE_RANGE: f64 = 100.0;

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainParams {
    /// Total sweeps, burn-in included. One sweep proposes a move for each
    /// particle in turn.
    pub n_steps: usize,
    pub burn_in: usize,
    #[serde(default = "one")]
    pub thinning: usize,
    /// Proposal width; defaults to 0.3 times the mean neighbor gap of the
    /// starting configuration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_scale: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl ChainParams {
    pub fn new(n_steps: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            n_steps,
            burn_in,
            thinning: 1,
            step_scale: None,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.n_steps {
            return Err(Error::InvalidChain(format!(
                "burn_in ({}) must be less than n_steps ({})",
                self.burn_in, self.n_steps
            )));
        }
        if self.thinning == 0 {
            return Err(Error::InvalidChain("thinning must be at least 1".into()));
        }
        if let Some(s) = self.step_scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidChain(format!(
                    "step_scale must be positive, got {s}"
                )));
            }
        }
        Ok(())
    }

    /// Number of recorded samples.
    pub fn n_recorded(&self) -> usize {
        (self.n_steps - self.burn_in).div_ceil(self.thinning)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub samples: Vec<Configuration>,
    /// Accepted proposals over all proposals, burn-in included.
    pub acceptance_rate: f64,
    pub step_scale: f64,
    pub seed: u64,
}

/// One Metropolis proposal, with everything needed to re-derive the decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub sweep: usize,
    pub particle: usize,
    pub from: Configuration,
    pub to: Configuration,
    pub in_sector: bool,
    pub log_psi_from: f64,
    /// `-∞` when the proposal is outside the sector.
    pub log_psi_to: f64,
    pub uniform: f64,
    pub accepted: bool,
}

/// Refuse line models that fail the Gaussian normalizability gate.
pub fn sampling_gate(spec: &ModelSpec) -> Result<()> {
    if spec.geometry().is_circle() {
        return Ok(());
    }
    let rep = check_normalizability(spec, GATE_PROBE_RANGE)?;
    if rep.passed() {
        return Ok(());
    }
    let min = rep
        .circulant_eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Err(Error::NotNormalizable(format!(
        "alpha_ok = {}, omega > 0 = {}, fitted c = {:.6}, min eigenvalue = {:.6}",
        rep.alpha_ok, rep.omega_positive, rep.gaussian_bound_c, min
    )))
}

/// Evenly spaced start: arcs l/N on the circle with x₁ < l; gaps 1/√ω on the
/// line, centered at 0.
pub fn initial_configuration(spec: &ModelSpec) -> Configuration {
    let n = spec.n();
    let gap = match spec.geometry() {
        Geometry::Circle { l } => l / n as f64,
        Geometry::Line => 1.0 / spec.omega().max(f64::MIN_POSITIVE).sqrt(),
    };
    let x = (0..n).map(|i| (n - 1 - i) as f64 * gap);
    match spec.geometry() {
        Geometry::Circle { .. } => Configuration(x.collect()),
        Geometry::Line => {
            let center = 0.5 * (n - 1) as f64 * gap;
            Configuration(x.map(|v| v - center).collect())
        }
    }
}

fn default_step_scale(spec: &ModelSpec) -> f64 {
    let cfg = initial_configuration(spec);
    let gaps = spec.gaps(&cfg);
    0.3 * gaps.iter().sum::<f64>() / gaps.len() as f64
}

/// Shift a circle configuration by a multiple of l so that 0 ≤ x₁ < l.
/// Returns whether it moved.
fn rewrap(x: &mut [f64], l: f64) -> bool {
    let k = (x[0] / l).floor();
    if k == 0.0 {
        return false;
    }
    for v in x.iter_mut() {
        *v -= k * l;
    }
    true
}

struct Runner<'a> {
    spec: &'a ModelSpec,
    params: ChainParams,
    step: f64,
}

impl Runner<'_> {
    fn run(&self, mut log: Option<&mut Vec<Transition>>) -> Result<Chain> {
        let (spec, p) = (self.spec, self.params);
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let mut x = initial_configuration(spec).0;
        let mut lp = log_psi(spec, &Configuration(x.clone()))?;
        let n = x.len();
        let mut samples = Vec::with_capacity(p.n_recorded());
        let mut accepted = 0usize;
        for sweep in 0..p.n_steps {
            for i in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                let u: f64 = rng.gen();
                let old = x[i];
                x[i] = old + self.step * z;
                let cfg = Configuration(x.clone());
                let in_sector = spec.in_sector(&cfg);
                let lp_new = if in_sector {
                    log_psi(spec, &cfg)?
                } else {
                    f64::NEG_INFINITY
                };
                let accept = in_sector && u.ln() < 2.0 * (lp_new - lp);
                if let Some(log) = log.as_deref_mut() {
                    let mut from = x.clone();
                    from[i] = old;
                    log.push(Transition {
                        sweep,
                        particle: i,
                        from: Configuration(from),
                        to: cfg,
                        in_sector,
                        log_psi_from: lp,
                        log_psi_to: lp_new,
                        uniform: u,
                        accepted: accept,
                    });
                }
                if accept {
                    accepted += 1;
                    lp = lp_new;
                } else {
                    x[i] = old;
                }
            }
            if let Geometry::Circle { l } = spec.geometry() {
                if rewrap(&mut x, l) {
                    lp = log_psi(spec, &Configuration(x.clone()))?;
                }
            }
            if sweep >= p.burn_in && (sweep - p.burn_in) % p.thinning == 0 {
                samples.push(Configuration(x.clone()));
            }
        }
        if accepted == 0 {
            return Err(Error::ZeroAcceptance(self.step));
        }
        Ok(Chain {
            samples,
            acceptance_rate: accepted as f64 / (p.n_steps * n) as f64,
            step_scale: self.step,
            seed: p.seed,
        })
    }
}

fn runner<'a>(spec: &'a ModelSpec, params: &ChainParams) -> Result<Runner<'a>> {
    params.validate()?;
    sampling_gate(spec)?;
    let step = params
        .step_scale
        .unwrap_or_else(|| default_step_scale(spec));
    Ok(Runner {
        spec,
        params: *params,
        step,
    })
}

/// Run one chain. Deterministic given `params.seed`.
pub fn sample(spec: &ModelSpec, params: &ChainParams) -> Result<Chain> {
    runner(spec, params)?.run(None)
}

/// Run one chain and log every proposal.
pub fn sample_with_log(spec: &ModelSpec, params: &ChainParams) -> Result<(Chain, Vec<Transition>)> {
    let mut log = Vec::new();
    let chain = runner(spec, params)?.run(Some(&mut log))?;
    Ok((chain, log))
}

/// Independent chains with seeds `params.seed + k`, run in parallel and
/// returned in stream order.
pub fn sample_chains(
    spec: &ModelSpec,
    params: &ChainParams,
    n_chains: usize,
) -> Result<Vec<Chain>> {
    (0..n_chains as u64)
        .into_par_iter()
        .map(|k| {
            let p = ChainParams {
                seed: params.seed.wrapping_add(k),
                ..*params
            };
            sample(spec, &p)
        })
        .collect()
}

/// Mean of a correlated series and its batch-means standard error.
pub fn batch_means(series: &[f64], batches: usize) -> Result<(f64, f64)> {
    if batches < 2 || series.len() < batches {
        return Err(Error::Empty(
            "batch means need at least two nonempty batches",
        ));
    }
    let size = series.len() / batches;
    let means: Vec<f64> = series
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let mean = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    Ok((mean, (var / batches as f64).sqrt()))
}
