use jastrow_core::models::{ModelJson, ModelSpec};
use jastrow_core::sampler::{
    bin_averages, histogram, pooled_spacings, sample_chains, split_chain_l1, Chain, ReferenceKind,
};
use jastrow_core::Error as CoreError;
use serde::Serialize;

use crate::config::{Format, SampleBlock};
use crate::output::{write_json, Table};
use crate::{Context, Failure};

#[derive(Serialize)]
struct ChainSummary {
    seed: u64,
    acceptance_rate: f64,
    step_scale: f64,
    n_samples: usize,
    split_chain_l1: f64,
}

#[derive(Serialize)]
struct SampleSummary {
    model: ModelJson,
    n_steps: usize,
    burn_in: usize,
    thinning: usize,
    chains: Vec<ChainSummary>,
    n_spacings: usize,
    mean_spacing_raw: f64,
    unfolded_mean: f64,
    overflow: usize,
    wigner_beta: u32,
    l1_wigner: f64,
    l1_poisson: f64,
    warning: Option<String>,
}

fn core_failure(e: CoreError) -> Failure {
    match e {
        CoreError::NotNormalizable(_)
        | CoreError::ZeroAcceptance(_)
        | CoreError::AlphaTooSmall(_) => Failure::Check(e.to_string()),
        CoreError::InvalidChain(_) | CoreError::Domain(_) | CoreError::Empty(_) => {
            Failure::Usage(e.to_string())
        }
        other => Failure::Other(other.into()),
    }
}

/// Bulk data (`samples.csv`, `histogram.csv`) is always CSV; the summary is
/// always JSON.
pub fn run(ctx: &Context, spec: &ModelSpec, block: &SampleBlock) -> Result<(), Failure> {
    if block.n_chains == 0 {
        return Err(Failure::Usage("n_chains must be at least 1".into()));
    }
    let wigner = ReferenceKind::WignerSurmise {
        beta: block.wigner_beta,
    };
    jastrow_core::sampler::wigner_constants(block.wigner_beta).map_err(core_failure)?;
    let warning = (block.burn_in * 10 < block.n_steps).then(|| {
        format!(
            "burn_in = {} is below 10% of n_steps = {}; early samples may not be equilibrated",
            block.burn_in, block.n_steps
        )
    });
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }

    let params = block.chain_params(ctx.seed);
    let chains = sample_chains(spec, &params, block.n_chains).map_err(core_failure)?;
    let binning = block.binning();
    let geometry = spec.geometry();

    let mut raw = Vec::new();
    let mut summaries = Vec::with_capacity(chains.len());
    for c in &chains {
        raw.extend(pooled_spacings(&c.samples, geometry).map_err(core_failure)?);
        let split = if c.samples.len() >= 2 {
            split_chain_l1(&c.samples, geometry, binning)
                .map_err(core_failure)?
                .0
        } else {
            f64::NAN
        };
        summaries.push(ChainSummary {
            seed: c.seed,
            acceptance_rate: c.acceptance_rate,
            step_scale: c.step_scale,
            n_samples: c.samples.len(),
            split_chain_l1: split,
        });
    }
    let hist = histogram(&raw, binning).map_err(core_failure)?;
    let summary = SampleSummary {
        model: ModelJson::try_from(spec).map_err(core_failure)?,
        n_steps: block.n_steps,
        burn_in: block.burn_in,
        thinning: block.thinning,
        chains: summaries,
        n_spacings: hist.n_samples,
        mean_spacing_raw: hist.mean_spacing_raw,
        unfolded_mean: hist.unfolded_mean,
        overflow: hist.overflow,
        wigner_beta: block.wigner_beta,
        l1_wigner: hist.l1_to_reference(wigner).map_err(core_failure)?,
        l1_poisson: hist
            .l1_to_reference(ReferenceKind::Poisson)
            .map_err(core_failure)?,
        warning,
    };

    samples_table(&chains, spec.n()).write(&ctx.out, "samples", Format::Csv)?;
    let w = bin_averages(wigner, &hist.bin_edges).map_err(core_failure)?;
    let p = bin_averages(ReferenceKind::Poisson, &hist.bin_edges).map_err(core_failure)?;
    let mut ht = Table::new(&["bin_lo", "bin_hi", "density", "wigner", "poisson"]);
    for k in 0..hist.densities.len() {
        ht.push(vec![
            hist.bin_edges[k],
            hist.bin_edges[k + 1],
            hist.densities[k],
            w[k],
            p[k],
        ]);
    }
    ht.write(&ctx.out, "histogram", Format::Csv)?;
    write_json(&ctx.out, "summary.json", &summary)?;

    for c in &summary.chains {
        println!(
            "chain seed {}: acceptance {:.3}, step {:.4}, {} samples, split-chain L1 {:.4}",
            c.seed, c.acceptance_rate, c.step_scale, c.n_samples, c.split_chain_l1
        );
    }
    println!(
        "{} spacings, unfolded mean {:.6}, L1 to Wigner(beta={}) {:.4}, to Poisson {:.4}",
        summary.n_spacings,
        summary.unfolded_mean,
        block.wigner_beta,
        summary.l1_wigner,
        summary.l1_poisson
    );
    Ok(())
}

fn samples_table(chains: &[Chain], n: usize) -> Table {
    let names: Vec<String> = ["chain".to_string(), "index".to_string()]
        .into_iter()
        .chain((1..=n).map(|i| format!("x{i}")))
        .collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut t = Table::new(&refs);
    for (k, c) in chains.iter().enumerate() {
        for (i, cfg) in c.samples.iter().enumerate() {
            let mut row = vec![k as f64, i as f64];
            row.extend_from_slice(cfg.as_slice());
            t.push(row);
        }
    }
    t
}
