use jastrow_core::models::{ModelJson, ModelSpec};
use jastrow_core::verify::{
    check_normalizability, check_symmetries, residual_energy, NormalizabilityReport, SymmetryReport,
};
use serde::Serialize;

use crate::config::{Format, VerifyBlock};
use crate::output::{write_atomic, write_json};
use crate::{Context, Failure};

#[derive(Serialize)]
struct ResidualSummary {
    passed: bool,
    spread: f64,
    relative_spread: f64,
    mean_energy: f64,
    closed_form_energy: Option<f64>,
    energy_error: Option<f64>,
    points: Vec<Vec<f64>>,
    local_energies: Vec<f64>,
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    seed: u64,
    model: ModelJson,
    residual: ResidualSummary,
    symmetries: SymmetryReport,
    /// Absent on the circle, where ψ is square integrable on the sector.
    normalizability: Option<NormalizabilityReport>,
}

pub fn run(ctx: &Context, spec: &ModelSpec, block: &VerifyBlock) -> Result<(), Failure> {
    let residual = residual_energy(spec, block.n_points, ctx.seed, block.h)
        .map_err(|e| Failure::Check(format!("residual: {e}")))?;
    let symmetries = check_symmetries(spec, block.symmetry_points, ctx.seed.wrapping_add(1));
    let normalizability = if spec.geometry().is_circle() {
        None
    } else {
        Some(
            check_normalizability(spec, block.probe_range)
                .map_err(|e| Failure::Usage(e.to_string()))?,
        )
    };
    let report = VerifyReport {
        passed: residual.passed()
            && symmetries.passed()
            && normalizability.as_ref().is_none_or(|n| n.passed()),
        seed: ctx.seed,
        model: ModelJson::try_from(spec).map_err(|e| Failure::Usage(e.to_string()))?,
        residual: ResidualSummary {
            passed: residual.passed(),
            spread: residual.spread,
            relative_spread: residual.relative_spread(),
            mean_energy: residual.mean_energy,
            closed_form_energy: residual.closed_form_energy,
            energy_error: residual.energy_error(),
            points: residual.points.clone(),
            local_energies: residual.local_energies.clone(),
        },
        symmetries,
        normalizability,
    };

    match ctx.format {
        Format::Json => write_json(&ctx.out, "report.json", &report)?,
        Format::Csv => write_atomic(&ctx.out, "report.csv", &checks_csv(&report)?)?,
    };
    for line in summary_lines(&report) {
        println!("{line}");
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Check("verification failed".into()))
    }
}

/// One row per check: `check,value,tolerance,passed`.
fn checks_csv(r: &VerifyReport) -> anyhow::Result<Vec<u8>> {
    use jastrow_core::constants::{RESIDUAL_ENERGY_REL_TOL, RESIDUAL_SPREAD_TOL};
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["check", "value", "tolerance", "passed"])?;
    let mut row = |name: &str, value: f64, tol: f64, passed: bool| {
        w.write_record([
            name.to_string(),
            value.to_string(),
            tol.to_string(),
            passed.to_string(),
        ])
    };
    let res = &r.residual;
    row(
        "residual_spread",
        res.relative_spread,
        RESIDUAL_SPREAD_TOL,
        res.relative_spread < RESIDUAL_SPREAD_TOL,
    )?;
    if let Some(e) = res.energy_error {
        row(
            "residual_energy",
            e,
            RESIDUAL_ENERGY_REL_TOL,
            e < RESIDUAL_ENERGY_REL_TOL,
        )?;
    }
    for c in &r.symmetries.checks {
        row(&c.name, c.max_violation, c.tolerance, c.passed)?;
    }
    if let Some(n) = &r.normalizability {
        let min = n
            .circulant_eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        row("normalizability_min_eigenvalue", min, 0.0, n.passed())?;
    }
    Ok(w.into_inner()?)
}

fn summary_lines(r: &VerifyReport) -> Vec<String> {
    let mark = |b: bool| if b { "PASS" } else { "FAIL" };
    let res = &r.residual;
    let mut out = vec![format!(
        "{} residual: spread {:.3e} (relative {:.3e}), mean energy {:.12}{}",
        mark(res.passed),
        res.spread,
        res.relative_spread,
        res.mean_energy,
        res.closed_form_energy
            .map(|e| format!(", closed form {e:.12}"))
            .unwrap_or_default()
    )];
    for c in &r.symmetries.checks {
        out.push(format!(
            "{} {}: max violation {:.3e}",
            mark(c.passed),
            c.name,
            c.max_violation
        ));
    }
    if let Some(n) = &r.normalizability {
        out.push(format!(
            "{} normalizability: alpha > 1/2 {}, omega > 0 {}, c = {:.6}, positive definite {}",
            mark(n.passed()),
            n.alpha_ok,
            n.omega_positive,
            n.gaussian_bound_c,
            n.positive_definite
        ));
    }
    out
}
