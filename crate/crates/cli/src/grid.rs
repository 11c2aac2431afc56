use jastrow_core::models::{log_chi, log_psi, potential, Configuration, Geometry, ModelSpec};

use crate::config::GridBlock;
use crate::output::Table;
use crate::{Context, Failure};

pub fn run(ctx: &Context, spec: &ModelSpec, block: &GridBlock) -> Result<(), Failure> {
    let table = match *block {
        GridBlock::Surface { u, v } => surface(spec, &u.values()?, &v.values()?)?,
        GridBlock::Profile { x } => profile(spec, &x.values()?),
    };
    let path = table.write(&ctx.out, "grid", ctx.format)?;
    println!("wrote {} ({} rows)", path.display(), table.rows.len());
    Ok(())
}

/// Center-of-mass frame with x₁ - x₂ = u and x₂ - x₃ = v.
pub fn cm_configuration(u: f64, v: f64) -> Configuration {
    Configuration(vec![
        (2.0 * u + v) / 3.0,
        (v - u) / 3.0,
        -(u + 2.0 * v) / 3.0,
    ])
}

fn step(values: &[f64]) -> f64 {
    if values.len() < 2 {
        1.0
    } else {
        values[1] - values[0]
    }
}

/// Columns `u, v, V, psi`; ψ is rescaled so that Σ ψ² Δu Δv = 1 over the
/// finite entries. Points outside the sector or on a pole give NaN.
fn surface(spec: &ModelSpec, us: &[f64], vs: &[f64]) -> Result<Table, Failure> {
    if spec.n() != 3 {
        return Err(Failure::Usage(format!(
            "surface grids need N = 3, model has N = {}",
            spec.n()
        )));
    }
    let mut rows = Vec::with_capacity(us.len() * vs.len());
    for &u in us {
        for &v in vs {
            let cfg = cm_configuration(u, v);
            let (pot, lp) = if spec.in_sector(&cfg) {
                (
                    potential(spec, &cfg).unwrap_or(f64::NAN),
                    log_psi(spec, &cfg).unwrap_or(f64::NAN),
                )
            } else {
                (f64::NAN, f64::NAN)
            };
            rows.push([u, v, pot, lp]);
        }
    }
    let max = rows
        .iter()
        .map(|r| r[3])
        .filter(|l| l.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    for r in &mut rows {
        r[3] = if max.is_finite() && !r[3].is_nan() {
            (r[3] - max).exp()
        } else {
            f64::NAN
        };
    }
    let norm: f64 = rows
        .iter()
        .filter(|r| r[3].is_finite())
        .map(|r| r[3] * r[3])
        .sum::<f64>()
        * step(us)
        * step(vs);
    let mut table = Table::new(&["u", "v", "V", "psi"]);
    for mut r in rows {
        if norm > 0.0 {
            r[3] /= norm.sqrt();
        }
        table.push(r.to_vec());
    }
    Ok(table)
}

/// Columns `x, V2, chi`. On the circle χ is normalized over one period, on
/// the line over the tabulated range (trapezoid rule).
fn profile(spec: &ModelSpec, xs: &[f64]) -> Table {
    let v2: Vec<f64> = xs
        .iter()
        .map(|&x| spec.two_body(x).unwrap_or(f64::NAN))
        .collect();
    let lc: Vec<f64> = xs
        .iter()
        .map(|&x| log_chi(spec, x).unwrap_or(f64::NAN))
        .collect();
    let peak = match spec.geometry() {
        Geometry::Circle { l } => {
            let m = 4000;
            let mids: Vec<f64> = (0..m).map(|i| l * (i as f64 + 0.5) / m as f64).collect();
            let logs: Vec<f64> = mids.iter().filter_map(|&x| log_chi(spec, x).ok()).collect();
            let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mass = logs.iter().map(|v| (2.0 * (v - max)).exp()).sum::<f64>() * l / m as f64;
            Some((max, mass))
        }
        Geometry::Line => {
            let max = lc
                .iter()
                .copied()
                .filter(|v| v.is_finite())
                .fold(f64::NEG_INFINITY, f64::max);
            max.is_finite().then(|| {
                let sq: Vec<f64> = lc
                    .iter()
                    .map(|v| {
                        if v.is_nan() {
                            0.0
                        } else {
                            (2.0 * (v - max)).exp()
                        }
                    })
                    .collect();
                let mass: f64 = xs
                    .windows(2)
                    .zip(sq.windows(2))
                    .map(|(x, s)| 0.5 * (x[1] - x[0]) * (s[0] + s[1]))
                    .sum();
                (max, mass)
            })
        }
    };
    let mut table = Table::new(&["x", "V2", "chi"]);
    for ((&x, &v), &l) in xs.iter().zip(&v2).zip(&lc) {
        let chi = match peak {
            Some((max, mass)) if mass > 0.0 => (l - max).exp() / mass.sqrt(),
            Some((max, _)) => (l - max).exp(),
            None => f64::NAN,
        };
        table.push(vec![x, v, chi]);
    }
    table
}
