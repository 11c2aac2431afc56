//! Independent checks: finite-difference eigenfunction residual, parity and
//! periodicity, the Gaussian normalizability gate, and the two-body
//! irreducibility witness.

mod normalizability;
mod symmetry;
mod witness;

pub use normalizability::{check_normalizability, circulant_eigenvalues, NormalizabilityReport};
pub use symmetry::{check_symmetries, SymmetryCheck, SymmetryReport};
pub use witness::two_body_irreducibility_witness;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{RESIDUAL_ENERGY_REL_TOL, RESIDUAL_SPREAD_TOL};
use crate::error::{Error, Result};
use crate::models::{ground_energy, log_psi, potential, Configuration, Geometry, ModelSpec};

/// Line probes draw every neighbor gap from this range.
const LINE_GAP_RANGE: (f64, f64) = (0.5, 1.5);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub points: Vec<Vec<f64>>,
    pub local_energies: Vec<f64>,
    /// max - min of the local energies.
    pub spread: f64,
    pub mean_energy: f64,
    pub closed_form_energy: Option<f64>,
}

impl ResidualReport {
    /// Spread relative to max(1, |mean|).
    pub fn relative_spread(&self) -> f64 {
        self.spread / self.mean_energy.abs().max(1.0)
    }

    pub fn energy_error(&self) -> Option<f64> {
        self.closed_form_energy
            .map(|e| (self.mean_energy - e).abs() / e.abs().max(1.0))
    }

    pub fn spread_ok(&self) -> bool {
        self.relative_spread() < RESIDUAL_SPREAD_TOL
    }

    pub fn energy_ok(&self) -> bool {
        self.energy_error()
            .is_none_or(|e| e < RESIDUAL_ENERGY_REL_TOL)
    }

    pub fn passed(&self) -> bool {
        self.spread_ok() && self.energy_ok()
    }
}

/// Second-order central differences of f at t with the step actually
/// representable in floating point on each side.
fn central_derivatives(f0: f64, fp: f64, fm: f64, hp: f64, hm: f64) -> (f64, f64) {
    let (sp, sm) = ((fp - f0) / hp, (f0 - fm) / hm);
    let first = (sp * hm + sm * hp) / (hp + hm);
    let second = 2.0 * (sp - sm) / (hp + hm);
    (first, second)
}

/// (Hψ)/ψ = V - Σᵢ[(∂ᵢ log ψ)² + ∂ᵢ² log ψ], derivatives by central
/// differences of [`log_psi`] with step `h`.
pub fn local_energy(spec: &ModelSpec, cfg: &Configuration, h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    spec.check_len(cfg)?;
    let distance = spec.boundary_distance(cfg);
    if distance < 0.0 {
        return Err(Error::OutsideSector(format!("smallest gap is {distance}")));
    }
    if distance <= 10.0 * h {
        return Err(Error::NearBoundary {
            distance,
            required: 10.0 * h,
        });
    }
    let v = potential(spec, cfg)?;
    let f0 = log_psi(spec, cfg)?;
    let mut x = cfg.as_slice().to_vec();
    let mut kinetic = 0.0;
    for i in 0..x.len() {
        let xi = x[i];
        let (up, down) = (xi + h, xi - h);
        x[i] = up;
        let fp = log_psi(spec, &Configuration(x.clone()))?;
        x[i] = down;
        let fm = log_psi(spec, &Configuration(x.clone()))?;
        x[i] = xi;
        let (d1, d2) = central_derivatives(f0, fp, fm, up - xi, xi - down);
        kinetic += d1 * d1 + d2;
    }
    Ok(v - kinetic)
}

/// Seeded interior configurations, stratified per gap (Latin hypercube).
///
/// Line: gaps uniform in [0.5, 1.5], center of mass at 0. Circle of
/// circumference l: gaps l/(2N) + (l/2)·w with w uniform on the simplex and a
/// random rotation, so every gap is at least l/(2N).
pub fn probe_configurations(spec: &ModelSpec, n_points: usize, seed: u64) -> Vec<Configuration> {
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strata: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut s: Vec<usize> = (0..n_points).collect();
            s.shuffle(&mut rng);
            s
        })
        .collect();
    (0..n_points)
        .map(|p| {
            let u: Vec<f64> = strata
                .iter()
                .map(|s| (s[p] as f64 + rng.gen::<f64>()) / n_points as f64)
                .collect();
            match spec.geometry() {
                Geometry::Line => {
                    let (lo, hi) = LINE_GAP_RANGE;
                    let mut x = vec![0.0; n];
                    for i in (0..n - 1).rev() {
                        x[i] = x[i + 1] + lo + (hi - lo) * u[i];
                    }
                    let mean = x.iter().sum::<f64>() / n as f64;
                    Configuration(x.into_iter().map(|v| v - mean).collect())
                }
                Geometry::Circle { l } => {
                    let e: Vec<f64> = u.iter().map(|v| -(1.0 - v).ln()).collect();
                    let total: f64 = e.iter().sum();
                    let gap = |i: usize| l / (2.0 * n as f64) + 0.5 * l * e[i] / total;
                    let mut x = vec![0.0; n];
                    x[n - 1] = rng.gen::<f64>() * gap(n - 1);
                    for i in (0..n - 1).rev() {
                        x[i] = x[i + 1] + gap(i);
                    }
                    Configuration(x)
                }
            }
        })
        .collect()
}

/// Local energies at `n_points` seeded probes. Probes are evaluated in
/// parallel; the report is identical for any thread count.
pub fn residual_energy(
    spec: &ModelSpec,
    n_points: usize,
    seed: u64,
    h: f64,
) -> Result<ResidualReport> {
    if n_points < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 probe points, got {n_points}"
        )));
    }
    let points = probe_configurations(spec, n_points, seed);
    let local_energies = points
        .par_iter()
        .map(|cfg| local_energy(spec, cfg, h))
        .collect::<Result<Vec<f64>>>()?;
    let (lo, hi) = local_energies
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| {
            (a.min(e), b.max(e))
        });
    let mean_energy = local_energies.iter().sum::<f64>() / n_points as f64;
    let closed_form_energy = match ground_energy(spec) {
        Ok(e) => Some(e),
        Err(Error::UnsupportedFamily) => None,
        Err(e) => return Err(e),
    };
    Ok(ResidualReport {
        points: points.into_iter().map(|c| c.0).collect(),
        local_energies,
        spread: hi - lo,
        mean_energy,
        closed_form_energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{FD_STEP, NEGATIVE_CONTROL_MARGIN};
    use crate::elliptic::LatticeData;
    use crate::models::{CustomPhi, PhiFamily};
    use proptest::prelude::*;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn rational(n: usize) -> ModelSpec {
        ModelSpec::new(Geometry::Line, n, 1.0, PhiFamily::rational(2.0).unwrap()).unwrap()
    }

    fn trig() -> ModelSpec {
        ModelSpec::new(
            Geometry::Circle { l: 1.0 },
            3,
            0.0,
            PhiFamily::trigonometric(2.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    fn custom_sine() -> PhiFamily {
        PhiFamily::custom(CustomPhi {
            phi: Arc::new(|x| 2.0 / x + 0.1 * x.sin()),
            dphi: Arc::new(|x| -2.0 / (x * x) + 0.1 * x.cos()),
            big_phi: Arc::new(|x| -0.1 * x.cos()),
            alpha: 2.0,
            label: "sine".into(),
        })
        .unwrap()
    }

    #[test]
    fn local_energy_examples() {
        let e = local_energy(
            &rational(3),
            &Configuration::new(vec![1.0, 0.0, -1.0]),
            FD_STEP,
        )
        .unwrap();
        assert!((e - 11.0).abs() < 1e-6, "{e}");
        let e = local_energy(&trig(), &Configuration::new(vec![0.5, 0.2, 0.0]), FD_STEP).unwrap();
        assert!((e - 24.0 * PI * PI).abs() / (24.0 * PI * PI) < 1e-6, "{e}");
        let lat = LatticeData::from_periods(1.0, 0.5).unwrap();
        let ell = ModelSpec::new(
            Geometry::Circle { l: 1.0 },
            3,
            0.0,
            PhiFamily::elliptic(2.0, lat).unwrap(),
        )
        .unwrap();
        let e = local_energy(&ell, &Configuration::new(vec![0.5, 0.2, 0.0]), FD_STEP).unwrap();
        let exact = 24.0 * lat.eta1();
        assert!((e - exact).abs() / exact < 1e-6, "{e} {exact}");
    }

    #[test]
    fn local_energy_guards() {
        let spec = rational(3);
        let near = Configuration::new(vec![1.0, 5e-4, 0.0]);
        assert!(matches!(
            local_energy(&spec, &near, FD_STEP),
            Err(Error::NearBoundary { .. })
        ));
        let out = Configuration::new(vec![0.0, 1.0, 2.0]);
        assert!(matches!(
            local_energy(&spec, &out, FD_STEP),
            Err(Error::OutsideSector(_))
        ));
        assert!(local_energy(&spec, &Configuration::new(vec![1.0, 0.0]), FD_STEP).is_err());
    }

    #[test]
    fn second_order_convergence() {
        let spec = rational(3);
        let cfg = Configuration::new(vec![0.9, 0.1, -0.8]);
        let err = |h: f64| (local_energy(&spec, &cfg, h).unwrap() - 11.0).abs();
        for h in [2e-2, 1e-2] {
            let ratio = err(h) / err(h / 2.0);
            assert!((3.6..4.4).contains(&ratio), "h = {h}: ratio {ratio}");
        }
    }

    #[test]
    fn named_families_are_eigenfunctions() {
        let lat = LatticeData::from_periods(1.0, 0.5).unwrap();
        let mut specs = vec![rational(3), rational(4), rational(5), trig()];
        specs.push(
            ModelSpec::new(
                Geometry::Line,
                3,
                1.0,
                PhiFamily::hyperbolic(2.0, 1.0).unwrap(),
            )
            .unwrap(),
        );
        specs.push(
            ModelSpec::new(
                Geometry::Circle { l: 1.0 },
                3,
                0.0,
                PhiFamily::elliptic(2.0, lat).unwrap(),
            )
            .unwrap(),
        );
        for spec in specs {
            let rep = residual_energy(&spec, 20, 11, FD_STEP).unwrap();
            assert!(
                rep.passed(),
                "{} N={}: {:?} {:?}",
                spec.phi().name(),
                spec.n(),
                rep.spread,
                rep.energy_error()
            );
        }
    }

    #[test]
    fn hyperbolic_without_confinement() {
        let spec = ModelSpec::new(
            Geometry::Line,
            4,
            0.0,
            PhiFamily::hyperbolic(2.0, 1.0).unwrap(),
        )
        .unwrap();
        let rep = residual_energy(&spec, 20, 5, FD_STEP).unwrap();
        assert_eq!(rep.closed_form_energy, Some(-24.0));
        assert!(
            (rep.mean_energy + 24.0).abs() / 24.0 < 1e-8,
            "{}",
            rep.mean_energy
        );
        assert!(rep.passed());
    }

    #[test]
    fn arbitrary_odd_phi_is_an_eigenfunction() {
        let spec = rational(3).with_phi(custom_sine()).unwrap();
        let rep = residual_energy(&spec, 20, 3, FD_STEP).unwrap();
        assert_eq!(rep.closed_form_energy, None);
        assert!(rep.spread_ok(), "{}", rep.spread);
        // the bond terms carry no constant, so E = Nω
        assert!((rep.mean_energy - 3.0).abs() < 1e-6);
    }

    #[test]
    fn mismatched_residue_fails_by_a_wide_margin() {
        let broken = PhiFamily::custom_unchecked(CustomPhi {
            phi: Arc::new(|x| 2.0 / x),
            dphi: Arc::new(|x| -2.0 / (x * x)),
            big_phi: Arc::new(|_| 0.0),
            alpha: 2.1,
            label: "alpha mismatch".into(),
        });
        let spec = rational(3).with_phi(broken).unwrap();
        let rep = residual_energy(&spec, 20, 11, FD_STEP).unwrap();
        assert!(rep.spread > 1e-2);
        assert!(rep.relative_spread() > NEGATIVE_CONTROL_MARGIN * RESIDUAL_SPREAD_TOL);
    }

    #[test]
    fn report_is_thread_count_independent() {
        let spec = trig();
        let a = residual_energy(&spec, 16, 9, FD_STEP).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| residual_energy(&spec, 16, 9, FD_STEP).unwrap());
        assert_eq!(a, b);
        assert!(residual_energy(&spec, 1, 9, FD_STEP).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn probes_stay_inside_with_margin(seed in any::<u64>(), n in 3usize..9, np in 2usize..30, circle in any::<bool>()) {
            let spec = if circle {
                ModelSpec::new(Geometry::Circle { l: 2.0 }, n, 0.0, PhiFamily::trigonometric(2.0, 2.0).unwrap()).unwrap()
            } else {
                ModelSpec::new(Geometry::Line, n, 1.0, PhiFamily::rational(2.0).unwrap()).unwrap()
            };
            let probes = probe_configurations(&spec, np, seed);
            prop_assert_eq!(probes.len(), np);
            let min_gap = if circle { 2.0 / (2.0 * n as f64) } else { 0.5 };
            for p in &probes {
                prop_assert!(spec.in_sector(p));
                prop_assert!(spec.boundary_distance(p) >= min_gap * (1.0 - 1e-12));
            }
        }
    }
}
