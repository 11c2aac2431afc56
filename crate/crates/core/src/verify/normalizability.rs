use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{big_phi_eval, Geometry, ModelSpec};

const TAIL_PROBES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizabilityReport {
    /// α > 1/2.
    pub alpha_ok: bool,
    pub omega_positive: bool,
    /// Least c with Φ(x) ≤ cx² on the tail R/2 ≤ |x| ≤ R.
    pub gaussian_bound_c: f64,
    pub circulant_eigenvalues: Vec<f64>,
    /// min(circulant_eigenvalues) > 0.
    pub positive_definite: bool,
}

impl NormalizabilityReport {
    pub fn passed(&self) -> bool {
        self.alpha_ok && self.omega_positive && self.positive_definite
    }
}

/// Eigenvalues of the N×N circulant with first row (ω - 4c, 2c, 0, …, 0, 2c):
/// λⱼ = ω - 8c sin²(jπ/N), j = 0..N-1. For N = 2 the form is the 2×2 matrix
/// [[ω - 4c, 2c], [2c, ω - 4c]] with eigenvalues ω - 2c and ω - 6c.
pub fn circulant_eigenvalues(omega: f64, c: f64, n: usize) -> Result<Vec<f64>> {
    match n {
        0 | 1 => Err(Error::InvalidModel(format!(
            "circulant needs n >= 2, got {n}"
        ))),
        2 => Ok(vec![omega - 2.0 * c, omega - 6.0 * c]),
        _ => Ok((0..n)
            .map(|j| omega - 8.0 * c * (j as f64 * PI / n as f64).sin().powi(2))
            .collect()),
    }
}

/// Gaussian-tail gate for line models.
///
/// Only the behavior at infinity matters, so c is fitted on the tail
/// R/2 ≤ |x| ≤ R (both signs), R = `probe_range`.
pub fn check_normalizability(spec: &ModelSpec, probe_range: f64) -> Result<NormalizabilityReport> {
    if spec.geometry().is_circle() {
        return Err(Error::Geometry { expected: "line" });
    }
    if !(probe_range.is_finite() && probe_range > 0.0) {
        return Err(Error::Domain(format!(
            "probe range must be positive, got {probe_range}"
        )));
    }
    let mut c = f64::NEG_INFINITY;
    for k in 0..TAIL_PROBES {
        let x = probe_range * (0.5 + 0.5 * k as f64 / (TAIL_PROBES - 1) as f64);
        for s in [x, -x] {
            let v = big_phi_eval(spec.phi(), Geometry::Line, s)?;
            c = c.max(v / (s * s));
        }
    }
    let circulant = circulant_eigenvalues(spec.omega(), c, spec.n())?;
    let min = circulant.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(NormalizabilityReport {
        alpha_ok: spec.alpha() > 0.5,
        omega_positive: spec.omega() > 0.0,
        gaussian_bound_c: c,
        circulant_eigenvalues: circulant,
        positive_definite: min > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{CustomPhi, PhiFamily};
    use nalgebra::{DMatrix, SymmetricEigen};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn dense(omega: f64, c: f64, n: usize) -> Vec<f64> {
        let mut b = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            b[(i, i)] = omega - 4.0 * c;
            if n == 2 {
                b[(i, 1 - i)] = 2.0 * c;
            } else {
                b[(i, (i + 1) % n)] = 2.0 * c;
                b[(i, (i + n - 1) % n)] = 2.0 * c;
            }
        }
        let mut e: Vec<f64> = SymmetricEigen::new(b).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn documented_values() {
        let e = circulant_eigenvalues(1.0, 0.1, 4).unwrap();
        for (a, b) in e.iter().zip([1.0, 0.6, 0.2, 0.6]) {
            assert!((a - b).abs() < 1e-15);
        }
        let pair = circulant_eigenvalues(1.0, 0.1, 2).unwrap();
        assert!((pair[0] - 0.8).abs() < 1e-15 && (pair[1] - 0.4).abs() < 1e-15);
        assert!(circulant_eigenvalues(1.0, 0.1, 1).is_err());
        let big = circulant_eigenvalues(1.0, 0.125, 1001).unwrap();
        let min = big.into_iter().fold(f64::INFINITY, f64::min);
        assert!(min.abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn circulant_matches_dense_eigensolver(omega in 0.0f64..5.0, c in -2.0f64..2.0, n in 2usize..24) {
            let fast = sorted(circulant_eigenvalues(omega, c, n).unwrap());
            let slow = dense(omega, c, n);
            for (a, b) in fast.iter().zip(&slow) {
                prop_assert!((a - b).abs() < crate::constants::CIRCULANT_TOL * (1.0 + omega + c.abs()));
            }
        }
    }

    fn quadratic_phi(k: f64) -> PhiFamily {
        PhiFamily::custom(CustomPhi {
            phi: Arc::new(move |x| 2.0 / x + 2.0 * k * x),
            dphi: Arc::new(move |x| -2.0 / (x * x) + 2.0 * k),
            big_phi: Arc::new(move |x| k * x * x),
            alpha: 2.0,
            label: format!("quadratic {k}"),
        })
        .unwrap()
    }

    #[test]
    fn families() {
        let r = ModelSpec::new(Geometry::Line, 3, 1.0, PhiFamily::rational(2.0).unwrap()).unwrap();
        let rep = check_normalizability(&r, 50.0).unwrap();
        assert_eq!(rep.gaussian_bound_c, 0.0);
        assert!(rep.passed());

        let h = ModelSpec::new(
            Geometry::Line,
            3,
            1.0,
            PhiFamily::hyperbolic(2.0, 1.0).unwrap(),
        )
        .unwrap();
        let small = check_normalizability(&h, 10.0).unwrap().gaussian_bound_c;
        let large = check_normalizability(&h, 100.0).unwrap().gaussian_bound_c;
        assert!(large < small && large < 0.05, "{small} {large}");
        assert!(check_normalizability(&h, 100.0).unwrap().passed());

        let bad = r.with_phi(quadratic_phi(0.25)).unwrap();
        let rep = check_normalizability(&bad, 50.0).unwrap();
        assert!((rep.gaussian_bound_c - 0.25).abs() < 1e-12);
        assert!(!rep.positive_definite && !rep.passed());
        let good = r.with_phi(quadratic_phi(1.0 / 16.0)).unwrap();
        assert!(check_normalizability(&good, 50.0).unwrap().passed());

        let circle = ModelSpec::new(
            Geometry::Circle { l: 1.0 },
            3,
            0.0,
            PhiFamily::trigonometric(2.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            check_normalizability(&circle, 1.0),
            Err(Error::Geometry { .. })
        ));

        let free =
            ModelSpec::new(Geometry::Line, 3, 0.0, PhiFamily::rational(2.0).unwrap()).unwrap();
        assert!(!check_normalizability(&free, 50.0).unwrap().passed());
    }
}
