use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    /// p(s) = A s^β exp(-c s²) with unit norm and unit mean, β ∈ {1, 2, 4}.
    WignerSurmise { beta: u32 },
    /// p(s) = exp(-s).
    Poisson,
}

/// (A_β, c_β) from ∫p = 1 and ∫s·p = 1:
/// c = [Γ((β+2)/2) / Γ((β+1)/2)]², A = 2c^((β+1)/2) / Γ((β+1)/2).
pub fn wigner_constants(beta: u32) -> Result<(f64, f64)> {
    if !matches!(beta, 1 | 2 | 4) {
        return Err(Error::Domain(format!(
            "Wigner surmise needs beta in {{1, 2, 4}}, got {beta}"
        )));
    }
    let b = beta as f64;
    let g1 = gamma((b + 1.0) / 2.0);
    let c = (gamma((b + 2.0) / 2.0) / g1).powi(2);
    Ok((2.0 * c.powf((b + 1.0) / 2.0) / g1, c))
}

pub fn reference_curve(kind: ReferenceKind, s_grid: &[f64]) -> Result<Vec<f64>> {
    if let Some(s) = s_grid.iter().find(|s| s.is_nan() || **s < 0.0) {
        return Err(Error::Domain(format!(
            "spacing grid must be nonnegative, got {s}"
        )));
    }
    match kind {
        ReferenceKind::Poisson => Ok(s_grid.iter().map(|s| (-s).exp()).collect()),
        ReferenceKind::WignerSurmise { beta } => {
            let (a, c) = wigner_constants(beta)?;
            Ok(s_grid
                .iter()
                .map(|&s| a * s.powi(beta as i32) * (-c * s * s).exp())
                .collect())
        }
    }
}

/// ∫_{s_max}^∞ p(s) ds.
pub(crate) fn tail_mass(kind: ReferenceKind, s_max: f64) -> Result<f64> {
    match kind {
        ReferenceKind::Poisson => Ok((-s_max).exp()),
        ReferenceKind::WignerSurmise { beta } => {
            let (a, c) = wigner_constants(beta)?;
            let b = beta as i32;
            // the integrand is negligible past s_max + 12/√c
            let end = s_max + 12.0 / c.sqrt();
            let m = 2000;
            let h = (end - s_max) / m as f64;
            let f = |s: f64| a * s.powi(b) * (-c * s * s).exp();
            let mut acc = f(s_max) + f(end);
            for k in 1..m {
                acc += f(s_max + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            Ok(acc * h / 3.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::integrate;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_constants() {
        let (a, c) = wigner_constants(1).unwrap();
        assert!((c - PI / 4.0).abs() < 1e-13 && (a - PI / 2.0).abs() < 1e-13);
        let (a, c) = wigner_constants(2).unwrap();
        assert!((c - 4.0 / PI).abs() < 1e-13 && (a - 32.0 / (PI * PI)).abs() < 1e-13);
        let (a, c) = wigner_constants(4).unwrap();
        assert!((c - 64.0 / (9.0 * PI)).abs() < 1e-13);
        assert!((a - 262144.0 / (729.0 * PI.powi(3))).abs() < 1e-12);
        assert!(wigner_constants(3).is_err());
    }

    #[test]
    fn moments_by_quadrature() {
        for kind in [
            ReferenceKind::Poisson,
            ReferenceKind::WignerSurmise { beta: 1 },
            ReferenceKind::WignerSurmise { beta: 2 },
            ReferenceKind::WignerSurmise { beta: 4 },
        ] {
            let p = |s: f64| reference_curve(kind, &[s]).unwrap()[0];
            let norm = integrate(&p, 0.0, 60.0, 1e-13);
            let mean = integrate(&|s| s * p(s), 0.0, 60.0, 1e-13);
            assert!((norm - 1.0).abs() < 1e-10, "{kind:?} {norm}");
            assert!((mean - 1.0).abs() < 1e-10, "{kind:?} {mean}");
            let tail = integrate(&p, 2.5, 60.0, 1e-14);
            assert!((tail_mass(kind, 2.5).unwrap() - tail).abs() < 1e-10);
        }
        assert_eq!(
            reference_curve(ReferenceKind::Poisson, &[0.0]).unwrap(),
            vec![1.0]
        );
        assert!(reference_curve(ReferenceKind::Poisson, &[-1.0]).is_err());
    }
}
