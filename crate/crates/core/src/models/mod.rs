//! Model definitions: geometry, φ families, configurations, and the
//! potential / ground-state pair built from them.

mod phi;
mod potential;
mod schema;

pub use phi::{CustomPhi, PhiFamily, ScalarFn};
pub use potential::{
    big_phi_eval, dphi_eval, ground_energy, log_chi, log_psi, phi_eval, potential, potential_terms,
    PotentialTerms,
};
pub use schema::{FamilyKind, GeometryKind, ModelJson};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Line,
    /// Circle of circumference `l`.
    Circle {
        l: f64,
    },
}

impl Geometry {
    /// Length scale used by the pole guard and probe generation.
    pub fn scale(&self) -> f64 {
        match self {
            Geometry::Line => 1.0,
            Geometry::Circle { l } => *l,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Geometry::Circle { .. })
    }
}

/// Particle positions, ordered x₁ > x₂ > ⋯ > x_N inside the sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration(pub Vec<f64>);

impl Configuration {
    pub fn new(x: Vec<f64>) -> Self {
        Self(x)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn shifted(&self, t: f64) -> Self {
        Self(self.0.iter().map(|x| x + t).collect())
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(x: Vec<f64>) -> Self {
        Self(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    geometry: Geometry,
    n: usize,
    omega: f64,
    phi: PhiFamily,
}

impl ModelSpec {
    pub fn new(geometry: Geometry, n: usize, omega: f64, phi: PhiFamily) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidModel(format!(
                "need at least 3 particles for three-body terms, got {n}"
            )));
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::InvalidModel(format!(
                "omega must be >= 0, got {omega}"
            )));
        }
        let alpha = phi.alpha();
        if !(alpha.is_finite() && alpha > 0.5) {
            return Err(Error::AlphaTooSmall(alpha));
        }
        if let Geometry::Circle { l } = geometry {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "circumference must be positive, got {l}"
                )));
            }
            if omega != 0.0 {
                return Err(Error::InvalidModel(
                    "omega must be 0 on a circle: the external potential omega^2 r^2 is not periodic"
                        .into(),
                ));
            }
            if let Some(p) = phi.period() {
                if (p - l).abs() > 1e-10 * l {
                    return Err(Error::InvalidModel(format!(
                        "phi period {p} does not match circumference {l}"
                    )));
                }
            }
        }
        Ok(Self {
            geometry,
            n,
            omega,
            phi,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn phi(&self) -> &PhiFamily {
        &self.phi
    }

    pub fn alpha(&self) -> f64 {
        self.phi.alpha()
    }

    /// Number of nearest-neighbor bonds: N - 1 on the line, N on the circle.
    pub fn n_bonds(&self) -> usize {
        match self.geometry {
            Geometry::Line => self.n - 1,
            Geometry::Circle { .. } => self.n,
        }
    }

    /// Same model with a different φ (geometry, N and ω kept).
    pub fn with_phi(&self, phi: PhiFamily) -> Result<Self> {
        Self::new(self.geometry, self.n, self.omega, phi)
    }

    /// Neighbor differences xᵢ - xᵢ₊₁; on the circle the last one wraps to x_N - x₁.
    pub fn differences(&self, cfg: &Configuration) -> Vec<f64> {
        let x = cfg.as_slice();
        let n = x.len();
        let mut d: Vec<f64> = x.windows(2).map(|w| w[0] - w[1]).collect();
        if self.geometry.is_circle() && n > 0 {
            d.push(x[n - 1] - x[0]);
        }
        d
    }

    /// Gaps to the next particle, all positive inside the sector; on the
    /// circle the last one is the arc l - (x₁ - x_N).
    pub fn gaps(&self, cfg: &Configuration) -> Vec<f64> {
        let x = cfg.as_slice();
        let n = x.len();
        let mut g: Vec<f64> = x.windows(2).map(|w| w[0] - w[1]).collect();
        if let Geometry::Circle { l } = self.geometry {
            g.push(l - (x[0] - x[n - 1]));
        }
        g
    }

    pub fn check_len(&self, cfg: &Configuration) -> Result<()> {
        if cfg.len() != self.n {
            return Err(Error::InvalidModel(format!(
                "configuration has {} coordinates, model has N = {}",
                cfg.len(),
                self.n
            )));
        }
        if cfg.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// True when the configuration lies strictly inside the ordered sector.
    pub fn in_sector(&self, cfg: &Configuration) -> bool {
        cfg.len() == self.n && self.gaps(cfg).iter().all(|&g| g > 0.0)
    }

    /// Smallest gap to the sector boundary.
    pub fn boundary_distance(&self, cfg: &Configuration) -> f64 {
        self.gaps(cfg).into_iter().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let r = PhiFamily::rational(2.0).unwrap();
        assert!(ModelSpec::new(Geometry::Line, 2, 1.0, r.clone()).is_err());
        assert!(ModelSpec::new(Geometry::Circle { l: 1.0 }, 3, 1.0, r.clone()).is_err());
        assert!(ModelSpec::new(Geometry::Circle { l: 1.0 }, 3, 0.0, r.clone()).is_ok());
        let t = PhiFamily::trigonometric(2.0, 1.0).unwrap();
        assert!(ModelSpec::new(Geometry::Circle { l: 2.0 }, 3, 0.0, t.clone()).is_err());
        assert!(ModelSpec::new(Geometry::Line, 3, -1.0, t).is_err());
        let weak = PhiFamily::Rational { alpha: 0.4 };
        assert!(matches!(
            ModelSpec::new(Geometry::Line, 3, 1.0, weak),
            Err(Error::AlphaTooSmall(_))
        ));
    }

    #[test]
    fn sector_and_gaps() {
        let spec = ModelSpec::new(
            Geometry::Circle { l: 1.0 },
            3,
            0.0,
            PhiFamily::trigonometric(2.0, 1.0).unwrap(),
        )
        .unwrap();
        let cfg = Configuration::new(vec![0.5, 0.2, 0.0]);
        assert!(spec.in_sector(&cfg));
        let g = spec.gaps(&cfg);
        assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(!spec.in_sector(&Configuration::new(vec![1.2, 0.5, 0.1])));
        assert!(!spec.in_sector(&Configuration::new(vec![0.5, 0.6, 0.1])));
    }
}
