use super::{Configuration, Geometry, ModelSpec, PhiFamily};
use crate::constants::POLE_GUARD;
use crate::error::{Error, Result};

/// One-, two- and three-body parts of the potential, each summed over the
/// geometry's index range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialTerms {
    pub v1_sum: f64,
    pub v2_sum: f64,
    pub v3_sum: f64,
}

impl PotentialTerms {
    pub fn total(&self) -> f64 {
        self.v1_sum + self.v2_sum + self.v3_sum
    }
}

pub fn phi_eval(fam: &PhiFamily, x: f64) -> Result<f64> {
    fam.phi(x)
}

pub fn dphi_eval(fam: &PhiFamily, x: f64) -> Result<f64> {
    fam.dphi(x)
}

fn line_gauge_point(fam: &PhiFamily) -> f64 {
    match fam.period() {
        Some(p) if p <= 1.0 => 0.5 * p,
        _ => 1.0,
    }
}

/// Φ, the antiderivative of the regular part of φ.
///
/// On the line the regular part is φ - α/x and Φ(1) = 0. On a circle of
/// circumference l it is φ - α(1/x + 1/(x - l)), defined on 0 < x < l, with
/// Φ(l/2) = 0. For a custom φ the user's Φ is returned as is.
pub fn big_phi_eval(fam: &PhiFamily, geometry: Geometry, x: f64) -> Result<f64> {
    let alpha = fam.alpha();
    if let PhiFamily::Custom(c) = fam {
        let v = (c.big_phi)(x);
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Pole { x })
        };
    }
    match geometry {
        Geometry::Line => {
            if x.abs() <= POLE_GUARD {
                return Err(Error::Pole { x });
            }
            let g = line_gauge_point(fam);
            let at = |t: f64| -> Result<f64> { Ok(fam.log_chi(t)? - alpha * t.abs().ln()) };
            Ok(at(x)? - at(g)?)
        }
        Geometry::Circle { l } => {
            if !(x > 0.0 && x < l) {
                return Err(Error::Domain(format!(
                    "circle Phi needs 0 < x < {l}, got {x}"
                )));
            }
            let at = |t: f64| -> Result<f64> { Ok(fam.log_chi(t)? - alpha * (t * (l - t)).ln()) };
            Ok(at(x)? - at(0.5 * l)?)
        }
    }
}

impl ModelSpec {
    /// Two-body potential 2(φ′ + φ² - ωxφ) less the family's bond constant.
    pub fn two_body(&self, x: f64) -> Result<f64> {
        self.pole_guard(x)?;
        let (p, dp) = (self.phi.phi(x)?, self.phi.dphi(x)?);
        Ok(2.0 * (dp + p * p - self.omega * x * p) - self.phi.bond_constant(self.omega))
    }

    /// Three-body potential -2φ(x)φ(y).
    pub fn three_body(&self, x: f64, y: f64) -> Result<f64> {
        self.pole_guard(x)?;
        self.pole_guard(y)?;
        Ok(-2.0 * self.phi.phi(x)? * self.phi.phi(y)?)
    }

    fn pole_guard(&self, x: f64) -> Result<()> {
        if x.abs() < POLE_GUARD * self.geometry.scale() || !x.is_finite() {
            Err(Error::Pole { x })
        } else {
            Ok(())
        }
    }

    /// log χ(x) - Φ(x) pole part for |x| inside the fundamental domain.
    fn log_chi_bond(&self, x: f64) -> Result<f64> {
        let a = self.alpha();
        let pole = match self.geometry {
            Geometry::Line => a * x.ln(),
            Geometry::Circle { l } => a * (x * (l - x)).ln(),
        };
        Ok(pole + big_phi_eval(&self.phi, self.geometry, x)?)
    }
}

pub fn potential_terms(spec: &ModelSpec, cfg: &Configuration) -> Result<PotentialTerms> {
    spec.check_len(cfg)?;
    let x = cfg.as_slice();
    let d = spec.differences(cfg);
    let v1_sum = spec.omega * spec.omega * x.iter().map(|v| v * v).sum::<f64>();
    let mut v2_sum = 0.0;
    for &di in &d {
        v2_sum += spec.two_body(di)?;
    }
    let mut v3_sum = 0.0;
    let triples = match spec.geometry {
        Geometry::Line => d.len().saturating_sub(1),
        Geometry::Circle { .. } => d.len(),
    };
    for i in 0..triples {
        v3_sum += spec.three_body(d[i], d[(i + 1) % d.len()])?;
    }
    Ok(PotentialTerms {
        v1_sum,
        v2_sum,
        v3_sum,
    })
}

/// V(x) = ω²r² + Σ V₂(xᵢ - xᵢ₊₁) + Σ V₃(xᵢ - xᵢ₊₁, xᵢ₊₁ - xᵢ₊₂).
///
/// For the named families V₂ omits the constant returned by
/// [`PhiFamily::bond_constant`], matching their closed-form energies.
pub fn potential(spec: &ModelSpec, cfg: &Configuration) -> Result<f64> {
    Ok(potential_terms(spec, cfg)?.total())
}

/// log|ψ| up to the gauge constant fixed by Φ.
///
/// Returns `-∞` when a neighbor gap is within the pole guard of zero and an
/// error when the configuration is outside the sector.
pub fn log_psi(spec: &ModelSpec, cfg: &Configuration) -> Result<f64> {
    spec.check_len(cfg)?;
    let gaps = spec.gaps(cfg);
    if let Some((i, g)) = gaps.iter().enumerate().find(|(_, g)| **g < 0.0) {
        return Err(Error::OutsideSector(format!("gap {i} is {g}")));
    }
    if gaps
        .iter()
        .any(|&g| g <= POLE_GUARD * spec.geometry.scale())
    {
        return Ok(f64::NEG_INFINITY);
    }
    let x = cfg.as_slice();
    let mut acc = -0.5 * spec.omega * x.iter().map(|v| v * v).sum::<f64>();
    for d in spec.differences(cfg) {
        acc += spec.log_chi_bond(d.abs())?;
    }
    Ok(acc)
}

/// log χ(x) for a single bond, x > 0 (and x < l on the circle), in the gauge
/// fixed by Φ: α log x + Φ(x) on the line, α log(x(l - x)) + Φ(x) on the circle.
pub fn log_chi(spec: &ModelSpec, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "bond length must be positive, got {x}"
        )));
    }
    spec.pole_guard(x)?;
    spec.log_chi_bond(x)
}

/// Closed-form ground energy Nω - (bonds)·κ of the named families.
pub fn ground_energy(spec: &ModelSpec) -> Result<f64> {
    if matches!(spec.phi, PhiFamily::Custom(_)) {
        return Err(Error::UnsupportedFamily);
    }
    Ok(spec.n as f64 * spec.omega - spec.n_bonds() as f64 * spec.phi.bond_constant(spec.omega))
}
