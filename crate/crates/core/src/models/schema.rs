//! JSON form of [`ModelSpec`].
//!
//! ```json
//! {"geometry": "circle", "l": 1.0, "n": 3, "omega": 0.0,
//!  "family": "elliptic", "alpha": 2.0, "im_omega3": 0.5}
//! ```
//!
//! | key         | used by                                            |
//! |-------------|----------------------------------------------------|
//! | `geometry`  | `"line"` or `"circle"`                             |
//! | `n`         | particle count, at least 3                         |
//! | `omega`     | confinement, default 0; must be 0 on a circle      |
//! | `family`    | `rational`, `trigonometric`, `hyperbolic`, `elliptic` |
//! | `alpha`     | pole residue, > 1/2                                |
//! | `l`         | circumference (circle), period (trigonometric, elliptic) |
//! | `beta`      | hyperbolic scale                                   |
//! | `im_omega3` | elliptic imaginary half-period (with `l`)          |
//! | `g2`, `g3`  | elliptic invariants (alternative to `l`/`im_omega3`) |
//!
//! Serialization always writes the elliptic lattice as `l` + `im_omega3`.
//! Custom φ has no JSON form.

use serde::{Deserialize, Serialize};

use super::{Geometry, ModelSpec, PhiFamily};
use crate::elliptic::LatticeData;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Line,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Rational,
    Trigonometric,
    Hyperbolic,
    Elliptic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelJson {
    pub geometry: GeometryKind,
    pub n: usize,
    #[serde(default)]
    pub omega: f64,
    pub family: FamilyKind,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im_omega3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g3: Option<f64>,
}

fn missing(key: &str, family: &str) -> Error {
    Error::InvalidModel(format!("'{key}' is required for {family}"))
}

impl TryFrom<ModelJson> for ModelSpec {
    type Error = Error;

    fn try_from(j: ModelJson) -> Result<Self, Error> {
        let phi = match j.family {
            FamilyKind::Rational => PhiFamily::rational(j.alpha)?,
            FamilyKind::Trigonometric => PhiFamily::trigonometric(
                j.alpha,
                j.l.ok_or_else(|| missing("l", "trigonometric"))?,
            )?,
            FamilyKind::Hyperbolic => PhiFamily::hyperbolic(
                j.alpha,
                j.beta.ok_or_else(|| missing("beta", "hyperbolic"))?,
            )?,
            FamilyKind::Elliptic => {
                let lattice = match (j.g2, j.g3, j.im_omega3) {
                    (Some(g2), Some(g3), None) => {
                        let lat = LatticeData::from_invariants(g2, g3)?;
                        if let Some(l) = j.l {
                            if (l - lat.l()).abs() > 1e-10 * l {
                                return Err(Error::InvalidModel(format!(
                                    "l = {l} disagrees with the period {} of (g2, g3)",
                                    lat.l()
                                )));
                            }
                        }
                        lat
                    }
                    (None, None, Some(im)) => {
                        LatticeData::from_periods(j.l.ok_or_else(|| missing("l", "elliptic"))?, im)?
                    }
                    _ => {
                        return Err(Error::InvalidModel(
                            "elliptic needs either (l, im_omega3) or (g2, g3)".into(),
                        ))
                    }
                };
                PhiFamily::elliptic(j.alpha, lattice)?
            }
        };
        let geometry = match j.geometry {
            GeometryKind::Line => Geometry::Line,
            GeometryKind::Circle => {
                let l =
                    j.l.or(phi.period())
                        .ok_or_else(|| missing("l", "circle geometry"))?;
                Geometry::Circle { l }
            }
        };
        ModelSpec::new(geometry, j.n, j.omega, phi)
    }
}

impl TryFrom<&ModelSpec> for ModelJson {
    type Error = Error;

    fn try_from(spec: &ModelSpec) -> Result<Self, Error> {
        let mut j = ModelJson {
            geometry: GeometryKind::Line,
            n: spec.n(),
            omega: spec.omega(),
            family: FamilyKind::Rational,
            alpha: spec.alpha(),
            l: None,
            beta: None,
            im_omega3: None,
            g2: None,
            g3: None,
        };
        if let Geometry::Circle { l } = spec.geometry() {
            j.geometry = GeometryKind::Circle;
            j.l = Some(l);
        }
        match spec.phi() {
            PhiFamily::Rational { .. } => {}
            PhiFamily::Trigonometric { l, .. } => {
                j.family = FamilyKind::Trigonometric;
                j.l = Some(*l);
            }
            PhiFamily::Hyperbolic { beta, .. } => {
                j.family = FamilyKind::Hyperbolic;
                j.beta = Some(*beta);
            }
            PhiFamily::Elliptic { lattice, .. } => {
                j.family = FamilyKind::Elliptic;
                j.l = Some(lattice.l());
                j.im_omega3 = Some(lattice.im_omega3());
            }
            PhiFamily::Custom(_) => {
                return Err(Error::Serde("custom phi has no JSON representation".into()))
            }
        }
        Ok(j)
    }
}

impl ModelSpec {
    pub fn from_json(s: &str) -> Result<Self, Error> {
        let j: ModelJson = serde_json::from_str(s).map_err(|e| Error::Serde(e.to_string()))?;
        j.try_into()
    }

    pub fn to_json(&self) -> Result<String, Error> {
        let j = ModelJson::try_from(self)?;
        serde_json::to_string_pretty(&j).map_err(|e| Error::Serde(e.to_string()))
    }
}

impl Serialize for ModelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ModelJson::try_from(self)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModelSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ModelJson::deserialize(d)?;
        ModelSpec::try_from(j).map_err(serde::de::Error::custom)
    }
}
