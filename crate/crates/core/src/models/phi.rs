//! The free function φ = χ'/χ and everything derived from it.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::elliptic::{self, LatticeData};
use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied φ together with φ′, the regular-part antiderivative Φ and
/// the pole residue α.
///
/// Φ must match the geometry the model is used in: on the line Φ′ = φ - α/x,
/// on a circle of circumference l Φ′ = φ - α(1/x + 1/(x - l)).
#[derive(Clone)]
pub struct CustomPhi {
    pub phi: ScalarFn,
    pub dphi: ScalarFn,
    pub big_phi: ScalarFn,
    pub alpha: f64,
    pub label: String,
}

impl fmt::Debug for CustomPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPhi")
            .field("label", &self.label)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CustomPhi {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.phi, &other.phi)
            && Arc::ptr_eq(&self.dphi, &other.dphi)
            && Arc::ptr_eq(&self.big_phi, &other.big_phi)
            && self.alpha == other.alpha
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhiFamily {
    /// φ = α/x
    Rational {
        alpha: f64,
    },
    /// φ = (πα/l) cot(πx/l)
    Trigonometric {
        alpha: f64,
        l: f64,
    },
    /// φ = αβ coth(βx)
    Hyperbolic {
        alpha: f64,
        beta: f64,
    },
    /// φ = α(ζ(x) - 2η₁x/l)
    Elliptic {
        alpha: f64,
        lattice: LatticeData,
    },
    Custom(CustomPhi),
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.5 {
        Ok(())
    } else {
        Err(Error::AlphaTooSmall(alpha))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "{name} must be positive and finite, got {v}"
        )))
    }
}

const CUSTOM_PROBES: [f64; 9] = [0.05, 0.1, 0.25, 0.4, 0.5, 0.75, 1.0, 1.5, 2.5];

impl PhiFamily {
    pub fn rational(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::Rational { alpha })
    }

    pub fn trigonometric(alpha: f64, l: f64) -> Result<Self> {
        check_alpha(alpha)?;
        positive("l", l)?;
        Ok(Self::Trigonometric { alpha, l })
    }

    pub fn hyperbolic(alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        positive("beta", beta)?;
        Ok(Self::Hyperbolic { alpha, beta })
    }

    pub fn elliptic(alpha: f64, lattice: LatticeData) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::Elliptic { alpha, lattice })
    }

    /// Custom φ; oddness and the residue at 0 are probed before acceptance.
    pub fn custom(custom: CustomPhi) -> Result<Self> {
        check_alpha(custom.alpha)?;
        let mut worst_odd: f64 = 0.0;
        for &x in &CUSTOM_PROBES {
            let (p, m) = ((custom.phi)(x), (custom.phi)(-x));
            if p.is_finite() && m.is_finite() {
                worst_odd = worst_odd.max((p + m).abs() / (1.0 + p.abs()));
            }
        }
        if worst_odd > 1e-10 {
            return Err(Error::InvalidModel(format!(
                "custom phi '{}' is not odd (violation {worst_odd:e})",
                custom.label
            )));
        }
        for &x in &[1e-7, -1e-7] {
            let residue = x * (custom.phi)(x);
            if residue.is_nan() || (residue - custom.alpha).abs() >= 1e-5 * (1.0 + custom.alpha) {
                return Err(Error::InvalidModel(format!(
                    "custom phi '{}' has x·phi(x) = {residue} near 0, expected alpha = {}",
                    custom.label, custom.alpha
                )));
            }
        }
        Ok(Self::Custom(custom))
    }

    /// Custom φ without the construction probes, for negative controls.
    pub fn custom_unchecked(custom: CustomPhi) -> Self {
        Self::Custom(custom)
    }

    pub fn alpha(&self) -> f64 {
        match self {
            Self::Rational { alpha }
            | Self::Trigonometric { alpha, .. }
            | Self::Hyperbolic { alpha, .. }
            | Self::Elliptic { alpha, .. } => *alpha,
            Self::Custom(c) => c.alpha,
        }
    }

    /// Real period of φ for the periodic families.
    pub fn period(&self) -> Option<f64> {
        match self {
            Self::Trigonometric { l, .. } => Some(*l),
            Self::Elliptic { lattice, .. } => Some(lattice.l()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::Rational { .. } => "rational",
            Self::Trigonometric { .. } => "trigonometric",
            Self::Hyperbolic { .. } => "hyperbolic",
            Self::Elliptic { .. } => "elliptic",
            Self::Custom(c) => &c.label,
        }
    }

    fn pole_check(&self, x: f64) -> Result<()> {
        let near = match self.period() {
            Some(p) => {
                let r = x - p * (x / p).round();
                r.abs() <= crate::constants::POLE_GUARD * p
            }
            None => x.abs() <= crate::constants::POLE_GUARD,
        };
        if near || !x.is_finite() {
            Err(Error::Pole { x })
        } else {
            Ok(())
        }
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        if !matches!(self, Self::Custom(_)) {
            self.pole_check(x)?;
        }
        Ok(match self {
            Self::Rational { alpha } => alpha / x,
            Self::Trigonometric { alpha, l } => {
                let k = PI / l;
                alpha * k / (k * x).tan()
            }
            Self::Hyperbolic { alpha, beta } => alpha * beta / (beta * x).tanh(),
            Self::Elliptic { alpha, lattice } => {
                alpha * (elliptic::zeta(x, lattice)? - 2.0 * lattice.eta1() * x / lattice.l())
            }
            Self::Custom(c) => finite((c.phi)(x), x)?,
        })
    }

    pub fn dphi(&self, x: f64) -> Result<f64> {
        if !matches!(self, Self::Custom(_)) {
            self.pole_check(x)?;
        }
        Ok(match self {
            Self::Rational { alpha } => -alpha / (x * x),
            Self::Trigonometric { alpha, l } => {
                let k = PI / l;
                let s = (k * x).sin();
                -alpha * k * k / (s * s)
            }
            Self::Hyperbolic { alpha, beta } => {
                let s = (beta * x).sinh();
                -alpha * beta * beta / (s * s)
            }
            Self::Elliptic { alpha, lattice } => {
                -alpha * (elliptic::wp(x, lattice)? + 2.0 * lattice.eta1() / lattice.l())
            }
            Self::Custom(c) => finite((c.dphi)(x), x)?,
        })
    }

    /// log χ(x) for x > 0 in each named family's natural normalization
    /// (χ = xᵅ, |sin|ᵅ, |sinh|ᵅ, |σ|ᵅ e^{-αη₁x²/l}). Not defined for Custom.
    pub(crate) fn log_chi(&self, x: f64) -> Result<f64> {
        let x = x.abs();
        self.pole_check(x)?;
        Ok(match self {
            Self::Rational { alpha } => alpha * x.ln(),
            Self::Trigonometric { alpha, l } => {
                // fold onto (0, l/2] for accuracy near the far pole
                let r = x - l * (x / l).floor();
                let r = r.min(l - r);
                alpha * (PI * r / l).sin().ln()
            }
            Self::Hyperbolic { alpha, beta } => alpha * ln_sinh(beta * x),
            Self::Elliptic { alpha, lattice } => {
                // χ is even and l-periodic
                let l = lattice.l();
                let r = x - l * (x / l).floor();
                alpha * (elliptic::log_sigma(r, lattice)? - lattice.eta1() * r * r / l)
            }
            Self::Custom(_) => return Err(Error::UnsupportedFamily),
        })
    }

    /// Constant that the named closed-form potential drops from
    /// 2(φ′ + φ² - ωxφ) per bond, moving it into the ground energy.
    pub fn bond_constant(&self, omega: f64) -> f64 {
        match self {
            Self::Rational { alpha } => -2.0 * omega * alpha,
            Self::Trigonometric { alpha, l } => -2.0 * (PI * alpha / l).powi(2),
            Self::Hyperbolic { alpha, beta } => 2.0 * (alpha * beta).powi(2),
            Self::Elliptic { alpha, lattice } => -4.0 * alpha * lattice.eta1() / lattice.l(),
            Self::Custom(_) => 0.0,
        }
    }
}

fn finite(v: f64, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pole { x })
    }
}

/// ln sinh(t) for t > 0 without overflow.
fn ln_sinh(t: f64) -> f64 {
    if t > 20.0 {
        t - std::f64::consts::LN_2 + (-(-2.0 * t).exp()).ln_1p()
    } else {
        t.sinh().ln()
    }
}
