//! Weierstrass ℘, ζ and log|σ| on the real axis of a rectangular lattice.
//!
//! The lattice has real period `l` and purely imaginary half-period
//! `ω₃ = i·im_omega3`. Everything is evaluated from theta-function q-series
//! with nome `q = exp(-2π·im_omega3 / l)`, writing `v = πx/l`:
//!
//! ```text
//! ζ(x)      = 2η₁x/l + (π/l) [cot v + 4 Σ aₙ sin 2nv]
//! ℘(x)      = -2η₁/l + (π/l)² [csc² v - 8 Σ n aₙ cos 2nv]
//! log|σ(x)| = log(l/π) + η₁x²/l + log|sin v| + Σ log(1 - 2q²ⁿ cos 2v + q⁴ⁿ) - 2 log(1 - q²ⁿ)
//! aₙ = q²ⁿ / (1 - q²ⁿ)
//! ```
//!
//! The invariants and η₁ come from the Eisenstein series E₂, E₄, E₆ in the
//! same nome. The inverse direction (invariants to periods) goes through the
//! roots e₁ > e₂ > e₃ of 4t³ - g₂t - g₃ and the arithmetic-geometric mean.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points closer than this (relative to `l`) to a lattice point are poles.
const LATTICE_POLE_TOL: f64 = 1e-13;

const MAX_TERMS: usize = 200_000;

/// Weierstrass invariants and real-axis periods of a rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeData {
    g2: f64,
    g3: f64,
    l: f64,
    im_omega3: f64,
    eta1: f64,
}

impl LatticeData {
    pub fn from_invariants(g2: f64, g3: f64) -> Result<Self> {
        lattice_from_invariants(g2, g3)
    }

    pub fn from_periods(l: f64, im_omega3: f64) -> Result<Self> {
        lattice_from_periods(l, im_omega3)
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn g3(&self) -> f64 {
        self.g3
    }

    /// Real fundamental period.
    pub fn l(&self) -> f64 {
        self.l
    }

    /// Magnitude of the imaginary half-period.
    pub fn im_omega3(&self) -> f64 {
        self.im_omega3
    }

    /// η₁ = ζ(l/2).
    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn nome(&self) -> f64 {
        nome(self.l, self.im_omega3)
    }

    /// Real half-period roots e₁ > e₂ > e₃ of 4t³ - g₂t - g₃.
    pub fn roots(&self) -> [f64; 3] {
        cubic_roots(self.g2, self.g3)
    }
}

fn nome(l: f64, im_omega3: f64) -> f64 {
    (-2.0 * PI * im_omega3 / l).exp()
}

/// Iterates `(n, q^{2n})` until `q^{2n}·n^power` is negligible.
fn q2n_terms(q: f64, power: i32) -> impl Iterator<Item = (f64, f64)> {
    let q2 = q * q;
    let mut q2n = 1.0;
    (1..MAX_TERMS)
        .map(move |n| {
            q2n *= q2;
            (n as f64, q2n)
        })
        .take_while(move |&(n, q2n)| q2n * n.powi(power) > 1e-20 || n < 2.0)
}

/// (E₂, E₄, E₆) at nome q, with Eisenstein variable q² = e^{2πiτ}.
fn eisenstein(q: f64) -> (f64, f64, f64) {
    let (mut s1, mut s3, mut s5) = (0.0, 0.0, 0.0);
    for (n, q2n) in q2n_terms(q, 5) {
        let a = q2n / (1.0 - q2n);
        s1 += n * a;
        s3 += n.powi(3) * a;
        s5 += n.powi(5) * a;
    }
    (1.0 - 24.0 * s1, 1.0 + 240.0 * s3, 1.0 - 504.0 * s5)
}

fn eta1_from_periods(l: f64, im_omega3: f64) -> f64 {
    let (e2, _, _) = eisenstein(nome(l, im_omega3));
    PI * PI * e2 / (6.0 * l)
}

/// Builds the lattice whose ℘ has invariants `(g2, g3)`.
///
/// Requires `g2³ > 27 g3²`: three distinct real roots, so the lattice is
/// rectangular with a real period.
pub fn lattice_from_invariants(g2: f64, g3: f64) -> Result<LatticeData> {
    if !(g2.is_finite() && g3.is_finite()) {
        return Err(Error::Domain("invariants must be finite".into()));
    }
    let disc = g2.powi(3) - 27.0 * g3 * g3;
    if disc.is_nan() || disc <= 0.0 {
        return Err(Error::Domain(format!(
            "need g2^3 > 27 g3^2, got g2^3 - 27 g3^2 = {disc:e}"
        )));
    }
    let [e1, e2, e3] = cubic_roots(g2, g3);
    let (d13, d12, d23) = (e1 - e3, e1 - e2, e2 - e3);
    if !(d12 > 0.0 && d23 > 0.0) {
        return Err(Error::Domain(
            "roots of 4t^3 - g2 t - g3 are not numerically distinct".into(),
        ));
    }
    let omega1 = PI / (2.0 * agm(d13.sqrt(), d12.sqrt()));
    let im_omega3 = PI / (2.0 * agm(d13.sqrt(), d23.sqrt()));
    let l = 2.0 * omega1;
    if !(l.is_finite() && im_omega3.is_finite()) {
        return Err(Error::Domain("periods overflow".into()));
    }
    Ok(LatticeData {
        g2,
        g3,
        l,
        im_omega3,
        eta1: eta1_from_periods(l, im_omega3),
    })
}

/// Builds the rectangular lattice with periods `l` and `2i·im_omega3`.
pub fn lattice_from_periods(l: f64, im_omega3: f64) -> Result<LatticeData> {
    if !(l > 0.0 && im_omega3 > 0.0 && l.is_finite() && im_omega3.is_finite()) {
        return Err(Error::Domain(format!(
            "periods must be positive and finite, got l = {l}, im_omega3 = {im_omega3}"
        )));
    }
    let (e2, e4, e6) = eisenstein(nome(l, im_omega3));
    let pi2 = PI * PI;
    let g2 = 4.0 * pi2 * pi2 / 3.0 * e4 / l.powi(4);
    let g3 = 8.0 * pi2 * pi2 * pi2 / 27.0 * e6 / l.powi(6);
    Ok(LatticeData {
        g2,
        g3,
        l,
        im_omega3,
        eta1: pi2 * e2 / (6.0 * l),
    })
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Roots of 4t³ - g₂t - g₃ in decreasing order, assuming positive discriminant.
fn cubic_roots(g2: f64, g3: f64) -> [f64; 3] {
    let r = (g2 / 12.0).sqrt();
    // cos(3θ) = g3 / (8 r³)
    let c = (g3 / (8.0 * r.powi(3))).clamp(-1.0, 1.0);
    let theta = c.acos() / 3.0;
    let mut roots = [
        2.0 * r * theta.cos(),
        2.0 * r * (theta - 2.0 * PI / 3.0).cos(),
        2.0 * r * (theta + 2.0 * PI / 3.0).cos(),
    ];
    for t in roots.iter_mut() {
        for _ in 0..3 {
            let f = 4.0 * *t * *t * *t - g2 * *t - g3;
            let df = 12.0 * *t * *t - g2;
            if df != 0.0 {
                *t -= f / df;
            }
        }
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Splits `x = r + m·l` with `r ∈ [-l/2, l/2]`; errors at lattice points.
fn reduce(x: f64, lat: &LatticeData) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    let m = (x / lat.l).round();
    let r = x - m * lat.l;
    if r.abs() <= LATTICE_POLE_TOL * lat.l {
        return Err(Error::Pole { x });
    }
    Ok((r, m))
}

/// Weierstrass ℘(x) for real x.
pub fn wp(x: f64, lat: &LatticeData) -> Result<f64> {
    let (r, _) = reduce(x, lat)?;
    let k = PI / lat.l;
    let v = k * r;
    let s = v.sin();
    let mut series = 0.0;
    for (n, q2n) in q2n_terms(lat.nome(), 1) {
        series += n * q2n / (1.0 - q2n) * (2.0 * n * v).cos();
    }
    Ok(-2.0 * lat.eta1 / lat.l + k * k * (1.0 / (s * s) - 8.0 * series))
}

/// Weierstrass ζ(x) for real x; quasi-periodic with shift 2η₁ per period.
pub fn zeta(x: f64, lat: &LatticeData) -> Result<f64> {
    let (r, m) = reduce(x, lat)?;
    let k = PI / lat.l;
    let v = k * r;
    let mut series = 0.0;
    for (n, q2n) in q2n_terms(lat.nome(), 0) {
        series += q2n / (1.0 - q2n) * (2.0 * n * v).sin();
    }
    Ok(2.0 * lat.eta1 * (r / lat.l + m) + k * (v.cos() / v.sin() + 4.0 * series))
}

/// ℘′(x), used only to check the differential equation.
#[cfg(test)]
pub(crate) fn wp_prime(x: f64, lat: &LatticeData) -> Result<f64> {
    let (r, _) = reduce(x, lat)?;
    let k = PI / lat.l;
    let v = k * r;
    let (s, c) = v.sin_cos();
    let mut series = 0.0;
    for (n, q2n) in q2n_terms(lat.nome(), 2) {
        series += n * n * q2n / (1.0 - q2n) * (2.0 * n * v).sin();
    }
    Ok(k.powi(3) * (-2.0 * c / (s * s * s) + 16.0 * series))
}

/// log|σ(x)| on the open period `0 < x < l`.
///
/// Returns `-∞` at the endpoints, where σ vanishes.
pub fn log_sigma(x: f64, lat: &LatticeData) -> Result<f64> {
    let l = lat.l;
    if x == 0.0 || x == l {
        return Ok(f64::NEG_INFINITY);
    }
    if !(x > 0.0 && x < l) {
        return Err(Error::Domain(format!(
            "log_sigma needs 0 < x < l = {l}, got {x}"
        )));
    }
    // sin(πx/l) from the nearer endpoint keeps full relative accuracy near l.
    let near = x.min(l - x);
    let sin_v = (PI * near / l).sin();
    let cos_2v = (2.0 * PI * x / l).cos();
    let mut product = 0.0;
    for (_, q2n) in q2n_terms(lat.nome(), 0) {
        product += (q2n * (q2n - 2.0 * cos_2v)).ln_1p() - 2.0 * (-q2n).ln_1p();
    }
    Ok((l / PI).ln() + lat.eta1 * x * x / l + sin_v.ln() + product)
}
