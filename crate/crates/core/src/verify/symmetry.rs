use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::SYMMETRY_TOL;
use crate::error::Result;
use crate::models::{Geometry, ModelSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryCheck {
    pub name: String,
    /// Largest violation |a - b| / (1 + |a|) seen on the grid; infinite when
    /// a grid point could not be evaluated.
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub checks: Vec<SymmetryCheck>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&SymmetryCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn violation(a: Result<f64>, b: Result<f64>) -> f64 {
    match (a, b) {
        (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => (a - b).abs() / (1.0 + a.abs()),
        _ => f64::INFINITY,
    }
}

fn check(name: &str, worst: f64) -> SymmetryCheck {
    SymmetryCheck {
        name: name.to_string(),
        max_violation: worst,
        tolerance: SYMMETRY_TOL,
        passed: worst <= SYMMETRY_TOL,
    }
}

/// Parity and periodicity conditions on φ, V₂ and V₃ at `grid_size` seeded
/// random points.
///
/// Always checks `phi_odd`, `v2_even` and `v3_parity`; circle models also get
/// `phi_periodic`, `v2_periodic` and `v3_periodic`. Failures are reported,
/// never raised.
pub fn check_symmetries(spec: &ModelSpec, grid_size: usize, seed: u64) -> SymmetryReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = match spec.geometry() {
        Geometry::Circle { l } => l,
        Geometry::Line => spec.phi().period().unwrap_or(2.0),
    };
    let mut draw = || span * rng.gen_range(0.05..0.95);
    let points: Vec<(f64, f64)> = (0..grid_size.max(1)).map(|_| (draw(), draw())).collect();

    let phi = |x: f64| spec.phi().phi(x);
    let v2 = |x: f64| spec.two_body(x);
    let v3 = |x: f64, y: f64| spec.three_body(x, y);
    let worst =
        |f: &dyn Fn(f64, f64) -> f64| points.iter().map(|&(x, y)| f(x, y)).fold(0.0, f64::max);

    let mut checks = vec![
        check(
            "phi_odd",
            worst(&|x, _| violation(phi(x), phi(-x).map(|v| -v))),
        ),
        check("v2_even", worst(&|x, _| violation(v2(x), v2(-x)))),
        check("v3_parity", worst(&|x, y| violation(v3(x, y), v3(-x, -y)))),
    ];
    if let Geometry::Circle { l } = spec.geometry() {
        checks.push(check(
            "phi_periodic",
            worst(&|x, _| violation(phi(x), phi(x + l))),
        ));
        checks.push(check(
            "v2_periodic",
            worst(&|x, _| violation(v2(x), v2(x + l))),
        ));
        checks.push(check(
            "v3_periodic",
            worst(&|x, y| violation(v3(x, y), v3(x + l, y)).max(violation(v3(x, y), v3(x, y + l)))),
        ));
    }
    SymmetryReport { checks }
}
