use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::models::PhiFamily;

const ALTERNATING_STEP_TOL: f64 = 1e-10;
const ALTERNATING_MAX_ITER: usize = 10_000;

/// min over F, λ₀ of max |φ(u)φ(v) - ½(F(u) + F(v)) - λ₀| on the grid.
///
/// F lives on the distinct coordinate values of the grid (u and v share it).
/// The optimum is computed by linear programming and cross-checked against a
/// feasible point from alternating midrange minimization; it is zero exactly
/// when φφ splits into a sum of one-variable functions on the grid.
pub fn two_body_irreducibility_witness(fam: &PhiFamily, grid: &[(f64, f64)]) -> Result<f64> {
    let problem = WitnessProblem::new(fam, grid)?;
    let upper = problem.alternating_upper_bound();
    let optimum = problem.solve_lp()?;
    if optimum > upper + 1e-9 * (1.0 + upper) {
        return Err(Error::Solver(format!(
            "LP optimum {optimum} exceeds feasible upper bound {upper}"
        )));
    }
    Ok(optimum.max(0.0))
}

struct WitnessProblem {
    /// Distinct coordinate values, sorted.
    nodes: Vec<f64>,
    /// (index of u, index of v, φ(u)φ(v)).
    cells: Vec<(usize, usize, f64)>,
}

fn distinct(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl WitnessProblem {
    fn new(fam: &PhiFamily, grid: &[(f64, f64)]) -> Result<Self> {
        if grid.iter().any(|(u, v)| !(u.is_finite() && v.is_finite())) {
            return Err(Error::DegenerateGrid("non-finite grid point".into()));
        }
        let us = distinct(grid.iter().map(|p| p.0).collect());
        let vs = distinct(grid.iter().map(|p| p.1).collect());
        if us.len() < 3 || vs.len() < 3 {
            return Err(Error::DegenerateGrid(format!(
                "need at least 3 distinct u and v values, got {} and {}",
                us.len(),
                vs.len()
            )));
        }
        let nodes = distinct(us.into_iter().chain(vs).collect());
        let idx = |x: f64| {
            nodes
                .binary_search_by(|n| n.total_cmp(&x))
                .expect("node present")
        };
        let phi = |x: f64| {
            fam.phi(x)
                .map_err(|_| Error::DegenerateGrid(format!("grid value {x} sits on a pole of phi")))
        };
        let mut cells = Vec::with_capacity(grid.len());
        for &(u, v) in grid {
            cells.push((idx(u), idx(v), phi(u)? * phi(v)?));
        }
        Ok(Self { nodes, cells })
    }

    /// Sup residual of a given F with the optimal λ₀ (the midrange).
    fn residual(&self, f: &[f64]) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(i, j, a) in &self.cells {
            let r = a - 0.5 * (f[i] + f[j]);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        0.5 * (hi - lo)
    }

    /// Alternating midrange updates of separate row and column functions,
    /// symmetrized into one F and evaluated exactly. Always feasible, so the
    /// result bounds the optimum from above.
    fn alternating_upper_bound(&self) -> f64 {
        let m = self.nodes.len();
        let (mut f, mut g) = (vec![0.0; m], vec![0.0; m]);
        let midrange_update = |target: &mut [f64], other: &[f64], by_row: bool| -> f64 {
            let mut lo = vec![f64::INFINITY; m];
            let mut hi = vec![f64::NEG_INFINITY; m];
            for &(i, j, a) in &self.cells {
                let (k, o) = if by_row { (i, j) } else { (j, i) };
                let r = a - other[o];
                lo[k] = lo[k].min(r);
                hi[k] = hi[k].max(r);
            }
            let mut step: f64 = 0.0;
            for k in 0..m {
                if lo[k].is_finite() {
                    let new = 0.5 * (lo[k] + hi[k]);
                    step = step.max((new - target[k]).abs());
                    target[k] = new;
                }
            }
            step
        };
        for _ in 0..ALTERNATING_MAX_ITER {
            let s1 = midrange_update(&mut f, &g, true);
            let s2 = midrange_update(&mut g, &f, false);
            if s1.max(s2) < ALTERNATING_STEP_TOL {
                break;
            }
        }
        // the symmetric candidate F = f + g; also try each side doubled
        let sym: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let twice_f: Vec<f64> = f.iter().map(|a| 2.0 * a).collect();
        let twice_g: Vec<f64> = g.iter().map(|a| 2.0 * a).collect();
        self.residual(&sym)
            .min(self.residual(&twice_f))
            .min(self.residual(&twice_g))
    }

    fn solve_lp(&self) -> Result<f64> {
        let free = (f64::NEG_INFINITY, f64::INFINITY);
        let mut lp = Problem::new(OptimizationDirection::Minimize);
        let f: Vec<_> = self.nodes.iter().map(|_| lp.add_var(0.0, free)).collect();
        let lambda0 = lp.add_var(0.0, free);
        let t = lp.add_var(1.0, (0.0, f64::INFINITY));
        for &(i, j, a) in &self.cells {
            let mut terms = vec![(lambda0, 1.0)];
            if i == j {
                terms.push((f[i], 1.0));
            } else {
                terms.push((f[i], 0.5));
                terms.push((f[j], 0.5));
            }
            // a - ½(Fᵢ + Fⱼ) - λ₀ ≤ t  and  ≥ -t
            let mut upper = terms.clone();
            upper.push((t, 1.0));
            lp.add_constraint(upper.as_slice(), ComparisonOp::Ge, a);
            terms.push((t, -1.0));
            lp.add_constraint(terms.as_slice(), ComparisonOp::Le, a);
        }
        let sol = lp.solve().map_err(|e| Error::Solver(e.to_string()))?;
        Ok(sol.objective())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CustomPhi;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn midpoints(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64)
            .collect()
    }

    fn square(vals: &[f64]) -> Vec<(f64, f64)> {
        vals.iter()
            .flat_map(|&u| vals.iter().map(move |&v| (u, v)))
            .collect()
    }

    fn constant(k: f64) -> PhiFamily {
        PhiFamily::custom_unchecked(CustomPhi {
            phi: Arc::new(move |_| k),
            dphi: Arc::new(|_| 0.0),
            big_phi: Arc::new(|_| 0.0),
            alpha: 1.0,
            label: "constant".into(),
        })
    }

    #[test]
    fn matches_independent_lp_values() {
        // values from an independent dual-simplex solve of the same LP
        let w = two_body_irreducibility_witness(
            &PhiFamily::rational(2.0).unwrap(),
            &square(&midpoints(0.5, 2.0, 10)),
        )
        .unwrap();
        assert!((w - 1.4875459158963937).abs() < 1e-8, "{w}");
        let w = two_body_irreducibility_witness(
            &PhiFamily::trigonometric(1.0, 1.0).unwrap(),
            &square(&midpoints(0.1, 0.4, 10)),
        )
        .unwrap();
        assert!((w - 12.69808601501829).abs() < 1e-7, "{w}");
    }

    #[test]
    fn rational_value_has_a_corner_closed_form() {
        // the extreme 2x2 corner gives (p - q)²/4, and it is the binding one
        let vals = midpoints(0.5, 2.0, 10);
        let (p, q) = (2.0 / vals[0], 2.0 / vals[9]);
        let w = two_body_irreducibility_witness(&PhiFamily::rational(2.0).unwrap(), &square(&vals))
            .unwrap();
        assert!((w - (p - q).powi(2) / 4.0).abs() < 1e-9);
    }

    #[test]
    fn constant_phi_is_reducible() {
        let w = two_body_irreducibility_witness(&constant(3.0), &square(&midpoints(0.5, 2.0, 10)))
            .unwrap();
        assert!(w < 1e-10, "{w}");
    }

    #[test]
    fn upper_bound_brackets_the_optimum() {
        let fam = PhiFamily::hyperbolic(2.0, 1.0).unwrap();
        let p = WitnessProblem::new(&fam, &square(&midpoints(0.3, 1.7, 8))).unwrap();
        let (lp, ub) = (p.solve_lp().unwrap(), p.alternating_upper_bound());
        assert!(lp <= ub + 1e-12 && ub < 1.5 * lp, "{lp} {ub}");
    }

    #[test]
    fn degenerate_grids() {
        let r = PhiFamily::rational(2.0).unwrap();
        let thin = [(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (1.0, 2.0)];
        assert!(matches!(
            two_body_irreducibility_witness(&r, &thin),
            Err(Error::DegenerateGrid(_))
        ));
        let mut pole = square(&[0.5, 1.0, 1.5]);
        pole.push((0.0, 1.0));
        assert!(matches!(
            two_body_irreducibility_witness(&r, &pole),
            Err(Error::DegenerateGrid(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn refinement_never_decreases_the_witness(
            base in prop::collection::vec(0.3f64..3.0, 3..6),
            extra in prop::collection::vec(0.3f64..3.0, 1..4),
        ) {
            let r = PhiFamily::rational(2.0).unwrap();
            let coarse = square(&base);
            prop_assume!(WitnessProblem::new(&r, &coarse).is_ok());
            let mut fine = coarse.clone();
            let all: Vec<f64> = base.iter().chain(&extra).copied().collect();
            for &e in &extra {
                for &b in &all {
                    fine.push((e, b));
                    fine.push((b, e));
                }
            }
            let w0 = two_body_irreducibility_witness(&r, &coarse).unwrap();
            let w1 = two_body_irreducibility_witness(&r, &fine).unwrap();
            prop_assert!(w1 >= w0 - 1e-9 * (1.0 + w0), "{} < {}", w1, w0);
        }
    }
}
