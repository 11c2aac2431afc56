//! Frozen tolerance table. Tests and the CLI read thresholds from here.

/// Relative distance (in units of the scale) below which a neighbor difference
/// is treated as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-10;

/// Default finite-difference step for local energies.
pub const FD_STEP: f64 = 1e-4;

/// Local-energy spread, relative to max(1, |E|).
pub const RESIDUAL_SPREAD_TOL: f64 = 1e-6;

/// Mean local energy vs closed form, relative.
pub const RESIDUAL_ENERGY_REL_TOL: f64 = 1e-6;

/// Symmetry checks (oddness, parity, periodicity), relative to 1 + |value|.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Negative controls must miss their pass tolerance by at least this factor.
pub const NEGATIVE_CONTROL_MARGIN: f64 = 1e3;

/// Quasi-periodicity of zeta, relative to 1 + |zeta|.
pub const ZETA_QUASI_PERIOD_TOL: f64 = 1e-11;

/// zeta' + wp by central differences, relative to 1 + |wp|.
pub const ZETA_DERIVATIVE_TOL: f64 = 1e-7;

/// Symmetry of log|sigma(x)| - eta1 x^2 / l about l/2.
pub const SIGMA_SYMMETRY_TOL: f64 = 1e-10;

/// Homogeneity scaling of wp and the invariants.
pub const HOMOGENEITY_TOL: f64 = 1e-12;

/// zeta deviation from its trigonometric limit at Im(omega3)/l = 8.
pub const TRIG_LIMIT_TOL: f64 = 1e-8;

/// Pointwise elliptic-to-trigonometric potential limit at Im(omega3)/l = 8.
pub const POTENTIAL_LIMIT_TOL: f64 = 1e-6;

/// Circulant eigenvalues vs dense eigendecomposition.
pub const CIRCULANT_TOL: f64 = 1e-12;

/// Witness value accepted as zero for a constant phi.
pub const WITNESS_ZERO_TOL: f64 = 1e-10;

/// Lower bounds on the irreducibility witness, frozen from an independent
/// dual-simplex solve on 10×10 midpoint grids: rational α = 2 on (0.5, 2)²
/// gave 1.4875459158963937, trigonometric α = 1, l = 1 on (0.1, 0.4)² gave
/// 12.69808601501829.
pub const WITNESS_RATIONAL_MIN: f64 = 1.4875;
pub const WITNESS_TRIG_MIN: f64 = 12.698;

/// Monte Carlo agreement in standard errors.
pub const MC_SIGMAS: f64 = 3.0;
