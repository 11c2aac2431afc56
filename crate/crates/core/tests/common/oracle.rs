//! Independent reference computations used only by tests.
//!
//! Nothing here calls into the library's evaluation paths: Weierstrass values
//! come from Laurent series and lattice sums, periods from quadrature.
#![allow(dead_code)]

use std::f64::consts::PI;

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = GK_WEIGHTS_K[7] * fc;
    let mut gauss = GK_WEIGHTS_G[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kron += GK_WEIGHTS_K[i] * s;
        if i % 2 == 1 {
            gauss += GK_WEIGHTS_G[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) to an absolute tolerance.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(f, a, b, tol, 0)
}

/// Roots of 4t³ - g₂t - g₃ by bisection on the three monotone branches.
pub fn cubic_roots_bisect(g2: f64, g3: f64) -> [f64; 3] {
    let p = |t: f64| 4.0 * t * t * t - g2 * t - g3;
    let crit = (g2 / 12.0).sqrt();
    let big = 10.0 * (1.0 + g2.abs() + g3.abs());
    let bisect = |mut lo: f64, mut hi: f64| {
        let up = p(hi) > p(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (p(mid) > 0.0) == up {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    [bisect(crit, big), bisect(-crit, crit), bisect(-big, -crit)]
}

/// (l, im_omega3, eta1) from period integrals.
///
/// With t = e₁ + s², l/2 = ∫₀^∞ ds / √((s² + e₁ - e₂)(s² + e₁ - e₃)); the
/// imaginary half-period uses t = e₃ - s². η₁ comes from the Legendre-form
/// identity η₁ = √(e₁ - e₃)·E(k) - e₁·ω₁ with k² = (e₂ - e₃)/(e₁ - e₃).
pub fn periods_by_quadrature(g2: f64, g3: f64) -> (f64, f64, f64) {
    let [e1, e2, e3] = cubic_roots_bisect(g2, g3);
    let half_line = |a: f64, b: f64| {
        // s = tan θ maps (0, ∞) onto (0, π/2)
        let f = move |th: f64| {
            let s = th.tan();
            let ds = 1.0 / (th.cos() * th.cos());
            ds / ((s * s + a) * (s * s + b)).sqrt()
        };
        integrate(&f, 0.0, PI / 2.0, 1e-13)
    };
    let omega1 = half_line(e1 - e2, e1 - e3);
    let im_omega3 = half_line(e1 - e3, e2 - e3);
    let k2 = (e2 - e3) / (e1 - e3);
    let ek = integrate(
        &|t: f64| (1.0 - k2 * t.sin().powi(2)).sqrt(),
        0.0,
        PI / 2.0,
        1e-14,
    );
    let eta1 = (e1 - e3).sqrt() * ek - e1 * omega1;
    (2.0 * omega1, im_omega3, eta1)
}

/// Laurent coefficients c_k of ℘(z) = 1/z² + Σ_{k≥2} c_k z^{2k-2}.
pub fn laurent_coeffs(g2: f64, g3: f64, kmax: usize) -> Vec<f64> {
    let mut c = vec![0.0; kmax + 1];
    if kmax >= 2 {
        c[2] = g2 / 20.0;
    }
    if kmax >= 3 {
        c[3] = g3 / 28.0;
    }
    for k in 4..=kmax {
        let s: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c[k] = 3.0 / ((2 * k + 1) as f64 * (k - 3) as f64) * s;
    }
    c
}

const LAURENT_ORDER: usize = 400;

pub fn wp_laurent(z: f64, g2: f64, g3: f64) -> f64 {
    let c = laurent_coeffs(g2, g3, LAURENT_ORDER);
    let z2 = z * z;
    let mut acc = 0.0;
    let mut zp = z2; // z^{2k-2} starting at k = 2
    for ck in c.iter().skip(2) {
        acc += ck * zp;
        zp *= z2;
    }
    1.0 / z2 + acc
}

pub fn zeta_laurent(z: f64, g2: f64, g3: f64) -> f64 {
    let c = laurent_coeffs(g2, g3, LAURENT_ORDER);
    let z2 = z * z;
    let mut acc = 0.0;
    let mut zp = z2 * z; // z^{2k-1}
    for (k, ck) in c.iter().enumerate().skip(2) {
        acc += ck * zp / (2 * k - 1) as f64;
        zp *= z2;
    }
    1.0 / z - acc
}

/// log σ(z) = log z - Σ c_k z^{2k} / ((2k-1)(2k)), valid for 0 < z inside the
/// disc of convergence.
pub fn log_sigma_laurent(z: f64, g2: f64, g3: f64) -> f64 {
    let c = laurent_coeffs(g2, g3, LAURENT_ORDER);
    let z2 = z * z;
    let mut acc = 0.0;
    let mut zp = z2 * z2; // z^{2k}
    for (k, ck) in c.iter().enumerate().skip(2) {
        acc += ck * zp / ((2 * k - 1) * 2 * k) as f64;
        zp *= z2;
    }
    z.ln() - acc
}

/// (g₂, g₃) by direct lattice sums g₂ = 60 Σ' w⁻⁴, g₃ = 140 Σ' w⁻⁶ over
/// w = m·l + 2i·n·b, square truncation |m|, |n| ≤ M, Richardson-extrapolated
/// in 1/M².
pub fn eisenstein_lattice_sums(l: f64, b: f64, m: i64) -> (f64, f64) {
    let sums = |mm: i64| {
        let (mut s4, mut s6) = (0.0, 0.0);
        for i in -mm..=mm {
            for j in -mm..=mm {
                if i == 0 && j == 0 {
                    continue;
                }
                let (re, im) = (i as f64 * l, 2.0 * j as f64 * b);
                // w⁻⁴ and w⁻⁶ real parts via polar form
                let r2 = re * re + im * im;
                let th = im.atan2(re);
                s4 += (-4.0 * th).cos() / (r2 * r2);
                s6 += (-6.0 * th).cos() / (r2 * r2 * r2);
            }
        }
        (s4, s6)
    };
    let (a4, a6) = sums(m);
    let (b4, b6) = sums(2 * m);
    // tail ~ C/M² for G4; G6 converges fast enough that the same scheme is harmless
    let g4 = (4.0 * b4 - a4) / 3.0;
    let g6 = (4.0 * b6 - a6) / 3.0;
    (60.0 * g4, 140.0 * g6)
}

/// Composite Simpson on [a, b] with n (even) panels.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}
