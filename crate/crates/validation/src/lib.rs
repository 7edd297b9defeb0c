//! Reference values computed independently of the closed forms in
//! `otto-core`, for the acceptance suite.
//!
//! The noise and dissipation kernels are evaluated straight from their
//! defining frequency integrals, `D1(τ) = 2∫ J(ω) coth(ω/2T) cos(ωτ) dω` and
//! `D2(τ) = 2∫ J(ω) sin(ωτ) dω`, with adaptive Simpson quadrature on
//! `[0, 50Ω]`. The tail beyond is below `e^{-50}` relative.

use otto_core::{ohmic_j, ReservoirSpec64};

const ABS_TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 18;

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (left, right) = (simpson(f, a, m), simpson(f, m, b));
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, left, 0.5 * tol, depth - 1) + adaptive(f, m, b, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson over `[0, upper]`, pre-split into panels of width
/// `2/τ`, about a third of an oscillation period of `cos(ωτ)`.
pub fn oscillatory_integral(f: &dyn Fn(f64) -> f64, upper: f64, tau: f64) -> f64 {
    let panels = ((upper * tau / 2.0).ceil() as usize).max(64);
    let w = upper / panels as f64;
    (0..panels)
        .map(|k| {
            let (lo, hi) = (k as f64 * w, (k + 1) as f64 * w);
            adaptive(
                f,
                lo,
                hi,
                simpson(f, lo, hi),
                ABS_TOL / panels as f64,
                MAX_DEPTH,
            )
        })
        .sum()
}

fn thermal_weight(spec: &ReservoirSpec64, w: f64) -> f64 {
    if w == 0.0 {
        2.0 * spec.coupling * spec.temperature
    } else {
        ohmic_j(w, spec).expect("non-negative frequency") / (w / (2.0 * spec.temperature)).tanh()
    }
}

pub fn noise_kernel_reference(spec: &ReservoirSpec64, tau: f64) -> f64 {
    let f = |w: f64| 2.0 * thermal_weight(spec, w) * (w * tau).cos();
    oscillatory_integral(&f, 50.0 * spec.cutoff, tau)
}

pub fn dissipation_kernel_reference(spec: &ReservoirSpec64, tau: f64) -> f64 {
    let f = |w: f64| 2.0 * ohmic_j(w, spec).expect("non-negative frequency") * (w * tau).sin();
    oscillatory_integral(&f, 50.0 * spec.cutoff, tau)
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1).max(1) as f64).exp())
        .collect()
}
