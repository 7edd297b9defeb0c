//! Ohmic bath correlation kernels.
//!
//! With `J(ω) = λ ω e^{-ω/Ω}` the noise kernel
//! `D1(τ) = 2∫ J(ω) coth(ω/2T) cos(ωτ) dω` and the dissipation kernel
//! `D2(τ) = 2∫ J(ω) sin(ωτ) dω` both have closed forms; the thermal part of
//! `D1` goes through the trigamma function at complex argument.

use num_complex::Complex;

use crate::error::{OttoError, Result};
use crate::scalar::Real;

/// One bosonic reservoir: temperature `T`, coupling `λ`, cutoff `Ω`
/// (`k_B = ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpec<T> {
    pub temperature: T,
    pub coupling: T,
    pub cutoff: T,
}

impl<T: Real> ReservoirSpec<T> {
    /// Validates `T > 0`, `Ω > 0` and `λ >= 0`. A zero coupling is accepted
    /// and simply switches the bath off.
    pub fn new(temperature: T, coupling: T, cutoff: T) -> Result<Self> {
        if !(temperature > T::zero() && temperature.is_finite()) {
            return Err(OttoError::InvalidParams(format!(
                "temperature must be positive, got {temperature}"
            )));
        }
        if !(cutoff > T::zero() && cutoff.is_finite()) {
            return Err(OttoError::InvalidParams(format!(
                "cutoff must be positive, got {cutoff}"
            )));
        }
        if !(coupling >= T::zero() && coupling.is_finite()) {
            return Err(OttoError::InvalidParams(format!(
                "coupling must be non-negative, got {coupling}"
            )));
        }
        Ok(Self {
            temperature,
            coupling,
            cutoff,
        })
    }
}

/// Ohmic spectral density with exponential cutoff.
pub fn ohmic_j<T: Real>(omega: T, spec: &ReservoirSpec<T>) -> Result<T> {
    if omega < T::zero() || omega.is_nan() {
        return Err(OttoError::Domain(format!(
            "spectral density needs omega >= 0, got {omega}"
        )));
    }
    Ok(spec.coupling * omega * (-omega / spec.cutoff).exp())
}

// B_{2k} for k = 1..=6
const BERNOULLI: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// Trigamma ψ'(z) for complex `z`.
///
/// Shifts upward with ψ'(z) = ψ'(z+1) + 1/z² until Re z ≥ 10, then sums
/// `1/z + 1/(2z²) + Σ_{k=1}^{6} B_{2k}/z^{2k+1}`. Arguments with negative
/// real part go through the reflection ψ'(1−z) + ψ'(z) = π²/sin²(πz) first.
pub fn trigamma<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(OttoError::Domain("trigamma of NaN".into()));
    }
    if z.im == T::zero() && z.re <= T::zero() && z.re == z.re.round() {
        return Err(OttoError::Domain(format!(
            "trigamma pole at non-positive integer {}",
            z.re
        )));
    }
    if z.re < T::zero() {
        let pi = T::PI();
        let s = (z * pi).sin();
        let one = Complex::new(T::one(), T::zero());
        let mirrored = trigamma(one - z)?;
        return Ok(Complex::new(pi * pi, T::zero()) / (s * s) - mirrored);
    }

    let mut acc = Complex::new(T::zero(), T::zero());
    let mut w = z;
    let threshold = T::lit(ASYMPTOTIC_THRESHOLD);
    while w.re < threshold {
        acc += (w * w).inv();
        w.re += T::one();
    }

    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = inv + inv2 * T::lit(0.5);
    let mut power = inv2 * inv;
    for b in BERNOULLI {
        series += power * T::lit(b);
        power *= inv2;
    }
    Ok(acc + series)
}

/// Noise kernel `D1(τ)` in closed form.
pub fn d1<T: Real>(tau: T, spec: &ReservoirSpec<T>) -> T {
    let two = T::lit(2.0);
    let omega_c = spec.cutoff;
    let x = omega_c * tau;
    let denom = T::one() + x * x;
    let vacuum = omega_c * omega_c * (x * x - T::one()) / (denom * denom);
    let arg = Complex::new(spec.temperature / omega_c, spec.temperature * tau);
    // Re z = T/Ω > 0, so the pole branch is unreachable.
    let psi1 = trigamma(arg).map(|c| c.re).unwrap_or(T::nan());
    two * spec.coupling * (vacuum + two * spec.temperature * spec.temperature * psi1)
}

/// Dissipation kernel `D2(τ)`; temperature independent.
pub fn d2<T: Real>(tau: T, spec: &ReservoirSpec<T>) -> T {
    let omega_c = spec.cutoff;
    let x = omega_c * tau;
    let denom = T::one() + x * x;
    T::lit(4.0) * spec.coupling * omega_c * omega_c * omega_c * tau / (denom * denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn hot_reservoir() -> ReservoirSpec<f64> {
        ReservoirSpec::new(5.0, 0.01, 0.4).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn spectral_density_values() {
        let spec = hot_reservoir();
        assert_eq!(ohmic_j(0.0, &spec).unwrap(), 0.0);
        let at_cutoff = ohmic_j(0.4, &spec).unwrap();
        assert!((at_cutoff - 0.004 * (-1.0f64).exp()).abs() < 1e-18);
        assert!((at_cutoff - 1.4715e-3).abs() < 1e-7);
        let off = ReservoirSpec::new(5.0, 0.0, 0.4).unwrap();
        for w in [0.0, 0.3, 7.0] {
            assert_eq!(ohmic_j(w, &off).unwrap(), 0.0);
        }
        assert!(ohmic_j(200.0, &spec).unwrap() < 1e-200);
        assert!(matches!(ohmic_j(-1.0, &spec), Err(OttoError::Domain(_))));
    }

    #[test]
    fn reservoir_validation() {
        assert!(ReservoirSpec::new(0.0, 0.01, 0.4).is_err());
        assert!(ReservoirSpec::new(1.0, -0.01, 0.4).is_err());
        assert!(ReservoirSpec::new(1.0, 0.01, 0.0).is_err());
    }

    #[test]
    fn trigamma_special_values() {
        let one = trigamma(c(1.0, 0.0)).unwrap();
        assert!((one.re - PI * PI / 6.0).abs() < 1e-13);
        assert!(one.im.abs() < 1e-15);
        let half = trigamma(c(0.5, 0.0)).unwrap();
        assert!((half.re - PI * PI / 2.0).abs() < 1e-12);
        let two = trigamma(c(2.0, 0.0)).unwrap();
        assert!((two.re - (PI * PI / 6.0 - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn trigamma_poles() {
        for p in [0.0, -1.0, -7.0] {
            assert!(matches!(trigamma(c(p, 0.0)), Err(OttoError::Domain(_))));
        }
    }

    #[test]
    fn trigamma_reflection_branch() {
        // ψ'(1-z) + ψ'(z) = π² / sin²(πz)
        let z = c(-0.3, 0.7);
        let lhs = trigamma(c(1.0, 0.0) - z).unwrap() + trigamma(z).unwrap();
        let s = (z * PI).sin();
        let rhs = c(PI * PI, 0.0) / (s * s);
        assert!((lhs - rhs).norm() < 1e-11 * rhs.norm());
    }

    #[test]
    fn trigamma_on_imaginary_line() {
        // Re ψ'(1/2 + iy) = π²/(2 cosh²(πy))
        for y in [0.1, 1.0, 3.0] {
            let v = trigamma(c(0.5, y)).unwrap();
            let expect = PI * PI / (2.0 * (PI * y).cosh().powi(2));
            assert!((v.re - expect).abs() < 1e-12 * expect.max(1e-3), "y={y}");
        }
    }

    #[test]
    fn trigamma_large_imaginary() {
        // Leading asymptotics for |z| large: ψ'(z) ≈ 1/z + 1/(2z²) + 1/(6z³)
        let z = c(12.5, 9999.0);
        let v = trigamma(z).unwrap();
        let approx = z.inv() + (z * z).inv() * 0.5 + (z * z * z).inv() / 6.0;
        assert!((v - approx).norm() < 1e-12 * v.norm());
    }

    #[test]
    fn kernel_spot_values() {
        let spec = hot_reservoir();
        // D1(0) frozen from an independent ω-quadrature of the defining integral.
        assert!((d1(0.0, &spec) - 0.0801).abs() < 1e-4);
        assert_eq!(d2(0.0, &spec), 0.0);
        assert!((d2(1.0 / 0.4, &spec) - 1.6e-3).abs() < 1e-17);
        let off = ReservoirSpec::new(5.0, 0.0, 0.4).unwrap();
        for tau in [0.0, 0.5, 20.0] {
            assert_eq!(d1(tau, &off), 0.0);
            assert_eq!(d2(tau, &off), 0.0);
        }
    }

    #[test]
    fn d2_single_peak() {
        let spec = hot_reservoir();
        let vals: Vec<f64> = (0..=4000).map(|k| d2(k as f64 * 0.025, &spec)).collect();
        assert!(vals.iter().all(|v| *v >= 0.0));
        let peaks = vals
            .windows(3)
            .filter(|w| w[1] > w[0] && w[1] > w[2])
            .count();
        assert_eq!(peaks, 1);
    }

    #[test]
    fn generic_over_f32() {
        let spec = ReservoirSpec::new(5.0f32, 0.01, 0.4).unwrap();
        let v = d1(0.0f32, &spec);
        assert!((v - 0.0801).abs() < 1e-4);
        let t = trigamma(Complex::new(1.0f32, 0.0)).unwrap();
        assert!((t.re - 1.644_934).abs() < 1e-5);
    }
}
