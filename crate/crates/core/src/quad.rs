//! Fourth-order cumulative quadrature on a uniform grid.
//!
//! Each interval `[t_k, t_{k+1}]` is integrated with the quadratic through
//! three neighbouring samples. Even intervals look forward and odd intervals
//! look backward, so at every even node the running sum is exactly the
//! composite Simpson rule; odd nodes carry an O(h^4) local error that does
//! not accumulate.

use crate::scalar::Real;

/// Sample indices and weights (in units of h/12) for interval `k` of an
/// `n`-interval grid. Requires `n >= 2`.
pub(crate) fn interval_stencil<T: Real>(k: usize, n: usize) -> (usize, [T; 3]) {
    debug_assert!(n >= 2 && k < n);
    let forward = k.is_multiple_of(2) && k + 2 <= n;
    if forward {
        (k, [T::lit(5.0), T::lit(8.0), T::lit(-1.0)])
    } else {
        (k - 1, [T::lit(-1.0), T::lit(8.0), T::lit(5.0)])
    }
}

/// Integral of the sampled function over interval `k`.
pub(crate) fn interval<T: Real>(f: &[T], k: usize, h: T) -> T {
    let n = f.len() - 1;
    let (s, w) = interval_stencil::<T>(k, n);
    h / T::lit(12.0) * (w[0] * f[s] + w[1] * f[s + 1] + w[2] * f[s + 2])
}

/// Running integral `F[k] = ∫_0^{t_k} f` with `F[0] = 0`.
pub fn cumulative_simpson<T: Real>(f: &[T], h: T) -> Vec<T> {
    let mut out = Vec::with_capacity(f.len());
    out.push(T::zero());
    if f.len() < 3 {
        // Two samples: trapezoid is all there is.
        if f.len() == 2 {
            out.push(h * (f[0] + f[1]) / T::lit(2.0));
        }
        return out;
    }
    let mut acc = T::zero();
    for k in 0..f.len() - 1 {
        acc += interval(f, k, h);
        out.push(acc);
    }
    out
}

/// Uniform grid `0, h, .., t_end` with `n = max(2, ceil(t_end / step))`
/// intervals, so the last node lands exactly on `t_end`.
pub fn uniform_grid<T: Real>(t_end: T, step: T) -> (Vec<T>, T) {
    let raw = (t_end / step).as_f64();
    let n = (raw - 1e-9).ceil().max(2.0) as usize;
    let h = t_end / T::from_count(n);
    let times = (0..=n).map(|k| h * T::from_count(k)).collect();
    (times, h)
}
