use num_complex::Complex;

use super::{DesignGrid, PhaseCode};
use crate::error::Result;
use crate::scalar::Real;

/// `[1, e^{j2πf}, …, e^{j2π(K-1)f}]`, each entry evaluated directly from its
/// angle rather than by repeated multiplication.
pub fn steering_vector<T: Real>(f: T, len: usize) -> Vec<Complex<T>> {
    (0..len)
        .map(|k| Complex::from_polar(T::one(), T::TAU() * T::lit(k as f64) * f))
        .collect()
}

#[inline]
pub(crate) fn circular_index(k: usize, shift: isize, len: usize) -> usize {
    (k as isize + shift).rem_euclid(len as isize) as usize
}

/// Returns `v` with `v[k] = y[(k + l) mod K]`, i.e. `C_l · y`.
pub fn circular_shift<T: Real>(y: &[Complex<T>], shift: isize) -> Vec<Complex<T>> {
    let len = y.len();
    if len == 0 {
        return Vec::new();
    }
    let s = shift.rem_euclid(len as isize) as usize;
    y[s..].iter().chain(&y[..s]).copied().collect()
}

/// `Σ_k conj(x_k) · y_{(k+l) mod K} · e^{j2πkf}` on raw slices of equal length.
pub fn correlate_slices<T: Real>(x: &[Complex<T>], y: &[Complex<T>], shift: isize, f: T) -> Complex<T> {
    debug_assert_eq!(x.len(), y.len());
    let len = x.len();
    let mut acc = Complex::new(T::zero(), T::zero());
    for (k, xk) in x.iter().enumerate() {
        let yk = y[circular_index(k, shift, len)];
        let rot = Complex::from_polar(T::one(), T::TAU() * T::lit(k as f64) * f);
        acc = acc + xk.conj() * yk * rot;
    }
    acc
}

/// Delay-Doppler cross-correlation `r_xy^l(f)` of two codes.
pub fn cross_correlation<T: Real>(x: &PhaseCode<T>, y: &PhaseCode<T>, shift: isize, f: T) -> Result<Complex<T>> {
    x.ensure_same_len(y)?;
    Ok(correlate_slices(x.entries(), y.entries(), shift, f))
}

/// Total cross-correlation energy `Σ_l Σ_p |r_xy^l(f_p)|²` over the grid.
pub fn interference_objective<T: Real>(x: &PhaseCode<T>, y: &PhaseCode<T>, grid: &DesignGrid<T>) -> Result<T> {
    x.ensure_same_len(y)?;
    grid.validate_for(x.len())?;
    let freqs = grid.frequencies();
    let mut total = T::zero();
    for l in grid.shifts() {
        for &f in &freqs {
            total = total + correlate_slices(x.entries(), y.entries(), l, f).norm_sqr();
        }
    }
    Ok(total)
}
