use num_complex::Complex;

use super::quadratic::Free;
use crate::error::Result;
use crate::scalar::Real;
use crate::waveform::{steering_vector, DesignGrid, HermitianForm, PhaseCode};

/// A Hermitian linear map that can be applied to a vector.
pub trait HermitianOperator<T: Real> {
    fn dim(&self) -> usize;

    fn apply(&self, z: &[Complex<T>]) -> Vec<Complex<T>>;

    /// Cheap upper bound on the spectral radius.
    fn norm_bound(&self) -> T;

    fn quadratic(&self, z: &[Complex<T>]) -> T {
        crate::waveform::form::quadratic_value(z, &self.apply(z))
    }
}

impl<T: Real> HermitianOperator<T> for HermitianForm<T> {
    fn dim(&self) -> usize {
        HermitianForm::dim(self)
    }

    fn apply(&self, z: &[Complex<T>]) -> Vec<Complex<T>> {
        HermitianForm::apply(self, z)
    }

    fn norm_bound(&self) -> T {
        self.max_abs_row_sum()
    }
}

/// Matrix-free `Σ_{l,p} v vᴴ`: every rank-one term is regenerated on the fly
/// from the fixed code, so memory stays `O(K · (2P + 1))`.
#[derive(Clone, Debug)]
pub struct RankOneSum<T> {
    fixed: Vec<Complex<T>>,
    steering: Vec<Vec<Complex<T>>>,
    shifts: Vec<isize>,
    free: Free,
}

impl<T: Real> RankOneSum<T> {
    pub fn new(fixed: &PhaseCode<T>, grid: &DesignGrid<T>, free: Free) -> Result<Self> {
        grid.validate_for(fixed.len())?;
        let len = fixed.len();
        Ok(Self {
            fixed: fixed.entries().to_vec(),
            steering: grid
                .frequencies()
                .into_iter()
                .map(|f| steering_vector(f, len))
                .collect(),
            shifts: grid.shifts().collect(),
            free,
        })
    }

    /// Writes term `(l, p)` into `out`.
    fn term(&self, shift: isize, steer: &[Complex<T>], out: &mut [Complex<T>]) {
        let len = self.fixed.len() as isize;
        match self.free {
            // v_i = e^{j2πi f} · y_{(i+l) mod K}
            Free::X => {
                for (i, o) in out.iter_mut().enumerate() {
                    let src = (i as isize + shift).rem_euclid(len) as usize;
                    *o = steer[i] * self.fixed[src];
                }
            }
            // u_i = x_{(i-l) mod K} · e^{-j2π((i-l) mod K) f}
            Free::Y => {
                for (i, o) in out.iter_mut().enumerate() {
                    let src = (i as isize - shift).rem_euclid(len) as usize;
                    *o = self.fixed[src] * steer[src].conj();
                }
            }
        }
    }

    pub fn term_count(&self) -> usize {
        self.shifts.len() * self.steering.len()
    }
}

impl<T: Real> HermitianOperator<T> for RankOneSum<T> {
    fn dim(&self) -> usize {
        self.fixed.len()
    }

    fn apply(&self, z: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(z.len(), self.fixed.len(), "vector length must match operator dimension");
        let zero = Complex::new(T::zero(), T::zero());
        let mut acc = vec![zero; z.len()];
        let mut v = vec![zero; z.len()];
        for &l in &self.shifts {
            for steer in &self.steering {
                self.term(l, steer, &mut v);
                let proj = v.iter().zip(z).fold(zero, |s, (vi, zi)| s + vi.conj() * zi);
                for (a, vi) in acc.iter_mut().zip(&v) {
                    *a = *a + vi * proj;
                }
            }
        }
        acc
    }

    /// Each unimodular rank-one term has row sums at most `K`.
    fn norm_bound(&self) -> T {
        T::lit((self.term_count() * self.fixed.len()) as f64)
    }
}

/// `λ I − B` without forming the matrix.
#[derive(Clone, Copy, Debug)]
pub struct LoadedOperator<'a, O, T> {
    base: &'a O,
    lambda: T,
}

impl<'a, O, T: Real> LoadedOperator<'a, O, T> {
    pub fn new(base: &'a O, lambda: T) -> Self {
        Self { base, lambda }
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }
}

impl<T: Real, O: HermitianOperator<T>> HermitianOperator<T> for LoadedOperator<'_, O, T> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, z: &[Complex<T>]) -> Vec<Complex<T>> {
        self.base
            .apply(z)
            .into_iter()
            .zip(z)
            .map(|(bz, zi)| zi * self.lambda - bz)
            .collect()
    }

    fn norm_bound(&self) -> T {
        self.lambda.abs() + self.base.norm_bound()
    }
}
