use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense `K × K` Hermitian matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> HermitianForm<T> {
    /// Validates Hermitian symmetry before accepting `data`.
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries", dim * dim),
                found: format!("{} entries", data.len()),
            });
        }
        let form = Self { dim, data };
        let scale = form.data.iter().map(|z| z.norm()).fold(T::one(), T::max);
        let tol = T::hermitian_tol() * scale;
        for i in 0..dim {
            for j in i..dim {
                if (form.get(i, j) - form.get(j, i).conj()).norm() > tol {
                    return Err(Error::InvalidConfig {
                        field: "matrix",
                        reason: format!("entry ({i}, {j}) breaks Hermitian symmetry"),
                    });
                }
            }
        }
        Ok(form)
    }

    /// Caller guarantees Hermitian symmetry.
    pub(crate) fn from_raw(dim: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Self { dim, data }
    }

    /// `v vᴴ`.
    pub fn rank_one(v: &[Complex<T>]) -> Self {
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for vi in v {
            for vj in v {
                data.push(vi * vj.conj());
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, row: usize) -> &[Complex<T>] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    /// `B z`.
    pub fn apply(&self, z: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(z.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(z)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (b, zj)| acc + b * zj)
            })
            .collect()
    }

    /// `Re(zᴴ B z)`; the imaginary part vanishes for Hermitian `B`.
    pub fn quadratic(&self, z: &[Complex<T>]) -> T {
        quadratic_value(z, &self.apply(z))
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i).re).fold(T::zero(), |a, b| a + b)
    }

    /// `max_i Σ_j |b_ij|`, an upper bound on every eigenvalue magnitude.
    pub fn max_abs_row_sum(&self) -> T {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|z| z.norm()).fold(T::zero(), |a, b| a + b))
            .fold(T::zero(), T::max)
    }

    /// Largest elementwise Hermitian defect `|b_ij − conj(b_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

/// `Re(Σ_k conj(z_k) w_k)`.
pub(crate) fn quadratic_value<T: Real>(z: &[Complex<T>], w: &[Complex<T>]) -> T {
    z.iter().zip(w).fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re)
}
