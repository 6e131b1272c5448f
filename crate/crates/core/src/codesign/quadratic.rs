use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Real;
use crate::waveform::{DesignGrid, HermitianForm, PhaseCode};

/// Which code of the pair is the optimisation variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Free {
    /// Victim code `x` is free, `y` is fixed: `xᴴ B_y x = J(x, y)`.
    X,
    /// Interferer code `y` is free, `x` is fixed: `yᴴ B_x y = J(x, y)`.
    Y,
}

/// `D(d) = Σ_p e^{j2π d f_p}` for `d ∈ (−K, K)`, indexed by `d + K − 1`.
/// Real because the Doppler grid is symmetric about zero.
fn doppler_kernel<T: Real>(grid: &DesignGrid<T>, len: usize) -> Vec<T> {
    let freqs = grid.frequencies();
    (0..2 * len - 1)
        .map(|idx| {
            let d = T::lit(idx as f64 - (len as f64 - 1.0));
            freqs.iter().fold(T::zero(), |acc, &f| acc + (T::TAU() * d * f).cos())
        })
        .collect()
}

/// Assembles the `K × K` form whose quadratic value over the free code is the
/// interference objective against the fixed one.
///
/// The rank-one sum over `(l, p)` factorises: the Doppler dependence only
/// enters through the chip-index difference of each pair, so the sum over `p`
/// collapses into a real kernel `D(i − j)`.
pub fn build_quadratic_form<T: Real>(
    fixed: &PhaseCode<T>,
    grid: &DesignGrid<T>,
    free: Free,
) -> Result<HermitianForm<T>> {
    let len = fixed.len();
    grid.validate_for(len)?;
    let kernel = doppler_kernel(grid, len);
    let d = |a: usize, b: usize| kernel[a + len - 1 - b];
    let e = fixed.entries();
    let wrap = |k: isize| k.rem_euclid(len as isize) as usize;
    let zero = Complex::new(T::zero(), T::zero());

    let mut data = vec![zero; len * len];
    for i in 0..len {
        // Fill the upper triangle and mirror it, so symmetry is exact.
        for j in i..len {
            let mut acc = zero;
            for l in grid.shifts() {
                acc = match free {
                    Free::X => acc + e[wrap(i as isize + l)] * e[wrap(j as isize + l)].conj(),
                    Free::Y => {
                        let (a, b) = (wrap(i as isize - l), wrap(j as isize - l));
                        acc + e[a] * e[b].conj() * d(a, b)
                    }
                };
            }
            if free == Free::X {
                acc = acc * d(i, j);
            }
            if i == j {
                acc.im = T::zero();
            }
            data[i * len + j] = acc;
            data[j * len + i] = acc.conj();
        }
    }
    Ok(HermitianForm::from_raw(len, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codesign::{HermitianOperator, RankOneSum};
    use crate::waveform::{circular_shift, steering_vector};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn all_ones_single_point_is_rank_one() {
        let ones = PhaseCode::<f64>::from_phases(vec![0.0, 0.0]).unwrap();
        for free in [Free::X, Free::Y] {
            let b = build_quadratic_form(&ones, &DesignGrid::zero_lag(), free).unwrap();
            for z in b.data() {
                assert!((z - c(1.0, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn trace_counts_grid_points() {
        let y = PhaseCode::<f64>::seeded(12, 5).unwrap();
        let grid = DesignGrid::new(3, 2, 0.02).unwrap();
        for free in [Free::X, Free::Y] {
            let b = build_quadratic_form(&y, &grid, free).unwrap();
            let want = (grid.point_count() * 12) as f64;
            assert!((b.trace() - want).abs() < 1e-9 * want);
            assert_eq!(b.hermitian_defect(), 0.0);
        }
    }

    /// Explicit rank-one sum with `v = Diag(f_p) C_l y`.
    fn naive_form_x(y: &PhaseCode<f64>, grid: &DesignGrid<f64>) -> HermitianForm<f64> {
        let len = y.len();
        let mut data = vec![c(0.0, 0.0); len * len];
        for l in grid.shifts() {
            for f in grid.frequencies() {
                let steer = steering_vector(f, len);
                let shifted = circular_shift(y.entries(), l);
                let v: Vec<_> = steer.iter().zip(&shifted).map(|(a, b)| a * b).collect();
                for (slot, z) in data.iter_mut().zip(HermitianForm::rank_one(&v).data()) {
                    *slot += z;
                }
            }
        }
        HermitianForm::new(len, data).unwrap()
    }

    #[test]
    fn factorised_assembly_matches_rank_one_sum() {
        let y = PhaseCode::<f64>::seeded(9, 11).unwrap();
        let grid = DesignGrid::new(4, 2, 0.03).unwrap();
        let fast = build_quadratic_form(&y, &grid, Free::X).unwrap();
        let slow = naive_form_x(&y, &grid);
        for (a, b) in fast.data().iter().zip(slow.data()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn matrix_free_agrees_with_dense() {
        let fixed = PhaseCode::<f64>::seeded(20, 2).unwrap();
        let z = PhaseCode::<f64>::seeded(20, 3).unwrap();
        let grid = DesignGrid::new(19, 3, 0.01).unwrap();
        for free in [Free::X, Free::Y] {
            let dense = build_quadratic_form(&fixed, &grid, free).unwrap();
            let lazy = RankOneSum::new(&fixed, &grid, free).unwrap();
            let a = dense.apply(z.entries());
            let b = lazy.apply(z.entries());
            let scale = a.iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).norm() < 1e-9 * scale);
            }
        }
    }
}
