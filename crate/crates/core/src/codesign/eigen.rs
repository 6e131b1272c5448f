use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::HermitianOperator;
use crate::scalar::Real;
use crate::waveform::HermitianForm;

/// Relative change of the Rayleigh quotient that ends power iteration.
pub const POWER_ITERATION_TOL: f64 = 1e-8;
/// Power iteration gives up after this many products and falls back to the
/// operator's norm bound.
pub const POWER_ITERATION_CAP: usize = 1000;

const START_SEED: u64 = 0x5EED_1A4B_DA00;

fn normalize<T: Real>(v: &mut [Complex<T>]) -> T {
    let norm = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    if norm > T::zero() {
        for z in v.iter_mut() {
            *z = *z / norm;
        }
    }
    norm
}

/// Loading level `λ_m ≥ λ_max(B)`, about `(1 + margin)` times the dominant
/// eigenvalue.
///
/// Runs power iteration from a fixed pseudo-random start. When the iteration
/// stalls, the operator's norm bound (maximum absolute row sum for dense
/// forms) is returned instead.
pub fn dominant_eigenvalue<T: Real, O: HermitianOperator<T> + ?Sized>(op: &O, margin: T) -> T {
    let dim = op.dim();
    let bound = op.norm_bound();
    if dim == 0 {
        return T::zero();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut q: Vec<Complex<T>> = (0..dim)
        .map(|_| Complex::new(T::sample_normal(&mut rng), T::sample_normal(&mut rng)))
        .collect();
    normalize(&mut q);

    let tol = T::lit(POWER_ITERATION_TOL);
    let mut theta = T::zero();
    for it in 0..POWER_ITERATION_CAP {
        let mut w = op.apply(&q);
        let next = crate::waveform::form::quadratic_value(&q, &w);
        if normalize(&mut w) == T::zero() {
            break;
        }
        q = w;
        if it > 0 && (next - theta).abs() <= tol * next.abs() {
            let estimate = next * (T::one() + margin);
            if estimate > T::zero() {
                return estimate;
            }
            break;
        }
        theta = next;
    }
    bound
}

/// `B̃ = λ I − B`.
pub fn diagonal_load<T: Real>(form: &HermitianForm<T>, lambda: T) -> HermitianForm<T> {
    let dim = form.dim();
    let data = form
        .data()
        .iter()
        .enumerate()
        .map(|(idx, b)| {
            if idx / dim == idx % dim {
                Complex::new(lambda - b.re, T::zero())
            } else {
                -b
            }
        })
        .collect();
    HermitianForm::from_raw(dim, data)
}
