use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_phase<T: Real>(theta: T) -> T {
    let two_pi = T::TAU();
    let w = theta % two_pi;
    let w = if w < T::zero() { w + two_pi } else { w };
    // `w + 2π` can round up to exactly 2π for tiny negative inputs.
    if w >= two_pi {
        T::zero()
    } else {
        w
    }
}

/// A length-`K` unimodular phase code.
///
/// Stores the chip phases in `[0, 2π)` together with the unit-modulus entries
/// `e^{jθ_k}` derived from them, so both views are always consistent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct PhaseCode<T> {
    phases: Vec<T>,
    entries: Vec<Complex<T>>,
}

impl<T: Real> PhaseCode<T> {
    pub const MIN_LEN: usize = 2;

    pub fn from_phases(phases: Vec<T>) -> Result<Self> {
        if phases.len() < Self::MIN_LEN {
            return Err(Error::InvalidCode(format!(
                "length {} is below the minimum of {}",
                phases.len(),
                Self::MIN_LEN
            )));
        }
        if let Some(k) = phases.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidCode(format!("phase of chip {k} is not finite")));
        }
        Ok(Self::from_phases_unchecked(phases))
    }

    /// Builds a code from complex entries that already lie on the unit circle.
    pub fn from_unimodular(entries: &[Complex<T>]) -> Result<Self> {
        let tol = T::lit(1e-9).max(T::unit_modulus_tol());
        for (k, z) in entries.iter().enumerate() {
            if (z.norm() - T::one()).abs() > tol {
                return Err(Error::InvalidCode(format!(
                    "chip {k} has modulus {}, expected 1",
                    z.norm()
                )));
            }
        }
        if entries.len() < Self::MIN_LEN {
            return Err(Error::InvalidCode(format!(
                "length {} is below the minimum of {}",
                entries.len(),
                Self::MIN_LEN
            )));
        }
        // Keep the given entries (renormalised) so exactly representable
        // values such as ±1 and ±j stay exact.
        let entries: Vec<Complex<T>> = entries.iter().map(|z| z / z.norm()).collect();
        let phases = entries.iter().map(|z| wrap_phase(z.arg())).collect();
        Ok(Self { phases, entries })
    }

    pub(crate) fn from_phases_unchecked(phases: Vec<T>) -> Self {
        let phases: Vec<T> = phases.into_iter().map(wrap_phase).collect();
        let entries = phases.iter().map(|&p| Complex::from_polar(T::one(), p)).collect();
        Self { phases, entries }
    }

    /// I.i.d. phases uniform on `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Result<Self> {
        let phases = (0..len).map(|_| T::sample_unit(rng) * T::TAU()).collect();
        Self::from_phases(phases)
    }

    /// Reproducible random code from a 64-bit seed.
    pub fn seeded(len: usize, seed: u64) -> Result<Self> {
        Self::random(len, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Zadoff–Chu sequence with the given root; ideal periodic autocorrelation
    /// whenever `root` is coprime with `len`.
    pub fn zadoff_chu(len: usize, root: usize) -> Result<Self> {
        let k = len as f64;
        let r = root as f64;
        let odd = len % 2;
        let phases = (0..len)
            .map(|n| {
                let n = n as f64;
                T::lit(-std::f64::consts::PI * r * n * (n + odd as f64) / k)
            })
            .collect();
        Self::from_phases(phases)
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    /// Applies a common phase rotation `e^{jφ}` to every chip.
    pub fn rotated(&self, phi: T) -> Self {
        Self::from_phases_unchecked(self.phases.iter().map(|&p| p + phi).collect())
    }

    /// Largest deviation of `|entry_k|` from one.
    pub fn max_modulus_error(&self) -> T {
        self.entries
            .iter()
            .map(|z| (z.norm() - T::one()).abs())
            .fold(T::zero(), T::max)
    }

    pub fn ensure_same_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }
}

impl<T: Real> TryFrom<Vec<T>> for PhaseCode<T> {
    type Error = Error;

    fn try_from(phases: Vec<T>) -> Result<Self> {
        Self::from_phases(phases)
    }
}

impl<T: Real> From<PhaseCode<T>> for Vec<T> {
    fn from(code: PhaseCode<T>) -> Self {
        code.phases
    }
}
