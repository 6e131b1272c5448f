use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, SPEED_OF_LIGHT};

/// The `(l, p)` grid on which cross-correlation energy is suppressed.
///
/// Shifts cover `l ∈ [-L, L]`; Doppler points are `f_p = p · doppler_spacing`
/// for `p ∈ [-P, P]`, in cycles per chip.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignGrid<T> {
    pub max_shift: usize,
    pub doppler_extent: usize,
    pub doppler_spacing: T,
}

impl<T: Real> DesignGrid<T> {
    pub fn new(max_shift: usize, doppler_extent: usize, doppler_spacing: T) -> Result<Self> {
        if !doppler_spacing.is_finite() || doppler_spacing < T::zero() {
            return Err(Error::InvalidGrid(format!(
                "doppler spacing must be finite and non-negative, got {doppler_spacing}"
            )));
        }
        let span = doppler_spacing * T::lit(doppler_extent as f64);
        if span >= T::lit(0.5) {
            return Err(Error::InvalidGrid(format!(
                "doppler span {span} cycles/chip leaves the unambiguous band (< 0.5)"
            )));
        }
        Ok(Self {
            max_shift,
            doppler_extent,
            doppler_spacing,
        })
    }

    /// Single zero-lag, zero-Doppler point.
    pub fn zero_lag() -> Self {
        Self {
            max_shift: 0,
            doppler_extent: 0,
            doppler_spacing: T::zero(),
        }
    }

    /// Grid whose Doppler points span the one-way interference Doppler of a
    /// relative speed up to `v_max`: `f̂_max = (v_max / c) · f_c · T_c`,
    /// spaced `f̂_max / P` apart.
    pub fn for_max_velocity(
        max_shift: usize,
        doppler_extent: usize,
        v_max: T,
        carrier_hz: T,
        chip_s: T,
    ) -> Result<Self> {
        if v_max.is_nan() || v_max < T::zero() {
            return Err(Error::InvalidGrid(format!("v_max must be non-negative, got {v_max}")));
        }
        let f_max = v_max / T::lit(SPEED_OF_LIGHT) * carrier_hz * chip_s;
        let spacing = if doppler_extent == 0 {
            T::zero()
        } else {
            f_max / T::lit(doppler_extent as f64)
        };
        Self::new(max_shift, doppler_extent, spacing)
    }

    /// Checks that the grid is usable with codes of length `len`.
    pub fn validate_for(&self, len: usize) -> Result<()> {
        if self.max_shift + 1 > len {
            return Err(Error::InvalidGrid(format!(
                "max shift L = {} exceeds K - 1 = {}",
                self.max_shift,
                len.saturating_sub(1)
            )));
        }
        Ok(())
    }

    pub fn shifts(&self) -> impl Iterator<Item = isize> + Clone {
        let l = self.max_shift as isize;
        -l..=l
    }

    pub fn doppler_indices(&self) -> impl Iterator<Item = isize> + Clone {
        let p = self.doppler_extent as isize;
        -p..=p
    }

    pub fn frequencies(&self) -> Vec<T> {
        self.doppler_indices()
            .map(|p| T::lit(p as f64) * self.doppler_spacing)
            .collect()
    }

    /// `(2L + 1)(2P + 1)`.
    pub fn point_count(&self) -> usize {
        (2 * self.max_shift + 1) * (2 * self.doppler_extent + 1)
    }
}
