use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, SPEED_OF_LIGHT};

/// Burst timing of the PMCW waveform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveformTiming<T> {
    /// Carrier frequency `f_c` (Hz).
    pub carrier_hz: T,
    /// Chip duration `T_c` (s).
    pub chip_s: T,
    /// Chips per burst `K`.
    pub chips: usize,
    /// Bursts per coherent processing interval `N`.
    pub bursts: usize,
    /// Burst repetition interval `T` (s); at least `K · T_c`.
    pub pri_s: T,
}

impl<T: Real> WaveformTiming<T> {
    /// Continuous transmission: `T = K · T_c`.
    pub fn new(carrier_hz: T, chip_s: T, chips: usize, bursts: usize) -> Result<Self> {
        let pri_s = chip_s * T::lit(chips as f64);
        Self::with_pri(carrier_hz, chip_s, chips, bursts, pri_s)
    }

    pub fn with_pri(carrier_hz: T, chip_s: T, chips: usize, bursts: usize, pri_s: T) -> Result<Self> {
        let timing = Self {
            carrier_hz,
            chip_s,
            chips,
            bursts,
            pri_s,
        };
        timing.validate()?;
        Ok(timing)
    }

    /// 79 GHz carrier, 6.66 ns chips, `K = 50`, `N = 140`.
    pub fn automotive_79ghz() -> Self {
        Self::new(T::lit(79e9), T::lit(6.66e-9), 50, 140).expect("valid preset")
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |field: &'static str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be positive, got {v}"),
                })
            }
        };
        positive("carrier_hz", self.carrier_hz)?;
        positive("chip_s", self.chip_s)?;
        positive("pri_s", self.pri_s)?;
        if self.chips < 2 {
            return Err(Error::InvalidConfig {
                field: "chips",
                reason: "need at least 2 chips".into(),
            });
        }
        if self.bursts == 0 {
            return Err(Error::InvalidConfig {
                field: "bursts",
                reason: "need at least 1 burst".into(),
            });
        }
        let burst = self.chip_s * T::lit(self.chips as f64);
        if self.pri_s < burst * (T::one() - T::lit(1e-9)) {
            return Err(Error::InvalidConfig {
                field: "pri_s",
                reason: format!("PRI {} s is shorter than one burst ({burst} s)", self.pri_s),
            });
        }
        Ok(())
    }

    /// `c · T_c / 2`.
    pub fn range_bin_m(&self) -> T {
        T::lit(SPEED_OF_LIGHT) * self.chip_s / T::lit(2.0)
    }

    /// `1 / (N · T)`.
    pub fn doppler_bin_hz(&self) -> T {
        T::one() / (T::lit(self.bursts as f64) * self.pri_s)
    }

    /// Code shifts for a delay: `⌊delay / T_c⌋`.
    pub fn delay_bins(&self, delay_s: T) -> usize {
        (delay_s / self.chip_s).floor().to_usize().unwrap_or(0)
    }
}

/// Point target. Positive velocity closes on the radar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetParams<T> {
    pub range_m: T,
    pub velocity_mps: T,
    pub amplitude: Complex<T>,
}

impl<T: Real> TargetParams<T> {
    /// Two-way delay `γ_T = 2R / c`.
    pub fn delay_s(&self) -> T {
        T::lit(2.0) * self.range_m / T::lit(SPEED_OF_LIGHT)
    }

    /// Two-way Doppler `f_{d,T} = (2v / c) · f_c`.
    pub fn doppler_hz(&self, timing: &WaveformTiming<T>) -> T {
        T::lit(2.0) * self.velocity_mps / T::lit(SPEED_OF_LIGHT) * timing.carrier_hz
    }
}

/// Second radar whose transmission leaks into the victim receiver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterfererParams<T> {
    pub separation_m: T,
    pub velocity_mps: T,
    pub amplitude: Complex<T>,
}

impl<T: Real> InterfererParams<T> {
    /// One-way delay `γ_I = R_I / c`.
    pub fn delay_s(&self) -> T {
        self.separation_m / T::lit(SPEED_OF_LIGHT)
    }

    /// One-way Doppler `f_{d,I} = (v_I / c) · f_c`.
    pub fn doppler_hz(&self, timing: &WaveformTiming<T>) -> T {
        self.velocity_mps / T::lit(SPEED_OF_LIGHT) * timing.carrier_hz
    }
}

/// Echo amplitude `√σ / R²` from a radar cross-section in dBsm
/// (two-way `R⁻⁴` power law, unit reference constant).
pub fn target_amplitude<T: Real>(rcs_dbsm: T, range_m: T) -> T {
    let sigma = T::lit(10.0).powf(rcs_dbsm / T::lit(10.0));
    sigma.sqrt() / (range_m * range_m)
}

/// Direct-path interference amplitude `√σ / R_I` (one-way `R⁻²` power law,
/// same reference constant as [`target_amplitude`]).
pub fn interferer_amplitude<T: Real>(rcs_dbsm: T, separation_m: T) -> T {
    let sigma = T::lit(10.0).powf(rcs_dbsm / T::lit(10.0));
    sigma.sqrt() / separation_m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T> {
    pub timing: WaveformTiming<T>,
    #[serde(default)]
    pub targets: Vec<TargetParams<T>>,
    #[serde(default)]
    pub interferer: Option<InterfererParams<T>>,
    #[serde(default)]
    pub noise_variance: T,
    #[serde(default)]
    pub noise_seed: u64,
}

impl<T: Real> Scenario<T> {
    /// Two-vehicle scene: target at 20 m closing at 30 m/s, interferer at
    /// 200 m receding at 20 m/s, both 35 dBsm, noise variance `10⁻²`.
    pub fn two_vehicle(noise_seed: u64) -> Self {
        let rcs = T::lit(35.0);
        let (r, r_i) = (T::lit(20.0), T::lit(200.0));
        Self {
            timing: WaveformTiming::automotive_79ghz(),
            targets: vec![TargetParams {
                range_m: r,
                velocity_mps: T::lit(30.0),
                amplitude: Complex::new(target_amplitude(rcs, r), T::zero()),
            }],
            interferer: Some(InterfererParams {
                separation_m: r_i,
                velocity_mps: T::lit(-20.0),
                amplitude: Complex::new(interferer_amplitude(rcs, r_i), T::zero()),
            }),
            noise_variance: T::lit(1e-2),
            noise_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.timing.validate()?;
        for t in &self.targets {
            if t.range_m.is_nan() || t.range_m < T::zero() || !t.velocity_mps.is_finite() {
                return Err(Error::InvalidConfig {
                    field: "targets",
                    reason: format!("range must be >= 0 and velocity finite, got R = {}", t.range_m),
                });
            }
            if t.velocity_mps.abs() >= T::lit(0.01 * SPEED_OF_LIGHT) {
                return Err(Error::InvalidConfig {
                    field: "targets",
                    reason: "velocity must be far below the speed of light".into(),
                });
            }
        }
        if let Some(i) = &self.interferer {
            if i.separation_m.is_nan() || i.separation_m < T::zero() || !i.velocity_mps.is_finite() {
                return Err(Error::InvalidConfig {
                    field: "interferer",
                    reason: format!("separation must be >= 0, got {}", i.separation_m),
                });
            }
        }
        if !self.noise_variance.is_finite() || self.noise_variance < T::zero() {
            return Err(Error::InvalidConfig {
                field: "noise_variance",
                reason: format!("must be finite and >= 0, got {}", self.noise_variance),
            });
        }
        Ok(())
    }

    pub fn without_noise(&self) -> Self {
        Self {
            noise_variance: T::zero(),
            ..self.clone()
        }
    }

    pub fn interferer_only(&self) -> Self {
        Self {
            targets: Vec::new(),
            ..self.clone()
        }
    }

    pub fn targets_only(&self) -> Self {
        Self {
            interferer: None,
            ..self.clone()
        }
    }

    /// `(range bin, raw Doppler bin)` where each target's peak should land.
    pub fn expected_target_bins(&self) -> Vec<(usize, usize)> {
        let k = self.timing.chips;
        let n = self.timing.bursts as isize;
        self.targets
            .iter()
            .map(|t| {
                let m = self.timing.delay_bins(t.delay_s()) % k;
                let cycles = t.doppler_hz(&self.timing) * self.timing.pri_s * T::lit(n as f64);
                let p = cycles.round().to_isize().unwrap_or(0).rem_euclid(n) as usize;
                (m, p)
            })
            .collect()
    }
}
