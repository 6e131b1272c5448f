//! Cooperative design of PMCW phase-code pairs that suppress radar-to-radar
//! interference, plus a range-Doppler simulator for checking the result.
//!
//! * [`waveform`]: phase codes, the suppression grid, and delay-Doppler
//!   cross-correlation.
//! * [`codesign`]: cyclic unimodular quadratic programming on the code pair.
//! * [`sim`]: victim receive chain (echo, interference, noise, correlator,
//!   slow-time DFT).
//! * [`metrics`]: interference power and threshold detection.
//! * [`io`]: text, JSON, CSV, and PGM formats.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common double-precision instantiations.

pub mod codesign;
mod error;
pub mod io;
pub mod metrics;
mod scalar;
pub mod sim;
pub mod waveform;

pub use error::{Error, Result};
pub use scalar::{Real, SPEED_OF_LIGHT};

pub use codesign::{codesign, codesign_seeded, Design, DesignTrace, SolverConfig};
pub use metrics::{interference_power_db, threshold_detect, Detection, DetectionReport};
pub use sim::{simulate, RangeDopplerMap, Scenario};
pub use waveform::{cross_correlation, interference_objective, DesignGrid, HermitianForm, PhaseCode};

pub type PhaseCode64 = PhaseCode<f64>;
pub type PhaseCode32 = PhaseCode<f32>;
pub type DesignGrid64 = DesignGrid<f64>;
pub type DesignGrid32 = DesignGrid<f32>;
pub type HermitianForm64 = HermitianForm<f64>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type Design64 = Design<f64>;
pub type Scenario64 = Scenario<f64>;
pub type RangeDopplerMap64 = RangeDopplerMap<f64>;
pub type RangeDopplerMap32 = RangeDopplerMap<f32>;
