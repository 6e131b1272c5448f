//! Victim-radar receive chain.
//!
//! Fast-time samples of one burst are `K` chips long and the transmitted code
//! repeats periodically, so delayed codes wrap circularly. The correlator is
//! circular as well, which keeps the interference seen on range bin `m` equal
//! to `α_I · r_xy^{m − n̂_I}` (up to the Doppler terms).

mod chain;
mod scenario;

pub use chain::{add_noise, correlate_range, dirichlet, range_doppler, sample_echo, simulate, RangeDopplerMap};
pub use scenario::{interferer_amplitude, target_amplitude, InterfererParams, Scenario, TargetParams, WaveformTiming};
