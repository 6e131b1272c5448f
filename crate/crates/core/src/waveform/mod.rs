//! Phase codes, the suppression grid, and the correlation primitives shared by
//! the code designer and the simulator.
//!
//! All shifts are circular: shift `l` pairs chip `k` of one code with chip
//! `(k + l) mod K` of the other.

mod code;
mod correlation;
pub(crate) mod form;
mod grid;

pub use code::{wrap_phase, PhaseCode};
pub use correlation::{circular_shift, correlate_slices, cross_correlation, interference_objective, steering_vector};
pub use form::HermitianForm;
pub use grid::DesignGrid;
