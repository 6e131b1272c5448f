//! Cyclic code-pair design.
//!
//! Each half-iteration fixes one code, assembles the Hermitian form whose
//! quadratic value over the free code equals the interference objective,
//! flips it into a maximisation with diagonal loading, and climbs it with
//! power-method-like iterations `z ← e^{j·arg(B̃ z)}`.

mod eigen;
mod operator;
mod pmli;
mod quadratic;
mod solver;

pub use eigen::{diagonal_load, dominant_eigenvalue, POWER_ITERATION_CAP, POWER_ITERATION_TOL};
pub use operator::{HermitianOperator, LoadedOperator, RankOneSum};
pub use pmli::{pmli_step, solve_subproblem, SubproblemResult};
pub use quadratic::{build_quadratic_form, Free};
pub use solver::{codesign, codesign_seeded, initial_pair, Assembly, Design, DesignTrace, SolverConfig, UpdateOrder};
