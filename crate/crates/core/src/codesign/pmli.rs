use num_complex::Complex;

use super::{HermitianOperator, SolverConfig};
use crate::scalar::Real;
use crate::waveform::form::quadratic_value;
use crate::waveform::PhaseCode;

/// Phases of `w`, keeping the previous phase wherever `w_k` is exactly zero.
fn project<T: Real>(w: &[Complex<T>], prev: &PhaseCode<T>) -> PhaseCode<T> {
    let phases = w
        .iter()
        .zip(prev.phases())
        .map(|(wk, &old)| if wk.norm_sqr() == T::zero() { old } else { wk.arg() })
        .collect();
    PhaseCode::from_phases_unchecked(phases)
}

/// One power-method-like step `z ← e^{j·arg(B̃ z)}`.
///
/// Never decreases `zᴴ B̃ z` when `B̃` is positive semidefinite.
pub fn pmli_step<T: Real, O: HermitianOperator<T> + ?Sized>(op: &O, z: &PhaseCode<T>) -> PhaseCode<T> {
    project(&op.apply(z.entries()), z)
}

#[derive(Clone, Debug)]
pub struct SubproblemResult<T> {
    pub code: PhaseCode<T>,
    pub iterations: usize,
    pub initial_surrogate: T,
    pub final_surrogate: T,
    pub converged: bool,
}

/// Repeats [`pmli_step`] until the relative change of the surrogate drops
/// below `cfg.inner_tol` or `cfg.max_inner` steps have run.
pub fn solve_subproblem<T: Real, O: HermitianOperator<T> + ?Sized>(
    op: &O,
    init: &PhaseCode<T>,
    cfg: &SolverConfig<T>,
) -> SubproblemResult<T> {
    let mut z = init.clone();
    let mut w = op.apply(z.entries());
    let initial = quadratic_value(z.entries(), &w);
    let mut surrogate = initial;

    for t in 1..=cfg.max_inner {
        let next = project(&w, &z);
        let w_next = op.apply(next.entries());
        let s_next = quadratic_value(next.entries(), &w_next);
        let change = (s_next - surrogate).abs();
        let scale = surrogate.abs().max(T::min_positive_value());
        z = next;
        w = w_next;
        surrogate = s_next;
        if change <= cfg.inner_tol * scale {
            return SubproblemResult {
                code: z,
                iterations: t,
                initial_surrogate: initial,
                final_surrogate: surrogate,
                converged: true,
            };
        }
    }
    SubproblemResult {
        code: z,
        iterations: cfg.max_inner,
        initial_surrogate: initial,
        final_surrogate: surrogate,
        converged: false,
    }
}
