use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    build_quadratic_form, diagonal_load, dominant_eigenvalue, solve_subproblem, Free, HermitianOperator,
    LoadedOperator, RankOneSum, SubproblemResult,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::waveform::{interference_objective, DesignGrid, PhaseCode};

/// Which copy of `x` the `y` half-step sees within one outer iteration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateOrder {
    /// `y` is optimised against the freshly updated `x`.
    #[default]
    GaussSeidel,
    /// `y` is optimised against the `x` from the previous outer iteration.
    /// Does not inherit the monotone-objective guarantee.
    Jacobi,
}

/// How the Hermitian forms are represented during the inner iterations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assembly {
    /// Explicit `K × K` matrices, rebuilt once per half-iteration.
    #[default]
    Dense,
    /// Rank-one terms regenerated on every product; for large `K`.
    MatrixFree,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig<T> {
    /// Outer stopping rule: `|J(s) − J(s−1)| / J(s−1) < epsilon`.
    pub epsilon: T,
    /// Inner stopping rule on the relative change of `zᴴ B̃ z`.
    pub inner_tol: T,
    pub max_outer: usize,
    pub max_inner: usize,
    /// `λ_m = (1 + loading_margin) · λ̂_max`.
    pub loading_margin: T,
    pub seed: u64,
    pub order: UpdateOrder,
    pub assembly: Assembly,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            epsilon: T::lit(1e-5),
            inner_tol: T::lit(1e-6),
            max_outer: 200,
            max_inner: 500,
            loading_margin: T::lit(1e-2),
            seed: 0,
            order: UpdateOrder::GaussSeidel,
            assembly: Assembly::Dense,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn validate(&self) -> Result<()> {
        fn positive<T: Real>(field: &'static str, v: T) -> Result<()> {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig {
                    field,
                    reason: format!("must be positive, got {v}"),
                })
            }
        }
        positive("epsilon", self.epsilon)?;
        positive("inner_tol", self.inner_tol)?;
        positive("loading_margin", self.loading_margin)?;
        if self.max_outer == 0 {
            return Err(Error::InvalidConfig {
                field: "max_outer",
                reason: "must be at least 1".into(),
            });
        }
        if self.max_inner == 0 {
            return Err(Error::InvalidConfig {
                field: "max_inner",
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Objective history of one design run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignTrace<T> {
    /// `J(0), J(1), …`; entry `s` is the objective after outer iteration `s`.
    pub objective_per_outer: Vec<T>,
    /// `(x steps, y steps)` of PMLI per outer iteration.
    pub inner_iteration_counts: Vec<(usize, usize)>,
    pub initial_objective: T,
    pub final_objective: T,
    pub converged: bool,
    /// The objective hit exactly zero, where the relative rule is undefined.
    pub exact_zero: bool,
}

impl<T: Real> DesignTrace<T> {
    pub fn outer_iterations(&self) -> usize {
        self.inner_iteration_counts.len()
    }

    /// `10·log10(J(0) / J(final))`.
    pub fn improvement_db(&self) -> T {
        T::lit(10.0) * (self.initial_objective / self.final_objective).log10()
    }

    /// CSV with columns `outer_iter, J, inner_iters_x, inner_iters_y`; row 0
    /// holds the initial objective.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outer_iter,J,inner_iters_x,inner_iters_y\n");
        for (s, j) in self.objective_per_outer.iter().enumerate() {
            let (ix, iy) = if s == 0 {
                (0, 0)
            } else {
                self.inner_iteration_counts[s - 1]
            };
            out.push_str(&format!("{s},{j:.17e},{ix},{iy}\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Design<T> {
    pub x: PhaseCode<T>,
    pub y: PhaseCode<T>,
    pub trace: DesignTrace<T>,
}

/// Draws `(x⁰, y⁰)` with i.i.d. uniform phases; `x⁰` first, then `y⁰`, from
/// one ChaCha stream seeded with `seed`.
pub fn initial_pair<T: Real>(len: usize, seed: u64) -> Result<(PhaseCode<T>, PhaseCode<T>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = PhaseCode::random(len, &mut rng)?;
    let y = PhaseCode::random(len, &mut rng)?;
    Ok((x, y))
}

/// [`codesign`] started from [`initial_pair`] with `cfg.seed`.
pub fn codesign_seeded<T: Real>(len: usize, grid: &DesignGrid<T>, cfg: &SolverConfig<T>) -> Result<Design<T>> {
    let (x0, y0) = initial_pair(len, cfg.seed)?;
    codesign(&x0, &y0, grid, cfg)
}

fn optimise_block<T: Real>(
    fixed: &PhaseCode<T>,
    free_code: &PhaseCode<T>,
    free: Free,
    grid: &DesignGrid<T>,
    cfg: &SolverConfig<T>,
) -> Result<SubproblemResult<T>> {
    fn run<T: Real, O: HermitianOperator<T>>(
        base: &O,
        init: &PhaseCode<T>,
        cfg: &SolverConfig<T>,
    ) -> SubproblemResult<T> {
        let lambda = dominant_eigenvalue(base, cfg.loading_margin);
        solve_subproblem(&LoadedOperator::new(base, lambda), init, cfg)
    }

    Ok(match cfg.assembly {
        Assembly::Dense => {
            let form = build_quadratic_form(fixed, grid, free)?;
            let lambda = dominant_eigenvalue(&form, cfg.loading_margin);
            solve_subproblem(&diagonal_load(&form, lambda), free_code, cfg)
        }
        Assembly::MatrixFree => run(&RankOneSum::new(fixed, grid, free)?, free_code, cfg),
    })
}

/// Cyclic minimisation of `Σ_l Σ_p |r_xy^l(f_p)|²` over unimodular `x`, `y`.
///
/// Every outer iteration updates `x` against the current `y`, then `y`
/// against `x` (which copy of `x` depends on [`UpdateOrder`]). The loop ends
/// when the relative change of the objective falls below `cfg.epsilon`, when
/// the objective is exactly zero, or after `cfg.max_outer` iterations.
pub fn codesign<T: Real>(
    x0: &PhaseCode<T>,
    y0: &PhaseCode<T>,
    grid: &DesignGrid<T>,
    cfg: &SolverConfig<T>,
) -> Result<Design<T>> {
    x0.ensure_same_len(y0)?;
    grid.validate_for(x0.len())?;
    cfg.validate()?;

    let mut x = x0.clone();
    let mut y = y0.clone();
    let initial = interference_objective(&x, &y, grid)?;
    let mut objectives = vec![initial];
    let mut counts = Vec::new();
    let mut converged = false;
    let mut exact_zero = initial == T::zero();

    if !exact_zero {
        let mut previous = initial;
        for _ in 0..cfg.max_outer {
            let xs = optimise_block(&y, &x, Free::X, grid, cfg)?;
            let x_ref = match cfg.order {
                UpdateOrder::GaussSeidel => &xs.code,
                UpdateOrder::Jacobi => &x,
            };
            let ys = optimise_block(x_ref, &y, Free::Y, grid, cfg)?;
            x = xs.code;
            y = ys.code;
            counts.push((xs.iterations, ys.iterations));

            let current = interference_objective(&x, &y, grid)?;
            objectives.push(current);
            if current == T::zero() {
                exact_zero = true;
                break;
            }
            if ((current - previous) / previous).abs() < cfg.epsilon {
                converged = true;
                break;
            }
            previous = current;
        }
    }
    if exact_zero {
        converged = true;
    }

    let final_objective = *objectives.last().expect("trace holds the initial objective");
    Ok(Design {
        x,
        y,
        trace: DesignTrace {
            objective_per_outer: objectives,
            inner_iteration_counts: counts,
            initial_objective: initial,
            final_objective,
            converged,
            exact_zero,
        },
    })
}
