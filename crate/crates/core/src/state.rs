//! The nonlinear state equation `-Δu = λ f_h(u)` with homogeneous Robin data.
//!
//! Positive solutions are obtained by monotone iteration
//!
//! ```text
//! (L₀ + σ) u_{n+1} = λ f_h(u_n) + σ u_n,    σ = λ(3 + c + H)
//! ```
//!
//! where `L₀` is the Robin Laplacian. `σ` dominates `λ|f_h'|` on `[0, K]`, so
//! the right-hand side is order preserving and `(L₀ + σ)⁻¹` is a nonnegative
//! matrix: iterates started at the supersolution `K` decrease to the maximal
//! solution, iterates started at a subsolution increase to the minimal one.
//! A damped Newton pass then polishes the result.

use crate::error::{Error, Result};
use crate::grid::{max_abs_diff, ControlField, GridSpec, ScalarField};
use crate::model::{reaction, reaction_derivative, ModelParams};
use crate::operator::DiscreteOperator;

/// Fraction of `K` below which the state is declared extinct.
pub const EXTINCTION_FRACTION: f64 = 1e-8;
/// Allowed wrong-direction movement of a monotone step, relative to `K`.
const MONOTONE_SLACK: f64 = 1e-10;
/// Newton target for `‖-Δu - λ f_h(u)‖_∞`, relative to `λK`.
const NEWTON_TOL: f64 = 1e-12;
/// Residual accepted when Newton stagnates at rounding level, relative to `λ`.
pub const RESIDUAL_FLOOR: f64 = 1e-9;
const NEWTON_MAX_STEPS: usize = 50;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone)]
pub struct StateOptions {
    /// Stop when `‖u_{n+1} - u_n‖_∞ <= step_tol * K`.
    pub step_tol: f64,
    pub max_iterations: usize,
    /// Polish the monotone limit with damped Newton.
    pub newton: bool,
}

impl Default for StateOptions {
    fn default() -> Self {
        Self {
            step_tol: 1e-11,
            max_iterations: 20_000,
            newton: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct StateSolution {
    pub u: ScalarField,
    pub control: ControlField,
    /// Monotone iterations (0 for a pure Newton solve).
    pub iterations: usize,
    pub newton_steps: usize,
    /// `‖-Δu - λ f_h(u)‖_∞` on the grid.
    pub residual: f64,
    /// `K(1-H)/2`.
    pub bracket_lo: f64,
    /// `K`.
    pub bracket_hi: f64,
}

impl StateSolution {
    /// `bracket_lo - tol <= u <= bracket_hi + tol` at every node.
    pub fn within_bracket(&self, tol: f64) -> bool {
        self.u
            .values()
            .iter()
            .all(|&v| v >= self.bracket_lo - tol && v <= self.bracket_hi + tol)
    }
}

/// Direction of a monotone iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Nonincreasing iterates from a supersolution.
    Descending,
    /// Nondecreasing iterates from a subsolution.
    Ascending,
}

fn check_control(h: &ControlField, params: &ModelParams) -> Result<()> {
    params.validate()?;
    if h.cap() > params.effort_cap {
        return Err(Error::InvalidParameter {
            name: "H",
            value: h.cap(),
            reason: "control cap exceeds the model effort cap",
        });
    }
    Ok(())
}

/// Pointwise `-Δu - λ f_h(u)`.
fn residual_vec(l0: &DiscreteOperator, u: &[f64], h: &[f64], params: &ModelParams) -> Vec<f64> {
    let lu = l0.apply_symmetric(u);
    lu.iter()
        .zip(l0.weights())
        .zip(u.iter().zip(h))
        .map(|((s, w), (&um, &hm))| s / w - params.lambda * reaction(um, hm, params))
        .collect()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// `‖-Δu - λ f_h(u)‖_∞` for the discrete operator.
pub fn state_residual(u: &ScalarField, h: &ControlField, params: &ModelParams) -> Result<f64> {
    u.ensure_same_grid(h.field())?;
    let l0 = DiscreteOperator::laplacian(u.grid(), params.robin)?;
    Ok(sup(&residual_vec(&l0, u.values(), h.values(), params)))
}

/// Runs the monotone iteration from `start` and returns the limit with the
/// number of iterations. `observe` sees every iterate, starting with `start`.
pub fn monotone_iteration(
    h: &ControlField,
    params: &ModelParams,
    start: &ScalarField,
    direction: Direction,
    opts: &StateOptions,
    mut observe: impl FnMut(usize, &ScalarField),
) -> Result<(ScalarField, usize)> {
    check_control(h, params)?;
    start.ensure_same_grid(h.field())?;
    let grid = *h.grid();
    let k = params.capacity;
    let lambda = params.lambda;
    let sigma = lambda * (3.0 + params.grazing + params.effort_cap);
    let shifted =
        DiscreteOperator::assemble(&grid, params.robin, &ScalarField::constant(grid, sigma))?;
    let solver = shifted.factorize()?;
    let weights = shifted.weights();
    let extinct_below = EXTINCTION_FRACTION * k;
    let sign = match direction {
        Direction::Descending => 1.0,
        Direction::Ascending => -1.0,
    };

    let mut u = start.values().to_vec();
    observe(0, start);
    for iteration in 1..=opts.max_iterations {
        let b: Vec<f64> = u
            .iter()
            .zip(h.values())
            .zip(weights)
            .map(|((&um, &hm), w)| w * (lambda * reaction(um, hm, params) + sigma * um))
            .collect();
        let next = solver.solve_scaled(&b)?;
        // descending: next <= u, ascending: next >= u
        let violation = next
            .iter()
            .zip(&u)
            .fold(0.0f64, |m, (n, o)| m.max(sign * (n - o)));
        if violation > MONOTONE_SLACK * k {
            return Err(Error::NotMonotone {
                iteration,
                violation,
            });
        }
        let step = max_abs_diff(&next, &u);
        let field = ScalarField::from_vec_unchecked(grid, next);
        observe(iteration, &field);
        u = field.into_values();
        let sup_norm = sup(&u);
        if sup_norm < extinct_below {
            return Err(Error::Extinct {
                sup_norm,
                iterations: iteration,
            });
        }
        if step <= opts.step_tol * k {
            return Ok((ScalarField::from_vec_unchecked(grid, u), iteration));
        }
    }
    Err(Error::MaxIterations {
        solver: "monotone iteration",
        iterations: opts.max_iterations,
        residual: state_residual(&ScalarField::from_vec_unchecked(grid, u), h, params)?,
    })
}

/// Damped Newton on the grid residual. Returns the iterate, the number of
/// accepted steps and the final residual.
fn newton(
    u0: Vec<f64>,
    h: &ControlField,
    params: &ModelParams,
    l0: &DiscreteOperator,
) -> Result<(Vec<f64>, usize, f64)> {
    let grid = *l0.grid();
    let lambda = params.lambda;
    let tol = NEWTON_TOL * lambda * params.capacity;
    let floor = RESIDUAL_FLOOR * lambda;
    let mut u = u0;
    let mut f = residual_vec(l0, &u, h.values(), params);
    let mut r = sup(&f);
    for step in 0..NEWTON_MAX_STEPS {
        if r <= tol {
            return Ok((u, step, r));
        }
        let potential = ScalarField::new(
            grid,
            u.iter()
                .zip(h.values())
                .map(|(&um, &hm)| -lambda * reaction_derivative(um, hm, params))
                .collect(),
        )?;
        let jac = DiscreteOperator::assemble(&grid, params.robin, &potential)?;
        let solver = jac.factorize().map_err(|e| match e {
            Error::SingularMatrix { .. } => Error::JacobianSingular,
            other => other,
        })?;
        let neg_f: Vec<f64> = f.iter().zip(jac.weights()).map(|(fm, w)| -fm * w).collect();
        let delta = solver.solve_scaled(&neg_f)?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(a, d)| a + t * d).collect();
            let f_trial = residual_vec(l0, &trial, h.values(), params);
            let r_trial = sup(&f_trial);
            if r_trial < r {
                accepted = Some((trial, f_trial, r_trial));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, f_trial, r_trial)) => {
                u = trial;
                f = f_trial;
                r = r_trial;
            }
            None if r <= floor => return Ok((u, step, r)),
            None => {
                return Err(Error::Diverged {
                    steps: step,
                    residual: r,
                })
            }
        }
    }
    if r <= floor {
        Ok((u, NEWTON_MAX_STEPS, r))
    } else {
        Err(Error::Diverged {
            steps: NEWTON_MAX_STEPS,
            residual: r,
        })
    }
}

fn bracket(params: &ModelParams) -> (f64, f64) {
    (
        params.capacity * (1.0 - params.effort_cap) / 2.0,
        params.capacity,
    )
}

/// Newton refinement of `u0` for the control `h`.
pub fn newton_refine(
    u0: &ScalarField,
    h: &ControlField,
    params: &ModelParams,
) -> Result<StateSolution> {
    check_control(h, params)?;
    u0.ensure_same_grid(h.field())?;
    let l0 = DiscreteOperator::laplacian(u0.grid(), params.robin)?;
    let (u, steps, residual) = newton(u0.values().to_vec(), h, params, &l0)?;
    let (bracket_lo, bracket_hi) = bracket(params);
    Ok(StateSolution {
        u: ScalarField::from_vec_unchecked(*u0.grid(), u),
        control: h.clone(),
        iterations: 0,
        newton_steps: steps,
        residual,
        bracket_lo,
        bracket_hi,
    })
}

/// Positive solution for the constant effort `alpha`, from the supersolution `K`.
pub fn solve_autonomous(
    alpha: f64,
    grid: &GridSpec,
    params: &ModelParams,
) -> Result<StateSolution> {
    params.validate()?;
    if !(0.0..=params.effort_cap).contains(&alpha) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must lie in [0, H]",
        });
    }
    let h = ControlField::constant(*grid, alpha, params.effort_cap)?;
    solve_state(&h, params, true)
}

/// Positive solution for the control `h`: the maximal one (`from_above`) or
/// the minimal one above `u_H`.
pub fn solve_state(
    h: &ControlField,
    params: &ModelParams,
    from_above: bool,
) -> Result<StateSolution> {
    solve_state_with(h, params, from_above, &StateOptions::default())
}

pub fn solve_state_with(
    h: &ControlField,
    params: &ModelParams,
    from_above: bool,
    opts: &StateOptions,
) -> Result<StateSolution> {
    check_control(h, params)?;
    let grid = *h.grid();
    let (start, direction) = if from_above {
        (
            ScalarField::constant(grid, params.capacity),
            Direction::Descending,
        )
    } else {
        let cap = ControlField::constant(grid, params.effort_cap, params.effort_cap)?;
        let u_cap = solve_state_with(&cap, params, true, opts)?;
        (u_cap.u, Direction::Ascending)
    };
    let (u, iterations) = monotone_iteration(h, params, &start, direction, opts, |_, _| {})?;
    let l0 = DiscreteOperator::laplacian(&grid, params.robin)?;
    let (u, newton_steps, residual) = if opts.newton {
        newton(u.into_values(), h, params, &l0)?
    } else {
        let r = sup(&residual_vec(&l0, u.values(), h.values(), params));
        (u.into_values(), 0, r)
    };
    let (bracket_lo, bracket_hi) = bracket(params);
    Ok(StateSolution {
        u: ScalarField::from_vec_unchecked(grid, u),
        control: h.clone(),
        iterations,
        newton_steps,
        residual,
        bracket_lo,
        bracket_hi,
    })
}
