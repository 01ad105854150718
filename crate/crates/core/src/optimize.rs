//! Payoff, optimality conditions and the forward-backward sweep.
//!
//! The payoff is `J(h) = ∫hu - ∫(B₁ + B₂h)h` with `u` the maximal state for
//! `h`. At an optimum the switching quantity `s = u - λpu - B₁` determines the
//! control pointwise:
//!
//! ```text
//! h = min(H, max(0, s / (2B₂)))          B₂ > 0
//! h = H where s > 0, 0 where s < 0       B₂ = 0
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::adjoint::Linearization;
use crate::error::{Error, Result};
use crate::grid::{ControlField, GridSpec, ScalarField};
use crate::model::ModelParams;
use crate::state::{solve_state_with, StateOptions};

/// Upper limit on the number of candidates the brute-force oracle enumerates.
pub const MAX_COMBINATIONS: usize = 10_000;
/// Width of the switching band in the bang-bang law, relative to `K`.
pub const SWITCH_BAND: f64 = 1e-8;

/// `J(h) = ∫hu - ∫(B₁ + B₂h)h` by the trapezoid rule.
pub fn payoff(h: &ControlField, u: &ScalarField, params: &ModelParams) -> Result<f64> {
    let (b1, b2) = (params.linear_cost, params.quadratic_cost);
    let integrand = h
        .field()
        .zip_map(u, |hm, um| hm * um - (b1 + b2 * hm) * hm)?;
    Ok(integrand.integral())
}

/// `s = u - λpu - B₁`.
pub fn switching_function(
    u: &ScalarField,
    p: &ScalarField,
    params: &ModelParams,
) -> Result<ScalarField> {
    let (lambda, b1) = (params.lambda, params.linear_cost);
    u.zip_map(p, |um, pm| um - lambda * pm * um - b1)
}

/// `min(H, max(0, s / (2B₂)))`.
pub fn project_control(
    u: &ScalarField,
    p: &ScalarField,
    params: &ModelParams,
) -> Result<ControlField> {
    let b2 = params.quadratic_cost;
    if b2 == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let s = switching_function(u, p, params)?;
    Ok(ControlField::clamped(
        &s.scale(1.0 / (2.0 * b2)),
        params.effort_cap,
    ))
}

#[derive(Debug, Clone)]
pub struct BangBang {
    pub control: ControlField,
    /// Measure of the set where `|s|` falls inside the switching band.
    pub band_measure: f64,
}

/// Bang-bang law for `B₂ = 0`; the band `|s| <= 1e-8 K` gets `H/2`.
pub fn bang_bang_control(
    u: &ScalarField,
    p: &ScalarField,
    params: &ModelParams,
) -> Result<BangBang> {
    let cap = params.effort_cap;
    let band = SWITCH_BAND * params.capacity;
    let s = switching_function(u, p, params)?;
    let values = s.map(|sm| {
        if sm > band {
            cap
        } else if sm < -band {
            0.0
        } else {
            cap / 2.0
        }
    });
    let band_measure = s
        .map(|sm| if sm.abs() <= band { 1.0 } else { 0.0 })
        .integral();
    Ok(BangBang {
        control: ControlField::new(values, cap)?,
        band_measure,
    })
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Initial relaxation weight.
    pub omega: f64,
    /// Stop once `‖Π(u_k, p_k) - h_k‖_∞ <= tol`.
    pub tol: f64,
    pub max_iterations: usize,
    /// Use the bang-bang law instead of the projection.
    pub bang_bang: bool,
    pub state: StateOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            omega: 0.5,
            tol: 1e-9,
            max_iterations: 500,
            bang_bang: false,
            state: StateOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub h_opt: ControlField,
    /// Maximal state for `h_opt`.
    pub u_opt: ScalarField,
    /// Adjoint for `(u_opt, h_opt)`.
    pub p_opt: ScalarField,
    pub payoff: f64,
    /// `J(h_k)` for every iterate.
    pub payoff_trace: Vec<f64>,
    /// `‖h_{k+1} - h_k‖_∞` for every iterate.
    pub step_trace: Vec<f64>,
    /// `‖h_opt - Π(u_opt, p_opt)‖_∞`.
    pub fixed_point_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Relaxation weight in use at the end.
    pub omega: f64,
    pub sigma1: f64,
}

impl SweepResult {
    pub fn into_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                fixed_point_residual: self.fixed_point_residual,
                payoff_trace: self.payoff_trace,
            })
        }
    }
}

/// Relaxed fixed-point iteration on the optimality system
///
/// ```text
/// u_k = state(h_k),  p_k = adjoint(u_k, h_k),  h_{k+1} = (1-ω)h_k + ω Π(u_k, p_k)
/// ```
///
/// `ω` is halved whenever the step grows twice in a row. A non-converged run
/// is returned with `converged = false`; see [`SweepResult::into_converged`].
pub fn forward_backward_sweep(
    h0: &ControlField,
    params: &ModelParams,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    params.validate()?;
    if params.quadratic_cost == 0.0 && !opts.bang_bang {
        return Err(Error::DivisionByZero);
    }
    let cap = params.effort_cap;
    let mut h = ControlField::clamped(h0.field(), cap);
    let mut omega = opts.omega;
    let mut payoff_trace = Vec::new();
    let mut step_trace: Vec<f64> = Vec::new();
    let mut growth = 0;
    let mut last = None;

    for iteration in 0..=opts.max_iterations {
        let (u, lin, p, target) = sweep_step(&h, params, opts)?;
        let j = payoff(&h, &u, params)?;
        payoff_trace.push(j);
        let residual = h.field().max_abs_diff(target.field())?;
        if residual <= opts.tol {
            // finish on the projected control itself, which lands exactly on
            // the bounds where the constraint is active
            let (u_t, lin_t, p_t, next) = sweep_step(&target, params, opts)?;
            let residual_t = target.field().max_abs_diff(next.field())?;
            if residual_t <= residual {
                let j_t = payoff(&target, &u_t, params)?;
                payoff_trace.push(j_t);
                step_trace.push(residual);
                return Ok(SweepResult {
                    h_opt: target,
                    u_opt: u_t,
                    p_opt: p_t,
                    payoff: j_t,
                    payoff_trace,
                    step_trace,
                    fixed_point_residual: residual_t,
                    iterations: iteration + 1,
                    converged: true,
                    omega,
                    sigma1: lin_t.sigma1(),
                });
            }
        }
        if residual <= opts.tol || iteration == opts.max_iterations {
            return Ok(SweepResult {
                h_opt: h,
                u_opt: u,
                p_opt: p,
                payoff: j,
                payoff_trace,
                step_trace,
                fixed_point_residual: residual,
                iterations: iteration,
                converged: residual <= opts.tol,
                omega,
                sigma1: lin.sigma1(),
            });
        }
        let step = omega * residual;
        if let Some(prev) = last {
            if step > prev {
                growth += 1;
            } else {
                growth = 0;
            }
        }
        if growth >= 2 {
            omega *= 0.5;
            growth = 0;
        }
        step_trace.push(step);
        last = Some(step);
        let next = h
            .field()
            .zip_map(target.field(), |a, b| (1.0 - omega) * a + omega * b)?;
        h = ControlField::clamped(&next, cap);
    }
    unreachable!("the loop returns on its last iteration")
}

/// State, linearization, adjoint and the control prescribed by them.
fn sweep_step(
    h: &ControlField,
    params: &ModelParams,
    opts: &SweepOptions,
) -> Result<(ScalarField, Linearization, ScalarField, ControlField)> {
    let u = solve_state_with(h, params, true, &opts.state)?.u;
    let lin = Linearization::new(&u, h, params)?;
    let p = lin.adjoint(h)?.p;
    let target = if opts.bang_bang {
        bang_bang_control(&u, &p, params)?.control
    } else {
        project_control(&u, &p, params)?
    };
    Ok((u, lin, p, target))
}

/// How a sweep is started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Zero,
    Cap,
    /// Independent uniform values in `[0, H]`, seeded.
    Random(u64),
}

impl Start {
    pub fn control(self, grid: GridSpec, cap: f64) -> ControlField {
        match self {
            Start::Zero => ControlField::zeros(grid, cap),
            Start::Cap => ControlField::clamped(&ScalarField::constant(grid, cap), cap),
            Start::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let values: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(0.0..=cap)).collect();
                ControlField::clamped(&ScalarField::from_vec_unchecked(grid, values), cap)
            }
        }
    }
}

/// Runs one sweep per start, in parallel, results in start order.
pub fn multi_start(
    starts: &[Start],
    grid: &GridSpec,
    params: &ModelParams,
    opts: &SweepOptions,
) -> Result<Vec<SweepResult>> {
    starts
        .par_iter()
        .map(|s| forward_backward_sweep(&s.control(*grid, params.effort_cap), params, opts))
        .collect()
}

/// Largest pairwise `‖h_a - h_b‖_∞` among sweep results.
pub fn max_disagreement(results: &[SweepResult]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, a) in results.iter().enumerate() {
        for b in &results[i + 1..] {
            worst = worst.max(a.h_opt.field().max_abs_diff(b.h_opt.field())?);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub control: ControlField,
    pub payoff: f64,
    /// `J` of every candidate in enumeration order.
    pub payoffs: Vec<f64>,
}

/// Piecewise-constant control: `partitions` equal cells per axis, the cell
/// index of each axis read from `digits` (axis 0 fastest).
pub fn piecewise_constant(
    grid: &GridSpec,
    partitions: usize,
    values: &[f64],
    cap: f64,
) -> Result<ControlField> {
    let cell = |axis: usize, k: usize| {
        let n = grid.nodes_per_axis(axis);
        ((k * partitions) / (n - 1)).min(partitions - 1)
    };
    let field: Vec<f64> = (0..grid.len())
        .map(|m| {
            let (i, j) = grid.ij(m);
            let idx = if grid.dim() == 1 {
                cell(0, i)
            } else {
                cell(0, i) + partitions * cell(1, j)
            };
            values[idx]
        })
        .collect();
    ControlField::new(ScalarField::new(*grid, field)?, cap)
}

/// Exhaustive search over piecewise-constant controls with values in
/// `levels`. Ties keep the first candidate in enumeration order.
pub fn brute_force_oracle(
    partitions: usize,
    levels: &[f64],
    grid: &GridSpec,
    params: &ModelParams,
) -> Result<OracleResult> {
    params.validate()?;
    if partitions == 0 || levels.is_empty() {
        return Err(Error::InvalidParameter {
            name: "partitions",
            value: partitions as f64,
            reason: "need at least one partition and one level",
        });
    }
    for &level in levels {
        if !(0.0..=params.effort_cap).contains(&level) {
            return Err(Error::InadmissibleControl {
                index: 0,
                value: level,
                cap: params.effort_cap,
            });
        }
    }
    let cells = partitions.pow(grid.dim() as u32);
    let count = (levels.len() as f64).powi(cells as i32);
    if count > MAX_COMBINATIONS as f64 {
        return Err(Error::TooManyCombinations {
            count,
            limit: MAX_COMBINATIONS,
        });
    }
    let count = count as usize;
    let candidate = |index: usize| -> Result<ControlField> {
        let mut rest = index;
        let values: Vec<f64> = (0..cells)
            .map(|_| {
                let v = levels[rest % levels.len()];
                rest /= levels.len();
                v
            })
            .collect();
        piecewise_constant(grid, partitions, &values, params.effort_cap)
    };
    let payoffs: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|index| {
            let h = candidate(index)?;
            let u = solve_state_with(&h, params, true, &StateOptions::default())?.u;
            payoff(&h, &u, params)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &j) in payoffs.iter().enumerate() {
        if j > payoffs[best] {
            best = i;
        }
    }
    Ok(OracleResult {
        control: candidate(best)?,
        payoff: payoffs[best],
        payoffs,
    })
}

#[derive(Debug, Clone)]
pub struct GradientReport {
    pub epsilons: Vec<f64>,
    /// `(J(h + εγ) - J(h)) / ε`.
    pub finite_differences: Vec<f64>,
    /// `∫γ(u - λup - B₁ - 2B₂h)`.
    pub analytic: f64,
    pub discrepancies: Vec<f64>,
    /// Log-log slope of the discrepancy against `ε`; `None` when every
    /// discrepancy vanishes.
    pub slope: Option<f64>,
}

pub const GRADIENT_EPSILONS: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Directional derivative of `J` at `h` in direction `gamma`, analytic
/// against one-sided finite differences.
pub fn gradient_check(
    h: &ControlField,
    gamma: &ScalarField,
    params: &ModelParams,
) -> Result<GradientReport> {
    gamma.ensure_same_grid(h.field())?;
    let state = StateOptions::default();
    let u = solve_state_with(h, params, true, &state)?.u;
    let p = Linearization::new(&u, h, params)?.adjoint(h)?.p;
    let j0 = payoff(h, &u, params)?;
    let s = switching_function(&u, &p, params)?;
    let two_b2 = 2.0 * params.quadratic_cost;
    let density = s.zip_map(h.field(), |sm, hm| sm - two_b2 * hm)?;
    let analytic = gamma.inner(&density)?;

    let mut finite_differences = Vec::new();
    let mut discrepancies = Vec::new();
    for &eps in &GRADIENT_EPSILONS {
        let shifted = h.field().zip_map(gamma, |a, b| a + eps * b)?;
        let h_eps = ControlField::new(shifted, h.cap())?;
        let u_eps = solve_state_with(&h_eps, params, true, &state)?.u;
        let fd = (payoff(&h_eps, &u_eps, params)? - j0) / eps;
        finite_differences.push(fd);
        discrepancies.push((fd - analytic).abs());
    }
    let slope = log_log_slope(&GRADIENT_EPSILONS, &discrepancies);
    Ok(GradientReport {
        epsilons: GRADIENT_EPSILONS.to_vec(),
        finite_differences,
        analytic,
        discrepancies,
        slope,
    })
}

/// Least-squares slope of `log y` against `log x`, skipping zero `y`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(_, &b)| b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone)]
pub struct Stationarity {
    /// `max |s - 2B₂h|` over the interior set.
    pub residual: f64,
    /// Number of interior nodes.
    pub nodes: usize,
    /// Trapezoid measure of the interior set.
    pub measure: f64,
}

/// Stationarity on `D = {0 < s/(2B₂) < H}`, where the optimal control is
/// unconstrained and must satisfy `s = 2B₂h`.
pub fn interior_stationarity(
    h: &ControlField,
    u: &ScalarField,
    p: &ScalarField,
    params: &ModelParams,
) -> Result<Stationarity> {
    let two_b2 = 2.0 * params.quadratic_cost;
    if two_b2 == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let s = switching_function(u, p, params)?;
    s.ensure_same_grid(h.field())?;
    let inside = s.map(|sm| {
        let raw = sm / two_b2;
        if raw > 0.0 && raw < params.effort_cap {
            1.0
        } else {
            0.0
        }
    });
    let mut residual = 0.0f64;
    let mut nodes = 0;
    for m in 0..s.len() {
        if inside[m] == 1.0 {
            nodes += 1;
            residual = residual.max((s[m] - two_b2 * h.values()[m]).abs());
        }
    }
    Ok(Stationarity {
        residual,
        nodes,
        measure: inside.integral(),
    })
}

#[derive(Debug, Clone)]
pub struct CostSweepPoint {
    pub quadratic_cost: f64,
    pub payoff: f64,
    pub adjoint_sup: f64,
    /// `‖p‖_∞ · B₂`.
    pub scaled_adjoint_sup: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Optimizes for each `B₂` in `costs` from the same start, in parallel.
pub fn cost_sweep(
    costs: &[f64],
    start: Start,
    grid: &GridSpec,
    params: &ModelParams,
    opts: &SweepOptions,
) -> Result<Vec<CostSweepPoint>> {
    costs
        .par_iter()
        .map(|&b2| {
            let p = params.with_quadratic_cost(b2);
            let res = forward_backward_sweep(&start.control(*grid, p.effort_cap), &p, opts)?;
            let adjoint_sup = res.p_opt.sup_norm();
            Ok(CostSweepPoint {
                quadratic_cost: b2,
                payoff: res.payoff,
                adjoint_sup,
                scaled_adjoint_sup: adjoint_sup * b2,
                converged: res.converged,
                iterations: res.iterations,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(n: usize) -> GridSpec {
        GridSpec::unit_interval(n).unwrap()
    }

    #[test]
    fn payoff_examples() {
        let p = ModelParams::default();
        let g = line(17);
        let u = ScalarField::constant(g, 12.0);
        assert_eq!(
            payoff(&ControlField::zeros(g, p.effort_cap), &u, &p).unwrap(),
            0.0
        );
        let h = ControlField::constant(g, p.effort_cap, p.effort_cap).unwrap();
        let expected = 0.3 * 12.0 - (1.0 + 2.0 * 0.3) * 0.3;
        assert!((payoff(&h, &u, &p).unwrap() - expected).abs() < 1e-13);
    }

    #[test]
    fn projection_examples() {
        let g = line(5);
        let p = ModelParams {
            lambda: 100.0,
            effort_cap: 0.5,
            ..ModelParams::default()
        };
        let h = project_control(
            &ScalarField::constant(g, 10.0),
            &ScalarField::constant(g, 0.002),
            &p,
        )
        .unwrap();
        assert!(h.values().iter().all(|&v| v == 0.5));

        let p = ModelParams::default();
        let h =
            project_control(&ScalarField::constant(g, 1.8), &ScalarField::zeros(g), &p).unwrap();
        assert!(h.values().iter().all(|&v| (v - 0.2).abs() < 1e-15));
        let h =
            project_control(&ScalarField::constant(g, 0.5), &ScalarField::zeros(g), &p).unwrap();
        assert!(h.values().iter().all(|&v| v == 0.0));

        let zero_b2 = p.with_quadratic_cost(0.0);
        assert!(matches!(
            project_control(
                &ScalarField::constant(g, 1.0),
                &ScalarField::zeros(g),
                &zero_b2
            ),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn bang_bang_examples() {
        let g = line(9);
        let p = ModelParams::default()
            .with_quadratic_cost(0.0)
            .with_linear_cost(0.0);
        let u = ScalarField::constant(g, 10.0);
        let low = ScalarField::constant(g, 0.5 / p.lambda);
        let high = ScalarField::constant(g, 2.0 / p.lambda);
        assert!(bang_bang_control(&u, &low, &p)
            .unwrap()
            .control
            .values()
            .iter()
            .all(|&v| v == p.effort_cap));
        assert!(bang_bang_control(&u, &high, &p)
            .unwrap()
            .control
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let on = bang_bang_control(&u, &ScalarField::constant(g, 1.0 / p.lambda), &p).unwrap();
        assert!(on.control.values().iter().all(|&v| v == p.effort_cap / 2.0));
        assert!((on.band_measure - 1.0).abs() < 1e-12);

        let costly = p.with_linear_cost(p.capacity);
        let res = bang_bang_control(&u, &ScalarField::zeros(g), &costly).unwrap();
        assert!(res.control.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn expensive_effort_is_never_used() {
        let p = ModelParams::default().with_linear_cost(25.0);
        let g = line(65);
        let res = forward_backward_sweep(
            &Start::Cap.control(g, p.effort_cap),
            &p,
            &SweepOptions::default(),
        )
        .unwrap();
        assert!(res.converged);
        assert!(res.h_opt.values().iter().all(|&v| v == 0.0));
        assert_eq!(res.payoff, 0.0);
    }

    #[test]
    fn sweep_converges_and_improves_on_the_start() {
        let p = ModelParams::default();
        let g = line(65);
        for start in [Start::Zero, Start::Cap, Start::Random(1)] {
            let h0 = start.control(g, p.effort_cap);
            let res = forward_backward_sweep(&h0, &p, &SweepOptions::default()).unwrap();
            assert!(res.converged, "{start:?}: {}", res.fixed_point_residual);
            assert!(res.fixed_point_residual <= 1e-8);
            assert!(res.payoff >= res.payoff_trace[0] - 1e-12);
            assert!(res.payoff <= res.u_opt.sup_norm() * p.effort_cap * g.measure());
            let again = project_control(&res.u_opt, &res.p_opt, &p).unwrap();
            assert!(
                again.field().max_abs_diff(res.h_opt.field()).unwrap() <= res.fixed_point_residual
            );
            let st = interior_stationarity(&res.h_opt, &res.u_opt, &res.p_opt, &p).unwrap();
            assert!(st.residual <= 1e-6);
        }
    }

    #[test]
    fn oracle_small_cases() {
        let p = ModelParams::default();
        let g = line(33);
        let single = brute_force_oracle(1, &[0.0], &g, &p).unwrap();
        assert_eq!(single.payoff, 0.0);
        assert!(single.control.values().iter().all(|&v| v == 0.0));

        let two = brute_force_oracle(1, &[0.0, p.effort_cap], &g, &p).unwrap();
        assert_eq!(two.payoffs.len(), 2);
        assert_eq!(two.payoff, two.payoffs[0].max(two.payoffs[1]));

        assert!(matches!(
            brute_force_oracle(10, &[0.0, 0.1, 0.2], &g, &p),
            Err(Error::TooManyCombinations { .. })
        ));
    }

    #[test]
    fn piecewise_constant_cells() {
        let g = line(7);
        let h = piecewise_constant(&g, 3, &[0.0, 0.1, 0.2], 0.3).unwrap();
        assert_eq!(h.values(), &[0.0, 0.0, 0.1, 0.1, 0.2, 0.2, 0.2]);
    }

    #[test]
    fn gradient_check_with_zero_direction() {
        let p = ModelParams::default();
        let g = line(33);
        let h = ControlField::constant(g, 0.15, p.effort_cap).unwrap();
        let report = gradient_check(&h, &ScalarField::zeros(g), &p).unwrap();
        assert_eq!(report.analytic, 0.0);
        assert!(report.finite_differences.iter().all(|&v| v == 0.0));
        assert!(report.slope.is_none());
    }

    #[test]
    fn gradient_check_is_first_order() {
        let p = ModelParams::default();
        let g = line(129);
        let h = ControlField::constant(g, 0.15, p.effort_cap).unwrap();
        let gamma = ScalarField::from_fn(g, |x| (3.0 * x[0]).cos());
        let report = gradient_check(&h, &gamma, &p).unwrap();
        let slope = report.slope.unwrap();
        assert!((slope - 1.0).abs() <= 0.3, "{report:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn projection_is_admissible(u in 0.0f64..30.0, pv in -0.01f64..0.01, b1 in 0.0f64..5.0, b2 in 0.01f64..100.0) {
            let g = line(3);
            let p = ModelParams::default().with_linear_cost(b1).with_quadratic_cost(b2);
            let h = project_control(&ScalarField::constant(g, u), &ScalarField::constant(g, pv), &p).unwrap();
            prop_assert!(h.values().iter().all(|&v| (0.0..=p.effort_cap).contains(&v)));
        }

        #[test]
        fn log_log_slope_recovers_powers(k in 0.5f64..3.0, c in 0.1f64..10.0) {
            let x = [1e-2, 1e-3, 1e-4];
            let y: Vec<f64> = x.iter().map(|e: &f64| c * e.powf(k)).collect();
            prop_assert!((log_log_slope(&x, &y).unwrap() - k).abs() < 1e-9);
        }
    }
}
