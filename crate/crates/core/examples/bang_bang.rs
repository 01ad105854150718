//! Effort with no cost (B1 = B2 = 0): the switching function alone decides
//! between zero and full effort.

use robin_harvest::grid::GridSpec;
use robin_harvest::model::ModelParams;
use robin_harvest::optimize::{bang_bang_control, forward_backward_sweep, Start, SweepOptions};

fn main() -> robin_harvest::Result<()> {
    let grid = GridSpec::unit_interval(257)?;
    let params = ModelParams::default()
        .with_linear_cost(0.0)
        .with_quadratic_cost(0.0);
    let opts = SweepOptions {
        bang_bang: true,
        max_iterations: 60,
        ..SweepOptions::default()
    };
    let res = forward_backward_sweep(
        &Start::Zero.control(grid, params.effort_cap),
        &params,
        &opts,
    )?;
    let law = bang_bang_control(&res.u_opt, &res.p_opt, &params)?;
    let full = law
        .control
        .values()
        .iter()
        .filter(|&&v| v == params.effort_cap)
        .count();
    println!(
        "converged {}, {} iterations, J = {:.10}, lambda * max p = {:.4}",
        res.converged,
        res.iterations,
        res.payoff,
        params.lambda * res.p_opt.max()
    );
    println!(
        "full effort on {full}/{} nodes, switching band measure {:.2e}",
        grid.len(),
        law.band_measure
    );
    Ok(())
}
