//! Exhaustive search over piecewise-constant efforts, compared with the sweep.

use robin_harvest::grid::GridSpec;
use robin_harvest::model::ModelParams;
use robin_harvest::optimize::{brute_force_oracle, forward_backward_sweep, Start, SweepOptions};

fn main() -> robin_harvest::Result<()> {
    let grid = GridSpec::unit_interval(257)?;
    for b2 in [2.0, 20.0] {
        let params = ModelParams::default().with_quadratic_cost(b2);
        let cap = params.effort_cap;
        let oracle = brute_force_oracle(3, &[0.0, cap / 2.0, cap], &grid, &params)?;
        let sweep = forward_backward_sweep(
            &Start::Zero.control(grid, cap),
            &params,
            &SweepOptions::default(),
        )?;
        let cells: Vec<String> = [0, 128, 256]
            .iter()
            .map(|&m| format!("{:.2}", oracle.control.values()[m]))
            .collect();
        println!(
            "B2 = {b2:>4}: best of {} candidates J = {:.10} (cells {}), sweep J = {:.10}",
            oracle.payoffs.len(),
            oracle.payoff,
            cells.join("/"),
            sweep.payoff
        );
    }
    Ok(())
}
