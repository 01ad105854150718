//! Dependence of the optimum on the quadratic cost B2: start independence at
//! large B2 and the scaling of the adjoint.

use robin_harvest::grid::GridSpec;
use robin_harvest::model::ModelParams;
use robin_harvest::optimize::{cost_sweep, max_disagreement, multi_start, Start, SweepOptions};

fn main() -> robin_harvest::Result<()> {
    let grid = GridSpec::unit_interval(257)?;
    let params = ModelParams::default();
    let opts = SweepOptions::default();

    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>6}",
        "B2", "J", "sup p", "B2 sup p", "iters"
    );
    for pt in cost_sweep(
        &[0.5, 2.0, 10.0, 20.0, 40.0, 80.0, 160.0],
        Start::Zero,
        &grid,
        &params,
        &opts,
    )? {
        println!(
            "{:>6} {:>14.8} {:>14.6e} {:>14.6e} {:>6}",
            pt.quadratic_cost, pt.payoff, pt.adjoint_sup, pt.scaled_adjoint_sup, pt.iterations
        );
    }

    let starts = [Start::Zero, Start::Cap, Start::Random(1), Start::Random(2)];
    for b2 in [0.01, 50.0] {
        let runs = multi_start(&starts, &grid, &params.with_quadratic_cost(b2), &opts)?;
        let converged = runs.iter().filter(|r| r.converged).count();
        println!(
            "B2 = {b2}: {converged}/{} starts converged, largest disagreement {:.2e}",
            runs.len(),
            max_disagreement(&runs)?
        );
    }
    Ok(())
}
