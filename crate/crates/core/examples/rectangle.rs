//! The optimal harvesting problem on a rectangle, written as CSV to stdout.

use robin_harvest::grid::GridSpec;
use robin_harvest::model::ModelParams;
use robin_harvest::optimize::{forward_backward_sweep, Start, SweepOptions};

fn main() -> robin_harvest::Result<()> {
    let grid = GridSpec::rectangle((0.0, 2.0), (0.0, 1.0), 33, 17)?;
    let params = ModelParams::default().with_quadratic_cost(40.0);
    let res = forward_backward_sweep(
        &Start::Zero.control(grid, params.effort_cap),
        &params,
        &SweepOptions::default(),
    )?
    .into_converged()?;
    eprintln!("J = {:.10} after {} iterations", res.payoff, res.iterations);
    println!("x,y,u,h");
    for m in 0..grid.len() {
        let [x, y] = grid.point(m);
        println!("{x},{y},{},{}", res.u_opt[m], res.h_opt.values()[m]);
    }
    Ok(())
}
