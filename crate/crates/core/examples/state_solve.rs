//! Monotone iteration for the state equation from above and from below,
//! followed by Newton polishing.

use robin_harvest::grid::{ControlField, GridSpec, ScalarField};
use robin_harvest::model::{compute_r0, ModelParams};
use robin_harvest::state::{monotone_iteration, solve_state, Direction, StateOptions};

fn main() -> robin_harvest::Result<()> {
    let params = ModelParams::default();
    let grid = GridSpec::unit_interval(257)?;
    let h = ControlField::new(
        ScalarField::from_fn(grid, |p| 0.3 * (std::f64::consts::PI * p[0]).sin().powi(2)),
        params.effort_cap,
    )?;

    let opts = StateOptions {
        newton: false,
        ..StateOptions::default()
    };
    let start = ScalarField::constant(grid, params.capacity);
    let mut history = Vec::new();
    monotone_iteration(&h, &params, &start, Direction::Descending, &opts, |k, u| {
        history.push((k, u.max(), u.min()))
    })?;
    println!("monotone descent from u = K:");
    for &(k, hi, lo) in history.iter().filter(|(k, _, _)| k % 25 == 0) {
        println!("  iteration {k:>4}: u in [{lo:.12}, {hi:.12}]");
    }

    let above = solve_state(&h, &params, true)?;
    let below = solve_state(&h, &params, false)?;
    println!(
        "maximal solution: {} monotone + {} Newton steps, residual {:.2e}",
        above.iterations, above.newton_steps, above.residual
    );
    println!(
        "minimal solution: {} monotone + {} Newton steps, residual {:.2e}",
        below.iterations, below.newton_steps, below.residual
    );
    println!(
        "max |u_max - u_min| = {:.2e}",
        above.u.max_abs_diff(&below.u)?
    );
    println!(
        "bracket [{:.3}, {:.3}] holds: {}; r0(H) = {:.10}",
        above.bracket_lo,
        above.bracket_hi,
        above.within_bracket(1e-8 * params.capacity),
        compute_r0(params.effort_cap, &params)?
    );
    Ok(())
}
