//! Forward-backward sweep on the canonical configuration, with the payoff
//! history, a gradient check at an interior control, and the optimality
//! conditions of the result.

use robin_harvest::grid::{ControlField, GridSpec, ScalarField};
use robin_harvest::model::ModelParams;
use robin_harvest::optimize::{
    forward_backward_sweep, gradient_check, interior_stationarity, Start, SweepOptions,
};

fn main() -> robin_harvest::Result<()> {
    let grid = GridSpec::unit_interval(257)?;
    for b2 in [2.0, 20.0] {
        let params = ModelParams::default().with_quadratic_cost(b2);
        let res = forward_backward_sweep(
            &Start::Zero.control(grid, params.effort_cap),
            &params,
            &SweepOptions::default(),
        )?
        .into_converged()?;
        println!(
            "B2 = {b2}: {} iterations, omega {}",
            res.iterations, res.omega
        );
        for (k, j) in res.payoff_trace.iter().enumerate().step_by(5) {
            println!("  J[{k:>3}] = {j:.12}");
        }
        let st = interior_stationarity(&res.h_opt, &res.u_opt, &res.p_opt, &params)?;
        println!(
            "  J* = {:.12}, fixed point residual {:.1e}, h in [{:.4}, {:.4}], interior nodes {} (residual {:.1e})",
            res.payoff,
            res.fixed_point_residual,
            res.h_opt.field().min(),
            res.h_opt.field().max(),
            st.nodes,
            st.residual
        );
    }

    let params = ModelParams::default();
    let h = ControlField::constant(grid, 0.15, params.effort_cap)?;
    let gamma = ScalarField::from_fn(grid, |p| (3.0 * p[0]).cos());
    let report = gradient_check(&h, &gamma, &params)?;
    println!("\ndirectional derivative {:.10}", report.analytic);
    for ((eps, fd), d) in report
        .epsilons
        .iter()
        .zip(&report.finite_differences)
        .zip(&report.discrepancies)
    {
        println!("  eps {eps:.0e}: difference quotient {fd:.10}, gap {d:.3e}");
    }
    println!("  slope {:.3}", report.slope.unwrap_or(f64::NAN));
    Ok(())
}
