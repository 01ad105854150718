//! Adjoint and sensitivity solves, the duality identity, and the
//! difference-quotient check of the sensitivity.

use robin_harvest::adjoint::{duality_sides, Linearization};
use robin_harvest::grid::{ControlField, GridSpec, ScalarField};
use robin_harvest::model::ModelParams;
use robin_harvest::state::solve_state;

fn main() -> robin_harvest::Result<()> {
    let params = ModelParams::default();
    let grid = GridSpec::unit_interval(257)?;
    let h = ControlField::constant(grid, 0.15, params.effort_cap)?;
    let u = solve_state(&h, &params, true)?.u;

    let lin = Linearization::new(&u, &h, &params)?;
    let adj = lin.adjoint(&h)?;
    println!(
        "sigma1 of the linearization {:.6}, adjoint sup {:.6e}, min {:.3e}, residual {:.1e}",
        adj.sigma1_check,
        adj.p.sup_norm(),
        adj.p.min(),
        adj.residual
    );

    let gamma = ScalarField::from_fn(grid, |p| (2.0 * std::f64::consts::PI * p[0]).cos());
    let psi = lin.sensitivity(&u, &gamma, params.lambda)?;
    let (lhs, rhs) = duality_sides(&psi, &h, &gamma, &u, &adj.p, params.lambda)?;
    println!("duality: {lhs:.15e} vs {rhs:.15e}");

    println!("{:>8} {:>14}", "eps", "L2 error");
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let h_eps = ControlField::new(
            h.field().zip_map(&gamma, |a, b| a + eps * b)?,
            params.effort_cap,
        )?;
        let u_eps = solve_state(&h_eps, &params, true)?.u;
        let quotient = u_eps.zip_map(&u, |a, b| (a - b) / eps)?;
        println!(
            "{eps:>8.0e} {:>14.6e}",
            quotient.zip_map(&psi, |a, b| a - b)?.l2_norm()
        );
    }
    Ok(())
}
