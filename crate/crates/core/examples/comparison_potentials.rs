//! Principal eigenvalues of the two potentials that compare the states of two
//! controls: the first vanishes, the second stays well above λα₀.

use robin_harvest::eigen::{comparison_potentials, principal_eigenvalue};
use robin_harvest::grid::{ControlField, GridSpec, ScalarField};
use robin_harvest::model::{comparison_gap, ModelParams};
use robin_harvest::state::solve_state;

fn main() -> robin_harvest::Result<()> {
    let grid = GridSpec::unit_interval(257)?;
    for lambda in [50.0, 500.0, 5000.0] {
        let params = ModelParams::default().with_lambda(lambda);
        let h = ControlField::new(
            ScalarField::from_fn(grid, |p| 0.3 * p[0]),
            params.effort_cap,
        )?;
        let g = ControlField::new(
            ScalarField::from_fn(grid, |p| 0.3 * (1.0 - p[0])),
            params.effort_cap,
        )?;
        let u_h = solve_state(&h, &params, true)?.u;
        let u_g = solve_state(&g, &params, true)?.u;
        let (v1, v2) = comparison_potentials(&u_h, &u_g, &h, &params)?;
        let s1 = principal_eigenvalue(&grid, params.robin, &v1)?.sigma1;
        let s2 = principal_eigenvalue(&grid, params.robin, &v2)?.sigma1;
        println!(
            "lambda = {lambda:>6}: sigma1(V1) = {s1:>10.3e}, sigma1(V2) = {s2:>12.4}, lambda*alpha0 = {:>10.4}",
            lambda * comparison_gap(&params)
        );
    }
    Ok(())
}
