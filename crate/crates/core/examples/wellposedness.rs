//! Parameter-regime diagnostics: grazing bound, capacity threshold, the
//! existence threshold on λ, and the positive roots of the reaction.

use robin_harvest::eigen::robin_laplacian_eigenvalue;
use robin_harvest::grid::GridSpec;
use robin_harvest::model::{comparison_gap, find_x0, wellposedness, ModelParams};

fn main() -> robin_harvest::Result<()> {
    let lambda1 = robin_laplacian_eigenvalue(&GridSpec::unit_interval(257)?, 1.0)?;
    for (c, lambda) in [(0.5, 500.0), (1.2, 500.0), (1.5, 500.0), (0.5, 2.0)] {
        let params = ModelParams {
            grazing: c,
            lambda,
            ..ModelParams::default()
        };
        let w = wellposedness(&params, lambda1);
        println!(
            "c = {c}, lambda = {lambda}: c bound {}, K_bar = {:.4} ({}), lambda > {:.4} ({}), alpha0 = {:.5}",
            w.c_bound_ok,
            w.k_bar,
            w.k_ok,
            w.lambda_threshold,
            w.lambda_ok,
            comparison_gap(&params)
        );
        for (alpha, r0) in &w.r0_values {
            match r0 {
                Some(r) => println!("    r0({alpha:.2}) = {r:.12}"),
                None => println!("    r0({alpha:.2}) not found"),
            }
        }
    }
    println!(
        "strong grazing c = 8, K = 20: x0 = {:.6}",
        find_x0(8.0, 20.0)
    );
    Ok(())
}
