//! Principal eigenvalue of the Robin Laplacian and of a Schrödinger-type
//! operator, with grid convergence towards the transcendental root.

use robin_harvest::eigen::{principal_eigenvalue, robin_laplacian_eigenvalue};
use robin_harvest::grid::{GridSpec, ScalarField};

fn main() -> robin_harvest::Result<()> {
    // ω tan(ω/2) = q has its first root at ω = 1.3065423741888062 for q = 1
    let exact = 1.306_542_374_188_806_2f64.powi(2);
    println!("{:>6} {:>20} {:>12}", "n", "lambda1", "error");
    let mut prev: Option<f64> = None;
    for n in [17, 33, 65, 129, 257] {
        let l1 = robin_laplacian_eigenvalue(&GridSpec::unit_interval(n)?, 1.0)?;
        println!("{n:>6} {l1:>20.14} {:>12.3e}", (l1 - exact).abs());
        if let Some(coarse) = prev {
            let richardson = (4.0 * l1 - coarse) / 3.0;
            println!(
                "{:>6} {richardson:>20.14} {:>12.3e}",
                "extr",
                (richardson - exact).abs()
            );
        }
        prev = Some(l1);
    }

    let grid = GridSpec::unit_interval(129)?;
    let well = ScalarField::from_fn(grid, |p| -40.0 * (-50.0 * (p[0] - 0.3).powi(2)).exp());
    let pair = principal_eigenvalue(&grid, 1.0, &well)?;
    let peak = (0..grid.len())
        .max_by(|&a, &b| pair.phi[a].total_cmp(&pair.phi[b]))
        .unwrap();
    println!(
        "\npotential well at x = 0.3: sigma1 = {:.10}, residual {:.2e}, {} iterations, eigenfunction peak at x = {:.3}",
        pair.sigma1,
        pair.residual,
        pair.iterations,
        grid.point(peak)[0]
    );
    Ok(())
}
