//! Observed order of accuracy of the Robin discretization in one and two
//! dimensions.

use robin_harvest::grid::GridSpec;
use robin_harvest::mms::{convergence_table, Manufactured};

fn main() -> robin_harvest::Result<()> {
    for (dim, nodes) in [
        (1, vec![17, 33, 65, 129, 257, 513]),
        (2, vec![9, 17, 33, 65]),
    ] {
        println!("{dim}D, u = sin(2x)cos(y) + 2");
        for row in convergence_table(&Manufactured::smooth(), &nodes, dim)? {
            let order = row.order.map(|o| format!("{o:.3}")).unwrap_or_default();
            println!("  n = {:>4}  error {:.4e}  {order}", row.nodes, row.error);
        }
    }
    let err =
        Manufactured::quadratic().error(&GridSpec::rectangle((0.0, 2.0), (0.0, 1.0), 7, 5)?)?;
    println!("quadratic solution on a 7x5 grid: max error {err:.1e}");
    Ok(())
}
