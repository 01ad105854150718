//! Manufactured-solution studies for the linear Robin operator.
//!
//! A known field `u` fixes the source `-Δu + Vu` and the boundary data
//! `∂u/∂η + qu`; the discrete solution is compared with `u` at the nodes.
//! On a 1D grid every formula is evaluated at `y = 0` and only `u_xx` enters.

use crate::error::Result;
use crate::grid::{GridSpec, ScalarField};
use crate::operator::{solve_linear, DiscreteOperator, RobinData};

#[derive(Debug, Clone, Copy)]
pub struct Manufactured {
    pub u: fn([f64; 2]) -> f64,
    pub grad: fn([f64; 2]) -> [f64; 2],
    pub uxx: fn([f64; 2]) -> f64,
    pub uyy: fn([f64; 2]) -> f64,
    pub potential: fn([f64; 2]) -> f64,
    pub q: f64,
}

impl Manufactured {
    /// `u = sin(2x)cos(y) + 2`, `V = 1 + x`, `q = 1`.
    pub fn smooth() -> Self {
        Self {
            u: |p| (2.0 * p[0]).sin() * p[1].cos() + 2.0,
            grad: |p| {
                [
                    2.0 * (2.0 * p[0]).cos() * p[1].cos(),
                    -(2.0 * p[0]).sin() * p[1].sin(),
                ]
            },
            uxx: |p| -4.0 * (2.0 * p[0]).sin() * p[1].cos(),
            uyy: |p| -(2.0 * p[0]).sin() * p[1].cos(),
            potential: |p| 1.0 + p[0],
            q: 1.0,
        }
    }

    /// `u = 1 + x² + xy + y²/2`, reproduced exactly by the scheme.
    pub fn quadratic() -> Self {
        Self {
            u: |p| 1.0 + p[0] * p[0] + p[0] * p[1] + 0.5 * p[1] * p[1],
            grad: |p| [2.0 * p[0] + p[1], p[0] + p[1]],
            uxx: |_| 2.0,
            uyy: |_| 1.0,
            potential: |p| 2.0 + p[0] - p[1],
            q: 2.0,
        }
    }

    /// Max-norm error of the discrete solution on `grid`.
    pub fn error(&self, grid: &GridSpec) -> Result<f64> {
        let m = *self;
        let two_d = grid.dim() == 2;
        let op = DiscreteOperator::assemble(grid, m.q, &ScalarField::from_fn(*grid, m.potential))?;
        let rhs = ScalarField::from_fn(*grid, |p| {
            let lap = (m.uxx)(p) + if two_d { (m.uyy)(p) } else { 0.0 };
            -lap + (m.potential)(p) * (m.u)(p)
        });
        let data = RobinData::from_fn(grid, |p, side| {
            let n = side.normal();
            let d = (m.grad)(p);
            n[0] * d[0] + n[1] * d[1] + m.q * (m.u)(p)
        });
        let x = solve_linear(&op, &rhs, Some(&data))?;
        x.max_abs_diff(&ScalarField::from_fn(*grid, m.u))
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub spacing: f64,
    pub error: f64,
    /// `log₂(e_coarse / e_fine)` against the previous row.
    pub order: Option<f64>,
}

/// Errors on the unit interval (or unit square) for each node count.
pub fn convergence_table(
    problem: &Manufactured,
    nodes: &[usize],
    dim: usize,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(nodes.len());
    for &n in nodes {
        let grid = if dim == 1 {
            GridSpec::unit_interval(n)?
        } else {
            GridSpec::rectangle((0.0, 1.0), (0.0, 1.0), n, n)?
        };
        let error = problem.error(&grid)?;
        let order = rows
            .last()
            .map(|prev| (prev.error / error).ln() / (prev.spacing / grid.spacing(0)).ln());
        rows.push(ConvergenceRow {
            nodes: n,
            spacing: grid.spacing(0),
            error,
            order,
        });
    }
    Ok(rows)
}
