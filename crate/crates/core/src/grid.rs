//! Structured grids on intervals and rectangles, and nodal fields living on them.
//!
//! Nodes are vertex-centred and include both endpoints of every axis. In two
//! dimensions the node `(i, j)` is stored at the flat index `i + j * nx`.
//! Integrals use the trapezoid rule, whose weights are also the row scaling
//! that makes the discrete Robin operator symmetric (see [`crate::operator`]).

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// The four sides of a rectangle. A one-dimensional grid only has `Left` and `Right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub fn axis(self) -> usize {
        match self {
            Side::Left | Side::Right => 0,
            Side::Bottom | Side::Top => 1,
        }
    }

    /// Outward unit normal.
    pub fn normal(self) -> [f64; 2] {
        match self {
            Side::Left => [-1.0, 0.0],
            Side::Right => [1.0, 0.0],
            Side::Bottom => [0.0, -1.0],
            Side::Top => [0.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    extents: [(f64, f64); 2],
    nodes: [usize; 2],
}

impl GridSpec {
    /// Uniform grid on the interval `[a, b]` with `n` nodes.
    pub fn line(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::check_axis(0, a, b, n)?;
        Ok(Self {
            dim: 1,
            extents: [(a, b), (0.0, 0.0)],
            nodes: [n, 1],
        })
    }

    /// Uniform grid on `[x.0, x.1] x [y.0, y.1]`.
    pub fn rectangle(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        Self::check_axis(0, x.0, x.1, nx)?;
        Self::check_axis(1, y.0, y.1, ny)?;
        Ok(Self {
            dim: 2,
            extents: [x, y],
            nodes: [nx, ny],
        })
    }

    /// The unit interval with `n` nodes.
    pub fn unit_interval(n: usize) -> Result<Self> {
        Self::line(0.0, 1.0, n)
    }

    fn check_axis(axis: usize, lo: f64, hi: f64, n: usize) -> Result<()> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidExtent { axis, lo, hi });
        }
        if n < 3 {
            return Err(Error::GridTooCoarse { axis, nodes: n });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn extent(&self, axis: usize) -> (f64, f64) {
        self.extents[axis]
    }

    pub fn nodes_per_axis(&self, axis: usize) -> usize {
        self.nodes[axis]
    }

    pub fn nx(&self) -> usize {
        self.nodes[0]
    }

    pub fn ny(&self) -> usize {
        self.nodes[1]
    }

    pub fn len(&self) -> usize {
        self.nodes[0] * self.nodes[1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (a, b) = self.extents[axis];
        (b - a) / (self.nodes[axis] - 1) as f64
    }

    /// Volume of one grid cell (`dx` in 1D, `dx * dy` in 2D).
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|axis| self.spacing(axis)).product()
    }

    /// Lebesgue measure of the domain.
    pub fn measure(&self) -> f64 {
        (0..self.dim)
            .map(|axis| self.extents[axis].1 - self.extents[axis].0)
            .product()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i + j * self.nodes[0]
    }

    pub fn ij(&self, m: usize) -> (usize, usize) {
        (m % self.nodes[0], m / self.nodes[0])
    }

    pub fn axis_coord(&self, axis: usize, k: usize) -> f64 {
        let (a, b) = self.extents[axis];
        if k + 1 == self.nodes[axis] {
            b
        } else {
            a + k as f64 * self.spacing(axis)
        }
    }

    /// Coordinates of node `m`; the second entry is zero in 1D.
    pub fn point(&self, m: usize) -> [f64; 2] {
        let (i, j) = self.ij(m);
        let y = if self.dim == 2 {
            self.axis_coord(1, j)
        } else {
            0.0
        };
        [self.axis_coord(0, i), y]
    }

    /// One-dimensional trapezoid factor along `axis` (1/2 at the ends, 1 inside).
    pub fn axis_weight(&self, axis: usize, k: usize) -> f64 {
        if axis >= self.dim {
            return 1.0;
        }
        if k == 0 || k + 1 == self.nodes[axis] {
            0.5
        } else {
            1.0
        }
    }

    /// Dimensionless trapezoid weights (products of the per-axis factors).
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        (0..self.len())
            .map(|m| {
                let (i, j) = self.ij(m);
                self.axis_weight(0, i) * self.axis_weight(1, j)
            })
            .collect()
    }

    pub fn sides(&self) -> &'static [Side] {
        if self.dim == 1 {
            &[Side::Left, Side::Right]
        } else {
            &[Side::Left, Side::Right, Side::Bottom, Side::Top]
        }
    }

    /// Flat indices of the nodes on `side`, ordered along the side.
    pub fn side_nodes(&self, side: Side) -> Vec<usize> {
        let (nx, ny) = (self.nodes[0], self.nodes[1]);
        match side {
            Side::Left => (0..ny).map(|j| self.index(0, j)).collect(),
            Side::Right => (0..ny).map(|j| self.index(nx - 1, j)).collect(),
            Side::Bottom => (0..nx).map(|i| self.index(i, 0)).collect(),
            Side::Top => (0..nx).map(|i| self.index(i, ny - 1)).collect(),
        }
    }

    /// Quadrature weights for boundary integrals along `side`, aligned with
    /// [`GridSpec::side_nodes`]. In 1D each side is a single point of weight 1.
    pub fn side_weights(&self, side: Side) -> Vec<f64> {
        if self.dim == 1 {
            return vec![1.0];
        }
        let along = 1 - side.axis();
        let h = self.spacing(along);
        (0..self.nodes[along])
            .map(|k| h * self.axis_weight(along, k))
            .collect()
    }
}

/// Nodal values of a function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                len: values.len(),
                expected: grid.len(),
            });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.len()).map(|m| f(grid.point(m))).collect();
        Self { grid, values }
    }

    pub(crate) fn from_vec_unchecked(grid: GridSpec, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ensure_same_grid(&self, other: &ScalarField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        Self::from_vec_unchecked(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        self.ensure_same_grid(other)?;
        Ok(Self::from_vec_unchecked(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, factor: f64) -> ScalarField {
        self.map(|v| factor * v)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max |self - other|` over the nodes.
    pub fn max_abs_diff(&self, other: &ScalarField) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(max_abs_diff(&self.values, &other.values))
    }

    /// Trapezoid approximation of the integral over the domain.
    pub fn integral(&self) -> f64 {
        let cell = self.grid.cell_volume();
        self.grid
            .trapezoid_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            * cell
    }

    /// Trapezoid `L²` inner product.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(weighted_dot(&self.grid, &self.values, &other.values))
    }

    pub fn l2_norm(&self) -> f64 {
        weighted_dot(&self.grid, &self.values, &self.values).sqrt()
    }

    /// Boundary integral: endpoint sum in 1D, trapezoid along the edges in 2D.
    pub fn boundary_integral(&self) -> f64 {
        self.grid
            .sides()
            .iter()
            .map(|&side| {
                self.grid
                    .side_nodes(side)
                    .iter()
                    .zip(self.grid.side_weights(side))
                    .map(|(&m, w)| w * self.values[m])
                    .sum::<f64>()
            })
            .sum()
    }
}

impl Index<usize> for ScalarField {
    type Output = f64;
    fn index(&self, m: usize) -> &f64 {
        &self.values[m]
    }
}

impl IndexMut<usize> for ScalarField {
    fn index_mut(&mut self, m: usize) -> &mut f64 {
        &mut self.values[m]
    }
}

pub(crate) fn weighted_dot(grid: &GridSpec, a: &[f64], b: &[f64]) -> f64 {
    let cell = grid.cell_volume();
    grid.trapezoid_weights()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(w, (x, y))| w * x * y)
        .sum::<f64>()
        * cell
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

/// A harvesting effort: a field with every value in `[0, cap]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlField {
    field: ScalarField,
    cap: f64,
}

impl ControlField {
    pub fn new(field: ScalarField, cap: f64) -> Result<Self> {
        for (index, &value) in field.values().iter().enumerate() {
            if !(0.0..=cap).contains(&value) {
                return Err(Error::InadmissibleControl { index, value, cap });
            }
        }
        Ok(Self { field, cap })
    }

    /// Clamps every value into `[0, cap]`.
    pub fn clamped(field: &ScalarField, cap: f64) -> Self {
        Self {
            field: field.map(|v| v.clamp(0.0, cap)),
            cap,
        }
    }

    pub fn constant(grid: GridSpec, value: f64, cap: f64) -> Result<Self> {
        Self::new(ScalarField::constant(grid, value), cap)
    }

    pub fn zeros(grid: GridSpec, cap: f64) -> Self {
        Self {
            field: ScalarField::zeros(grid),
            cap,
        }
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn into_field(self) -> ScalarField {
        self.field
    }

    pub fn values(&self) -> &[f64] {
        self.field.values()
    }

    pub fn grid(&self) -> &GridSpec {
        self.field.grid()
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }
}
