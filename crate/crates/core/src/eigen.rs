//! Principal eigenpair of `-Δ + V` with Robin boundary conditions.
//!
//! Shifted inverse power iteration: with `s = max(0, -min V) + 1` the
//! operator `L + s` is positive definite, and its dominant inverse
//! eigenvector is the principal eigenfunction of `L`. Iterates are normalized
//! in the trapezoid `L²` norm and the eigenvalue is read off the discrete
//! Rayleigh quotient, so `σ₁` is exactly the minimum of that quotient over
//! grid functions.

use crate::error::{Error, Result};
use crate::grid::{weighted_dot, ControlField, GridSpec, ScalarField};
use crate::model::ModelParams;
use crate::operator::DiscreteOperator;

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Successive Rayleigh quotients must agree to `rayleigh_tol * max(1, |σ|)`.
    pub rayleigh_tol: f64,
    /// `‖Lφ - σφ‖_{L²} <= residual_tol * max(1, |σ|)`.
    pub residual_tol: f64,
    pub max_iterations: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            rayleigh_tol: 1e-11,
            residual_tol: 1e-9,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub sigma1: f64,
    /// Positive eigenfunction with unit `L²` norm.
    pub phi: ScalarField,
    pub residual: f64,
    pub iterations: usize,
    /// `‖φ‖_∞` of the `L²`-normalized eigenfunction.
    pub phi_sup: f64,
}

impl EigenPair {
    /// The eigenfunction rescaled to unit sup norm.
    pub fn sup_normalized(&self) -> ScalarField {
        self.phi.scale(1.0 / self.phi_sup)
    }
}

pub fn principal_eigenvalue(grid: &GridSpec, q: f64, potential: &ScalarField) -> Result<EigenPair> {
    let op = DiscreteOperator::assemble(grid, q, potential)?;
    principal_eigenpair(&op, &EigenOptions::default())
}

/// Principal eigenpair of an assembled operator.
pub fn principal_eigenpair(op: &DiscreteOperator, opts: &EigenOptions) -> Result<EigenPair> {
    let grid = *op.grid();
    let weights = op.weights();
    let shift = (-op.potential().min()).max(0.0) + 1.0;
    let shifted = op.shifted(shift);
    let solver = shifted.factorize()?;

    let l2 = |v: &[f64]| weighted_dot(&grid, v, v).sqrt();
    let mut phi = vec![1.0; op.len()];
    let norm = l2(&phi);
    phi.iter_mut().for_each(|v| *v /= norm);
    let mut sigma = op.rayleigh_quotient(&phi);
    let mut residual = f64::INFINITY;

    for iteration in 1..=opts.max_iterations {
        let b: Vec<f64> = phi.iter().zip(weights).map(|(p, w)| p * w).collect();
        let mut y = solver.solve_scaled(&b)?;
        let norm = l2(&y);
        let sign = if y.iter().sum::<f64>() < 0.0 {
            -1.0
        } else {
            1.0
        };
        y.iter_mut().for_each(|v| *v *= sign / norm);

        let next = op.rayleigh_quotient(&y);
        let ly = op.apply_symmetric(&y);
        let r: Vec<f64> = ly
            .iter()
            .zip(weights)
            .zip(&y)
            .map(|((l, w), p)| l / w - next * p)
            .collect();
        residual = l2(&r);
        let scale = next.abs().max(1.0);
        let settled = (next - sigma).abs() <= opts.rayleigh_tol * scale;
        sigma = next;
        phi = y;
        if settled && residual <= opts.residual_tol * scale {
            if let Some((index, &value)) = phi.iter().enumerate().find(|(_, v)| **v <= 0.0) {
                return Err(Error::NonPositiveEigenfunction { index, value });
            }
            let phi_sup = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            return Ok(EigenPair {
                sigma1: sigma,
                phi: ScalarField::from_vec_unchecked(grid, phi),
                residual,
                iterations: iteration,
                phi_sup,
            });
        }
    }
    Err(Error::MaxIterations {
        solver: "inverse power iteration",
        iterations: opts.max_iterations,
        residual,
    })
}

/// `λ₁(Ω)`: principal eigenvalue of the pure Robin Laplacian.
pub fn robin_laplacian_eigenvalue(grid: &GridSpec, q: f64) -> Result<f64> {
    Ok(principal_eigenvalue(grid, q, &ScalarField::zeros(*grid))?.sigma1)
}

/// The two potentials comparing the states `u_h` and `u_g`:
///
/// ```text
/// V₁ = λ(-1 + h + u_h/K + c u_h/(1+u_h²))
/// V₂ = λ(-1 + h + (u_h+u_g)/K + c (u_h+u_g)/((1+u_h²)(1+u_g²)))
/// ```
///
/// When `u_h` solves the state equation for `h`, `σ₁(V₁) = 0` with
/// eigenfunction `u_h`; in the large-`K`, large-`λ` regime `σ₁(V₂) > 0`.
pub fn comparison_potentials(
    u_h: &ScalarField,
    u_g: &ScalarField,
    h: &ControlField,
    params: &ModelParams,
) -> Result<(ScalarField, ScalarField)> {
    u_h.ensure_same_grid(u_g)?;
    u_h.ensure_same_grid(h.field())?;
    let (lambda, k, c) = (params.lambda, params.capacity, params.grazing);
    let n = u_h.len();
    let mut v1 = Vec::with_capacity(n);
    let mut v2 = Vec::with_capacity(n);
    for m in 0..n {
        let (a, b, hm) = (u_h[m], u_g[m], h.values()[m]);
        v1.push(lambda * (-1.0 + hm + a / k + c * a / (1.0 + a * a)));
        v2.push(lambda * (-1.0 + hm + (a + b) / k + c * (a + b) / ((1.0 + a * a) * (1.0 + b * b))));
    }
    Ok((
        ScalarField::from_vec_unchecked(*u_h.grid(), v1),
        ScalarField::from_vec_unchecked(*u_h.grid(), v2),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// `ω tan(ω/2) = q` on (0, 1) gives `λ₁ = ω²` for the symmetric mode.
    const LAMBDA1_Q1: f64 = 1.707_052_975_550_922_5;

    /// Dense oracle: smallest eigenvalue of `W^{-1/2} S W^{-1/2}`.
    fn dense_smallest(op: &DiscreteOperator) -> f64 {
        let n = op.len();
        let w = op.weights();
        let s = op.to_dense();
        let m = DMatrix::from_fn(n, n, |a, b| s[a][b] / (w[a] * w[b]).sqrt());
        m.symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn laplacian_eigenvalue_matches_dense_oracle_and_transcendental_root() {
        let g = GridSpec::unit_interval(101).unwrap();
        let op = DiscreteOperator::laplacian(&g, 1.0).unwrap();
        let pair = principal_eigenpair(&op, &EigenOptions::default()).unwrap();
        let dense = dense_smallest(&op);
        assert!(
            (pair.sigma1 - dense).abs() < 1e-9,
            "{} vs {dense}",
            pair.sigma1
        );
        assert!((pair.sigma1 - LAMBDA1_Q1).abs() < 1e-4);

        let coarse =
            robin_laplacian_eigenvalue(&GridSpec::unit_interval(129).unwrap(), 1.0).unwrap();
        let fine = robin_laplacian_eigenvalue(&GridSpec::unit_interval(257).unwrap(), 1.0).unwrap();
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        assert!((extrapolated - LAMBDA1_Q1).abs() < 1e-6, "{extrapolated}");
    }

    #[test]
    fn eigenpair_invariants() {
        let g = GridSpec::unit_interval(65).unwrap();
        let v = ScalarField::from_fn(g, |p| 30.0 * (7.0 * p[0]).sin());
        let pair = principal_eigenvalue(&g, 2.0, &v).unwrap();
        assert!(pair.phi.values().iter().all(|&x| x > 0.0));
        assert!((pair.phi.l2_norm() - 1.0).abs() < 1e-12);
        let op = DiscreteOperator::assemble(&g, 2.0, &v).unwrap();
        let r = op
            .apply(&pair.phi)
            .zip_map(&pair.phi, |a, b| a - pair.sigma1 * b)
            .unwrap();
        assert!(r.l2_norm() <= 1e-9 * pair.sigma1.abs().max(1.0));
        assert!((pair.sup_normalized().sup_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_potential_shifts_the_eigenvalue() {
        let g = GridSpec::unit_interval(65).unwrap();
        let base = robin_laplacian_eigenvalue(&g, 1.0).unwrap();
        let five = principal_eigenvalue(&g, 1.0, &ScalarField::constant(g, 5.0)).unwrap();
        assert!((five.sigma1 - base - 5.0).abs() < 1e-9);
    }

    #[test]
    fn two_dimensional_eigenvalue_separates() {
        // the Robin spectrum of a box is the sum of the 1D spectra
        let n = 17;
        let g2 = GridSpec::rectangle((0.0, 1.0), (0.0, 1.0), n, n).unwrap();
        let g1 = GridSpec::unit_interval(n).unwrap();
        let l2 = robin_laplacian_eigenvalue(&g2, 1.0).unwrap();
        let l1 = robin_laplacian_eigenvalue(&g1, 1.0).unwrap();
        assert!((l2 - 2.0 * l1).abs() < 1e-8, "{l2} vs {}", 2.0 * l1);
        let dense = dense_smallest(&DiscreteOperator::laplacian(&g2, 1.0).unwrap());
        assert!((l2 - dense).abs() < 1e-8);
    }

    #[test]
    fn nonnegative_potential_gives_positive_definite_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = GridSpec::unit_interval(33).unwrap();
        for _ in 0..10 {
            let v = ScalarField::new(g, (0..g.len()).map(|_| rng.gen_range(0.0..10.0)).collect())
                .unwrap();
            let q = rng.gen_range(0.01..5.0);
            assert!(principal_eigenvalue(&g, q, &v).unwrap().sigma1 > 0.0);
        }
    }

    #[test]
    fn comparison_potentials_collapse_when_second_state_vanishes() {
        let g = GridSpec::unit_interval(9).unwrap();
        let params = ModelParams::default();
        let u = ScalarField::from_fn(g, |p| 10.0 + p[0]);
        let h = ControlField::constant(g, 0.1, params.effort_cap).unwrap();
        let (v1, v2) = comparison_potentials(&u, &ScalarField::zeros(g), &h, &params).unwrap();
        assert!(v1.max_abs_diff(&v2).unwrap() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn shift_identity(c0 in -50.0f64..50.0, a in -20.0f64..20.0) {
            let g = GridSpec::unit_interval(33).unwrap();
            let v = ScalarField::from_fn(g, |p| a * (3.0 * p[0]).cos());
            let s0 = principal_eigenvalue(&g, 1.0, &v).unwrap().sigma1;
            let s1 = principal_eigenvalue(&g, 1.0, &v.map(|x| x + c0)).unwrap().sigma1;
            prop_assert!((s1 - s0 - c0).abs() <= 1e-9 * s1.abs().max(1.0));
        }

        #[test]
        fn sigma1_is_monotone_in_the_potential(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = GridSpec::unit_interval(33).unwrap();
            let v1 = ScalarField::new(g, (0..g.len()).map(|_| rng.gen_range(0.0..20.0)).collect()).unwrap();
            let bump: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(0.0..5.0)).collect();
            let v2 = ScalarField::new(g, v1.values().iter().zip(&bump).map(|(a, b)| a + b).collect()).unwrap();
            let s1 = principal_eigenvalue(&g, 1.0, &v1).unwrap().sigma1;
            let s2 = principal_eigenvalue(&g, 1.0, &v2).unwrap().sigma1;
            prop_assert!(s1 <= s2 + 1e-9);
        }

        #[test]
        fn rayleigh_quotient_bounds_sigma1(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = GridSpec::unit_interval(33).unwrap();
            let v = ScalarField::new(g, (0..g.len()).map(|_| rng.gen_range(-10.0..10.0)).collect()).unwrap();
            let op = DiscreteOperator::assemble(&g, 1.0, &v).unwrap();
            let sigma = principal_eigenpair(&op, &EigenOptions::default()).unwrap().sigma1;
            let trial: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            prop_assert!(op.rayleigh_quotient(&trial) >= sigma - 1e-9);
        }
    }
}
