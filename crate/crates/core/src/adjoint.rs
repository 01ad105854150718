//! Linearization of the state equation: the adjoint and sensitivity problems.
//!
//! Both share the operator `-Δ + V_adj` with
//! `V_adj = λ(-1 + 2u/K + 2cu/(1+u²)² + h) = -λ f_h'(u)`:
//!
//! ```text
//! adjoint:      (-Δ + V_adj) p = h
//! sensitivity:  (-Δ + V_adj) ψ = -λ γ u
//! ```
//!
//! Because the two solves use the same symmetric matrix, the identity
//! `∫ψh = -λ∫γup` holds in the trapezoid inner product up to solver tolerance.

use crate::eigen::{principal_eigenpair, EigenOptions};
use crate::error::{Error, Result};
use crate::grid::{ControlField, ScalarField};
use crate::linalg;
use crate::model::{reaction_derivative, ModelParams};
use crate::operator::DiscreteOperator;

/// `V_adj = -λ f_h'(u)`.
pub fn adjoint_potential(
    u: &ScalarField,
    h: &ControlField,
    params: &ModelParams,
) -> Result<ScalarField> {
    u.ensure_same_grid(h.field())?;
    let lambda = params.lambda;
    u.zip_map(h.field(), |um, hm| {
        -lambda * reaction_derivative(um, hm, params)
    })
}

/// The assembled adjoint operator together with its principal eigenvalue.
#[derive(Debug, Clone)]
pub struct Linearization {
    op: DiscreteOperator,
    sigma1: f64,
}

impl Linearization {
    /// Assembles `-Δ + V_adj` and checks coercivity.
    pub fn new(u: &ScalarField, h: &ControlField, params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let potential = adjoint_potential(u, h, params)?;
        let op = DiscreteOperator::assemble(u.grid(), params.robin, &potential)?;
        let sigma1 = principal_eigenpair(&op, &EigenOptions::default())?.sigma1;
        if sigma1 <= 0.0 {
            return Err(Error::NotCoercive { sigma1 });
        }
        Ok(Self { op, sigma1 })
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }

    pub fn operator(&self) -> &DiscreteOperator {
        &self.op
    }

    pub fn potential(&self) -> &ScalarField {
        self.op.potential()
    }

    /// Solves `(-Δ + V_adj) x = rhs` and returns `x` with the relative
    /// residual of the symmetric system.
    pub fn solve(&self, rhs: &ScalarField) -> Result<(ScalarField, f64)> {
        let b = self.op.scaled_rhs(rhs, None)?;
        let x = self.op.factorize()?.solve_scaled(&b)?;
        let sx = self.op.apply_symmetric(&x);
        let r: Vec<f64> = b.iter().zip(&sx).map(|(p, q)| p - q).collect();
        let b_norm = linalg::norm2(&b);
        let residual = if b_norm == 0.0 {
            0.0
        } else {
            linalg::norm2(&r) / b_norm
        };
        Ok((ScalarField::new(*self.op.grid(), x)?, residual))
    }

    pub fn adjoint(&self, h: &ControlField) -> Result<AdjointSolution> {
        let (p, residual) = self.solve(h.field())?;
        Ok(AdjointSolution {
            p,
            potential: self.op.potential().clone(),
            sigma1_check: self.sigma1,
            residual,
        })
    }

    /// `ψ` for the direction `γ` at the state `u`.
    pub fn sensitivity(
        &self,
        u: &ScalarField,
        gamma: &ScalarField,
        lambda: f64,
    ) -> Result<ScalarField> {
        let rhs = gamma.zip_map(u, |g, um| -lambda * g * um)?;
        Ok(self.solve(&rhs)?.0)
    }
}

#[derive(Debug, Clone)]
pub struct AdjointSolution {
    pub p: ScalarField,
    /// `V_adj` used in the solve.
    pub potential: ScalarField,
    /// Principal eigenvalue of `-Δ + V_adj`, checked positive before solving.
    pub sigma1_check: f64,
    /// Relative residual of the linear solve.
    pub residual: f64,
}

/// Adjoint state `p` for the state `u` under the control `h`.
pub fn solve_adjoint(
    u: &ScalarField,
    h: &ControlField,
    params: &ModelParams,
) -> Result<AdjointSolution> {
    Linearization::new(u, h, params)?.adjoint(h)
}

/// Directional derivative `ψ` of the state with respect to the control in
/// direction `gamma`.
pub fn solve_sensitivity(
    u: &ScalarField,
    h: &ControlField,
    gamma: &ScalarField,
    params: &ModelParams,
) -> Result<ScalarField> {
    gamma.ensure_same_grid(u)?;
    Linearization::new(u, h, params)?.sensitivity(u, gamma, params.lambda)
}

/// Both sides of `∫ψh = -λ∫γup`.
pub fn duality_sides(
    psi: &ScalarField,
    h: &ControlField,
    gamma: &ScalarField,
    u: &ScalarField,
    p: &ScalarField,
    lambda: f64,
) -> Result<(f64, f64)> {
    let lhs = psi.inner(h.field())?;
    let gu = gamma.zip_map(u, |g, um| g * um)?;
    let rhs = -lambda * gu.inner(p)?;
    Ok((lhs, rhs))
}
