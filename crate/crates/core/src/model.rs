//! Model constants, the grazing reaction term and parameter-regime diagnostics.
//!
//! The reaction is `f_h(s) = s - s²/K - c s²/(1+s²) - h s`; the state equation
//! multiplies it by `λ`, which is kept out of [`reaction`] so that operators
//! can scale `f` and `f'` uniformly.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Inverse diffusion coefficient `λ`.
    pub lambda: f64,
    /// Carrying capacity `K`.
    pub capacity: f64,
    /// Grazing rate `c`.
    pub grazing: f64,
    /// Robin coefficient `q` in `∂u/∂η + q u = 0`.
    pub robin: f64,
    /// Upper bound `H` on the harvesting effort.
    pub effort_cap: f64,
    /// Cost per unit effort at low effort, `B₁`.
    pub linear_cost: f64,
    /// Rate at which effort cost rises, `B₂`.
    pub quadratic_cost: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            lambda: 500.0,
            capacity: 20.0,
            grazing: 0.5,
            robin: 1.0,
            effort_cap: 0.3,
            linear_cost: 1.0,
            quadratic_cost: 2.0,
        }
    }
}

impl ModelParams {
    /// Validates the parameter box.
    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 7] = [
            ("lambda", self.lambda, self.lambda > 0.0, "must be positive"),
            ("K", self.capacity, self.capacity > 0.0, "must be positive"),
            (
                "c",
                self.grazing,
                self.grazing >= 0.0,
                "must be nonnegative",
            ),
            ("q", self.robin, self.robin > 0.0, "must be positive"),
            (
                "H",
                self.effort_cap,
                self.effort_cap > 0.0 && self.effort_cap < 1.0,
                "must lie in (0, 1)",
            ),
            (
                "B1",
                self.linear_cost,
                self.linear_cost >= 0.0,
                "must be nonnegative",
            ),
            (
                "B2",
                self.quadratic_cost,
                self.quadratic_cost >= 0.0,
                "must be nonnegative",
            ),
        ];
        for (name, value, ok, reason) in checks {
            if !value.is_finite() || !ok {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason,
                });
            }
        }
        Ok(())
    }

    /// `c < 2(1-H)`: the grazing rate admits a unique positive root of `f_H`.
    pub fn grazing_bound_ok(&self) -> bool {
        self.grazing < 2.0 * (1.0 - self.effort_cap)
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_quadratic_cost(mut self, b2: f64) -> Self {
        self.quadratic_cost = b2;
        self
    }

    pub fn with_linear_cost(mut self, b1: f64) -> Self {
        self.linear_cost = b1;
        self
    }
}

/// `f_h(s) = s - s²/K - c s²/(1+s²) - h s`.
pub fn reaction(s: f64, h: f64, params: &ModelParams) -> f64 {
    let s2 = s * s;
    s - s2 / params.capacity - params.grazing * s2 / (1.0 + s2) - h * s
}

/// `f_h'(s) = 1 - 2s/K - 2cs/(1+s²)² - h`.
pub fn reaction_derivative(s: f64, h: f64, params: &ModelParams) -> f64 {
    let d = 1.0 + s * s;
    1.0 - 2.0 * s / params.capacity - 2.0 * params.grazing * s / (d * d) - h
}

/// `g(x) = 1/x + c(1-x²)/(1+x²)²`, whose sign controls the gap between the
/// potentials of the two-state linearization.
pub fn grazing_balance(x: f64, grazing: f64) -> f64 {
    let d = 1.0 + x * x;
    1.0 / x + grazing * (1.0 - x * x) / (d * d)
}

/// `α₀ = K(1-H)/2 · g(K)`: lower bound, per unit `λ`, on the gap between the
/// two comparison potentials when both states sit above `K(1-H)/2`.
pub fn comparison_gap(params: &ModelParams) -> f64 {
    params.capacity * (1.0 - params.effort_cap) / 2.0
        * grazing_balance(params.capacity, params.grazing)
}

const BISECTION_TOL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;

/// Bisection for a sign change of `f` on `[lo, hi]`, with `f(lo) > 0 > f(hi)`
/// or the reverse. Stops once `|f(mid)| <= tol` or the bracket is exhausted.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut f_lo = f(lo);
    let mut best = (lo, f_lo.abs());
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.abs() < best.1 {
            best = (mid, f_mid.abs());
        }
        if f_mid.abs() <= tol || mid <= lo || mid >= hi {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    best.0
}

/// The positive root `r₀` of `f_α`, located on `(K(1-α)/2, K]`.
///
/// The right endpoint is admitted because `f_0(K) = 0` when `c = 0`.
pub fn compute_r0(alpha: f64, params: &ModelParams) -> Result<f64> {
    let lo = params.capacity * (1.0 - alpha) / 2.0;
    let hi = params.capacity;
    let f = |s: f64| reaction(s, alpha, params);
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_hi.abs() <= BISECTION_TOL && f_lo > 0.0 {
        return Ok(hi);
    }
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let r0 = bisect(f, lo, hi, BISECTION_TOL);
    assert!(lo < r0 && r0 <= hi, "r0 = {r0} escaped ({lo}, {hi}]");
    Ok(r0)
}

/// Regime diagnostics for a parameter set, given the principal Robin
/// eigenvalue `λ₁(Ω)` of the negative Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct WellposednessReport {
    pub c_bound_ok: bool,
    /// Smallest positive number beyond which `g > 0`; zero when `g > 0` on the whole scan.
    pub x0: f64,
    pub k_bar: f64,
    pub k_ok: bool,
    pub lambda1: f64,
    pub lambda_threshold: f64,
    pub lambda_ok: bool,
    /// `(α, r₀(α))` for `α ∈ {0, H/2, H}`; `None` where the root is not bracketed.
    pub r0_values: Vec<(f64, Option<f64>)>,
}

impl WellposednessReport {
    pub fn all_ok(&self) -> bool {
        self.c_bound_ok
            && self.k_ok
            && self.lambda_ok
            && self.r0_values.iter().all(|(_, r)| r.is_some())
    }
}

const X0_SCAN_POINTS: usize = 20_000;

/// Locates `x₀` by a logarithmic scan of `g` over `(1e-6, 10K]` followed by
/// bisection at the last sign change.
pub fn find_x0(grazing: f64, capacity: f64) -> f64 {
    let g = |x: f64| grazing_balance(x, grazing);
    let (a, b) = (1e-6_f64.ln(), (10.0 * capacity).ln());
    let xs: Vec<f64> = (0..X0_SCAN_POINTS)
        .map(|k| (a + (b - a) * k as f64 / (X0_SCAN_POINTS - 1) as f64).exp())
        .collect();
    let last_nonpositive = xs.iter().rposition(|&x| g(x) <= 0.0);
    match last_nonpositive {
        None => 0.0,
        Some(k) if k + 1 == xs.len() => xs[k],
        Some(k) => bisect(g, xs[k], xs[k + 1], 0.0),
    }
}

pub fn wellposedness(params: &ModelParams, lambda1: f64) -> WellposednessReport {
    let h = params.effort_cap;
    let x0 = find_x0(params.grazing, params.capacity);
    let k_bar = x0.max(8.0 / (1.0 - h));
    let lambda_threshold = lambda1 / (1.0 - h);
    let r0_values = [0.0, 0.5 * h, h]
        .iter()
        .map(|&alpha| (alpha, compute_r0(alpha, params).ok()))
        .collect();
    WellposednessReport {
        c_bound_ok: params.grazing_bound_ok(),
        x0,
        k_bar,
        k_ok: params.capacity > k_bar,
        lambda1,
        lambda_threshold,
        lambda_ok: params.lambda > lambda_threshold,
        r0_values,
    }
}
