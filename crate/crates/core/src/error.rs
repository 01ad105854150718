use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants are grouped by the layer that raises them; [`Error::classification`]
/// collapses them into the coarse categories used for process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("grid axis {axis} has {nodes} nodes, at least 3 are required")]
    GridTooCoarse { axis: usize, nodes: usize },
    #[error("invalid grid extent on axis {axis}: [{lo}, {hi}]")]
    InvalidExtent { axis: usize, lo: f64, hi: f64 },
    #[error("fields are defined on different grids")]
    GridMismatch,
    #[error("field has {len} values but the grid has {expected} nodes")]
    LengthMismatch { len: usize, expected: usize },
    #[error("non-finite value {value} at node {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("control value {value} at node {index} lies outside [0, {cap}]")]
    InadmissibleControl { index: usize, value: f64, cap: f64 },

    #[error("f_alpha does not change sign on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("banded factorization hit a zero pivot in column {column}")]
    SingularMatrix { column: usize },
    #[error(
        "operator is not positive definite: curvature {curvature:e} at CG iteration {iteration}"
    )]
    NotPositiveDefinite { iteration: usize, curvature: f64 },
    #[error("{solver} did not converge in {iterations} iterations (last residual {residual:e})")]
    MaxIterations {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("principal eigenfunction has a non-positive entry {value:e} at node {index}")]
    NonPositiveEigenfunction { index: usize, value: f64 },

    #[error("monotone iteration lost monotonicity at step {iteration} (violation {violation:e})")]
    NotMonotone { iteration: usize, violation: f64 },
    #[error("state collapsed to the trivial solution (sup norm {sup_norm:e} after {iterations} iterations)")]
    Extinct { sup_norm: f64, iterations: usize },
    #[error("Newton Jacobian is singular")]
    JacobianSingular,
    #[error("Newton iteration diverged after {steps} steps (residual {residual:e})")]
    Diverged { steps: usize, residual: f64 },
    #[error("linearized operator is not coercive: sigma1 = {sigma1:e}")]
    NotCoercive { sigma1: f64 },

    #[error("the projection formula needs B2 > 0; use the bang-bang control for B2 = 0")]
    DivisionByZero,
    #[error("{count} candidate controls exceed the enumeration limit of {limit}")]
    TooManyCombinations { count: f64, limit: usize },
    #[error("forward-backward sweep stopped after {iterations} iterations with fixed-point residual {fixed_point_residual:e}")]
    NotConverged {
        iterations: usize,
        fixed_point_residual: f64,
        payoff_trace: Vec<f64>,
    },

    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { key: String, line: usize },
    #[error("line {line}: `{key}` expects {expected}, got `{value}`")]
    TypeMismatch {
        key: String,
        value: String,
        expected: &'static str,
        line: usize,
    },
    #[error("line {line}: malformed entry `{text}` (expected `key = value`)")]
    Malformed { text: String, line: usize },
    #[error("constraint violated for `{key}`: {reason}")]
    ConstraintViolation { key: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse failure category, used for reporting and exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    NotConverged,
    Regime,
    Numerical,
}

impl ErrorClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::Config => "config_error",
            ErrorClass::NotConverged => "not_converged",
            ErrorClass::Regime => "regime_error",
            ErrorClass::Numerical => "numerical_error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 1,
            ErrorClass::NotConverged => 2,
            ErrorClass::Regime => 3,
            ErrorClass::Numerical => 4,
        }
    }
}

impl Error {
    pub fn classification(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidParameter { .. }
            | GridTooCoarse { .. }
            | InvalidExtent { .. }
            | UnknownKey { .. }
            | TypeMismatch { .. }
            | Malformed { .. }
            | ConstraintViolation { .. }
            | Io(_) => ErrorClass::Config,
            NotConverged { .. } | MaxIterations { .. } | Diverged { .. } => {
                ErrorClass::NotConverged
            }
            NotCoercive { .. }
            | Extinct { .. }
            | NoSignChange { .. }
            | NotPositiveDefinite { .. } => ErrorClass::Regime,
            _ => ErrorClass::Numerical,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.classification().exit_code()
    }
}
