//! Run configuration, mode dispatch and output files.
//!
//! A configuration is a flat `key = value` document with `#` comments. Every
//! key has a default and the empty document is the canonical setup. A run
//! writes into the output directory:
//!
//! - `report.txt`: `key = value` summary, always written, failures included
//! - `fields.csv`: nodal fields of the mode (`x[,y]` then `u`, `p`, `h`, ...)
//! - `trace.csv`: per-iteration history where the mode has one
//!
//! Numbers are written with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::adjoint::{duality_sides, Linearization};
use crate::eigen::{comparison_potentials, principal_eigenvalue};
use crate::error::{Error, Result};
use crate::grid::{ControlField, GridSpec, ScalarField};
use crate::mms::{convergence_table, Manufactured};
use crate::model::{comparison_gap, wellposedness, ModelParams};
use crate::optimize::{
    brute_force_oracle, cost_sweep, forward_backward_sweep, interior_stationarity, payoff, Start,
    SweepOptions, SweepResult,
};
use crate::state::{solve_state_with, StateOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Eigen,
    State,
    Adjoint,
    Optimize,
    Oracle,
    Verify,
    Wellposed,
}

impl Mode {
    pub const ALL: [Mode; 7] = [
        Mode::Eigen,
        Mode::State,
        Mode::Adjoint,
        Mode::Optimize,
        Mode::Oracle,
        Mode::Verify,
        Mode::Wellposed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Eigen => "eigen",
            Mode::State => "state",
            Mode::Adjoint => "adjoint",
            Mode::Optimize => "optimize",
            Mode::Oracle => "oracle",
            Mode::Verify => "verify",
            Mode::Wellposed => "wellposed",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartKind {
    Zero,
    Cap,
    Random,
}

impl FromStr for StartKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "zero" => Ok(StartKind::Zero),
            "cap" => Ok(StartKind::Cap),
            "random" => Ok(StartKind::Random),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: ModelParams,
    pub dim: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Constant effort for the eigen, state and adjoint modes; `H/2` if unset.
    pub control: Option<f64>,
    pub omega: f64,
    pub sweep_tol: f64,
    pub max_iterations: usize,
    pub newton: bool,
    pub start: StartKind,
    pub partitions: usize,
    /// Oracle levels; `{0, H/2, H}` if unset.
    pub levels: Option<Vec<f64>>,
    /// `B₂` values for the cost sweep in optimize mode; empty skips it.
    pub b2_sweep: Vec<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Optimize,
            params: ModelParams::default(),
            dim: 1,
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            nx: 257,
            ny: 257,
            control: None,
            omega: 0.5,
            sweep_tol: 1e-9,
            max_iterations: 500,
            newton: true,
            start: StartKind::Zero,
            partitions: 3,
            levels: None,
            b2_sweep: Vec::new(),
            seed: 0,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn mismatch(key: &str, value: &str, expected: &'static str, line: usize) -> Error {
    Error::TypeMismatch {
        key: key.to_string(),
        value: value.to_string(),
        expected,
        line,
    }
}

fn real(key: &str, value: &str, line: usize) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| mismatch(key, value, "a finite real number", line))
}

fn count(key: &str, value: &str, line: usize) -> Result<usize> {
    value
        .parse()
        .map_err(|_| mismatch(key, value, "a nonnegative integer", line))
}

fn list(key: &str, value: &str, line: usize) -> Result<Vec<f64>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|v| real(key, v.trim(), line))
        .collect()
}

fn violation(key: &str, reason: impl Into<String>) -> Error {
    Error::ConstraintViolation {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Malformed {
            text: content.to_string(),
            line,
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(Error::Malformed {
                text: content.to_string(),
                line,
            });
        }
        let p = &mut cfg.params;
        match key {
            "lambda" => p.lambda = real(key, value, line)?,
            "K" => p.capacity = real(key, value, line)?,
            "c" => p.grazing = real(key, value, line)?,
            "q" => p.robin = real(key, value, line)?,
            "H" => p.effort_cap = real(key, value, line)?,
            "B1" => p.linear_cost = real(key, value, line)?,
            "B2" => p.quadratic_cost = real(key, value, line)?,
            "dim" => cfg.dim = count(key, value, line)?,
            "x_min" => cfg.x_min = real(key, value, line)?,
            "x_max" => cfg.x_max = real(key, value, line)?,
            "y_min" => cfg.y_min = real(key, value, line)?,
            "y_max" => cfg.y_max = real(key, value, line)?,
            "nx" => cfg.nx = count(key, value, line)?,
            "ny" => cfg.ny = count(key, value, line)?,
            "control" => cfg.control = Some(real(key, value, line)?),
            "omega" => cfg.omega = real(key, value, line)?,
            "sweep_tol" => cfg.sweep_tol = real(key, value, line)?,
            "max_iterations" => cfg.max_iterations = count(key, value, line)?,
            "newton" => {
                cfg.newton = value
                    .parse()
                    .map_err(|_| mismatch(key, value, "`true` or `false`", line))?
            }
            "start" => {
                cfg.start = value
                    .parse()
                    .map_err(|_| mismatch(key, value, "one of zero, cap, random", line))?
            }
            "partitions" => cfg.partitions = count(key, value, line)?,
            "levels" => cfg.levels = Some(list(key, value, line)?),
            "b2_sweep" => cfg.b2_sweep = list(key, value, line)?,
            "seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| mismatch(key, value, "a nonnegative integer", line))?
            }
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            "mode" => {
                cfg.mode = value
                    .parse()
                    .map_err(|_| mismatch(key, value, "a mode name", line))?
            }
            _ => {
                return Err(Error::UnknownKey {
                    key: key.to_string(),
                    line,
                })
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Range checks; errors name the offending key.
    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| match e {
            Error::InvalidParameter { name, reason, .. } => violation(name, reason),
            other => other,
        })?;
        if self.mode == Mode::Wellposed && !self.params.grazing_bound_ok() {
            return Err(violation("c", "must satisfy c < 2(1 - H)"));
        }
        if self.dim != 1 && self.dim != 2 {
            return Err(violation("dim", "must be 1 or 2"));
        }
        if self.nx < 3 {
            return Err(violation("nx", "at least 3 nodes are required"));
        }
        if self.dim == 2 && self.ny < 3 {
            return Err(violation("ny", "at least 3 nodes are required"));
        }
        if self.x_min >= self.x_max {
            return Err(violation("x_max", "must exceed x_min"));
        }
        if self.dim == 2 && self.y_min >= self.y_max {
            return Err(violation("y_max", "must exceed y_min"));
        }
        let cap = self.params.effort_cap;
        if let Some(h) = self.control {
            if !(0.0..=cap).contains(&h) {
                return Err(violation("control", "must lie in [0, H]"));
            }
        }
        if !(self.omega > 0.0 && self.omega <= 1.0) {
            return Err(violation("omega", "must lie in (0, 1]"));
        }
        if self.sweep_tol <= 0.0 {
            return Err(violation("sweep_tol", "must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(violation("max_iterations", "must be positive"));
        }
        if self.partitions == 0 {
            return Err(violation("partitions", "must be positive"));
        }
        if let Some(levels) = &self.levels {
            if levels.is_empty() || levels.iter().any(|l| !(0.0..=cap).contains(l)) {
                return Err(violation("levels", "must be a nonempty list within [0, H]"));
            }
        }
        if self.b2_sweep.iter().any(|&b| b <= 0.0) {
            return Err(violation("b2_sweep", "values must be positive"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        if self.dim == 1 {
            GridSpec::line(self.x_min, self.x_max, self.nx)
        } else {
            GridSpec::rectangle(
                (self.x_min, self.x_max),
                (self.y_min, self.y_max),
                self.nx,
                self.ny,
            )
        }
    }

    fn control_value(&self) -> f64 {
        self.control.unwrap_or(self.params.effort_cap / 2.0)
    }

    fn state_options(&self) -> StateOptions {
        StateOptions {
            newton: self.newton,
            ..StateOptions::default()
        }
    }

    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            omega: self.omega,
            tol: self.sweep_tol,
            max_iterations: self.max_iterations,
            bang_bang: self.params.quadratic_cost == 0.0,
            state: self.state_options(),
        }
    }

    pub fn start_control(&self, grid: GridSpec) -> ControlField {
        let start = match self.start {
            StartKind::Zero => Start::Zero,
            StartKind::Cap => Start::Cap,
            StartKind::Random => Start::Random(self.seed),
        };
        start.control(grid, self.params.effort_cap)
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// What a mode produced; kept when the mode fails part-way.
#[derive(Debug, Default)]
struct Outcome {
    report: Vec<(String, String)>,
    fields: Option<(Vec<String>, Vec<Vec<f64>>)>,
    trace: Option<(Vec<String>, Vec<Vec<f64>>)>,
}

impl Outcome {
    fn put(&mut self, key: &str, value: impl ToString) {
        self.report.push((key.to_string(), value.to_string()));
    }

    fn put_num(&mut self, key: &str, value: f64) {
        self.put(key, num(value));
    }

    /// Nodal table: coordinates followed by the given columns.
    fn set_fields(&mut self, grid: &GridSpec, columns: &[(&str, &ScalarField)]) {
        let mut header = vec!["x".to_string()];
        if grid.dim() == 2 {
            header.push("y".to_string());
        }
        header.extend(columns.iter().map(|(name, _)| name.to_string()));
        let rows = (0..grid.len())
            .map(|m| {
                let p = grid.point(m);
                let mut row = vec![p[0]];
                if grid.dim() == 2 {
                    row.push(p[1]);
                }
                row.extend(columns.iter().map(|(_, f)| f[m]));
                row
            })
            .collect();
        self.fields = Some((header, rows));
    }
}

fn csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn write_outputs(dir: &Path, outcome: &Outcome, failure: Option<&Error>) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut report = String::new();
    for (k, v) in &outcome.report {
        let _ = writeln!(report, "{k} = {v}");
    }
    match failure {
        None => report.push_str("status = ok\n"),
        Some(e) => {
            let _ = writeln!(report, "status = error");
            let _ = writeln!(report, "classification = {}", e.classification().as_str());
            let _ = writeln!(report, "error = {e}");
        }
    }
    fs::write(dir.join("report.txt"), report)?;
    if let Some((header, rows)) = &outcome.fields {
        fs::write(dir.join("fields.csv"), csv(header, rows))?;
    }
    if let Some((header, rows)) = &outcome.trace {
        fs::write(dir.join("trace.csv"), csv(header, rows))?;
    }
    Ok(())
}

fn run_eigen(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let grid = cfg.grid()?;
    let p = &cfg.params;
    let lap = principal_eigenvalue(&grid, p.robin, &ScalarField::zeros(grid))?;
    out.put_num("lambda1", lap.sigma1);
    out.put_num("lambda1_residual", lap.residual);
    out.put("lambda1_iterations", lap.iterations);
    let h = ControlField::constant(grid, cfg.control_value(), p.effort_cap)?;
    out.put_num("control", cfg.control_value());
    let u_h = solve_state_with(&h, p, true, &cfg.state_options())?.u;
    let zero = ControlField::zeros(grid, p.effort_cap);
    let u_g = solve_state_with(&zero, p, true, &cfg.state_options())?.u;
    let (v1, v2) = comparison_potentials(&u_h, &u_g, &h, p)?;
    let s1 = principal_eigenvalue(&grid, p.robin, &v1)?;
    let s2 = principal_eigenvalue(&grid, p.robin, &v2)?;
    let adj = Linearization::new(&u_h, &h, p)?;
    out.put_num("sigma1_v1", s1.sigma1);
    out.put_num("sigma1_v2", s2.sigma1);
    out.put_num("sigma1_adjoint", adj.sigma1());
    out.put_num("gap_bound", p.lambda * comparison_gap(p));
    out.set_fields(
        &grid,
        &[
            ("u", &u_h),
            ("h", h.field()),
            ("phi", &lap.phi),
            ("phi_v2", &s2.phi),
        ],
    );
    Ok(())
}

fn run_state(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let grid = cfg.grid()?;
    let p = &cfg.params;
    let h = ControlField::constant(grid, cfg.control_value(), p.effort_cap)?;
    out.put_num("control", cfg.control_value());
    let sol = solve_state_with(&h, p, true, &cfg.state_options())?;
    out.put("iterations", sol.iterations);
    out.put("newton_steps", sol.newton_steps);
    out.put_num("residual", sol.residual);
    out.put_num("u_min", sol.u.min());
    out.put_num("u_max", sol.u.max());
    out.put_num("bracket_lo", sol.bracket_lo);
    out.put_num("bracket_hi", sol.bracket_hi);
    out.put("within_bracket", sol.within_bracket(1e-8 * p.capacity));
    out.put_num("J", payoff(&h, &sol.u, p)?);
    out.set_fields(&grid, &[("u", &sol.u), ("h", h.field())]);
    Ok(())
}

fn run_adjoint(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let grid = cfg.grid()?;
    let p = &cfg.params;
    let h = ControlField::constant(grid, cfg.control_value(), p.effort_cap)?;
    out.put_num("control", cfg.control_value());
    let u = solve_state_with(&h, p, true, &cfg.state_options())?.u;
    let lin = Linearization::new(&u, &h, p)?;
    let adj = lin.adjoint(&h)?;
    // sensitivity to a uniform increase of effort
    let gamma = ScalarField::constant(grid, 1.0);
    let psi = lin.sensitivity(&u, &gamma, p.lambda)?;
    let (lhs, rhs) = duality_sides(&psi, &h, &gamma, &u, &adj.p, p.lambda)?;
    out.put_num("sigma1_check", adj.sigma1_check);
    out.put_num("residual", adj.residual);
    out.put_num("p_sup", adj.p.sup_norm());
    out.put_num("p_min", adj.p.min());
    out.put_num("duality_lhs", lhs);
    out.put_num("duality_rhs", rhs);
    out.set_fields(
        &grid,
        &[("u", &u), ("p", &adj.p), ("h", h.field()), ("psi", &psi)],
    );
    Ok(())
}

fn report_sweep(out: &mut Outcome, res: &SweepResult, p: &ModelParams) -> Result<()> {
    out.put_num("J", res.payoff);
    out.put_num("J_start", res.payoff_trace[0]);
    out.put("iterations", res.iterations);
    out.put("converged", res.converged);
    out.put_num("fixed_point_residual", res.fixed_point_residual);
    out.put_num("omega_final", res.omega);
    out.put_num("sigma1_adjoint", res.sigma1);
    out.put_num("p_sup", res.p_opt.sup_norm());
    if p.quadratic_cost > 0.0 {
        let st = interior_stationarity(&res.h_opt, &res.u_opt, &res.p_opt, p)?;
        out.put_num("stationarity_residual", st.residual);
        out.put("stationarity_nodes", st.nodes);
    }
    Ok(())
}

fn sweep_trace(res: &SweepResult) -> (Vec<String>, Vec<Vec<f64>>) {
    let header = ["iteration", "J", "step"].map(String::from).to_vec();
    let rows = res
        .payoff_trace
        .iter()
        .enumerate()
        .map(|(k, &j)| vec![k as f64, j, res.step_trace.get(k).copied().unwrap_or(0.0)])
        .collect();
    (header, rows)
}

fn run_optimize(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let grid = cfg.grid()?;
    let p = &cfg.params;
    let res = forward_backward_sweep(&cfg.start_control(grid), p, &cfg.sweep_options())?;
    report_sweep(out, &res, p)?;
    out.set_fields(
        &grid,
        &[
            ("u", &res.u_opt),
            ("p", &res.p_opt),
            ("h", res.h_opt.field()),
        ],
    );
    out.trace = Some(sweep_trace(&res));
    if !cfg.b2_sweep.is_empty() {
        let points = cost_sweep(&cfg.b2_sweep, Start::Zero, &grid, p, &cfg.sweep_options())?;
        for pt in &points {
            let tag = num(pt.quadratic_cost);
            out.put(&format!("b2_sweep[{tag}].J"), num(pt.payoff));
            out.put(
                &format!("b2_sweep[{tag}].p_sup_times_B2"),
                num(pt.scaled_adjoint_sup),
            );
            out.put(&format!("b2_sweep[{tag}].converged"), pt.converged);
        }
        let scaled: Vec<f64> = points.iter().map(|pt| pt.scaled_adjoint_sup).collect();
        let hi = scaled.iter().copied().fold(f64::MIN, f64::max);
        let lo = scaled.iter().copied().fold(f64::MAX, f64::min);
        out.put_num("b2_sweep.ratio", hi / lo);
    }
    res.into_converged().map(|_| ())
}

fn run_oracle(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let grid = cfg.grid()?;
    let p = &cfg.params;
    let cap = p.effort_cap;
    let levels = cfg
        .levels
        .clone()
        .unwrap_or_else(|| vec![0.0, cap / 2.0, cap]);
    let oracle = brute_force_oracle(cfg.partitions, &levels, &grid, p)?;
    out.put("candidates", oracle.payoffs.len());
    out.put_num("J_oracle", oracle.payoff);
    let res = forward_backward_sweep(&cfg.start_control(grid), p, &cfg.sweep_options())?;
    report_sweep(out, &res, p)?;
    let margin = 1e-6 * (1.0 + res.payoff.abs());
    out.put("sweep_dominates", res.payoff >= oracle.payoff - margin);
    out.set_fields(
        &grid,
        &[
            ("u", &res.u_opt),
            ("p", &res.p_opt),
            ("h", res.h_opt.field()),
            ("h_oracle", oracle.control.field()),
        ],
    );
    let header = ["candidate", "J"].map(String::from).to_vec();
    let rows = oracle
        .payoffs
        .iter()
        .enumerate()
        .map(|(i, &j)| vec![i as f64, j])
        .collect();
    out.trace = Some((header, rows));
    res.into_converged().map(|_| ())
}

fn run_verify(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let (nodes, dim): (&[usize], usize) = if cfg.dim == 1 {
        (&[33, 65, 129, 257], 1)
    } else {
        (&[9, 17, 33, 65], 2)
    };
    let rows = convergence_table(&Manufactured::smooth(), nodes, dim)?;
    println!("{:>6} {:>12} {:>12} {:>7}", "n", "h", "max error", "order");
    for r in &rows {
        let order = r
            .order
            .map(|o| format!("{o:.3}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>7}",
            r.nodes, r.spacing, r.error, order
        );
        out.put(&format!("error[{}]", r.nodes), num(r.error));
        if let Some(o) = r.order {
            out.put(&format!("order[{}]", r.nodes), num(o));
        }
    }
    let exact_grid = if dim == 1 {
        GridSpec::unit_interval(9)?
    } else {
        GridSpec::rectangle((0.0, 1.0), (0.0, 1.0), 9, 9)?
    };
    out.put_num(
        "quadratic_error",
        Manufactured::quadratic().error(&exact_grid)?,
    );
    let header = ["nodes", "spacing", "error", "order"]
        .map(String::from)
        .to_vec();
    let table = rows
        .iter()
        .map(|r| {
            vec![
                r.nodes as f64,
                r.spacing,
                r.error,
                r.order.unwrap_or(f64::NAN),
            ]
        })
        .collect();
    out.trace = Some((header, table));
    Ok(())
}

fn run_wellposed(cfg: &RunConfig, out: &mut Outcome) -> Result<()> {
    let grid = cfg.grid()?;
    let p = &cfg.params;
    let lambda1 = principal_eigenvalue(&grid, p.robin, &ScalarField::zeros(grid))?.sigma1;
    let w = wellposedness(p, lambda1);
    out.put("c_bound_ok", w.c_bound_ok);
    out.put_num("x0", w.x0);
    out.put_num("K_bar", w.k_bar);
    out.put("K_ok", w.k_ok);
    out.put_num("lambda1", w.lambda1);
    out.put_num("lambda_threshold", w.lambda_threshold);
    out.put("lambda_ok", w.lambda_ok);
    for (alpha, r0) in &w.r0_values {
        let value = r0.map(num).unwrap_or_else(|| "none".into());
        out.put(&format!("r0[{}]", num(*alpha)), value);
    }
    out.put_num("alpha0", comparison_gap(p));
    out.put("all_ok", w.all_ok());
    Ok(())
}

/// Executes the configured mode, writes the output files and returns the
/// process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let mut out = Outcome::default();
    out.put("mode", config.mode.as_str());
    out.put("seed", config.seed);
    let result = config.validate().and_then(|_| match config.mode {
        Mode::Eigen => run_eigen(config, &mut out),
        Mode::State => run_state(config, &mut out),
        Mode::Adjoint => run_adjoint(config, &mut out),
        Mode::Optimize => run_optimize(config, &mut out),
        Mode::Oracle => run_oracle(config, &mut out),
        Mode::Verify => run_verify(config, &mut out),
        Mode::Wellposed => run_wellposed(config, &mut out),
    });
    let failure = result.err();
    if let Err(e) = write_outputs(&config.out_dir, &out, failure.as_ref()) {
        eprintln!("cannot write to {}: {e}", config.out_dir.display());
        return 1;
    }
    match failure {
        None => 0,
        Some(e) => {
            eprintln!("{}: {e}", e.classification().as_str());
            e.exit_code()
        }
    }
}

/// Entry point shared by the binary: loads the config file (if any), applies
/// the command-line overrides and runs. Config errors still produce a report
/// in the output directory.
pub fn run_from_args(
    mode: Mode,
    config: Option<&Path>,
    out_dir: Option<&Path>,
    seed: Option<u64>,
) -> i32 {
    let loaded = match config {
        Some(path) => fs::read_to_string(path)
            .map_err(Error::from)
            .and_then(|text| parse_config(&text)),
        None => Ok(RunConfig::default()),
    };
    match loaded {
        Ok(mut cfg) => {
            cfg.mode = mode;
            if let Some(dir) = out_dir {
                cfg.out_dir = dir.to_path_buf();
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            run(&cfg)
        }
        Err(e) => {
            let dir = out_dir
                .map(Path::to_path_buf)
                .unwrap_or_else(|| RunConfig::default().out_dir);
            let mut out = Outcome::default();
            out.put("mode", mode.as_str());
            if let Err(io) = write_outputs(&dir, &out, Some(&e)) {
                eprintln!("cannot write to {}: {io}", dir.display());
            }
            eprintln!("{}: {e}", e.classification().as_str());
            e.exit_code()
        }
    }
}
