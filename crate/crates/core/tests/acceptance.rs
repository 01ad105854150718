//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Canonical setup: (0, 1), n = 257, λ = 500, K = 20, c = 0.5, q = 1, H = 0.3,
//! B₁ = 1, B₂ = 2.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use robin_harvest::adjoint::{duality_sides, Linearization};
use robin_harvest::cli::parse_config;
use robin_harvest::eigen::{
    comparison_potentials, principal_eigenvalue, robin_laplacian_eigenvalue,
};
use robin_harvest::grid::{ControlField, GridSpec, ScalarField};
use robin_harvest::mms::{convergence_table, Manufactured};
use robin_harvest::model::{comparison_gap, ModelParams};
use robin_harvest::optimize::{
    brute_force_oracle, cost_sweep, forward_backward_sweep, gradient_check, interior_stationarity,
    log_log_slope, max_disagreement, multi_start, Start, SweepOptions,
};
use robin_harvest::state::{newton_refine, solve_autonomous, solve_state};
use robin_harvest::Error;

/// `ω tan(ω/2) = 1` on (0, 1), `λ₁ = ω²`.
const LAMBDA1_Q1: f64 = 1.707_052_975_550_922_5;
const SEED: u64 = 20_240_601;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn canonical() -> (ModelParams, GridSpec) {
    (
        ModelParams::default(),
        GridSpec::unit_interval(257).unwrap(),
    )
}

fn rough_control(grid: GridSpec, lo: f64, hi: f64, cap: f64, rng: &mut ChaCha8Rng) -> ControlField {
    let values = (0..grid.len()).map(|_| rng.gen_range(lo..=hi)).collect();
    ControlField::new(ScalarField::new(grid, values).unwrap(), cap).unwrap()
}

fn smooth_field(grid: GridSpec, rng: &mut ChaCha8Rng) -> ScalarField {
    let (a, b, k): (f64, f64, f64) = (
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(1.0..8.0),
    );
    ScalarField::from_fn(grid, |p| {
        0.5 * (a * (k * p[0]).sin() + b * (k * p[0]).cos())
    })
}

fn operator_verification() -> Check {
    let rows = convergence_table(&Manufactured::smooth(), &[33, 65, 129, 257], 1)
        .map_err(|e| e.to_string())?;
    let orders: Vec<f64> = rows.iter().filter_map(|r| r.order).collect();
    ensure(
        orders.iter().all(|o| (o - 2.0).abs() <= 0.2),
        format!("orders {orders:?} outside 2.0 ± 0.2"),
    )?;
    let q = Manufactured::quadratic();
    let e1 = q
        .error(&GridSpec::unit_interval(17).unwrap())
        .map_err(|e| e.to_string())?;
    let e2 = q
        .error(&GridSpec::rectangle((0.0, 1.0), (0.0, 1.0), 17, 17).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(
        e1 <= 1e-10 && e2 <= 1e-10,
        format!("quadratic errors {e1:e} (1D), {e2:e} (2D)"),
    )?;
    Ok(format!(
        "orders {:.3}/{:.3}/{:.3}; quadratic error {:.1e} (1D), {:.1e} (2D)",
        orders[0], orders[1], orders[2], e1, e2
    ))
}

fn eigen_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let g = GridSpec::unit_interval(65).unwrap();
    let random_v = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        ScalarField::new(g, (0..g.len()).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
    };
    let mut worst_shift = 0.0f64;
    for _ in 0..10 {
        let v = random_v(&mut rng, -20.0, 20.0);
        let c0 = rng.gen_range(-100.0..100.0);
        let s0 = principal_eigenvalue(&g, 1.0, &v)
            .map_err(|e| e.to_string())?
            .sigma1;
        let s1 = principal_eigenvalue(&g, 1.0, &v.map(|x| x + c0))
            .map_err(|e| e.to_string())?
            .sigma1;
        worst_shift = worst_shift.max((s1 - s0 - c0).abs());
    }
    ensure(
        worst_shift <= 1e-9,
        format!("shift identity off by {worst_shift:e}"),
    )?;
    let mut monotone = 0;
    for _ in 0..50 {
        let v1 = random_v(&mut rng, 0.0, 50.0);
        let bump = random_v(&mut rng, 0.0, 10.0);
        let v2 = v1.zip_map(&bump, |a, b| a + b).unwrap();
        let s1 = principal_eigenvalue(&g, 1.0, &v1)
            .map_err(|e| e.to_string())?
            .sigma1;
        let s2 = principal_eigenvalue(&g, 1.0, &v2)
            .map_err(|e| e.to_string())?
            .sigma1;
        if s1 <= s2 {
            monotone += 1;
        }
    }
    ensure(
        monotone == 50,
        format!("monotonicity held on {monotone}/50 pairs"),
    )?;
    let fine = robin_laplacian_eigenvalue(&GridSpec::unit_interval(257).unwrap(), 1.0)
        .map_err(|e| e.to_string())?;
    let coarse = robin_laplacian_eigenvalue(&GridSpec::unit_interval(129).unwrap(), 1.0)
        .map_err(|e| e.to_string())?;
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let err = (extrapolated - LAMBDA1_Q1).abs();
    ensure(
        err <= 1e-4,
        format!("extrapolated λ₁ {extrapolated} off by {err:e}"),
    )?;
    Ok(format!(
        "shift err {worst_shift:.1e}; monotone 50/50; λ₁(257) = {fine:.10}, extrapolated err {err:.1e}"
    ))
}

fn bracket_invariant() -> Check {
    let (p, g) = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..20 {
        let h = rough_control(g, 0.0, p.effort_cap, p.effort_cap, &mut rng);
        let u = solve_state(&h, &p, true).map_err(|e| e.to_string())?.u;
        lo = lo.min(u.min());
        hi = hi.max(u.max());
    }
    ensure(
        lo >= 7.0 - 1e-6 && hi <= 20.0,
        format!("u range [{lo}, {hi}] leaves [7, 20]"),
    )?;
    Ok(format!("20 controls, u in [{lo:.6}, {hi:.6}]"))
}

fn uniqueness_large_lambda() -> Check {
    let (p, g) = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut controls = vec![ControlField::constant(g, p.effort_cap / 2.0, p.effort_cap).unwrap()];
    controls.push(rough_control(g, 0.0, p.effort_cap, p.effort_cap, &mut rng));
    let mut worst_pair = 0.0f64;
    let mut worst_newton = 0.0f64;
    for h in &controls {
        let above = solve_state(h, &p, true).map_err(|e| e.to_string())?;
        let below = solve_state(h, &p, false).map_err(|e| e.to_string())?;
        worst_pair = worst_pair.max(above.u.max_abs_diff(&below.u).unwrap());
        let lo = p.capacity * (1.0 - p.effort_cap) / 2.0;
        for _ in 0..5 {
            let start = ScalarField::new(
                g,
                (0..g.len())
                    .map(|_| rng.gen_range(lo..=p.capacity))
                    .collect(),
            )
            .unwrap();
            let newton = newton_refine(&start, h, &p).map_err(|e| e.to_string())?;
            worst_newton = worst_newton.max(newton.u.max_abs_diff(&above.u).unwrap());
        }
    }
    ensure(
        worst_pair <= 1e-8 && worst_newton <= 1e-8,
        format!("max/min gap {worst_pair:e}, Newton gap {worst_newton:e}"),
    )?;
    Ok(format!(
        "max/min gap {worst_pair:.1e}; Newton from 5 random starts gap {worst_newton:.1e}"
    ))
}

fn comparison_positivity() -> Check {
    let (p, g) = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    let bound = p.lambda * comparison_gap(&p) / 2.0;
    let (mut worst_v1, mut min_v2) = (0.0f64, f64::INFINITY);
    for _ in 0..3 {
        let h = rough_control(g, 0.0, p.effort_cap, p.effort_cap, &mut rng);
        let k = rough_control(g, 0.0, p.effort_cap, p.effort_cap, &mut rng);
        let u_h = solve_state(&h, &p, true).map_err(|e| e.to_string())?.u;
        let u_g = solve_state(&k, &p, true).map_err(|e| e.to_string())?.u;
        let (v1, v2) = comparison_potentials(&u_h, &u_g, &h, &p).map_err(|e| e.to_string())?;
        let s1 = principal_eigenvalue(&g, p.robin, &v1)
            .map_err(|e| e.to_string())?
            .sigma1;
        let s2 = principal_eigenvalue(&g, p.robin, &v2)
            .map_err(|e| e.to_string())?
            .sigma1;
        worst_v1 = worst_v1.max(s1.abs());
        min_v2 = min_v2.min(s2);
    }
    ensure(
        worst_v1 <= 1e-4 * p.lambda,
        format!("|σ₁(V₁)| = {worst_v1:e}"),
    )?;
    ensure(
        min_v2 >= bound && bound > 0.0,
        format!("σ₁(V₂) = {min_v2} below λα₀/2 = {bound}"),
    )?;
    Ok(format!(
        "|σ₁(V₁)| <= {worst_v1:.1e}; min σ₁(V₂) = {min_v2:.3} >= λα₀/2 = {bound:.3}"
    ))
}

fn sensitivity_duality() -> Check {
    let (p, g) = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let h = rough_control(g, 0.05, 0.25, p.effort_cap, &mut rng);
    let u = solve_state(&h, &p, true).map_err(|e| e.to_string())?.u;
    let lin = Linearization::new(&u, &h, &p).map_err(|e| e.to_string())?;
    let adj = lin.adjoint(&h).map_err(|e| e.to_string())?;

    let gamma = smooth_field(g, &mut rng);
    let psi = lin
        .sensitivity(&u, &gamma, p.lambda)
        .map_err(|e| e.to_string())?;
    let eps = [1e-2, 1e-3, 1e-4];
    let mut errors = Vec::new();
    for &e in &eps {
        let shifted = h.field().zip_map(&gamma, |a, b| a + e * b).unwrap();
        let h_e = ControlField::new(shifted, p.effort_cap).map_err(|e| e.to_string())?;
        let u_e = solve_state(&h_e, &p, true).map_err(|e| e.to_string())?.u;
        let quotient = u_e.zip_map(&u, |a, b| (a - b) / e).unwrap();
        errors.push(quotient.zip_map(&psi, |a, b| a - b).unwrap().l2_norm());
    }
    let slope = log_log_slope(&eps, &errors).ok_or("no slope")?;
    ensure(
        (slope - 1.0).abs() <= 0.3,
        format!("slope {slope} from errors {errors:?}"),
    )?;

    let mut worst = 0.0f64;
    for _ in 0..10 {
        let gamma =
            ScalarField::new(g, (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
        let psi = lin
            .sensitivity(&u, &gamma, p.lambda)
            .map_err(|e| e.to_string())?;
        let (lhs, rhs) = duality_sides(&psi, &h, &gamma, &u, &adj.p, p.lambda).unwrap();
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
    }
    ensure(worst <= 1e-8, format!("duality relative gap {worst:e}"))?;
    Ok(format!(
        "difference-quotient slope {slope:.3}; duality gap {worst:.1e} over 10 directions"
    ))
}

fn optimality() -> Check {
    let (p, g) = canonical();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let h_mid = ControlField::constant(g, p.effort_cap / 2.0, p.effort_cap).unwrap();
    let gamma = smooth_field(g, &mut rng);
    let grad = gradient_check(&h_mid, &gamma, &p).map_err(|e| e.to_string())?;
    let slope = grad.slope.ok_or("zero discrepancies")?;
    ensure(
        (slope - 1.0).abs() <= 0.3,
        format!("gradient slope {slope}: {grad:?}"),
    )?;

    let opts = SweepOptions::default();
    let res = forward_backward_sweep(&Start::Zero.control(g, p.effort_cap), &p, &opts)
        .map_err(|e| e.to_string())?;
    let res = res.into_converged().map_err(|e| e.to_string())?;
    ensure(
        res.fixed_point_residual <= 1e-8,
        format!("fixed-point residual {:e}", res.fixed_point_residual),
    )?;
    let st =
        interior_stationarity(&res.h_opt, &res.u_opt, &res.p_opt, &p).map_err(|e| e.to_string())?;
    ensure(
        st.residual <= 1e-6,
        format!("stationarity residual {:e}", st.residual),
    )?;

    // the canonical optimum saturates at H; B₂ = 50 exercises a nonempty interior set
    let p50 = p.with_quadratic_cost(50.0);
    let res50 = forward_backward_sweep(&Start::Zero.control(g, p.effort_cap), &p50, &opts)
        .and_then(|r| r.into_converged())
        .map_err(|e| e.to_string())?;
    let st50 = interior_stationarity(&res50.h_opt, &res50.u_opt, &res50.p_opt, &p50)
        .map_err(|e| e.to_string())?;
    ensure(
        st50.nodes > 0 && st50.residual <= 1e-6,
        format!(
            "B₂ = 50 interior set: {} nodes, residual {:e}",
            st50.nodes, st50.residual
        ),
    )?;

    let oracle = brute_force_oracle(3, &[0.0, p.effort_cap / 2.0, p.effort_cap], &g, &p)
        .map_err(|e| e.to_string())?;
    let margin = 1e-6 * (1.0 + res.payoff.abs());
    ensure(
        res.payoff >= oracle.payoff - margin,
        format!(
            "sweep J = {} below oracle J = {}",
            res.payoff, oracle.payoff
        ),
    )?;
    Ok(format!(
        "gradient slope {slope:.3}; fixed point {:.1e}; stationarity {:.1e} on {} nodes (B₂ = 50: {:.1e} on {} nodes); J = {:.10} vs oracle {:.10} ({} candidates)",
        res.fixed_point_residual,
        st.residual,
        st.nodes,
        st50.residual,
        st50.nodes,
        res.payoff,
        oracle.payoff,
        oracle.payoffs.len()
    ))
}

fn uniqueness_large_cost() -> Check {
    let (p, g) = canonical();
    let opts = SweepOptions::default();
    let p50 = p.with_quadratic_cost(50.0);
    let runs = multi_start(
        &[Start::Zero, Start::Cap, Start::Random(SEED)],
        &g,
        &p50,
        &opts,
    )
    .map_err(|e| e.to_string())?;
    ensure(
        runs.iter().all(|r| r.converged),
        "a B₂ = 50 start did not converge",
    )?;
    let spread = max_disagreement(&runs).unwrap();
    ensure(spread <= 1e-6, format!("starts disagree by {spread:e}"))?;

    let points = cost_sweep(&[10.0, 20.0, 40.0, 80.0], Start::Zero, &g, &p, &opts)
        .map_err(|e| e.to_string())?;
    ensure(
        points.iter().all(|pt| pt.converged),
        "a cost-sweep run did not converge",
    )?;
    let scaled: Vec<f64> = points.iter().map(|pt| pt.scaled_adjoint_sup).collect();
    let hi = scaled.iter().copied().fold(f64::MIN, f64::max);
    let lo = scaled.iter().copied().fold(f64::MAX, f64::min);
    let ratio = hi / lo;
    ensure(
        ratio < 2.0,
        format!("‖p‖∞·B₂ varies by {ratio:.3}x: {scaled:?}"),
    )?;
    Ok(format!(
        "B₂ = 50 start spread {spread:.1e}; ‖p‖∞·B₂ over B₂ = 10..80: {} (ratio {ratio:.3})",
        scaled
            .iter()
            .map(|s| format!("{s:.4e}"))
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn degenerate_regimes() -> Check {
    let (p, g) = canonical();
    let extinct = solve_autonomous(0.0, &g, &p.with_lambda(0.1));
    ensure(
        matches!(extinct, Err(Error::Extinct { .. })),
        format!("λ = 0.1 gave {:?}", extinct.map(|s| s.u.max())),
    )?;
    let bad_c = parse_config("mode = wellposed\nc = 1.4");
    ensure(
        matches!(&bad_c, Err(Error::ConstraintViolation { key, .. }) if key == "c"),
        format!("c = 1.4 in wellposed mode gave {bad_c:?}"),
    )?;
    let p_costly = p.with_linear_cost(25.0);
    let res = forward_backward_sweep(
        &Start::Cap.control(g, p.effort_cap),
        &p_costly,
        &SweepOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(
        res.converged && res.h_opt.values().iter().all(|&v| v == 0.0) && res.payoff == 0.0,
        format!(
            "B₁ = 25 gave max h {} and J {}",
            res.h_opt.field().max(),
            res.payoff
        ),
    )?;
    Ok("λ = 0.1 extinct; c = 1.4 rejected naming `c`; B₁ = 25 gives h ≡ 0, J = 0".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "operator verification",
            Duration::from_secs(5),
            operator_verification,
        ),
        (
            "eigen properties",
            Duration::from_secs(10),
            eigen_properties,
        ),
        (
            "bracket invariant",
            Duration::from_secs(30),
            bracket_invariant,
        ),
        (
            "uniqueness at large lambda",
            Duration::from_secs(30),
            uniqueness_large_lambda,
        ),
        (
            "comparison-potential positivity",
            Duration::from_secs(20),
            comparison_positivity,
        ),
        (
            "sensitivity and duality",
            Duration::from_secs(60),
            sensitivity_duality,
        ),
        ("optimality", Duration::from_secs(300), optimality),
        (
            "uniqueness at large B2",
            Duration::from_secs(180),
            uniqueness_large_cost,
        ),
        (
            "degenerate regimes",
            Duration::from_secs(10),
            degenerate_regimes,
        ),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "[{}] {}. {} ({:.2} s / {} s): {}",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
