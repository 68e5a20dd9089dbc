//! Mode dispatch: builds inputs, runs the core, writes artifacts.

use std::path::PathBuf;

use rbflow_core::ansatz::{
    catalog, default_xi_samples, flow_residual, residuals, solve_constants, static_product_scenario,
    Scenario,
};
use rbflow_core::classify::{classify, kmax_profile, ClassifyThresholds, Horizon};
use rbflow_core::estimate::{
    cutoff_property_report, evolution_identity_residual, CutoffConfig, EstimateParams,
    IdentityCoeffs, Sample, Strides, TimeMode,
};
use rbflow_core::grid::{log_spaced, Grid1D};
use rbflow_core::params::{unified_coefficients, FlowParams};
use rbflow_core::reduced_flow::{
    evolve_coupled, evolve_scalar, CoupledBoundary, CoupledState, FieldTrajectory, ScalarBoundary,
};
use rbflow_core::rng::SplitMix64;

use crate::config::{Mode, RunConfig};
use crate::error::RunError;
use crate::output::{ensure_dir, CsvWriter, ParamsOut, RunSummary};
use crate::scene::{heat_suite, hyperbolic_immortal_suite, EstimateSuite, SuiteKind};

pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed: u64,
}

/// Scenario names the classifier accepts beyond the catalog.
pub const CLASSIFY_EXTRA: [&str; 1] = ["static-product"];

fn resolve_scenario(name: &str) -> Result<Scenario, RunError> {
    if name == "static-product" {
        return Ok(static_product_scenario());
    }
    Ok(catalog(name)?)
}

/// Runs one mode to completion, writing CSV artifacts and the summary.
pub fn run(mode: Mode, cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    ensure_dir(&ctx.out_dir)?;
    let mut summary = match mode {
        Mode::Simulate => run_simulate(cfg, ctx)?,
        Mode::VerifyAnsatz => run_verify_ansatz(cfg, ctx)?,
        Mode::VerifyFlow => run_verify_flow(cfg, ctx)?,
        Mode::VerifyEstimate => run_verify_estimate(cfg, ctx)?,
        Mode::IdentityCheck => run_identity_check(cfg, ctx)?,
        Mode::Classify => run_classify(cfg, ctx)?,
        Mode::Catalog => {
            return Err(RunError::Validation(
                "catalog mode has no run artifacts; use `catalog list|show`".into(),
            ))
        }
    };
    summary.seed = ctx.seed;
    summary.write(&ctx.out_dir)?;
    if !summary.passed {
        return Err(RunError::Property(format!(
            "{} checks failed; see {}",
            summary.checks.iter().filter(|c| !c.passed).count(),
            ctx.out_dir.join("summary.toml").display()
        )));
    }
    Ok(summary)
}

fn scenario_name_or(cfg: &RunConfig, default: &str) -> String {
    cfg.scenario_name().unwrap_or(default).to_string()
}

// ---------------------------------------------------------------- simulate

fn run_simulate(cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    let name = scenario_name_or(cfg, "heat");
    let mut summary = RunSummary::new("simulate", Some(name.clone()), ctx.seed);
    let solver = cfg.solver.clone().unwrap_or_default().to_core()?;

    if name == "heat" {
        let gridc = cfg.grid.clone().unwrap_or(crate::config::GridConfig {
            x_lo: 0.0,
            x_hi: std::f64::consts::PI,
            npts: 201,
        });
        let grid = Grid1D::new(gridc.x_lo, gridc.x_hi, gridc.npts)?;
        let times = cfg
            .output
            .as_ref()
            .map(|o| o.times.clone())
            .unwrap_or_else(|| vec![0.0, 0.05, 0.1]);
        let u0: Vec<f64> = grid.nodes().map(f64::sin).collect();
        let phi = vec![0.0; grid.npts];
        let metric = vec![1.0; grid.npts];
        let params = FlowParams::new(0.0, 1, 1, 0.0).map_err(RunError::validation)?;
        summary.params = Some(ParamsOut::from_core(&params));
        let coeffs = unified_coefficients(&params, 0.0);
        let zero_bc = |_: f64, _: f64| 0.0;
        let traj = evolve_scalar(
            &grid,
            &u0,
            &coeffs,
            &phi,
            &metric,
            &solver,
            &ScalarBoundary::DirichletExact(&zero_bc),
            &times,
        )?;
        let mut csv = CsvWriter::create(
            &ctx.out_dir,
            "trajectory.csv",
            &["t", "x", "a", "f", "u", "abs_err"],
        );
        let mut linf: f64 = 0.0;
        for (k, &t) in traj.times.iter().enumerate() {
            for (i, x) in grid.nodes().enumerate() {
                let u = traj.frames[k][i];
                let err = (u - (-t).exp() * x.sin()).abs();
                linf = linf.max(err);
                csv.row(&[t, x, 1.0, u, u, err]);
            }
        }
        csv.finish()?;
        summary.measure("linf_error", linf);
        summary.check_lt("heat-oracle-linf", linf, 1e-4);
        return Ok(summary);
    }

    let sc = resolve_scenario(&name)?;
    let (_, frame) = sc.conformal().map_err(|_| {
        RunError::Validation(format!(
            "scenario {name:?} has no conformal base to simulate [cli::simulate]"
        ))
    })?;
    if frame.n != 1 {
        return Err(RunError::Validation(format!(
            "simulate integrates one-dimensional bases only; {name:?} has n = {} [cli::simulate]",
            frame.n
        )));
    }
    summary.params = Some(ParamsOut::from_core(&sc.params));
    let gridc = cfg.grid.clone().unwrap_or(crate::config::GridConfig {
        x_lo: sc.spatial_window.lo,
        x_hi: sc.spatial_window.hi,
        npts: 201,
    });
    let grid = Grid1D::new(gridc.x_lo, gridc.x_hi, gridc.npts)?;
    let times = cfg
        .output
        .as_ref()
        .map(|o| o.times.clone())
        .unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    for &t in &times {
        if !sc.in_time_domain(t) {
            return Err(RunError::Validation(format!(
                "output time {t} outside the scenario time domain [cli::simulate]"
            )));
        }
    }

    let t_start = times[0];
    let a_exact = |x: f64, t: f64| sc.horizontal_factor(x, t).unwrap_or(f64::NAN);
    let f_exact = |x: f64, t: f64| sc.warp_value(x, t).unwrap_or(f64::NAN);
    let state0 = CoupledState {
        t: t_start,
        a: grid.nodes().map(|x| a_exact(x, t_start)).collect(),
        f: grid.nodes().map(|x| f_exact(x, t_start)).collect(),
        phi: grid
            .nodes()
            .map(|x| sc.drift_value(x).unwrap_or(0.0))
            .collect(),
    };
    let traj = evolve_coupled(
        &grid,
        &state0,
        &sc.params,
        &solver,
        &CoupledBoundary::DirichletExact {
            a: &a_exact,
            f: &f_exact,
        },
        &times,
    )?;

    let mut csv = CsvWriter::create(
        &ctx.out_dir,
        "trajectory.csv",
        &["t", "x", "a", "f", "u", "rel_err"],
    );
    let inv_sigma = 1.0 / sc.params.sigma;
    let mut rel: f64 = 0.0;
    for state in &traj.states {
        for (i, x) in grid.nodes().enumerate() {
            let (av, fv) = (state.a[i], state.f[i]);
            let ea = a_exact(x, state.t);
            let ef = f_exact(x, state.t);
            let e = ((av - ea) / ea).abs().max(((fv - ef) / ef).abs());
            rel = rel.max(e);
            csv.row(&[state.t, x, av, fv, fv.powf(inv_sigma), e]);
        }
    }
    csv.finish()?;
    summary.measure("linf_rel_error", rel);
    summary.check_lt("closed-form-rel-error", rel, 1e-3);
    Ok(summary)
}

// ----------------------------------------------------------- verify-ansatz

fn run_verify_ansatz(cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    let name = scenario_name_or(cfg, "hyperbolic-immortal");
    let mut summary = RunSummary::new("verify-ansatz", Some(name.clone()), ctx.seed);
    let check = cfg.ansatz_check.clone().unwrap_or_default();

    let sc = resolve_scenario(&name)?;
    if sc.fiber.s_fiber != 0.0 {
        return Err(RunError::Validation(format!(
            "the ansatz system assumes a Ricci-flat fiber; {name:?} has S_F = {} \
             [cli::verify-ansatz]",
            sc.fiber.s_fiber
        )));
    }
    let (profiles, frame) = sc.conformal()?;
    summary.params = Some(ParamsOut::from_core(&sc.params));

    let mut xis = default_xi_samples(&sc);
    xis.truncate(check.points);
    let mut csv = CsvWriter::create(&ctx.out_dir, "residuals.csv", &["xi", "r1", "r2", "r3"]);
    let mut max_res: f64 = 0.0;
    for &xi in &xis {
        let (r1, r2, r3) = residuals(
            profiles,
            sc.params.n,
            sc.params.m,
            sc.params.rho,
            &sc.constants,
            xi,
        )?;
        max_res = max_res.max(r1.abs()).max(r2.abs()).max(r3.abs());
        csv.row(&[xi, r1, r2, r3]);
    }
    csv.finish()?;
    summary.measure("max_residual", max_res);
    summary.check_lt("ansatz-residual-max", max_res, check.tolerance);

    let (c0_fit, c0c1c2_fit) =
        solve_constants(profiles, sc.params.n, sc.params.m, sc.params.rho, &xis)?;
    let _ = frame;
    summary.measure("c0_fit", c0_fit);
    summary.measure("c0_c1_over_c2_fit", c0c1c2_fit);
    summary.check_lt(
        "c0-fit-error",
        (c0_fit - sc.constants.c0).abs(),
        check.tolerance,
    );
    summary.check_lt(
        "c0c1c2-fit-error",
        (c0c1c2_fit - sc.constants.c0_c1_over_c2()).abs(),
        check.tolerance,
    );
    Ok(summary)
}

// ------------------------------------------------------------- verify-flow

fn run_verify_flow(cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    let name = scenario_name_or(cfg, "cosh-einstein");
    let mut summary = RunSummary::new("verify-flow", Some(name.clone()), ctx.seed);
    let check = cfg.flow_check.clone().unwrap_or_default();

    let mut sc = resolve_scenario(&name)?;
    if let Some(factor) = check.perturb {
        sc = sc.perturbed(factor);
    }
    if let Some(delta) = check.perturb_exponent {
        sc = sc.perturbed_exponent(delta);
    }
    let (_, frame) = sc.conformal()?;
    summary.params = Some(ParamsOut::from_core(&sc.params));

    let tolerance = check.tolerance.unwrap_or(if name == "cosh-einstein" {
        1e-6
    } else {
        1e-5
    });
    let detection = check.perturb.is_some() || check.perturb_exponent.is_some();

    let mut rng = SplitMix64::new(ctx.seed);
    let n = frame.n;
    let w = sc.spatial_window;
    let t_lo = sc.time_domain.lo.max(-2.0);
    let t_hi = sc.time_domain.hi.min(2.0);
    let mut csv = CsvWriter::create(&ctx.out_dir, "residuals.csv", &["xi", "t", "residual"]);
    let mut max_res: f64 = 0.0;
    for _ in 0..check.points {
        let xi = rng.uniform(w.lo + 0.25 * (w.hi - w.lo), w.lo + 0.75 * (w.hi - w.lo));
        let t = rng.uniform(t_lo + 0.3 * (t_hi - t_lo), t_lo + 0.7 * (t_hi - t_lo));
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[i] = xi * frame.axis[i];
        }
        let r = flow_residual(&sc, &x, t, check.dt_fd)?;
        max_res = max_res.max(r);
        csv.row(&[xi, t, r]);
    }
    csv.finish()?;
    summary.measure("max_flow_residual", max_res);
    if detection {
        summary.check_ge("perturbed-residual-detected", max_res, 1e-2);
    } else {
        summary.check_lt("flow-residual-max", max_res, tolerance);
    }
    Ok(summary)
}

// --------------------------------------------------------- verify-estimate

pub fn build_suite(kind: SuiteKind, ec: &crate::config::EstimateConfig) -> Result<EstimateSuite, RunError> {
    match kind {
        SuiteKind::Heat => heat_suite(ec.npts, ec.radius, ec.t_window),
        SuiteKind::HyperbolicImmortal => {
            hyperbolic_immortal_suite(ec.npts, ec.radius, ec.t_window)
        }
    }
}

fn run_verify_estimate(cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    let name = scenario_name_or(cfg, "heat");
    let mut summary = RunSummary::new("verify-estimate", Some(name.clone()), ctx.seed);
    let ec = cfg.estimate.clone().unwrap_or_default();

    let kind = match name.as_str() {
        "heat" => SuiteKind::Heat,
        "hyperbolic-immortal" => SuiteKind::HyperbolicImmortal,
        other => {
            return Err(RunError::Validation(format!(
                "verify-estimate supports \"heat\" and \"hyperbolic-immortal\"; got {other:?} \
                 [cli::verify-estimate]"
            )))
        }
    };
    let suite = build_suite(kind, &ec)?;
    let mut ep = suite.ep.clone();
    ep.p = ec.p;
    ep.delta = ec.delta;
    if let Some(q) = ec.q {
        ep.q = q;
    }
    let samples = suite.draw_samples(ec.samples, ec.margin, ctx.seed);
    if samples.len() < ec.samples {
        return Err(RunError::Validation(format!(
            "could not place {} samples inside Q_(R/2,T) [cli::verify-estimate]",
            ec.samples
        )));
    }
    let report = suite.verify(&ep, &samples)?;

    let mut csv = CsvWriter::create(&ctx.out_dir, "samples.csv", &["x", "t", "u"]);
    for s in &samples {
        csv.row(&[
            suite.traj.grid.x(s.ix),
            suite.traj.times[s.it],
            suite.traj.frames[s.it][s.ix],
        ]);
    }
    csv.finish()?;

    summary.measure("sup_ratio", report.sup_ratio);
    summary.measure("argmax_x", report.argmax_x);
    summary.measure("argmax_t", report.argmax_t);
    summary.measure("min_delta_gap", report.min_gap);
    summary.measure("bracket_k1", report.breakdown_at_argmax.k1_term);
    summary.measure("bracket_k2", report.breakdown_at_argmax.k2_term);
    summary.measure("bracket_inv_r", report.breakdown_at_argmax.inv_r_term);
    summary.measure("bracket_time", report.breakdown_at_argmax.time_term);
    summary.measure("bracket_gamma", report.breakdown_at_argmax.gamma_term);
    summary.measure("bracket_b", report.breakdown_at_argmax.b_term);
    summary.measure("bracket_grad_b", report.breakdown_at_argmax.grad_b_term);
    summary.measure("bracket_nonlinear", report.breakdown_at_argmax.nonlinear_term);
    summary.measure("gamma", suite.gamma);

    // Cut-off property constants on the 200 x 50 grid.
    let cc = CutoffConfig {
        radius: ep.radius,
        t0: ep.t_window,
        t_window: ep.t_window,
        tau: 0.75 * ep.t_window,
    };
    let cut = cutoff_property_report(&cc, 200, 50, 0.5);
    summary.measure("cutoff_c_time", cut.c_time);
    summary.measure("cutoff_c_eps_dr", cut.c_eps_dr);
    summary.measure("cutoff_c_eps_drr", cut.c_eps_drr);
    summary.check_ge(
        "cutoff-properties-abcd",
        if cut.all_ok() { 1.0 } else { 0.0 },
        1.0,
    );
    summary.check_lt("sup-ratio-finite", report.sup_ratio, 1e6);
    Ok(summary)
}

// ----------------------------------------------------------- identity-check

fn gaussian_trajectory(grid: Grid1D, t_center: f64, dt: f64) -> FieldTrajectory {
    let times = vec![t_center - dt, t_center, t_center + dt];
    let frames = times
        .iter()
        .map(|&t| {
            grid.nodes()
                .map(|x| (-x * x / (4.0 * t)).exp() / t.sqrt())
                .collect()
        })
        .collect();
    FieldTrajectory {
        grid,
        times: times.clone(),
        frames,
        metric: times.iter().map(|_| vec![1.0; grid.npts]).collect(),
    }
}

fn identity_params() -> EstimateParams {
    EstimateParams {
        p: 1.0,
        q: 3.0,
        delta: 0.5,
        d_sup: 1.0,
        k1: 0.0,
        k2: 0.0,
        radius: 4.0,
        t_window: 1.0,
        t0: 1.5,
        tau: 1.0,
        a_coeff: 0.0,
        mode: TimeMode::Backward,
        c_report: None,
    }
}

/// Identity residuals for the synthetic exact heat kernel at three
/// resolutions; returns (npts, h, residual) rows.
pub fn identity_convergence_study() -> Result<Vec<(usize, f64, f64)>, RunError> {
    let zero = |_: f64, _: f64| 0.0;
    let ep = identity_params();
    let mut rows = Vec::new();
    for &npts in &[81usize, 161, 321] {
        let grid = Grid1D::new(-2.0, 2.0, npts)?;
        let dt = 0.2 * grid.h();
        let traj = gaussian_trajectory(grid, 1.0, dt);
        let ix = grid.nearest(0.3);
        let r = evolution_identity_residual(
            &traj,
            &vec![0.0; npts],
            &ep,
            &IdentityCoeffs {
                b: &zero,
                c: 0.0,
                alpha: 1.0,
            },
            Sample { ix, it: 1 },
            Strides { ix: 1, it: 1 },
        )?;
        rows.push((npts, grid.h(), r));
    }
    Ok(rows)
}

fn run_identity_check(_cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    let mut summary = RunSummary::new("identity-check", None, ctx.seed);

    // exact zero for constant u
    let grid = Grid1D::new(-1.0, 1.0, 41)?;
    let traj = FieldTrajectory {
        grid,
        times: vec![0.5, 0.75, 1.0],
        frames: vec![vec![0.5; 41]; 3],
        metric: vec![vec![1.0; 41]; 3],
    };
    let zero = |_: f64, _: f64| 0.0;
    let const_res = evolution_identity_residual(
        &traj,
        &vec![0.0; 41],
        &identity_params(),
        &IdentityCoeffs {
            b: &zero,
            c: 0.0,
            alpha: 1.0,
        },
        Sample { ix: 20, it: 1 },
        Strides { ix: 1, it: 1 },
    )?;
    summary.measure("constant_u_residual", const_res);
    summary.check_lt("identity-constant-u-zero", const_res, 1e-30);

    let rows = identity_convergence_study()?;
    let mut csv = CsvWriter::create(&ctx.out_dir, "residuals.csv", &["npts", "h", "residual"]);
    for &(npts, h, r) in &rows {
        csv.row(&[npts as f64, h, r]);
    }
    csv.finish()?;
    summary.measure("residual_coarse", rows[0].2);
    summary.measure("residual_fine", rows[2].2);
    let order1 = (rows[0].2 / rows[1].2).log2();
    let order2 = (rows[1].2 / rows[2].2).log2();
    summary.measure("order_coarse", order1);
    summary.measure("order_fine", order2);
    summary.check_ge("identity-order-coarse", order1, 1.8);
    summary.check_ge("identity-order-fine", order2, 1.8);
    Ok(summary)
}

// ----------------------------------------------------------------- classify

/// Sample times for a scenario: log ladder for infinite horizons, a
/// horizon-approaching ladder (within 1%) for finite ones.
pub fn classify_times(sc: &Scenario, samples: usize, decades: f64) -> Vec<f64> {
    if sc.time_domain.hi.is_finite() {
        let t_max = sc.time_domain.hi;
        let t_first = if sc.time_domain.lo.is_finite() {
            0.5 * (sc.time_domain.lo + t_max)
        } else {
            0.0
        };
        let span = t_max - t_first;
        let mut ts: Vec<f64> = log_spaced(0.004 * span, span, samples)
            .into_iter()
            .map(|gap| t_max - gap)
            .collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts
    } else {
        let lo = (sc.time_domain.lo + 0.02).max(0.01);
        log_spaced(lo, lo * 10f64.powf(decades), samples)
    }
}

fn run_classify(cfg: &RunConfig, ctx: &RunContext) -> Result<RunSummary, RunError> {
    let name = scenario_name_or(cfg, "cosh-einstein");
    let mut summary = RunSummary::new("classify", Some(name.clone()), ctx.seed);
    let cc = cfg.classify.clone().unwrap_or_default();

    let sc = resolve_scenario(&name)?;
    summary.params = Some(ParamsOut::from_core(&sc.params));
    let ts = classify_times(&sc, cc.samples, cc.decades);
    let profile = kmax_profile(&sc, &ts)?;

    let mut csv = CsvWriter::create(&ctx.out_dir, "profile.csv", &["t", "kmax"]);
    for s in &profile {
        csv.row(&[s.t, s.kmax]);
    }
    csv.finish()?;

    let horizon = if sc.time_domain.hi.is_finite() {
        Horizon::Finite(sc.time_domain.hi)
    } else {
        Horizon::Infinite
    };
    let result = classify(horizon, &profile, &ClassifyThresholds::default())?;
    summary.label = Some(result.label.to_string());
    summary.measure("exponent", result.exponent);
    summary.measure("sup_stat", result.sup_stat);

    if let Some(expected) = sc.expected_class {
        let matched = result.label == expected;
        summary.check_ge(
            "classification-matches-expected",
            if matched { 1.0 } else { 0.0 },
            1.0,
        );
    }
    Ok(summary)
}
