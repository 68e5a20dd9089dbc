//! Explicit method-of-lines solver for the unified scalar equation and the
//! coupled base system on 1-D grids.
//!
//! One-dimensional bases carry the metric `g = a(x,t) dx²`, which is flat
//! (`Ric = 0`, `S_g = 0`); the solver relies on this. Discrete operators at
//! second order in the metric:
//!
//! ```text
//! ∇²w = w'' − (a'/2a) w'      Δw = ∇²w / a
//! ‖∇w‖² = (w')²/a             ∇w(φ) = w'φ'/a
//! ```
//!
//! The coupled system evolves the metric factor and the warping function:
//!
//! ```text
//! ∂ₜa = (2m/f)∇²f − 2∇²φ + 2ρ(S_F/f² − 2mΔf/f − m(m−1)‖∇f‖²/f²)·a
//! ∂ₜf = (1−2mρ)Δf + (1−mρ)(m−1)‖∇f‖²/f − ∇f(φ) + ((mρ−1)/m)·S_F/f
//! ```
//!
//! Time stepping is explicit (RK4 default, Euler available) under a CFL
//! policy `dt = cfl·h²/max diffusion coefficient`. Positivity of evolved
//! fields is enforced at interior nodes each step; boundary nodes carry
//! prescribed data.

use alloc::vec::Vec;
use core::fmt;

use crate::geometry::GeometryError;
use crate::grid::{d1, d2, Grid1D, GridError};
use crate::math;
use crate::params::{FlowParams, PoleError, UnifiedCoeffs};

/// Hard explicit-stability factor: `dt <= 0.5 h²/D` for 1-D diffusion.
const CFL_HARD: f64 = 0.5;

#[derive(Clone, Debug, PartialEq)]
pub enum FlowError {
    /// Step size exceeds the stability policy.
    CflViolation { dt: f64, limit: f64 },
    /// An evolved field dipped below its floor (signals blow-down).
    FloorBreach {
        what: &'static str,
        node: usize,
        value: f64,
        t: f64,
    },
    /// The combined operator `Δ_φ − aΔ` is not weakly parabolic (1−a ≤ 0).
    NonParabolic { a_coeff: f64 },
    Positivity { what: &'static str, value: f64 },
    Pole(PoleError),
    Geometry(GeometryError),
    Grid(GridError),
    Config { msg: &'static str },
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::CflViolation { dt, limit } => write!(
                f,
                "dt = {dt} exceeds the stability limit {limit} [reduced_flow::step]"
            ),
            FlowError::FloorBreach {
                what,
                node,
                value,
                t,
            } => write!(
                f,
                "{what} = {value} below floor at node {node}, t = {t} [reduced_flow::step]"
            ),
            FlowError::NonParabolic { a_coeff } => write!(
                f,
                "a = {a_coeff} >= 1: combined operator not parabolic [reduced_flow::step]"
            ),
            FlowError::Positivity { what, value } => {
                write!(f, "{what} = {value} must be positive [reduced_flow]")
            }
            FlowError::Pole(e) => write!(f, "{e} [reduced_flow]"),
            FlowError::Geometry(e) => write!(f, "{e} [reduced_flow]"),
            FlowError::Grid(e) => write!(f, "{e} [reduced_flow]"),
            FlowError::Config { msg } => write!(f, "invalid solver config: {msg} [reduced_flow]"),
        }
    }
}

impl core::error::Error for FlowError {}

impl From<PoleError> for FlowError {
    fn from(e: PoleError) -> Self {
        FlowError::Pole(e)
    }
}

impl From<GeometryError> for FlowError {
    fn from(e: GeometryError) -> Self {
        FlowError::Geometry(e)
    }
}

impl From<GridError> for FlowError {
    fn from(e: GridError) -> Self {
        FlowError::Grid(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    ExplicitRk4,
    ExplicitEuler,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtPolicy {
    Fixed(f64),
    /// `dt = cfl·h²/max diffusion coefficient`, cfl in (0, 0.5].
    Cfl(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    DirichletFromExact,
    NeumannZero,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub integrator: Integrator,
    pub dt: DtPolicy,
    pub boundary: BoundaryKind,
    pub u_floor: f64,
    /// Hold the metric factor fixed in coupled runs (code-path comparisons).
    pub freeze_metric: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            integrator: Integrator::ExplicitRk4,
            dt: DtPolicy::Cfl(0.4),
            boundary: BoundaryKind::DirichletFromExact,
            u_floor: 1e-10,
            freeze_metric: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), FlowError> {
        if let DtPolicy::Cfl(c) = self.dt {
            if !(c > 0.0 && c <= CFL_HARD) {
                return Err(FlowError::Config {
                    msg: "cfl factor must lie in (0, 0.5]",
                });
            }
        }
        if let DtPolicy::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(FlowError::Config {
                    msg: "fixed dt must be positive and finite",
                });
            }
        }
        if !(self.u_floor > 0.0) {
            return Err(FlowError::Config {
                msg: "u_floor must be positive",
            });
        }
        Ok(())
    }
}

/// Boundary data for the scalar equation.
pub enum ScalarBoundary<'a> {
    /// Values pinned to exact data `(x, t) -> u`.
    DirichletExact(&'a dyn Fn(f64, f64) -> f64),
    NeumannZero,
}

/// Boundary data for the coupled system.
pub enum CoupledBoundary<'a> {
    DirichletExact {
        a: &'a dyn Fn(f64, f64) -> f64,
        f: &'a dyn Fn(f64, f64) -> f64,
    },
    NeumannZero,
}

fn check_boundary_match(kind: BoundaryKind, is_dirichlet: bool) -> Result<(), FlowError> {
    match (kind, is_dirichlet) {
        (BoundaryKind::DirichletFromExact, true) | (BoundaryKind::NeumannZero, false) => Ok(()),
        _ => Err(FlowError::Config {
            msg: "boundary data does not match the configured boundary kind",
        }),
    }
}

/// Discretized base state: metric factor, warping, drift, at one time.
#[derive(Clone, Debug)]
pub struct CoupledState {
    pub t: f64,
    pub a: Vec<f64>,
    pub f: Vec<f64>,
    pub phi: Vec<f64>,
}

/// Scalar field frames over a (possibly evolving) 1-D metric.
#[derive(Clone, Debug)]
pub struct FieldTrajectory {
    pub grid: Grid1D,
    pub times: Vec<f64>,
    pub frames: Vec<Vec<f64>>,
    pub metric: Vec<Vec<f64>>,
}

/// Coupled-system output at requested times.
#[derive(Clone, Debug)]
pub struct CoupledTrajectory {
    pub grid: Grid1D,
    pub states: Vec<CoupledState>,
}

impl CoupledTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    /// View the warping frames as a scalar trajectory over the metric frames.
    pub fn warp_trajectory(&self) -> FieldTrajectory {
        FieldTrajectory {
            grid: self.grid,
            times: self.times(),
            frames: self.states.iter().map(|s| s.f.clone()).collect(),
            metric: self.states.iter().map(|s| s.a.clone()).collect(),
        }
    }
}

fn max_diffusion(one_minus_a: f64, metric: &[f64]) -> f64 {
    let mut d: f64 = 0.0;
    for &ai in metric {
        d = math::max(d, one_minus_a / ai);
    }
    d
}

fn dt_limit(h: f64, max_diff: f64) -> f64 {
    if max_diff <= 0.0 {
        f64::INFINITY
    } else {
        CFL_HARD * h * h / max_diff
    }
}

fn check_dt(dt: f64, limit: f64) -> Result<(), FlowError> {
    if dt > limit * (1.0 + 1e-9) {
        return Err(FlowError::CflViolation { dt, limit });
    }
    Ok(())
}

fn check_interior_floor(
    u: &[f64],
    floor: f64,
    what: &'static str,
    t: f64,
) -> Result<(), FlowError> {
    for i in 1..u.len() - 1 {
        if !(u[i] >= floor) {
            return Err(FlowError::FloorBreach {
                what,
                node: i,
                value: u[i],
                t,
            });
        }
    }
    Ok(())
}

/// Right-hand side of `∂ₜu = Δ_φu − aΔu + bu + cu^α` at interior nodes;
/// boundary entries are left at zero.
fn scalar_rhs(
    grid: &Grid1D,
    u: &[f64],
    coeffs: &UnifiedCoeffs,
    phi: &[f64],
    metric: &[f64],
    out: &mut [f64],
) {
    let h = grid.h();
    let one_minus_a = 1.0 - coeffs.a;
    for i in 1..grid.npts - 1 {
        let ai = metric[i];
        let du = (u[i + 1] - u[i - 1]) / (2.0 * h);
        let ddu = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        let da = d1(metric, i, h);
        let dphi = d1(phi, i, h);
        let lap_drift = (one_minus_a * (ddu - da / (2.0 * ai) * du) - dphi * du) / ai;
        out[i] = lap_drift + coeffs.b * u[i] + coeffs.c * math::powf(u[i], coeffs.alpha);
    }
    out[0] = 0.0;
    out[grid.npts - 1] = 0.0;
}

fn apply_scalar_bc(grid: &Grid1D, u: &mut [f64], bc: &ScalarBoundary<'_>, t: f64) {
    let n = grid.npts;
    match bc {
        ScalarBoundary::DirichletExact(exact) => {
            u[0] = exact(grid.x_lo, t);
            u[n - 1] = exact(grid.x_hi, t);
        }
        ScalarBoundary::NeumannZero => {
            u[0] = u[1];
            u[n - 1] = u[n - 2];
        }
    }
}

/// One explicit step of the unified scalar equation on a static metric.
pub fn step_scalar(
    grid: &Grid1D,
    u: &[f64],
    coeffs: &UnifiedCoeffs,
    phi: &[f64],
    metric: &[f64],
    config: &SolverConfig,
    bc: &ScalarBoundary<'_>,
    t: f64,
    dt: f64,
) -> Result<Vec<f64>, FlowError> {
    config.validate()?;
    check_boundary_match(
        config.boundary,
        matches!(bc, ScalarBoundary::DirichletExact(_)),
    )?;
    if 1.0 - coeffs.a <= 0.0 {
        return Err(FlowError::NonParabolic { a_coeff: coeffs.a });
    }
    let h = grid.h();
    let limit = dt_limit(h, max_diffusion(1.0 - coeffs.a, metric));
    check_dt(dt, limit)?;

    let n = grid.npts;
    let mut out = u.to_vec();
    match config.integrator {
        Integrator::ExplicitEuler => {
            let mut k = alloc::vec![0.0; n];
            scalar_rhs(grid, u, coeffs, phi, metric, &mut k);
            for i in 0..n {
                out[i] = u[i] + dt * k[i];
            }
        }
        Integrator::ExplicitRk4 => {
            let mut k1 = alloc::vec![0.0; n];
            let mut k2 = alloc::vec![0.0; n];
            let mut k3 = alloc::vec![0.0; n];
            let mut k4 = alloc::vec![0.0; n];
            let mut stage = alloc::vec![0.0; n];

            scalar_rhs(grid, u, coeffs, phi, metric, &mut k1);
            for i in 0..n {
                stage[i] = u[i] + 0.5 * dt * k1[i];
            }
            apply_scalar_bc(grid, &mut stage, bc, t + 0.5 * dt);
            scalar_rhs(grid, &stage, coeffs, phi, metric, &mut k2);
            for i in 0..n {
                stage[i] = u[i] + 0.5 * dt * k2[i];
            }
            apply_scalar_bc(grid, &mut stage, bc, t + 0.5 * dt);
            scalar_rhs(grid, &stage, coeffs, phi, metric, &mut k3);
            for i in 0..n {
                stage[i] = u[i] + dt * k3[i];
            }
            apply_scalar_bc(grid, &mut stage, bc, t + dt);
            scalar_rhs(grid, &stage, coeffs, phi, metric, &mut k4);
            for i in 0..n {
                out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
    }
    apply_scalar_bc(grid, &mut out, bc, t + dt);
    check_interior_floor(&out, config.u_floor, "u", t + dt)?;
    Ok(out)
}

fn policy_dt(policy: DtPolicy, limit: f64) -> Result<f64, FlowError> {
    match policy {
        DtPolicy::Fixed(dt) => {
            check_dt(dt, limit)?;
            Ok(dt)
        }
        DtPolicy::Cfl(c) => Ok(c / CFL_HARD * limit),
    }
}

/// Drives [`step_scalar`] to each requested output time (strictly
/// increasing, first entry is the initial time).
pub fn evolve_scalar(
    grid: &Grid1D,
    u0: &[f64],
    coeffs: &UnifiedCoeffs,
    phi: &[f64],
    metric: &[f64],
    config: &SolverConfig,
    bc: &ScalarBoundary<'_>,
    output_times: &[f64],
) -> Result<FieldTrajectory, FlowError> {
    if output_times.len() < 2 || output_times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FlowError::Config {
            msg: "output times must be strictly increasing with at least two entries",
        });
    }
    let mut u = u0.to_vec();
    apply_scalar_bc(grid, &mut u, bc, output_times[0]);
    let mut t = output_times[0];
    let mut frames = alloc::vec![u.clone()];
    let mut metric_frames = alloc::vec![metric.to_vec()];

    let limit = dt_limit(grid.h(), max_diffusion(1.0 - coeffs.a, metric));
    let dt_nominal = policy_dt(config.dt, limit)?;

    for &t_out in &output_times[1..] {
        while t < t_out - 1e-14 {
            let dt = math::min(dt_nominal, t_out - t);
            u = step_scalar(grid, &u, coeffs, phi, metric, config, bc, t, dt)?;
            t += dt;
        }
        t = t_out;
        frames.push(u.clone());
        metric_frames.push(metric.to_vec());
    }
    Ok(FieldTrajectory {
        grid: *grid,
        times: output_times.to_vec(),
        frames,
        metric: metric_frames,
    })
}

/// Coupled right-hand side at interior nodes. `S_g = 0` on 1-D bases.
fn coupled_rhs(
    grid: &Grid1D,
    a: &[f64],
    f: &[f64],
    phi: &[f64],
    params: &FlowParams,
    freeze_metric: bool,
    da_dt: &mut [f64],
    df_dt: &mut [f64],
) {
    let h = grid.h();
    let m = params.m as f64;
    let rho = params.rho;
    let s_f = params.s_fiber;
    let one_m2mr = 1.0 - 2.0 * m * rho;
    for i in 1..grid.npts - 1 {
        let ai = a[i];
        let fi = f[i];
        let fx = (f[i + 1] - f[i - 1]) / (2.0 * h);
        let fxx = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        let ax = d1(a, i, h);
        let phix = d1(phi, i, h);
        let phixx = d2(phi, i, h);

        let hess_f = fxx - ax / (2.0 * ai) * fx;
        let lap_f = hess_f / ai;
        let grad_f_sq = fx * fx / ai;
        let hess_phi = phixx - ax / (2.0 * ai) * phix;

        da_dt[i] = if freeze_metric {
            0.0
        } else {
            2.0 * m / fi * hess_f - 2.0 * hess_phi
                + 2.0
                    * rho
                    * (s_f / (fi * fi) - 2.0 * m * lap_f / fi
                        - m * (m - 1.0) * grad_f_sq / (fi * fi))
                    * ai
        };
        df_dt[i] = one_m2mr * lap_f + (1.0 - m * rho) * (m - 1.0) * grad_f_sq / fi
            - fx * phix / ai
            + (m * rho - 1.0) / m * s_f / fi;
    }
    da_dt[0] = 0.0;
    da_dt[grid.npts - 1] = 0.0;
    df_dt[0] = 0.0;
    df_dt[grid.npts - 1] = 0.0;
}

fn apply_coupled_bc(
    grid: &Grid1D,
    a: &mut [f64],
    f: &mut [f64],
    bc: &CoupledBoundary<'_>,
    t: f64,
) {
    let n = grid.npts;
    match bc {
        CoupledBoundary::DirichletExact { a: ea, f: ef } => {
            a[0] = ea(grid.x_lo, t);
            a[n - 1] = ea(grid.x_hi, t);
            f[0] = ef(grid.x_lo, t);
            f[n - 1] = ef(grid.x_hi, t);
        }
        CoupledBoundary::NeumannZero => {
            a[0] = a[1];
            a[n - 1] = a[n - 2];
            f[0] = f[1];
            f[n - 1] = f[n - 2];
        }
    }
}

/// Integrates the coupled base system from `state0`, returning states at
/// the requested output times (first entry = initial time of `state0`).
pub fn evolve_coupled(
    grid: &Grid1D,
    state0: &CoupledState,
    params: &FlowParams,
    config: &SolverConfig,
    bc: &CoupledBoundary<'_>,
    output_times: &[f64],
) -> Result<CoupledTrajectory, FlowError> {
    config.validate()?;
    check_boundary_match(
        config.boundary,
        matches!(bc, CoupledBoundary::DirichletExact { .. }),
    )?;
    if params.a_coeff >= 1.0 {
        return Err(FlowError::NonParabolic {
            a_coeff: params.a_coeff,
        });
    }
    if output_times.len() < 2
        || output_times.windows(2).any(|w| w[1] <= w[0])
        || (output_times[0] - state0.t).abs() > 1e-14
    {
        return Err(FlowError::Config {
            msg: "output times must start at the initial state time and increase strictly",
        });
    }
    let n = grid.npts;
    if state0.a.len() != n || state0.f.len() != n || state0.phi.len() != n {
        return Err(FlowError::Config {
            msg: "state fields must match the grid size",
        });
    }

    let mut a = state0.a.clone();
    let mut f = state0.f.clone();
    let phi = state0.phi.clone();
    let mut t = state0.t;
    apply_coupled_bc(grid, &mut a, &mut f, bc, t);

    let mut states = alloc::vec![CoupledState {
        t,
        a: a.clone(),
        f: f.clone(),
        phi: phi.clone(),
    }];

    let one_minus_a = 1.0 - params.a_coeff;
    let h = grid.h();

    let mut da1 = alloc::vec![0.0; n];
    let mut df1 = alloc::vec![0.0; n];
    let mut da2 = alloc::vec![0.0; n];
    let mut df2 = alloc::vec![0.0; n];
    let mut da3 = alloc::vec![0.0; n];
    let mut df3 = alloc::vec![0.0; n];
    let mut da4 = alloc::vec![0.0; n];
    let mut df4 = alloc::vec![0.0; n];
    let mut sa = alloc::vec![0.0; n];
    let mut sf = alloc::vec![0.0; n];

    for &t_out in &output_times[1..] {
        while t < t_out - 1e-14 {
            let limit = dt_limit(h, max_diffusion(one_minus_a, &a));
            let dt = math::min(policy_dt(config.dt, limit)?, t_out - t);

            match config.integrator {
                Integrator::ExplicitEuler => {
                    coupled_rhs(grid, &a, &f, &phi, params, config.freeze_metric, &mut da1, &mut df1);
                    for i in 0..n {
                        a[i] += dt * da1[i];
                        f[i] += dt * df1[i];
                    }
                }
                Integrator::ExplicitRk4 => {
                    coupled_rhs(grid, &a, &f, &phi, params, config.freeze_metric, &mut da1, &mut df1);
                    for i in 0..n {
                        sa[i] = a[i] + 0.5 * dt * da1[i];
                        sf[i] = f[i] + 0.5 * dt * df1[i];
                    }
                    apply_coupled_bc(grid, &mut sa, &mut sf, bc, t + 0.5 * dt);
                    coupled_rhs(grid, &sa, &sf, &phi, params, config.freeze_metric, &mut da2, &mut df2);
                    for i in 0..n {
                        sa[i] = a[i] + 0.5 * dt * da2[i];
                        sf[i] = f[i] + 0.5 * dt * df2[i];
                    }
                    apply_coupled_bc(grid, &mut sa, &mut sf, bc, t + 0.5 * dt);
                    coupled_rhs(grid, &sa, &sf, &phi, params, config.freeze_metric, &mut da3, &mut df3);
                    for i in 0..n {
                        sa[i] = a[i] + dt * da3[i];
                        sf[i] = f[i] + dt * df3[i];
                    }
                    apply_coupled_bc(grid, &mut sa, &mut sf, bc, t + dt);
                    coupled_rhs(grid, &sa, &sf, &phi, params, config.freeze_metric, &mut da4, &mut df4);
                    for i in 0..n {
                        a[i] += dt / 6.0 * (da1[i] + 2.0 * da2[i] + 2.0 * da3[i] + da4[i]);
                        f[i] += dt / 6.0 * (df1[i] + 2.0 * df2[i] + 2.0 * df3[i] + df4[i]);
                    }
                }
            }
            t += dt;
            apply_coupled_bc(grid, &mut a, &mut f, bc, t);
            check_interior_floor(&a, config.u_floor, "a", t)?;
            check_interior_floor(&f, config.u_floor, "f", t)?;
        }
        t = t_out;
        states.push(CoupledState {
            t,
            a: a.clone(),
            f: f.clone(),
            phi: phi.clone(),
        });
    }
    Ok(CoupledTrajectory { grid: *grid, states })
}

/// Max residual of the scalar equation for `u = f^{1/σ}` over sample points
/// `(frame index, node index)`, with `∂ₜu` by centered differences across
/// neighboring frames and spatial operators in the frame's own metric.
pub fn change_of_variables_residual(
    traj: &CoupledTrajectory,
    params: &FlowParams,
    samples: &[(usize, usize)],
) -> Result<f64, FlowError> {
    let grid = &traj.grid;
    let h = grid.h();
    let m = params.m as f64;
    let rho = params.rho;
    let sigma = params.sigma;
    let inv_sigma = 1.0 / sigma;
    let nt = traj.states.len();

    let u_frame = |k: usize| -> Vec<f64> {
        traj.states[k]
            .f
            .iter()
            .map(|&v| math::powf(v, inv_sigma))
            .collect()
    };

    let mut worst: f64 = 0.0;
    for &(it, ix) in samples {
        if it == 0 || it + 1 >= nt || ix == 0 || ix + 1 >= grid.npts {
            return Err(FlowError::Config {
                msg: "residual samples must be interior in both time and space",
            });
        }
        let um = u_frame(it - 1);
        let u0 = u_frame(it);
        let up = u_frame(it + 1);
        let st = &traj.states[it];
        let dt2 = traj.states[it + 1].t - traj.states[it - 1].t;
        let du_dt = (up[ix] - um[ix]) / dt2;

        let ai = st.a[ix];
        let du = (u0[ix + 1] - u0[ix - 1]) / (2.0 * h);
        let ddu = (u0[ix + 1] - 2.0 * u0[ix] + u0[ix - 1]) / (h * h);
        let da = d1(&st.a, ix, h);
        let dphi = d1(&st.phi, ix, h);
        let lap = (ddu - da / (2.0 * ai) * du) / ai;
        let drift = dphi * du / ai;
        // S_g = 0 in one base dimension.
        let rhs = (lap - drift) - 2.0 * m * rho * lap
            + (m * rho - 1.0) / (m * sigma)
                * params.s_fiber
                * math::powf(u0[ix], 1.0 - 2.0 * sigma);
        worst = math::max(worst, math::abs(du_dt - rhs));
    }
    Ok(worst)
}

/// Canonical lift of the drift to the product: `ψ = (1−2mρ)·m·σ·ln u + φ`.
pub fn lift_drift(params: &FlowParams, u_value: f64, phi_value: f64) -> Result<f64, FlowError> {
    if u_value <= 0.0 {
        return Err(FlowError::Positivity {
            what: "u",
            value: u_value,
        });
    }
    let m = params.m as f64;
    Ok((1.0 - 2.0 * m * params.rho) * m * params.sigma * math::ln(u_value) + phi_value)
}
