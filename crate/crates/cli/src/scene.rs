//! Builders turning scenarios into estimate-verifier inputs.
//!
//! Two suites are wired up: the Dirichlet heat problem on `[0, π]` (solver
//! trajectory, backward window) and the immortal hyperbolic scenario
//! restricted to its ansatz axis (closed-form trajectory, forward window).
//! The axis of the hyperbolic half-plane is a geodesic, so the 1-D slice
//! carries the full gradient and distance data of the 2-D base along it.

use rbflow_core::ansatz::catalog;
use rbflow_core::estimate::{
    gamma_bar, gamma_bar_slice, verify_estimate, EstimateParams, EstimateReport, EstimateScene,
    RadialModel, Sample, TimeMode,
};
use rbflow_core::grid::Grid1D;
use rbflow_core::params::UnifiedCoeffs;
use rbflow_core::profile::ProfileKind;
use rbflow_core::reduced_flow::{
    evolve_scalar, FieldTrajectory, ScalarBoundary, SolverConfig,
};
use rbflow_core::rng::SplitMix64;

use crate::error::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Heat,
    HyperbolicImmortal,
}

/// A fully assembled estimate-verification problem.
pub struct EstimateSuite {
    pub kind: SuiteKind,
    pub traj: FieldTrajectory,
    pub phi: Vec<f64>,
    pub gamma: f64,
    pub c: f64,
    pub alpha: f64,
    pub grad_b_sup: f64,
    pub center_ix: usize,
    pub ep: EstimateParams,
    /// Metric time factor slope for the immortal scenario (c₀), 0 for heat.
    scale_c0: f64,
}

impl EstimateSuite {
    fn scale(&self, t: f64) -> f64 {
        1.0 + self.scale_c0 * t
    }

    /// Coefficient field b(x,t) = (ρ/σ)·S_g(t).
    pub fn b_at(&self, _x: f64, t: f64) -> f64 {
        match self.kind {
            SuiteKind::Heat => 0.0,
            // rho/sigma = 1/3, S_g = -2/a(t)
            SuiteKind::HyperbolicImmortal => -2.0 / (3.0 * self.scale(t)),
        }
    }

    /// Smallest λ with `(1−a)Ric + ∇²φ ≥ λ g(t)` at the point.
    pub fn bakry_at(&self, _x: f64, t: f64) -> f64 {
        match self.kind {
            SuiteKind::Heat => 0.0,
            // eigenvalues x²·{-7/3, -1/3} against g(t) = a(t)/x² dx²...
            SuiteKind::HyperbolicImmortal => -7.0 / (3.0 * self.scale(t)),
        }
    }

    /// Smallest λ with `∂ₜg ≥ λ g(t)` at the point.
    pub fn dtg_at(&self, _x: f64, t: f64) -> f64 {
        match self.kind {
            SuiteKind::Heat => 0.0,
            SuiteKind::HyperbolicImmortal => self.scale_c0 / self.scale(t),
        }
    }

    /// Runs the verifier with the suite's closures in scope.
    pub fn verify(
        &self,
        ep: &EstimateParams,
        samples: &[Sample],
    ) -> Result<EstimateReport, RunError> {
        let b = |x: f64, t: f64| self.b_at(x, t);
        let bakry = |x: f64, t: f64| self.bakry_at(x, t);
        let dtg = |x: f64, t: f64| self.dtg_at(x, t);
        let scene = EstimateScene {
            traj: &self.traj,
            phi: &self.phi,
            b: &b,
            grad_b_sup: self.grad_b_sup,
            c: self.c,
            alpha: self.alpha,
            gamma: self.gamma,
            center_ix: self.center_ix,
            bakry_min_ratio: &bakry,
            dtg_min_ratio: &dtg,
        };
        Ok(verify_estimate(&scene, ep, samples)?)
    }

    /// Seeded sample set inside `Q_{R/2,T}` with a spatial margin keeping
    /// stencils off the boundary data.
    pub fn draw_samples(&self, count: usize, margin: f64, seed: u64) -> Vec<Sample> {
        let mut rng = SplitMix64::new(seed);
        let grid = &self.traj.grid;
        let nt = self.traj.times.len();
        let mut out = Vec::with_capacity(count);
        let mut guard = 0usize;
        while out.len() < count && guard < 100 * count {
            guard += 1;
            let x = rng.uniform(grid.x_lo + margin, grid.x_hi - margin);
            let it = 1 + rng.index(nt - 1); // skip the initial frame
            let ix = grid.nearest(x).clamp(2, grid.npts - 3);
            let t = self.traj.times[it];
            let elapsed = self.ep.window_elapsed(t);
            if elapsed <= 0.05 * self.ep.t_window {
                continue;
            }
            let metric = &self.traj.metric[it];
            let r = rbflow_core::grid::arclength(metric, grid, self.center_ix, ix).abs();
            if r > 0.5 * self.ep.radius {
                continue;
            }
            out.push(Sample { ix, it });
        }
        out
    }
}

/// Heat suite: `u₀ = sin x` on `[0, π]`, Dirichlet zero, evolved to
/// `t = t_window`; backward estimate window anchored at the final time.
pub fn heat_suite(npts: usize, radius: f64, t_window: f64) -> Result<EstimateSuite, RunError> {
    let grid = Grid1D::new(0.0, std::f64::consts::PI, npts)?;
    let u0: Vec<f64> = grid.nodes().map(f64::sin).collect();
    let phi = vec![0.0; npts];
    let metric = vec![1.0; npts];
    let coeffs = UnifiedCoeffs {
        a: 0.0,
        b: 0.0,
        c: 0.0,
        alpha: 1.0,
    };
    let zero_bc = |_: f64, _: f64| 0.0;
    let n_frames = 11;
    let times: Vec<f64> = (0..n_frames)
        .map(|i| t_window * i as f64 / (n_frames - 1) as f64)
        .collect();
    let traj = evolve_scalar(
        &grid,
        &u0,
        &coeffs,
        &phi,
        &metric,
        &SolverConfig::default(),
        &ScalarBoundary::DirichletExact(&zero_bc),
        &times,
    )?;

    // D = sup u over the cylinder: attained by the initial frame.
    let d_sup = traj
        .frames
        .iter()
        .flat_map(|f| f.iter().copied())
        .fold(0.0f64, f64::max);
    let t0 = t_window;
    let ep = EstimateParams {
        p: 1.0,
        q: 1.0 + d_sup.ln(),
        delta: 1.0,
        d_sup,
        k1: 0.0,
        k2: 0.0,
        radius,
        t_window,
        t0,
        tau: t0 - 0.25 * t_window,
        a_coeff: 0.0,
        mode: TimeMode::Backward,
        c_report: None,
    };
    let center_ix = grid.nearest(std::f64::consts::FRAC_PI_2);
    // 1-D distance functions are harmonic; with phi = 0 this comes out 0
    let gamma = gamma_bar_slice(&metric, &phi, &grid, center_ix, 0.0)?;
    Ok(EstimateSuite {
        kind: SuiteKind::Heat,
        traj,
        phi,
        gamma,
        c: 0.0,
        alpha: 1.0,
        grad_b_sup: 0.0,
        center_ix,
        ep,
        scale_c0: 0.0,
    })
}

/// Immortal hyperbolic suite on the ansatz axis, forward window `[0, T]`.
///
/// In the coordinate `y = ln x` along the axis the base slice carries the
/// metric `a(t) dy²` (spatially constant), the solution is `u = a(t)⁻¹ eʸ`
/// and the drift is `φ = 2y`, so uniform grids and trapezoidal arclength
/// are exact fits.
pub fn hyperbolic_immortal_suite(
    npts: usize,
    radius: f64,
    t_window: f64,
) -> Result<EstimateSuite, RunError> {
    let sc = catalog("hyperbolic-immortal")?;
    let c0 = sc.constants.c0;
    let a_of = |t: f64| 1.0 + c0 * t;
    // distance from y = 0 is sqrt(a)·|y| with a >= 1, so Q_{R/2} fits
    let y_max = 0.5 * radius + 0.2;
    let grid = Grid1D::new(-y_max, y_max, npts)?;

    let n_frames = 11;
    let times: Vec<f64> = (0..n_frames)
        .map(|i| t_window * i as f64 / (n_frames - 1) as f64)
        .collect();
    let frames: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| {
            let b = sc.constants.warp_factor(t);
            grid.nodes().map(|y| b * y.exp()).collect()
        })
        .collect();
    let metric: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| vec![a_of(t); npts])
        .collect();
    let traj = FieldTrajectory {
        grid,
        times,
        frames,
        metric,
    };
    let phi: Vec<f64> = grid.nodes().map(|y| 2.0 * y).collect();

    let d_sup = traj
        .frames
        .iter()
        .flat_map(|f| f.iter().copied())
        .fold(0.0f64, f64::max);
    let a_coeff = sc.params.a_coeff; // 2/3
    // worst-direction drift slope along the unit sphere at t = 0
    let drift = ProfileKind::Linear {
        slope: -2.0,
        offset: 0.0,
    };
    let gamma = gamma_bar(
        RadialModel::Hyperbolic {
            n: 2,
            curvature: 1.0,
        },
        Some(&drift),
        a_coeff,
    )?;
    let ep = EstimateParams {
        p: 1.0,
        q: 1.0 + d_sup.ln(),
        delta: 1.0,
        d_sup,
        k1: 7.0 / 3.0,
        k2: 0.0,
        radius,
        t_window,
        t0: 0.0,
        tau: 0.0,
        a_coeff,
        mode: TimeMode::Forward,
        c_report: None,
    };
    Ok(EstimateSuite {
        kind: SuiteKind::HyperbolicImmortal,
        traj,
        phi,
        gamma,
        c: 0.0,
        alpha: sc.params.alpha_exp,
        grad_b_sup: 0.0,
        center_ix: grid.nearest(0.0),
        ep,
        scale_c0: c0,
    })
}
