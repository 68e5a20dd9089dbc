//! Conformal-ansatz ODE system, explicit-solution catalog, flow residuals.
//!
//! A warped metric family
//!
//! ```text
//! ḡ(x,t) = (1+c₀t) μ(ξ)⁻²⟨,⟩ + (1+c₀t)^{2c₁/c₂} f(ξ)² g_F
//! ```
//!
//! over a Ricci-flat fiber evolves by the Ricci-Bourguignon flow with
//! time-independent drift φ(ξ) iff (μ, f, φ) satisfy a system of three ODEs
//! in ξ, with the constants c₀ and c₀c₁/c₂ entering linearly through
//! `c₀/(2μ²)` and `(c₀c₁/c₂)/μ²`. [`residuals`] evaluates the three
//! left-hand sides verbatim, [`solve_constants`] least-squares fits the two
//! constants for a supplied profile family, [`catalog`] returns the
//! closed-form solution scenarios, and [`flow_residual`] checks
//! `∂ₜḡ + 2(Ric + ∇²φ − ρS̄ḡ) = 0` directly on a scenario's block
//! decomposition.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::classify::HamiltonType;
use crate::geometry::{
    conformal_hessian, conformal_laplacian, conformal_ricci, conformal_scalar, grad_terms,
    warped_components, AnsatzFrame, BaseCurvature, FieldSel, GeometryError, SymMat, WarpData,
};
use crate::math;
use crate::params::FlowParams;
use crate::profile::{Interval, ProfileError, ProfileKind, ProfileSet};

/// Post-fit residual bound for [`solve_constants`]; larger means the
/// profiles are not a solution family.
pub const SOLVE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum AnsatzError {
    Geometry(GeometryError),
    /// Profiles are not a solution family; carries the post-fit residual.
    NoSolution { max_residual: f64 },
    /// Normal equations singular; the constants are unidentifiable.
    DegenerateFit,
    UnknownScenario { name: String },
    TimeDomain { t: f64, lo: f64, hi: f64 },
    /// The operation needs a conformal-ansatz base.
    UnsupportedBase,
}

impl fmt::Display for AnsatzError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnsatzError::Geometry(e) => write!(f, "{e} [ansatz]"),
            AnsatzError::NoSolution { max_residual } => write!(
                f,
                "profiles do not solve the ansatz system: post-fit residual {max_residual} \
                 exceeds {SOLVE_TOL} [ansatz::solve_constants]"
            ),
            AnsatzError::DegenerateFit => write!(
                f,
                "normal equations singular; constants unidentifiable [ansatz::solve_constants]"
            ),
            AnsatzError::UnknownScenario { name } => {
                write!(f, "unknown scenario {name:?} [ansatz::catalog]")
            }
            AnsatzError::TimeDomain { t, lo, hi } => {
                write!(f, "t={t} outside scenario time domain ({lo}, {hi}) [ansatz]")
            }
            AnsatzError::UnsupportedBase => {
                write!(f, "operation requires a conformal-ansatz base [ansatz]")
            }
        }
    }
}

impl core::error::Error for AnsatzError {}

impl From<GeometryError> for AnsatzError {
    fn from(e: GeometryError) -> Self {
        AnsatzError::Geometry(e)
    }
}

impl From<ProfileError> for AnsatzError {
    fn from(e: ProfileError) -> Self {
        AnsatzError::Geometry(e.into())
    }
}

/// Time-scaling constants of the ansatz. Only the ratio c₁/c₂ is stored;
/// the individual c₁, c₂ are redundant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnsatzConstants {
    pub c0: f64,
    pub c1_over_c2: f64,
    pub rho: f64,
}

impl AnsatzConstants {
    /// Metric time factor `a(t) = 1 + c₀ t`.
    pub fn scale(&self, t: f64) -> f64 {
        1.0 + self.c0 * t
    }

    /// Warping time factor `b(t) = a(t)^{c₁/c₂}`.
    pub fn warp_factor(&self, t: f64) -> f64 {
        math::powf(self.scale(t), self.c1_over_c2)
    }

    /// Product `c₀ c₁/c₂` as it enters the third ansatz equation.
    pub fn c0_c1_over_c2(&self) -> f64 {
        self.c0 * self.c1_over_c2
    }

    /// Self-similar solutions have `2c₁ = c₂`, i.e. the whole metric is a
    /// single time factor times a fixed metric.
    pub fn is_self_similar(&self) -> bool {
        math::abs(self.c1_over_c2 - 0.5) < 1e-12
    }
}

fn profile_data(
    ps: &ProfileSet,
    xi: f64,
) -> Result<(f64, f64, f64, f64, f64, f64, f64, f64), AnsatzError> {
    let (mu, dmu, ddmu) = ps.mu2(xi)?;
    let (f, df, ddf) = ps.f2(xi)?;
    let (_, dphi, ddphi) = ps.phi2(xi)?;
    Ok((mu, dmu, ddmu, f, df, ddf, dphi, ddphi))
}

/// The three ansatz residuals with the constant terms supplied directly as
/// `c0` and `c0c1c2 = c₀c₁/c₂`.
fn residuals_raw(
    ps: &ProfileSet,
    n: u32,
    m: u32,
    rho: f64,
    c0: f64,
    c0c1c2: f64,
    xi: f64,
) -> Result<(f64, f64, f64), AnsatzError> {
    let (mu, dmu, ddmu, f, df, ddf, dphi, ddphi) = profile_data(ps, xi)?;
    let (nf, mf) = (n as f64, m as f64);
    let lm = dmu / mu; // mu'/mu
    let qm = ddmu / mu; // mu''/mu
    let lf = df / f;
    let qf = ddf / f;

    let r1 = (nf - 2.0) * qm - mf * qf - 2.0 * mf * lf * lm + ddphi + 2.0 * lm * dphi;

    let r2 = (1.0 - 2.0 * (nf - 1.0) * rho) * qm - (nf - 1.0) * (1.0 - nf * rho) * lm * lm
        + mf * (1.0 - 2.0 * (nf - 2.0) * rho) * lm * lf
        + 2.0 * mf * rho * qf
        + mf * (mf - 1.0) * rho * lf * lf
        - lm * dphi
        + c0 / (2.0 * mu * mu);

    let r3 = -(1.0 - 2.0 * mf * rho) * qf + (nf - 2.0) * (1.0 - 2.0 * mf * rho) * lm * lf
        - (mf - 1.0) * (1.0 - mf * rho) * lf * lf
        + dphi * lf
        - 2.0 * rho * (nf - 1.0) * qm
        + rho * nf * (nf - 1.0) * lm * lm
        + c0c1c2 / (mu * mu);

    Ok((r1, r2, r3))
}

/// Left-hand sides of the three ansatz equations at ξ. All three vanish
/// iff the profiles solve the system there.
pub fn residuals(
    ps: &ProfileSet,
    n: u32,
    m: u32,
    rho: f64,
    constants: &AnsatzConstants,
    xi: f64,
) -> Result<(f64, f64, f64), AnsatzError> {
    residuals_raw(
        ps,
        n,
        m,
        rho,
        constants.c0,
        constants.c0_c1_over_c2(),
        xi,
    )
}

/// Least-squares fit of `(c₀, c₀c₁/c₂)` for a fixed profile family.
///
/// Both constants enter their equations linearly with weights `1/(2μ²)` and
/// `1/μ²`, so the fit splits into two scalar least-squares problems. The fit
/// is accepted only if the post-fit maximum residual over the sample points
/// stays below [`SOLVE_TOL`]; otherwise `NoSolution` reports it.
pub fn solve_constants(
    ps: &ProfileSet,
    n: u32,
    m: u32,
    rho: f64,
    sample_xis: &[f64],
) -> Result<(f64, f64), AnsatzError> {
    if sample_xis.len() < 2 {
        return Err(AnsatzError::DegenerateFit);
    }
    let mut s_w2w2 = 0.0;
    let mut s_b2w2 = 0.0;
    let mut s_w3w3 = 0.0;
    let mut s_b3w3 = 0.0;
    for &xi in sample_xis {
        let (mu, ..) = ps.mu2(xi)?;
        let (base1, base2, base3) = residuals_raw(ps, n, m, rho, 0.0, 0.0, xi)?;
        let _ = base1; // r1 carries no constant; it is checked post-fit
        let w2 = 1.0 / (2.0 * mu * mu);
        let w3 = 1.0 / (mu * mu);
        s_w2w2 += w2 * w2;
        s_b2w2 += base2 * w2;
        s_w3w3 += w3 * w3;
        s_b3w3 += base3 * w3;
    }
    if s_w2w2 <= f64::MIN_POSITIVE || s_w3w3 <= f64::MIN_POSITIVE {
        return Err(AnsatzError::DegenerateFit);
    }
    let c0 = -s_b2w2 / s_w2w2;
    let c0c1c2 = -s_b3w3 / s_w3w3;

    let mut max_residual: f64 = 0.0;
    for &xi in sample_xis {
        let (r1, r2, r3) = residuals_raw(ps, n, m, rho, c0, c0c1c2, xi)?;
        max_residual = math::max(
            max_residual,
            math::max(math::abs(r1), math::max(math::abs(r2), math::abs(r3))),
        );
    }
    if max_residual >= SOLVE_TOL {
        return Err(AnsatzError::NoSolution { max_residual });
    }
    Ok((c0, c0c1c2))
}

/// Fiber descriptor: dimension, Einstein coefficient κ (Ric_F = κ g_F) and
/// scalar curvature S_F = m·κ. Only these enter the reduction; no concrete
/// fiber metric is ever stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiberData {
    pub dim: u32,
    pub einstein_coeff: f64,
    pub s_fiber: f64,
}

impl FiberData {
    pub fn ricci_flat(dim: u32) -> Self {
        Self {
            dim,
            einstein_coeff: 0.0,
            s_fiber: 0.0,
        }
    }

    /// Unit hyperbolic fiber: κ = −(m−1), S_F = −m(m−1).
    pub fn unit_hyperbolic(dim: u32) -> Self {
        let m = dim as f64;
        Self {
            dim,
            einstein_coeff: -(m - 1.0),
            s_fiber: -m * (m - 1.0),
        }
    }
}

/// Base geometry of a scenario.
#[derive(Clone, Debug)]
pub enum BaseKind {
    /// Ωⁿ ⊂ ℝⁿ with metric `a(t)·μ(ξ)⁻²⟨,⟩`.
    Conformal {
        profiles: ProfileSet,
        frame: AnsatzFrame,
    },
    /// Time-independent product model; carries its constant curvature norm.
    StaticProduct { curvature_norm: f64 },
}

/// A catalog entry: closed-form space-time metric evaluators plus metadata.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub params: FlowParams,
    pub base: BaseKind,
    pub constants: AnsatzConstants,
    pub time_domain: Interval,
    /// Spatial window on which curvature suprema are attained.
    pub spatial_window: Interval,
    pub fiber: FiberData,
    pub expected_class: Option<HamiltonType>,
    pub complete: bool,
    /// Multiplier on the warping profile; 1.0 for the exact solution.
    /// Detection tests perturb it.
    pub warp_scale: f64,
    pub notes: String,
}

/// Everything the block evaluators need at a fixed `(ξ, t)` of a conformal
/// scenario: warped curvature, drift Hessian, scaled metric factor.
pub(crate) struct ConformalPoint {
    pub n: usize,
    /// Coefficient of δᵢⱼ in the horizontal metric block.
    pub h_metric: f64,
    pub warp: f64,
    pub warped: crate::geometry::WarpedCurvature,
    pub hess_phi: SymMat,
    pub grad_warp_phi: f64,
}

impl Scenario {
    pub fn in_time_domain(&self, t: f64) -> bool {
        t > self.time_domain.lo && t < self.time_domain.hi
    }

    fn check_time(&self, t: f64) -> Result<(), AnsatzError> {
        if !self.in_time_domain(t) {
            return Err(AnsatzError::TimeDomain {
                t,
                lo: self.time_domain.lo,
                hi: self.time_domain.hi,
            });
        }
        Ok(())
    }

    pub fn conformal(&self) -> Result<(&ProfileSet, &AnsatzFrame), AnsatzError> {
        match &self.base {
            BaseKind::Conformal { profiles, frame } => Ok((profiles, frame)),
            BaseKind::StaticProduct { .. } => Err(AnsatzError::UnsupportedBase),
        }
    }

    pub fn xi_of(&self, x: &[f64]) -> Result<f64, AnsatzError> {
        let (_, frame) = self.conformal()?;
        Ok(frame.axis.iter().zip(x.iter()).map(|(a, v)| a * v).sum())
    }

    /// Horizontal metric coefficient `a(t)/μ(ξ)²` (times δᵢⱼ).
    pub fn horizontal_factor(&self, xi: f64, t: f64) -> Result<f64, AnsatzError> {
        let (ps, _) = self.conformal()?;
        self.check_time(t)?;
        let (mu, _, _) = ps.mu2(xi)?;
        Ok(self.constants.scale(t) / (mu * mu))
    }

    /// Warping value `b(t)·f(ξ)` (with the perturbation multiplier applied).
    pub fn warp_value(&self, xi: f64, t: f64) -> Result<f64, AnsatzError> {
        let (ps, _) = self.conformal()?;
        self.check_time(t)?;
        let (f, _, _) = ps.f2(xi)?;
        Ok(self.warp_scale * self.constants.warp_factor(t) * f)
    }

    /// Drift value φ(ξ).
    pub fn drift_value(&self, xi: f64) -> Result<f64, AnsatzError> {
        let (ps, _) = self.conformal()?;
        Ok(ps.phi2(xi)?.0)
    }

    /// Copy with the warping profile scaled by `factor`, for detection tests.
    /// Constant warping rescale is an exact symmetry when the fiber is
    /// Ricci-flat (it amounts to rescaling the fiber metric), so detection
    /// tests on such scenarios use [`Scenario::perturbed_exponent`] instead.
    pub fn perturbed(&self, factor: f64) -> Scenario {
        let mut sc = self.clone();
        sc.warp_scale *= factor;
        sc
    }

    /// Copy with the warping time exponent `c₁/c₂` shifted by `delta`.
    pub fn perturbed_exponent(&self, delta: f64) -> Scenario {
        let mut sc = self.clone();
        sc.constants.c1_over_c2 += delta;
        sc
    }

    /// Assembles all pointwise data entering the flow blocks at `(ξ, t)`.
    pub(crate) fn conformal_point(&self, xi: f64, t: f64) -> Result<ConformalPoint, AnsatzError> {
        let (ps, frame) = self.conformal()?;
        self.check_time(t)?;
        let n = frame.n;
        let a_t = self.constants.scale(t);
        let b_t = self.warp_scale * self.constants.warp_factor(t);
        let m = self.fiber.dim;

        let (mu, _, _) = ps.mu2(xi)?;
        let s_g = conformal_scalar(ps, n, xi)? / a_t;
        let ric = SymMat::from_fn(n, |i, j| {
            conformal_ricci(ps, frame, xi, i, j).unwrap_or(f64::NAN)
        });
        let base = BaseCurvature { n, ric, scalar: s_g };

        let hess_f = SymMat::from_fn(n, |i, j| {
            b_t * conformal_hessian(ps, frame, FieldSel::Warp, xi, i, j).unwrap_or(f64::NAN)
        });
        let lap_f = b_t * conformal_laplacian(ps, FieldSel::Warp, n, xi)? / a_t;
        let (grad_f_phi0, grad_f_sq0) = grad_terms(ps, xi)?;
        let grad_sq = b_t * b_t * grad_f_sq0 / a_t;
        let grad_f_phi = b_t * grad_f_phi0 / a_t;
        let (f0, _, _) = ps.f2(xi)?;
        let warp = b_t * f0;

        let warp_data = WarpData {
            f: warp,
            hess: hess_f,
            laplacian: lap_f,
            grad_norm_sq: grad_sq,
            grad_f_phi,
        };
        let warped = warped_components(
            &base,
            &warp_data,
            m,
            self.fiber.s_fiber,
            self.fiber.einstein_coeff,
        )?;

        let hess_phi = SymMat::from_fn(n, |i, j| {
            conformal_hessian(ps, frame, FieldSel::Drift, xi, i, j).unwrap_or(f64::NAN)
        });

        Ok(ConformalPoint {
            n,
            h_metric: a_t / (mu * mu),
            warp,
            warped,
            hess_phi,
            grad_warp_phi: grad_f_phi,
        })
    }

    /// Horizontal and vertical blocks of `Q = Ric + ∇²φ − ρS̄ḡ` at `(ξ, t)`.
    pub(crate) fn q_blocks(&self, xi: f64, t: f64) -> Result<(SymMat, f64), AnsatzError> {
        let p = self.conformal_point(xi, t)?;
        let rho = self.params.rho;
        let s_bar = p.warped.scalar;
        let q_h = SymMat::from_fn(p.n, |i, j| {
            p.warped.ric_horizontal.get(i, j) + p.hess_phi.get(i, j)
                - rho
                    * s_bar
                    * if i == j { p.h_metric } else { 0.0 }
        });
        let q_v = p.warped.ric_vertical_coeff + p.warp * p.grad_warp_phi
            - rho * s_bar * p.warp * p.warp;
        Ok((q_h, q_v))
    }
}

/// Max-norm residual of `∂ₜḡ + 2Q` at a point, with the time derivative
/// taken by centered differences of step `dt_fd` on the block components.
pub fn flow_residual(
    scenario: &Scenario,
    x: &[f64],
    t: f64,
    dt_fd: f64,
) -> Result<f64, AnsatzError> {
    let xi = scenario.xi_of(x)?;
    if !scenario.in_time_domain(t - dt_fd) || !scenario.in_time_domain(t + dt_fd) {
        return Err(AnsatzError::TimeDomain {
            t,
            lo: scenario.time_domain.lo,
            hi: scenario.time_domain.hi,
        });
    }
    let (q_h, q_v) = scenario.q_blocks(xi, t)?;

    let (ps, frame) = scenario.conformal()?;
    let n = frame.n;
    let (mu, _, _) = ps.mu2(xi)?;
    let h_of = |tt: f64| scenario.constants.scale(tt) / (mu * mu);
    let v_of = |tt: f64| -> Result<f64, AnsatzError> {
        let w = scenario.warp_value(xi, tt)?;
        Ok(w * w)
    };
    let dt_h = (h_of(t + dt_fd) - h_of(t - dt_fd)) / (2.0 * dt_fd);
    let dt_v = (v_of(t + dt_fd)? - v_of(t - dt_fd)?) / (2.0 * dt_fd);

    let mut res: f64 = math::abs(dt_v + 2.0 * q_v);
    for i in 0..n {
        for j in 0..n {
            let dt_ij = if i == j { dt_h } else { 0.0 };
            res = math::max(res, math::abs(dt_ij + 2.0 * q_h.get(i, j)));
        }
    }
    Ok(res)
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 6] = [
    "hyperbolic-general",
    "hyperbolic-immortal",
    "hyperbolic-ancient",
    "halfspace-product",
    "exp-incomplete",
    "cosh-einstein",
];

fn hyperbolic_profiles(m: u32) -> ProfileSet {
    ProfileSet::analytic(
        ProfileKind::Linear {
            slope: 1.0,
            offset: 0.0,
        },
        ProfileKind::Linear {
            slope: 1.0,
            offset: 0.0,
        },
        ProfileKind::Log {
            coeff: 2.0 * m as f64,
        },
        Interval::new(1e-8, 1e8),
    )
}

/// `c₀` of the half-space family: `2[(n+m−1) − ρ(n²−n−2nm+m²+3m)]`.
pub fn hyperbolic_c0(n: u32, m: u32, rho: f64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let q = nf * nf - nf - 2.0 * nf * mf + mf * mf + 3.0 * mf;
    2.0 * ((nf + mf - 1.0) - rho * q)
}

/// `c₀c₁/c₂` of the half-space family: `−[(n+m−1) + ρ(n²−n−2nm+m²+3m)]`.
pub fn hyperbolic_c0c1c2(n: u32, m: u32, rho: f64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let q = nf * nf - nf - 2.0 * nf * mf + mf * mf + 3.0 * mf;
    -((nf + mf - 1.0) + rho * q)
}

fn hyperbolic_scenario(
    name: &str,
    n: u32,
    m: u32,
    rho: f64,
    expected: Option<HamiltonType>,
    notes: &str,
) -> Scenario {
    let c0 = hyperbolic_c0(n, m, rho);
    let c0c1c2 = hyperbolic_c0c1c2(n, m, rho);
    let c1_over_c2 = c0c1c2 / c0;
    let time_domain = if c0 >= 0.0 {
        Interval::new(-1.0 / c0, f64::INFINITY)
    } else {
        Interval::new(f64::NEG_INFINITY, -1.0 / c0)
    };
    Scenario {
        name: String::from(name),
        params: FlowParams::new(rho, m, n, 0.0).expect("catalog parameters avoid the pole"),
        base: BaseKind::Conformal {
            profiles: hyperbolic_profiles(m),
            frame: AnsatzFrame::last_axis(n as usize, Interval::new(1e-8, 1e8)),
        },
        constants: AnsatzConstants {
            c0,
            c1_over_c2,
            rho,
        },
        time_domain,
        spatial_window: Interval::new(0.25, 4.0),
        fiber: FiberData::ricci_flat(m),
        expected_class: expected,
        complete: true,
        warp_scale: 1.0,
        notes: String::from(notes),
    }
}

/// Returns the named closed-form scenario.
pub fn catalog(name: &str) -> Result<Scenario, AnsatzError> {
    match name {
        "hyperbolic-general" => Ok(hyperbolic_scenario(
            name,
            3,
            2,
            -0.5,
            None,
            "half-space base with linear mu, f and logarithmic drift over a Ricci-flat fiber; \
             negative-coupling instance of the general family",
        )),
        "hyperbolic-immortal" => Ok(hyperbolic_scenario(
            name,
            2,
            1,
            1.0 / 3.0,
            None,
            "immortal non-self-similar solution on the hyperbolic half-plane times a line; \
             the weighted curvature bound fails for it, which is what makes it interesting",
        )),
        "hyperbolic-ancient" => Ok(hyperbolic_scenario(
            name,
            2,
            1,
            2.0,
            None,
            "ancient non-self-similar solution on the hyperbolic half-plane times a line",
        )),
        "halfspace-product" => {
            let (n, m, rho) = (3u32, 2u32, 0.0);
            let c0 = 2.0 * (n as f64 - 1.0) * (1.0 - n as f64 * rho);
            let c1_over_c2 = if rho == 0.0 {
                0.0
            } else {
                -(n as f64) * rho / (2.0 * (1.0 - n as f64 * rho))
            };
            Ok(Scenario {
                name: String::from(name),
                params: FlowParams::new(rho, m, n, 0.0).unwrap(),
                base: BaseKind::Conformal {
                    profiles: ProfileSet::analytic(
                        ProfileKind::Linear {
                            slope: 1.0,
                            offset: 0.0,
                        },
                        ProfileKind::Constant(1.0),
                        ProfileKind::Constant(0.0),
                        Interval::new(1e-8, 1e8),
                    ),
                    frame: AnsatzFrame::last_axis(n as usize, Interval::new(1e-8, 1e8)),
                },
                constants: AnsatzConstants {
                    c0,
                    c1_over_c2,
                    rho,
                },
                time_domain: Interval::new(-1.0 / c0, f64::INFINITY),
                spatial_window: Interval::new(0.25, 4.0),
                fiber: FiberData::ricci_flat(m),
                expected_class: Some(HamiltonType::TypeIII),
                complete: true,
                warp_scale: 1.0,
                notes: String::from(
                    "expanding half-space base with constant warping: a moving product metric; \
                     curvature decays like 1/a(t), so t*K stays bounded",
                ),
            })
        }
        "exp-incomplete" => {
            let (n, m, rho) = (2u32, 1u32, 0.25);
            Ok(Scenario {
                name: String::from(name),
                params: FlowParams::new(rho, m, n, 0.0).unwrap(),
                base: BaseKind::Conformal {
                    profiles: ProfileSet::analytic(
                        ProfileKind::Exp {
                            coeff: 1.0,
                            rate: 1.0,
                        },
                        ProfileKind::AffineExp {
                            offset: 1.0,
                            coeff: 0.5,
                            rate: -2.0,
                        },
                        ProfileKind::AffineExp {
                            offset: 0.0,
                            coeff: -0.25,
                            rate: -2.0,
                        },
                        Interval::new(-20.0, 20.0),
                    ),
                    frame: AnsatzFrame::last_axis(n as usize, Interval::new(-20.0, 20.0)),
                },
                constants: AnsatzConstants {
                    c0: 1.0,
                    c1_over_c2: 1.0,
                    rho,
                },
                time_domain: Interval::new(-1.0, f64::INFINITY),
                spatial_window: Interval::new(-1.0, 2.0),
                fiber: FiberData::ricci_flat(m),
                expected_class: None,
                complete: false,
                warp_scale: 1.0,
                notes: String::from(
                    "immortal solution with exponential conformal factor; the base metric is \
                     not complete, so the scenario is excluded from classifier runs",
                ),
            })
        }
        "cosh-einstein" => {
            // Line base, fiber H^{m} with m = 2 (total dimension 3). The
            // warped metric is a(t)·h with h of constant curvature -1.
            let (n, m) = (1u32, 2u32);
            let c0 = 2.0 * m as f64; // 2(n_total - 1)
            Ok(Scenario {
                name: String::from(name),
                params: FlowParams::new(0.0, m, n, -((m * (m - 1)) as f64)).unwrap(),
                base: BaseKind::Conformal {
                    profiles: ProfileSet::analytic(
                        ProfileKind::Constant(1.0),
                        ProfileKind::Cosh,
                        ProfileKind::Constant(0.0),
                        Interval::new(-30.0, 30.0),
                    ),
                    frame: AnsatzFrame::last_axis(1, Interval::new(-30.0, 30.0)),
                },
                constants: AnsatzConstants {
                    c0,
                    c1_over_c2: 0.5,
                    rho: 0.0,
                },
                time_domain: Interval::new(-1.0 / c0, f64::INFINITY),
                spatial_window: Interval::new(-2.0, 2.0),
                fiber: FiberData::unit_hyperbolic(m),
                expected_class: Some(HamiltonType::TypeIII),
                complete: true,
                warp_scale: 1.0,
                notes: String::from(
                    "line base warped over a unit hyperbolic fiber by f = sqrt(a(t)) cosh r; \
                     a homothetic immortal solution scaling an Einstein metric",
                ),
            })
        }
        _ => Err(AnsatzError::UnknownScenario {
            name: String::from(name),
        }),
    }
}

/// The long-time product model with a static metric: infinite horizon with
/// constant curvature norm. Not part of [`catalog`] because it is not given
/// by closed-form ansatz data; the classifier consumes its constant profile.
pub fn static_product_scenario() -> Scenario {
    let (n, m, rho) = (3u32, 2u32, -0.5);
    Scenario {
        name: String::from("static-product"),
        params: FlowParams::new(rho, m, n, -2.0).unwrap(),
        base: BaseKind::StaticProduct {
            curvature_norm: 1.0,
        },
        constants: AnsatzConstants {
            c0: 0.0,
            c1_over_c2: 0.0,
            rho,
        },
        time_domain: Interval::new(f64::NEG_INFINITY, f64::INFINITY),
        spatial_window: Interval::new(-1.0, 1.0),
        fiber: FiberData::unit_hyperbolic(m),
        expected_class: Some(HamiltonType::TypeIIb),
        complete: true,
        warp_scale: 1.0,
        notes: String::from(
            "static product with a unit-curvature compact factor: K stays constant while the \
             horizon is infinite, so t*K is unbounded",
        ),
    }
}

/// 50 log-spaced sample points across a scenario's spatial window, shifted
/// into the positive axis range when the window allows it.
pub fn default_xi_samples(sc: &Scenario) -> Vec<f64> {
    let w = sc.spatial_window;
    if w.lo > 0.0 {
        crate::grid::log_spaced(w.lo, w.hi, 50)
    } else {
        (0..50)
            .map(|i| w.lo + (w.hi - w.lo) * i as f64 / 49.0)
            .collect()
    }
}
