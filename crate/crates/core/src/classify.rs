//! Hamilton-type classification of maximal solutions.
//!
//! A maximal solution on `[0, T)` is sorted by the growth of the curvature
//! scale `K_max(t) = sup_x |Rm(x,t)|`:
//!
//! - Type I:     T < ∞ and sup (T−t)·K_max < ∞
//! - Type II(a): T < ∞ and sup (T−t)·K_max = ∞
//! - Type II(b): T = ∞ and sup t·K_max = ∞
//! - Type III:   T = ∞ and sup t·K_max < ∞
//!
//! Boundedness is decided from a least-squares exponent fit on log-log
//! samples; an ambiguous fit is reported as `Undetermined` rather than
//! coerced. The spatial supremum is approximated by the maximum over a
//! scenario's declared spatial window.

use alloc::vec::Vec;
use core::fmt;

use crate::ansatz::{AnsatzError, BaseKind, Scenario};
use crate::geometry::{conformal_sectional, FieldSel};
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonType {
    TypeI,
    TypeIIa,
    TypeIIb,
    TypeIII,
    Undetermined,
}

impl fmt::Display for HamiltonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HamiltonType::TypeI => "TypeI",
            HamiltonType::TypeIIa => "TypeIIa",
            HamiltonType::TypeIIb => "TypeIIb",
            HamiltonType::TypeIII => "TypeIII",
            HamiltonType::Undetermined => "Undetermined",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    Finite(f64),
    Infinite,
}

/// One curvature-scale sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TypeSample {
    pub t: f64,
    pub kmax: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyThresholds {
    /// Tolerance on the fitted exponent β.
    pub exponent_tol: f64,
    /// Log-space RMS above which the fit is declared ambiguous.
    pub fit_rms_max: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self {
            exponent_tol: 0.1,
            fit_rms_max: 0.25,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub label: HamiltonType,
    /// Fitted growth exponent of the horizon-scaled curvature.
    pub exponent: f64,
    /// Max over samples of `(T−t)·kmax` (finite) or `t·kmax` (infinite).
    pub sup_stat: f64,
    pub horizon: Horizon,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassifyError {
    InsufficientSamples { have: usize, reason: &'static str },
    IncompleteScenario { name: alloc::string::String },
    Domain { what: &'static str, value: f64 },
    Ansatz(AnsatzError),
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::InsufficientSamples { have, reason } => {
                write!(f, "insufficient samples ({have}): {reason} [classify::classify]")
            }
            ClassifyError::IncompleteScenario { name } => write!(
                f,
                "scenario {name:?} is not complete; curvature suprema are meaningless \
                 [classify::kmax_profile]"
            ),
            ClassifyError::Domain { what, value } => {
                write!(f, "{what} = {value} out of range [classify]")
            }
            ClassifyError::Ansatz(e) => write!(f, "{e} [classify]"),
        }
    }
}

impl core::error::Error for ClassifyError {}

impl From<AnsatzError> for ClassifyError {
    fn from(e: AnsatzError) -> Self {
        ClassifyError::Ansatz(e)
    }
}

impl From<crate::geometry::GeometryError> for ClassifyError {
    fn from(e: crate::geometry::GeometryError) -> Self {
        ClassifyError::Ansatz(e.into())
    }
}

impl From<crate::profile::ProfileError> for ClassifyError {
    fn from(e: crate::profile::ProfileError) -> Self {
        ClassifyError::Ansatz(AnsatzError::Geometry(e.into()))
    }
}

/// Least-squares line through `(x, y)` pairs; returns (slope, rms residual).
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= f64::MIN_POSITIVE {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        let r = y - (slope * x + intercept);
        ss += r * r;
    }
    (slope, math::sqrt(ss / n))
}

fn validate_samples(samples: &[TypeSample]) -> Result<(), ClassifyError> {
    if samples.len() < 8 {
        return Err(ClassifyError::InsufficientSamples {
            have: samples.len(),
            reason: "need at least 8 samples",
        });
    }
    for w in samples.windows(2) {
        if w[1].t <= w[0].t {
            return Err(ClassifyError::Domain {
                what: "sample times must be strictly increasing; got step",
                value: w[1].t - w[0].t,
            });
        }
    }
    for s in samples {
        if s.kmax < 0.0 {
            return Err(ClassifyError::Domain {
                what: "kmax",
                value: s.kmax,
            });
        }
    }
    Ok(())
}

/// Classifies a maximal solution from curvature-scale samples.
///
/// Finite horizon `T`: the exponent γ of `(T−t)·kmax ~ (T−t)^γ` as `t → T`
/// is fitted on the closest decade; γ ≥ −tol means bounded (Type I),
/// γ < −tol means blow-up faster than 1/(T−t) (Type II(a)). Infinite
/// horizon: the exponent β of `t·kmax ~ t^β` is fitted on the top decade;
/// β ≤ tol gives Type III, β > tol gives Type II(b). A fit with too much
/// scatter returns `Undetermined`.
pub fn classify(
    horizon: Horizon,
    samples: &[TypeSample],
    thresholds: &ClassifyThresholds,
) -> Result<Classification, ClassifyError> {
    validate_samples(samples)?;
    let t_first = samples[0].t;
    let t_last = samples[samples.len() - 1].t;

    // Bail out early for identically tiny profiles: every scaled statistic
    // is bounded (flat static solutions).
    let all_tiny = samples.iter().all(|s| s.kmax <= 1e-300);

    match horizon {
        Horizon::Finite(t_max) => {
            if t_last >= t_max {
                return Err(ClassifyError::Domain {
                    what: "sample beyond finite horizon at t",
                    value: t_last,
                });
            }
            if (t_max - t_last) > 0.01 * (t_max - t_first) {
                return Err(ClassifyError::InsufficientSamples {
                    have: samples.len(),
                    reason: "finite-horizon samples must approach the horizon within 1%",
                });
            }
            let sup_stat = samples
                .iter()
                .map(|s| (t_max - s.t) * s.kmax)
                .fold(0.0, math::max);
            if all_tiny {
                return Ok(Classification {
                    label: HamiltonType::TypeI,
                    exponent: 0.0,
                    sup_stat,
                    horizon,
                });
            }
            // Fit on the closest decade of the approach variable T - t.
            let gap_last = t_max - t_last;
            let subset: Vec<&TypeSample> = samples
                .iter()
                .filter(|s| t_max - s.t <= 10.0 * gap_last && s.kmax > 0.0)
                .collect();
            let use_set: Vec<&TypeSample> = if subset.len() >= 5 {
                subset
            } else {
                samples.iter().filter(|s| s.kmax > 0.0).collect()
            };
            let xs: Vec<f64> = use_set.iter().map(|s| math::ln(t_max - s.t)).collect();
            let ys: Vec<f64> = use_set
                .iter()
                .map(|s| math::ln((t_max - s.t) * s.kmax))
                .collect();
            let (gamma, rms) = fit_line(&xs, &ys);
            let label = if !gamma.is_finite() || rms > thresholds.fit_rms_max {
                HamiltonType::Undetermined
            } else if gamma >= -thresholds.exponent_tol {
                HamiltonType::TypeI
            } else {
                HamiltonType::TypeIIa
            };
            Ok(Classification {
                label,
                exponent: gamma,
                sup_stat,
                horizon,
            })
        }
        Horizon::Infinite => {
            if t_first <= 0.0 {
                return Err(ClassifyError::Domain {
                    what: "infinite-horizon samples need t > 0; first t",
                    value: t_first,
                });
            }
            if t_last / t_first < 100.0 {
                return Err(ClassifyError::InsufficientSamples {
                    have: samples.len(),
                    reason: "infinite-horizon samples must span at least two decades",
                });
            }
            let sup_stat = samples.iter().map(|s| s.t * s.kmax).fold(0.0, math::max);
            if all_tiny {
                return Ok(Classification {
                    label: HamiltonType::TypeIII,
                    exponent: 0.0,
                    sup_stat,
                    horizon,
                });
            }
            let subset: Vec<&TypeSample> = samples
                .iter()
                .filter(|s| s.t >= t_last / 10.0 && s.kmax > 0.0)
                .collect();
            let use_set: Vec<&TypeSample> = if subset.len() >= 5 {
                subset
            } else {
                samples.iter().filter(|s| s.kmax > 0.0).collect()
            };
            let xs: Vec<f64> = use_set.iter().map(|s| math::ln(s.t)).collect();
            let ys: Vec<f64> = use_set.iter().map(|s| math::ln(s.t * s.kmax)).collect();
            let (beta, rms) = fit_line(&xs, &ys);
            let label = if !beta.is_finite() || rms > thresholds.fit_rms_max {
                HamiltonType::Undetermined
            } else if beta <= thresholds.exponent_tol {
                HamiltonType::TypeIII
            } else {
                HamiltonType::TypeIIb
            };
            Ok(Classification {
                label,
                exponent: beta,
                sup_stat,
                horizon,
            })
        }
    }
}

/// Max absolute sectional curvature of a conformal scenario at `(ξ, t)`,
/// over base planes, mixed planes and fiber planes.
fn scenario_curvature_norm(sc: &Scenario, xi: f64, t: f64) -> Result<f64, ClassifyError> {
    let (ps, frame) = sc.conformal()?;
    let n = frame.n;
    let a_t = sc.constants.scale(t);
    let b_t = sc.warp_scale * sc.constants.warp_factor(t);
    let m = sc.fiber.dim;

    let mut k: f64 = 0.0;

    // Base planes scale like 1/a(t).
    for i in 0..n {
        for j in (i + 1)..n {
            let kk = conformal_sectional(ps, frame, xi, i, j)? / a_t;
            k = math::max(k, math::abs(kk));
        }
    }

    // Mixed planes: -Hess f(e_i, e_i) / (a f |e_i|²) in the unscaled metric.
    let (f0, _, _) = ps.f2(xi)?;
    let (mu, _, _) = ps.mu2(xi)?;
    for i in 0..n {
        let hess_ii =
            crate::geometry::conformal_hessian(ps, frame, FieldSel::Warp, xi, i, i)?;
        let kk = -mu * mu * hess_ii / (a_t * f0);
        k = math::max(k, math::abs(kk));
    }

    // Fiber planes exist for m >= 2. The Einstein fiber is modeled by its
    // space form: sectional curvature κ/(m−1).
    if m >= 2 {
        let k_fiber = sc.fiber.einstein_coeff / (m as f64 - 1.0);
        let (_, df, _) = ps.f2(xi)?;
        let grad_sq = mu * mu * df * df / a_t; // ‖∇f‖² in g(t), unscaled profile
        let fbar = b_t * f0;
        let kk = k_fiber / (fbar * fbar) - b_t * b_t * grad_sq / (fbar * fbar);
        k = math::max(k, math::abs(kk));
    }
    Ok(k)
}

/// Curvature-scale profile of a scenario at the requested times.
///
/// Homothetic scenarios (`2c₁ = c₂`, the whole metric is `a(t)·ḡ₀`) use the
/// scaling law `|Rm|_{λg} = |Rm|_g / λ`; everything else evaluates warped
/// sectional curvatures on a grid over the scenario's spatial window.
pub fn kmax_profile(sc: &Scenario, t_samples: &[f64]) -> Result<Vec<TypeSample>, ClassifyError> {
    if !sc.complete {
        return Err(ClassifyError::IncompleteScenario {
            name: sc.name.clone(),
        });
    }
    for &t in t_samples {
        if !sc.in_time_domain(t) {
            return Err(ClassifyError::Domain {
                what: "sample time outside scenario domain: t",
                value: t,
            });
        }
    }
    match &sc.base {
        BaseKind::StaticProduct { curvature_norm } => Ok(t_samples
            .iter()
            .map(|&t| TypeSample {
                t,
                kmax: *curvature_norm,
            })
            .collect()),
        BaseKind::Conformal { .. } => {
            let w = sc.spatial_window;
            let npts = 33usize;
            let xis: Vec<f64> = (0..npts)
                .map(|i| w.lo + (w.hi - w.lo) * i as f64 / (npts - 1) as f64)
                .collect();
            if sc.constants.is_self_similar() {
                // K0 at the time where a(t) = 1, then scale.
                let mut k0: f64 = 0.0;
                for &xi in &xis {
                    k0 = math::max(k0, scenario_curvature_norm(sc, xi, 0.0)?);
                }
                // a(0) = 1 by construction
                Ok(t_samples
                    .iter()
                    .map(|&t| TypeSample {
                        t,
                        kmax: k0 / sc.constants.scale(t),
                    })
                    .collect())
            } else {
                let mut out = Vec::with_capacity(t_samples.len());
                for &t in t_samples {
                    let mut k: f64 = 0.0;
                    for &xi in &xis {
                        k = math::max(k, scenario_curvature_norm(sc, xi, t)?);
                    }
                    out.push(TypeSample { t, kmax: k });
                }
                Ok(out)
            }
        }
    }
}

/// Log-spaced times suited to infinite-horizon classification, clipped into
/// the scenario domain.
pub fn default_time_ladder(sc: &Scenario, decades: f64, n: usize) -> Vec<f64> {
    let lo = math::max(0.01, sc.time_domain.lo + 0.01);
    let hi = lo * math::powf(10.0, decades);
    crate::grid::log_spaced(lo, hi, n)
}
