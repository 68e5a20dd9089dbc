//! Run configuration: a versioned TOML document plus CLI overrides.

use serde::Deserialize;
use std::path::Path;

use crate::error::RunError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    VerifyAnsatz,
    VerifyFlow,
    VerifyEstimate,
    IdentityCheck,
    Classify,
    Catalog,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::VerifyAnsatz => "verify-ansatz",
            Mode::VerifyFlow => "verify-flow",
            Mode::VerifyEstimate => "verify-estimate",
            Mode::IdentityCheck => "identity-check",
            Mode::Classify => "classify",
            Mode::Catalog => "catalog",
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioRef {
    /// "catalog" or "heat".
    pub kind: String,
    pub name: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_lo: f64,
    pub x_hi: f64,
    pub npts: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverTomlConfig {
    #[serde(default = "default_integrator")]
    pub integrator: String,
    pub cfl: Option<f64>,
    pub dt_fixed: Option<f64>,
    #[serde(default = "default_boundary")]
    pub boundary: String,
    #[serde(default = "default_u_floor")]
    pub u_floor: f64,
    #[serde(default)]
    pub freeze_metric: bool,
}

fn default_integrator() -> String {
    "rk4".into()
}
fn default_boundary() -> String {
    "dirichlet-exact".into()
}
fn default_u_floor() -> f64 {
    1e-10
}

impl Default for SolverTomlConfig {
    fn default() -> Self {
        Self {
            integrator: default_integrator(),
            cfl: Some(0.4),
            dt_fixed: None,
            boundary: default_boundary(),
            u_floor: default_u_floor(),
            freeze_metric: false,
        }
    }
}

impl SolverTomlConfig {
    pub fn to_core(&self) -> Result<rbflow_core::reduced_flow::SolverConfig, RunError> {
        use rbflow_core::reduced_flow::{BoundaryKind, DtPolicy, Integrator, SolverConfig};
        let integrator = match self.integrator.as_str() {
            "rk4" => Integrator::ExplicitRk4,
            "euler" => Integrator::ExplicitEuler,
            other => {
                return Err(RunError::Validation(format!(
                    "unknown integrator {other:?} (expected \"rk4\" or \"euler\") [cli::config]"
                )))
            }
        };
        let dt = match (self.dt_fixed, self.cfl) {
            (Some(dt), _) => DtPolicy::Fixed(dt),
            (None, Some(c)) => DtPolicy::Cfl(c),
            (None, None) => DtPolicy::Cfl(0.4),
        };
        let boundary = match self.boundary.as_str() {
            "dirichlet-exact" => BoundaryKind::DirichletFromExact,
            "neumann-zero" => BoundaryKind::NeumannZero,
            other => {
                return Err(RunError::Validation(format!(
                    "unknown boundary {other:?} (expected \"dirichlet-exact\" or \"neumann-zero\") \
                     [cli::config]"
                )))
            }
        };
        Ok(SolverConfig {
            integrator,
            dt,
            boundary,
            u_floor: self.u_floor,
            freeze_metric: self.freeze_metric,
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub times: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    #[serde(default = "default_p")]
    pub p: f64,
    /// When absent, q = 1 + ln D with D measured from the trajectory.
    pub q: Option<f64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_t_window")]
    pub t_window: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_npts")]
    pub npts: usize,
}

fn default_p() -> f64 {
    1.0
}
fn default_delta() -> f64 {
    1.0
}
fn default_radius() -> f64 {
    4.0
}
fn default_t_window() -> f64 {
    0.5
}
fn default_samples() -> usize {
    40
}
fn default_margin() -> f64 {
    0.2
}
fn default_npts() -> usize {
    201
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            p: default_p(),
            q: None,
            delta: default_delta(),
            radius: default_radius(),
            t_window: default_t_window(),
            samples: default_samples(),
            margin: default_margin(),
            npts: default_npts(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowCheckConfig {
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default = "default_dt_fd")]
    pub dt_fd: f64,
    /// Residual tolerance; default depends on the scenario.
    pub tolerance: Option<f64>,
    /// Optional warping perturbation factor (detection runs).
    pub perturb: Option<f64>,
    /// Optional warping-exponent shift (detection runs).
    pub perturb_exponent: Option<f64>,
}

fn default_points() -> usize {
    20
}
fn default_dt_fd() -> f64 {
    1e-4
}

impl Default for FlowCheckConfig {
    fn default() -> Self {
        Self {
            points: default_points(),
            dt_fd: default_dt_fd(),
            tolerance: None,
            perturb: None,
            perturb_exponent: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzCheckConfig {
    #[serde(default = "default_ansatz_points")]
    pub points: usize,
    #[serde(default = "default_ansatz_tol")]
    pub tolerance: f64,
}

fn default_ansatz_points() -> usize {
    50
}
fn default_ansatz_tol() -> f64 {
    1e-10
}

impl Default for AnsatzCheckConfig {
    fn default() -> Self {
        Self {
            points: default_ansatz_points(),
            tolerance: default_ansatz_tol(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    #[serde(default = "default_classify_samples")]
    pub samples: usize,
    #[serde(default = "default_decades")]
    pub decades: f64,
}

fn default_classify_samples() -> usize {
    24
}
fn default_decades() -> f64 {
    4.0
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            samples: default_classify_samples(),
            decades: default_decades(),
        }
    }
}

/// The full run configuration. Every section is optional; per-mode defaults
/// fill the gaps.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: Option<u32>,
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub scenario: Option<ScenarioRef>,
    pub grid: Option<GridConfig>,
    pub solver: Option<SolverTomlConfig>,
    pub output: Option<OutputConfig>,
    pub estimate: Option<EstimateConfig>,
    pub flow_check: Option<FlowCheckConfig>,
    pub ansatz_check: Option<AnsatzCheckConfig>,
    pub classify: Option<ClassifyConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| RunError::Validation(format!("cannot parse {}: {e}", path.display())))?;
        if let Some(v) = cfg.schema_version {
            if v != SCHEMA_VERSION {
                return Err(RunError::Validation(format!(
                    "unsupported schema_version {v} (this build reads {SCHEMA_VERSION}) [cli::config]"
                )));
            }
        }
        Ok(cfg)
    }

    pub fn scenario_name(&self) -> Option<&str> {
        self.scenario.as_ref().and_then(|s| match s.kind.as_str() {
            "catalog" => s.name.as_deref(),
            "heat" => Some("heat"),
            _ => None,
        })
    }
}
