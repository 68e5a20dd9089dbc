//! Run errors mapped onto process exit codes.
//!
//! 0 = success, 1 = validation error, 2 = numerical failure
//! (floor breach, CFL violation and kin), 3 = property-check failure
//! (a residual or measured quantity beyond its tolerance).

use std::fmt;

#[derive(Debug)]
pub enum RunError {
    /// Bad configuration, unknown scenario, unusable inputs.
    Validation(String),
    /// The numerics gave up: floor breach, CFL violation, blow-down.
    Numerical(String),
    /// A verification check failed its tolerance.
    Property(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 1,
            RunError::Numerical(_) => 2,
            RunError::Property(_) => 3,
        }
    }

    pub fn validation(e: impl fmt::Display) -> Self {
        RunError::Validation(e.to_string())
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Validation(m) => write!(f, "validation error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical failure: {m}"),
            RunError::Property(m) => write!(f, "property-check failure: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Validation(format!("io: {e}"))
    }
}

impl From<rbflow_core::reduced_flow::FlowError> for RunError {
    fn from(e: rbflow_core::reduced_flow::FlowError) -> Self {
        use rbflow_core::reduced_flow::FlowError::*;
        match e {
            CflViolation { .. } | FloorBreach { .. } | NonParabolic { .. } => {
                RunError::Numerical(e.to_string())
            }
            _ => RunError::Validation(e.to_string()),
        }
    }
}

impl From<rbflow_core::ansatz::AnsatzError> for RunError {
    fn from(e: rbflow_core::ansatz::AnsatzError) -> Self {
        RunError::Validation(e.to_string())
    }
}

impl From<rbflow_core::classify::ClassifyError> for RunError {
    fn from(e: rbflow_core::classify::ClassifyError) -> Self {
        RunError::Validation(e.to_string())
    }
}

impl From<rbflow_core::estimate::EstimateError> for RunError {
    fn from(e: rbflow_core::estimate::EstimateError) -> Self {
        use rbflow_core::estimate::EstimateError::*;
        match e {
            DeltaViolation { .. } | HypothesisViolation { .. } => {
                RunError::Numerical(e.to_string())
            }
            _ => RunError::Validation(e.to_string()),
        }
    }
}

impl From<rbflow_core::grid::GridError> for RunError {
    fn from(e: rbflow_core::grid::GridError) -> Self {
        RunError::Validation(e.to_string())
    }
}
