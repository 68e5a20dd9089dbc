//! Scalar parameter algebra of the warped reduction.
//!
//! With fiber dimension `m` and coupling `ρ`, the substitution `u = f^{1/σ}`
//! with
//!
//! ```text
//! σ = (1 − 2mρ) / (m − ρm² − mρ)
//! ```
//!
//! turns the warping-function equation into
//!
//! ```text
//! ∂ₜu = Δ_φ u − a Δu + b u + c u^α,
//!     a = 2mρ,  b = (ρ/σ) S_g,  c = ((mρ−1)/(mσ)) S_F,  α = 1 − 2σ.
//! ```
//!
//! The substitution degenerates at `(m+1)ρ = 1` (σ pole). The sign of σ
//! sorts the nonlinearity into regimes; the exponent α may take any real
//! value as ρ varies.

use core::fmt;

/// Distance from the pole `(m+1)ρ = 1` below which parameters are rejected.
pub const POLE_TOL: f64 = 1e-12;

/// Nonlinearity regime of the unified equation, keyed on σ.
///
/// `ConstantSource` is the boundary σ = 1/2 (α = 0), where the nonlinear
/// term degenerates to a constant source `c·u⁰`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Superlinear,
    Linear,
    Sublinear,
    ConstantSource,
    Singular,
}

/// The change of variables `u = f^{1/σ}` is undefined at `(m+1)ρ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleError {
    pub rho: f64,
    pub m: u32,
}

impl fmt::Display for PoleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sigma pole: (m+1)*rho = 1 within {POLE_TOL} (rho={}, m={}); \
             the substitution u = f^(1/sigma) is undefined [params::derive_sigma]",
            self.rho, self.m
        )
    }
}

impl core::error::Error for PoleError {}

/// σ = (1 − 2mρ)/(m − ρm² − mρ), rejecting parameters within [`POLE_TOL`]
/// of the pole `(m+1)ρ = 1`. Near-pole values are rejected rather than
/// clamped: σ blows up there and downstream exponents lose meaning.
pub fn derive_sigma(rho: f64, m: u32) -> Result<f64, PoleError> {
    let mf = m as f64;
    if crate::math::abs((mf + 1.0) * rho - 1.0) <= POLE_TOL {
        return Err(PoleError { rho, m });
    }
    Ok((1.0 - 2.0 * mf * rho) / (mf - rho * mf * mf - mf * rho))
}

/// Regime of a finite σ. The boundaries σ = 0 and σ = 1/2 compare exactly.
pub fn regime_of(sigma: f64) -> Regime {
    if sigma < 0.0 {
        Regime::Superlinear
    } else if sigma == 0.0 {
        Regime::Linear
    } else if sigma < 0.5 {
        Regime::Sublinear
    } else if sigma == 0.5 {
        Regime::ConstantSource
    } else {
        Regime::Singular
    }
}

/// Parameter bundle: inputs (ρ, m, n, S_F) plus the derived σ, a = 2mρ,
/// α = 1 − 2σ and the regime tag.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowParams {
    pub rho: f64,
    /// Fiber dimension.
    pub m: u32,
    /// Base dimension.
    pub n: u32,
    /// Fiber scalar curvature.
    pub s_fiber: f64,
    pub sigma: f64,
    pub a_coeff: f64,
    pub alpha_exp: f64,
    pub regime: Regime,
}

impl FlowParams {
    pub fn new(rho: f64, m: u32, n: u32, s_fiber: f64) -> Result<Self, PoleError> {
        let sigma = derive_sigma(rho, m)?;
        Ok(Self {
            rho,
            m,
            n,
            s_fiber,
            sigma,
            a_coeff: 2.0 * m as f64 * rho,
            alpha_exp: 1.0 - 2.0 * sigma,
            regime: regime_of(sigma),
        })
    }

    /// `1 − a`, the diffusivity of the combined operator `Δ_φ − aΔ`.
    pub fn a_bar(&self) -> f64 {
        1.0 - self.a_coeff
    }

    /// The estimate machinery requires `a < 1` (equivalently `1 − 2mρ > 0`).
    pub fn is_weakly_parabolic(&self) -> bool {
        self.a_coeff < 1.0
    }
}

/// Coefficients of the unified parabolic equation at a point where the
/// base scalar curvature equals `s_base`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnifiedCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
}

/// Maps the warped reduction onto `∂ₜu = Δ_φu − aΔu + bu + cu^α`.
pub fn unified_coefficients(params: &FlowParams, s_base: f64) -> UnifiedCoeffs {
    let m = params.m as f64;
    UnifiedCoeffs {
        a: params.a_coeff,
        b: params.rho / params.sigma * s_base,
        c: (m * params.rho - 1.0) / (m * params.sigma) * params.s_fiber,
        alpha: params.alpha_exp,
    }
}
