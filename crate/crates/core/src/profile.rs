//! Scalar profiles of the ansatz variable ξ with derivative access.
//!
//! The ansatz looks for a conformal factor μ(ξ), a warping profile f(ξ) and
//! a drift profile φ(ξ) along `ξ(x) = ⟨x, axis⟩`. Profiles are either
//! closed-form catalog entries with analytic first and second derivatives,
//! or sampled grids differentiated with fourth-order centered stencils.
//! A [`ProfileSet`] never mixes the two kinds, so discretization error stays
//! attributable to one source.

use alloc::vec::Vec;
use core::fmt;

use crate::grid::{d1_c4, d2_c4, Grid1D};
use crate::math;

/// Closed interval used for profile domains and time domains.
/// Endpoints may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    /// Strict interior with a relative margin, for finite-difference probes.
    pub fn interior(&self, x: f64, margin: f64) -> bool {
        x > self.lo + margin && x < self.hi - margin
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileError {
    /// Evaluation point outside the declared domain.
    Domain { xi: f64, lo: f64, hi: f64 },
    /// A profile that must stay positive reached a nonpositive value.
    Positivity {
        what: &'static str,
        value: f64,
        xi: f64,
    },
}

impl fmt::Display for ProfileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileError::Domain { xi, lo, hi } => {
                write!(f, "xi={xi} outside profile domain [{lo}, {hi}] [profile]")
            }
            ProfileError::Positivity { what, value, xi } => {
                write!(f, "{what}({xi}) = {value} must be positive [profile]")
            }
        }
    }
}

impl core::error::Error for ProfileError {}

/// Closed-form profile shapes. Each evaluates to (value, d/dξ, d²/dξ²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProfileKind {
    Constant(f64),
    /// `slope·ξ + offset`
    Linear { slope: f64, offset: f64 },
    /// `coeff·e^{rate·ξ}`
    Exp { coeff: f64, rate: f64 },
    /// `offset + coeff·e^{rate·ξ}`
    AffineExp { offset: f64, coeff: f64, rate: f64 },
    /// `coeff·ln ξ`, ξ > 0
    Log { coeff: f64 },
    /// `cosh ξ`
    Cosh,
    /// `ξ^exponent`, ξ > 0
    Power { exponent: f64 },
}

impl ProfileKind {
    pub fn eval2(&self, xi: f64) -> (f64, f64, f64) {
        match *self {
            ProfileKind::Constant(c) => (c, 0.0, 0.0),
            ProfileKind::Linear { slope, offset } => (slope * xi + offset, slope, 0.0),
            ProfileKind::Exp { coeff, rate } => {
                let e = coeff * math::exp(rate * xi);
                (e, rate * e, rate * rate * e)
            }
            ProfileKind::AffineExp {
                offset,
                coeff,
                rate,
            } => {
                let e = coeff * math::exp(rate * xi);
                (offset + e, rate * e, rate * rate * e)
            }
            ProfileKind::Log { coeff } => (coeff * math::ln(xi), coeff / xi, -coeff / (xi * xi)),
            ProfileKind::Cosh => (math::cosh(xi), math::sinh(xi), math::cosh(xi)),
            ProfileKind::Power { exponent } => {
                let v = math::powf(xi, exponent);
                (
                    v,
                    exponent * math::powf(xi, exponent - 1.0),
                    exponent * (exponent - 1.0) * math::powf(xi, exponent - 2.0),
                )
            }
        }
    }
}

/// Profile sampled on a uniform grid; derivatives by 4th-order centered
/// stencils, so queries must keep a two-cell margin from the ends.
#[derive(Clone, Debug)]
pub struct SampledProfile {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl SampledProfile {
    pub fn eval2(&self, xi: f64) -> Result<(f64, f64, f64), ProfileError> {
        let i = self.grid.nearest(xi);
        let h = self.grid.h();
        if i < 2 || i + 2 >= self.grid.npts || math::abs(self.grid.x(i) - xi) > 0.5 * h {
            return Err(ProfileError::Domain {
                xi,
                lo: self.grid.x(2),
                hi: self.grid.x(self.grid.npts - 3),
            });
        }
        Ok((
            self.values[i],
            d1_c4(&self.values, i, h),
            d2_c4(&self.values, i, h),
        ))
    }
}

#[derive(Clone, Debug)]
pub enum Profile {
    Analytic(ProfileKind),
    Sampled(SampledProfile),
}

impl Profile {
    pub fn eval2(&self, xi: f64) -> Result<(f64, f64, f64), ProfileError> {
        match self {
            Profile::Analytic(k) => Ok(k.eval2(xi)),
            Profile::Sampled(s) => s.eval2(xi),
        }
    }
}

/// The (μ, f, φ) triple with a shared domain. μ and f must stay positive.
#[derive(Clone, Debug)]
pub struct ProfileSet {
    pub mu: Profile,
    pub f: Profile,
    pub phi: Profile,
    pub domain: Interval,
}

impl ProfileSet {
    /// All-analytic set. Mixing analytic and sampled profiles is not
    /// representable; use [`ProfileSet::sampled`] for the grid-backed kind.
    pub fn analytic(mu: ProfileKind, f: ProfileKind, phi: ProfileKind, domain: Interval) -> Self {
        Self {
            mu: Profile::Analytic(mu),
            f: Profile::Analytic(f),
            phi: Profile::Analytic(phi),
            domain,
        }
    }

    pub fn sampled(mu: SampledProfile, f: SampledProfile, phi: SampledProfile) -> Self {
        let domain = Interval::new(mu.grid.x(2), mu.grid.x(mu.grid.npts - 3));
        Self {
            mu: Profile::Sampled(mu),
            f: Profile::Sampled(f),
            phi: Profile::Sampled(phi),
            domain,
        }
    }

    fn check_domain(&self, xi: f64) -> Result<(), ProfileError> {
        if !self.domain.contains(xi) {
            return Err(ProfileError::Domain {
                xi,
                lo: self.domain.lo,
                hi: self.domain.hi,
            });
        }
        Ok(())
    }

    /// μ and derivatives, enforcing μ > 0.
    pub fn mu2(&self, xi: f64) -> Result<(f64, f64, f64), ProfileError> {
        self.check_domain(xi)?;
        let v = self.mu.eval2(xi)?;
        if v.0 <= 0.0 {
            return Err(ProfileError::Positivity {
                what: "mu",
                value: v.0,
                xi,
            });
        }
        Ok(v)
    }

    /// f and derivatives, enforcing f > 0.
    pub fn f2(&self, xi: f64) -> Result<(f64, f64, f64), ProfileError> {
        self.check_domain(xi)?;
        let v = self.f.eval2(xi)?;
        if v.0 <= 0.0 {
            return Err(ProfileError::Positivity {
                what: "f",
                value: v.0,
                xi,
            });
        }
        Ok(v)
    }

    pub fn phi2(&self, xi: f64) -> Result<(f64, f64, f64), ProfileError> {
        self.check_domain(xi)?;
        self.phi.eval2(xi)
    }
}
