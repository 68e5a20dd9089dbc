//! Curvature and differential-operator kernels.
//!
//! Two families of formulas live here. For the conformally flat base metric
//! `g₀ = μ(ξ)⁻²⟨,⟩` on ℝⁿ with `ξ(x) = ⟨x, axis⟩`:
//!
//! ```text
//! Ric_ij = μ⁻²{ (n−2)αᵢαⱼ μμ'' + [μμ'' − (n−1)(μ')²] δᵢⱼ }
//! S      = (n−1)[ 2μμ'' − n(μ')² ]
//! (∇²f)_ij = αᵢαⱼ f'' + (2αᵢαⱼ − δᵢⱼ) μ⁻¹μ' f'
//! Δf     = μ²[ f'' − (n−2) μ⁻¹μ' f' ]
//! ∇f(φ)  = μ² f' φ',   ‖∇f‖² = μ² (f')²
//! ```
//!
//! For a warped product `g + f² g_F` over an Einstein fiber with
//! `Ric_F = κ g_F`, the component formulas:
//!
//! ```text
//! Ric|_H = Ric_g − (m/f) ∇²f
//! Ric|_V = [κ − (fΔf + (m−1)‖∇f‖²)] g_F
//! S̄     = S_g + S_F/f² − 2m Δf/f − m(m−1)‖∇f‖²/f²
//! ```
//!
//! One-dimensional bases are flat: `Ric ≡ 0`, `S ≡ 0` by dimension count,
//! and the kernels reduce consistently (the conformal formulas vanish on
//! their own for n = 1).

use alloc::vec::Vec;
use core::fmt;

use crate::grid::{d1, d2, Grid1D};
use crate::math;
use crate::profile::{Interval, ProfileError, ProfileSet};

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryError {
    Domain { xi: f64, lo: f64, hi: f64 },
    Positivity { what: &'static str, value: f64 },
    BadFrame { norm: f64 },
    BadIndex { i: usize, j: usize, n: usize },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Domain { xi, lo, hi } => {
                write!(f, "xi={xi} outside domain [{lo}, {hi}] [geometry]")
            }
            GeometryError::Positivity { what, value } => {
                write!(f, "{what} = {value} must be positive [geometry]")
            }
            GeometryError::BadFrame { norm } => {
                write!(f, "ansatz axis must be a unit vector, |axis| = {norm} [geometry]")
            }
            GeometryError::BadIndex { i, j, n } => {
                write!(f, "index ({i}, {j}) out of range for dimension {n} [geometry]")
            }
        }
    }
}

impl core::error::Error for GeometryError {}

impl From<ProfileError> for GeometryError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::Domain { xi, lo, hi } => GeometryError::Domain { xi, lo, hi },
            ProfileError::Positivity { what, value, .. } => {
                GeometryError::Positivity { what, value }
            }
        }
    }
}

/// Base dimension and the unit vector defining `ξ(x) = ⟨x, axis⟩`.
///
/// The axis is stored explicitly instead of being rotated onto the last
/// coordinate, so the `(n−2)αᵢαⱼ` cross terms stay exercised.
#[derive(Clone, Debug)]
pub struct AnsatzFrame {
    pub n: usize,
    pub axis: Vec<f64>,
    pub domain: Interval,
}

impl AnsatzFrame {
    /// Unit-norm tolerance for the axis: 1e-14.
    pub fn new(n: usize, axis: Vec<f64>, domain: Interval) -> Result<Self, GeometryError> {
        let norm_sq: f64 = axis.iter().map(|a| a * a).sum();
        let norm = math::sqrt(norm_sq);
        if axis.len() != n || math::abs(norm - 1.0) > 1e-14 {
            return Err(GeometryError::BadFrame { norm });
        }
        Ok(Self { n, axis, domain })
    }

    /// Axis-aligned frame with the last coordinate as the ansatz direction.
    pub fn last_axis(n: usize, domain: Interval) -> Self {
        let mut axis = alloc::vec![0.0; n];
        axis[n - 1] = 1.0;
        Self { n, axis, domain }
    }
}

fn check_index(i: usize, j: usize, n: usize) -> Result<(), GeometryError> {
    if i >= n || j >= n {
        return Err(GeometryError::BadIndex { i, j, n });
    }
    Ok(())
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// Ricci tensor component `Ric_ij` of `μ⁻²⟨,⟩` at ξ (coordinate basis,
/// zero-based indices).
pub fn conformal_ricci(
    ps: &ProfileSet,
    frame: &AnsatzFrame,
    xi: f64,
    i: usize,
    j: usize,
) -> Result<f64, GeometryError> {
    check_index(i, j, frame.n)?;
    let n = frame.n as f64;
    let (mu, dmu, ddmu) = ps.mu2(xi)?;
    let (ai, aj) = (frame.axis[i], frame.axis[j]);
    Ok(((n - 2.0) * ai * aj * mu * ddmu
        + (mu * ddmu - (n - 1.0) * dmu * dmu) * delta(i, j))
        / (mu * mu))
}

/// Scalar curvature `(n−1)[2μμ'' − n(μ')²]` of `μ⁻²⟨,⟩` at ξ.
pub fn conformal_scalar(ps: &ProfileSet, n: usize, xi: f64) -> Result<f64, GeometryError> {
    let nf = n as f64;
    let (mu, dmu, ddmu) = ps.mu2(xi)?;
    Ok((nf - 1.0) * (2.0 * mu * ddmu - nf * dmu * dmu))
}

/// Which profile a Hessian/Laplacian kernel differentiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSel {
    /// The warping profile f.
    Warp,
    /// The drift profile φ.
    Drift,
}

fn select2(ps: &ProfileSet, sel: FieldSel, xi: f64) -> Result<(f64, f64, f64), ProfileError> {
    match sel {
        FieldSel::Warp => ps.f2(xi),
        FieldSel::Drift => ps.phi2(xi),
    }
}

/// Hessian component `(∇²w)_ij = αᵢαⱼ w'' + (2αᵢαⱼ − δᵢⱼ) μ⁻¹μ' w'`
/// of the selected profile with respect to `μ⁻²⟨,⟩`.
pub fn conformal_hessian(
    ps: &ProfileSet,
    frame: &AnsatzFrame,
    sel: FieldSel,
    xi: f64,
    i: usize,
    j: usize,
) -> Result<f64, GeometryError> {
    check_index(i, j, frame.n)?;
    let (mu, dmu, _) = ps.mu2(xi)?;
    let (_, dw, ddw) = select2(ps, sel, xi)?;
    let (ai, aj) = (frame.axis[i], frame.axis[j]);
    Ok(ai * aj * ddw + (2.0 * ai * aj - delta(i, j)) * dmu / mu * dw)
}

/// Laplacian `Δw = μ²[w'' − (n−2) μ⁻¹μ' w']` of the selected profile
/// with respect to `μ⁻²⟨,⟩`.
pub fn conformal_laplacian(
    ps: &ProfileSet,
    sel: FieldSel,
    n: usize,
    xi: f64,
) -> Result<f64, GeometryError> {
    let nf = n as f64;
    let (mu, dmu, _) = ps.mu2(xi)?;
    let (_, dw, ddw) = select2(ps, sel, xi)?;
    Ok(mu * mu * (ddw - (nf - 2.0) * dmu / mu * dw))
}

/// The first-order terms `(∇f(φ), ‖∇f‖²) = (μ² f' φ', μ² (f')²)`.
pub fn grad_terms(ps: &ProfileSet, xi: f64) -> Result<(f64, f64), GeometryError> {
    let (mu, _, _) = ps.mu2(xi)?;
    let (_, df, _) = ps.f2(xi)?;
    let (_, dphi, _) = ps.phi2(xi)?;
    Ok((mu * mu * df * dphi, mu * mu * df * df))
}

/// Sectional curvature of `μ⁻²⟨,⟩` on the coordinate plane `(eᵢ, eⱼ)`,
/// `i ≠ j`. Conformally flat metrics have zero Weyl tensor, so the plane
/// curvature is determined by Ricci and scalar curvature alone; in
/// dimension two it is `S/2`.
pub fn conformal_sectional(
    ps: &ProfileSet,
    frame: &AnsatzFrame,
    xi: f64,
    i: usize,
    j: usize,
) -> Result<f64, GeometryError> {
    check_index(i, j, frame.n)?;
    let n = frame.n;
    if n < 2 || i == j {
        return Err(GeometryError::BadIndex { i, j, n });
    }
    let s = conformal_scalar(ps, n, xi)?;
    if n == 2 {
        return Ok(s / 2.0);
    }
    let (mu, _, _) = ps.mu2(xi)?;
    let nf = n as f64;
    // Schouten components A_kk = (Ric_kk − S/(2(n−1)) g_kk)/(n−2);
    // K(eᵢ,eⱼ) = μ²(A_ii + A_jj) for a diagonal conformally flat metric.
    let g_kk = 1.0 / (mu * mu);
    let a_ii =
        (conformal_ricci(ps, frame, xi, i, i)? - s / (2.0 * (nf - 1.0)) * g_kk) / (nf - 2.0);
    let a_jj =
        (conformal_ricci(ps, frame, xi, j, j)? - s / (2.0 * (nf - 1.0)) * g_kk) / (nf - 2.0);
    Ok(mu * mu * (a_ii + a_jj))
}

/// Small symmetric matrix of curvature components, dimension at most 4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymMat {
    pub n: usize,
    vals: [f64; 16],
}

impl SymMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1 && n <= 4);
        Self { n, vals: [0.0; 16] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.vals[i * 4 + j] = f(i, j);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.vals[i * 4 + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.vals[i * 4 + j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                m = math::max(m, math::abs(self.get(i, j)));
            }
        }
        m
    }
}

/// Base curvature data at a point, coordinate components.
#[derive(Clone, Debug)]
pub struct BaseCurvature {
    pub n: usize,
    pub ric: SymMat,
    pub scalar: f64,
}

impl BaseCurvature {
    /// One-dimensional bases are flat.
    pub fn one_dimensional() -> Self {
        Self {
            n: 1,
            ric: SymMat::zeros(1),
            scalar: 0.0,
        }
    }
}

/// Warping-function data at a point: value, Hessian components, Laplacian,
/// `‖∇f‖²` and `∇f(φ)`, all with respect to the base metric.
#[derive(Clone, Debug)]
pub struct WarpData {
    pub f: f64,
    pub hess: SymMat,
    pub laplacian: f64,
    pub grad_norm_sq: f64,
    pub grad_f_phi: f64,
}

/// Curvature components of the warped metric `g + f² g_F`.
#[derive(Clone, Debug)]
pub struct WarpedCurvature {
    pub ric_horizontal: SymMat,
    /// Coefficient of `g_F` in the vertical Ricci block.
    pub ric_vertical_coeff: f64,
    pub scalar: f64,
}

/// Assembles warped-product curvature from base curvature and warping data.
/// `ric_fiber_coeff` is the Einstein coefficient κ with `Ric_F = κ g_F`.
pub fn warped_components(
    base: &BaseCurvature,
    warp: &WarpData,
    m: u32,
    s_fiber: f64,
    ric_fiber_coeff: f64,
) -> Result<WarpedCurvature, GeometryError> {
    if warp.f <= 0.0 {
        return Err(GeometryError::Positivity {
            what: "warping function",
            value: warp.f,
        });
    }
    let mf = m as f64;
    let f = warp.f;
    let ric_horizontal = SymMat::from_fn(base.n, |i, j| {
        base.ric.get(i, j) - mf / f * warp.hess.get(i, j)
    });
    let ric_vertical_coeff =
        ric_fiber_coeff - (f * warp.laplacian + (mf - 1.0) * warp.grad_norm_sq);
    let scalar = base.scalar + s_fiber / (f * f)
        - 2.0 * mf * warp.laplacian / f
        - mf * (mf - 1.0) * warp.grad_norm_sq / (f * f);
    Ok(WarpedCurvature {
        ric_horizontal,
        ric_vertical_coeff,
        scalar,
    })
}

/// Drifted Laplacian `Δ_φ u = Δu − ⟨∇φ, ∇u⟩` at node `i` of a 1-D grid
/// with metric `A(x) dx²`.
pub fn drifted_laplacian(
    u: &[f64],
    phi: &[f64],
    metric: &[f64],
    grid: &Grid1D,
    i: usize,
) -> Result<f64, GeometryError> {
    if i >= grid.npts {
        return Err(GeometryError::BadIndex {
            i,
            j: 0,
            n: grid.npts,
        });
    }
    let a = metric[i];
    if a <= 0.0 {
        return Err(GeometryError::Positivity {
            what: "metric factor",
            value: a,
        });
    }
    let h = grid.h();
    let du = d1(u, i, h);
    let ddu = d2(u, i, h);
    let da = d1(metric, i, h);
    let dphi = d1(phi, i, h);
    // Δu = (1/A)(u'' − (A'/2A)u'); ⟨∇φ,∇u⟩ = φ'u'/A.
    Ok((ddu - da / (2.0 * a) * du) / a - dphi * du / a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ProfileKind;

    fn hyperbolic_set(n: usize) -> (ProfileSet, AnsatzFrame) {
        let ps = ProfileSet::analytic(
            ProfileKind::Linear {
                slope: 1.0,
                offset: 0.0,
            },
            ProfileKind::Linear {
                slope: 1.0,
                offset: 0.0,
            },
            ProfileKind::Log { coeff: 2.0 },
            Interval::new(1e-8, 1e8),
        );
        let frame = AnsatzFrame::last_axis(n, Interval::new(1e-8, 1e8));
        (ps, frame)
    }

    #[test]
    fn ricci_of_half_plane_metric() {
        let (ps, frame) = hyperbolic_set(2);
        // mu = xi, n = 2: Ric_11 = -1/xi^2.
        let r = conformal_ricci(&ps, &frame, 1.0, 0, 0).unwrap();
        assert!((r + 1.0).abs() < 1e-14);
        let r = conformal_ricci(&ps, &frame, 2.0, 1, 1).unwrap();
        assert!((r + 0.25).abs() < 1e-14);
        // off-diagonal vanishes for n = 2
        assert_eq!(conformal_ricci(&ps, &frame, 1.0, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn constant_mu_is_flat() {
        let ps = ProfileSet::analytic(
            ProfileKind::Constant(2.0),
            ProfileKind::Constant(1.0),
            ProfileKind::Constant(0.0),
            Interval::new(-10.0, 10.0),
        );
        let frame = AnsatzFrame::last_axis(3, Interval::new(-10.0, 10.0));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(conformal_ricci(&ps, &frame, 0.5, i, j).unwrap(), 0.0);
            }
        }
        assert_eq!(conformal_scalar(&ps, 3, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn exponential_mu_in_dimension_two_is_flat() {
        let ps = ProfileSet::analytic(
            ProfileKind::Exp {
                coeff: 1.0,
                rate: 1.0,
            },
            ProfileKind::Constant(1.0),
            ProfileKind::Constant(0.0),
            Interval::new(-10.0, 10.0),
        );
        let frame = AnsatzFrame::last_axis(2, Interval::new(-10.0, 10.0));
        for i in 0..2 {
            for j in 0..2 {
                let r = conformal_ricci(&ps, &frame, 0.0, i, j).unwrap();
                assert!(r.abs() < 1e-14, "Ric_{i}{j} = {r}");
            }
        }
    }

    #[test]
    fn scalar_curvature_examples() {
        let (ps, _) = hyperbolic_set(3);
        // mu = xi, n = 3: S = -6 everywhere (hyperbolic space).
        for &xi in &[0.3, 1.0, 7.0] {
            assert!((conformal_scalar(&ps, 3, xi).unwrap() + 6.0).abs() < 1e-12);
        }
        // mu = e^xi, n = 3 at xi = 0: S = (n-1)(2-n) e^{2 xi} = -2.
        let ps = ProfileSet::analytic(
            ProfileKind::Exp {
                coeff: 1.0,
                rate: 1.0,
            },
            ProfileKind::Constant(1.0),
            ProfileKind::Constant(0.0),
            Interval::new(-10.0, 10.0),
        );
        assert!((conformal_scalar(&ps, 3, 0.0).unwrap() + 2.0).abs() < 1e-14);
    }

    #[test]
    fn laplacian_examples() {
        // f constant: everything vanishes.
        let ps = ProfileSet::analytic(
            ProfileKind::Linear {
                slope: 1.0,
                offset: 0.0,
            },
            ProfileKind::Constant(3.0),
            ProfileKind::Constant(0.0),
            Interval::new(1e-8, 1e8),
        );
        let frame = AnsatzFrame::last_axis(2, Interval::new(1e-8, 1e8));
        assert_eq!(
            conformal_laplacian(&ps, FieldSel::Warp, 2, 1.0).unwrap(),
            0.0
        );
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    conformal_hessian(&ps, &frame, FieldSel::Warp, 1.0, i, j).unwrap(),
                    0.0
                );
            }
        }

        // f = xi, mu = xi, n = 2: Laplacian vanishes (f'' = 0, n-2 = 0).
        let (ps, _) = hyperbolic_set(2);
        for &xi in &[0.5, 1.0, 4.0] {
            assert_eq!(
                conformal_laplacian(&ps, FieldSel::Warp, 2, xi).unwrap(),
                0.0
            );
        }

        // f = xi^2, mu = 1, n = 3: flat Laplacian along one axis = 2.
        let ps = ProfileSet::analytic(
            ProfileKind::Constant(1.0),
            ProfileKind::Power { exponent: 2.0 },
            ProfileKind::Constant(0.0),
            Interval::new(1e-8, 1e8),
        );
        assert!((conformal_laplacian(&ps, FieldSel::Warp, 3, 1.5).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grad_terms_examples() {
        // phi constant: (0, mu^2 f'^2).
        let ps = ProfileSet::analytic(
            ProfileKind::Linear {
                slope: 2.0,
                offset: 0.0,
            },
            ProfileKind::Linear {
                slope: 1.0,
                offset: 0.0,
            },
            ProfileKind::Constant(5.0),
            Interval::new(1e-8, 1e8),
        );
        let (dfp, gsq) = grad_terms(&ps, 1.0).unwrap();
        assert_eq!(dfp, 0.0);
        assert!((gsq - 4.0).abs() < 1e-14);

        // mu = f = xi, phi = 2m ln xi at xi = 1, m = 1: (2, 1).
        let (ps, _) = hyperbolic_set(2);
        let (dfp, gsq) = grad_terms(&ps, 1.0).unwrap();
        assert!((dfp - 2.0).abs() < 1e-14);
        assert!((gsq - 1.0).abs() < 1e-14);

        // f constant: (0, 0).
        let ps = ProfileSet::analytic(
            ProfileKind::Linear {
                slope: 1.0,
                offset: 0.0,
            },
            ProfileKind::Constant(1.0),
            ProfileKind::Log { coeff: 1.0 },
            Interval::new(1e-8, 1e8),
        );
        assert_eq!(grad_terms(&ps, 2.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn warped_components_product_cases() {
        // f = 1, S_F = 0: plain product, S = S_g.
        let base = BaseCurvature {
            n: 2,
            ric: SymMat::from_fn(2, |i, j| if i == j { -1.0 } else { 0.0 }),
            scalar: -2.0,
        };
        let warp = WarpData {
            f: 1.0,
            hess: SymMat::zeros(2),
            laplacian: 0.0,
            grad_norm_sq: 0.0,
            grad_f_phi: 0.0,
        };
        let w = warped_components(&base, &warp, 3, 0.0, 0.0).unwrap();
        assert_eq!(w.scalar, -2.0);
        assert_eq!(w.ric_vertical_coeff, 0.0);
        assert_eq!(w.ric_horizontal.get(0, 0), -1.0);

        // f = 1 with a unit-sphere fiber: S = S_g + m(m-1).
        let m = 3u32;
        let s_f = (m * (m - 1)) as f64;
        let w = warped_components(&base, &warp, m, s_f, (m - 1) as f64).unwrap();
        assert_eq!(w.scalar, -2.0 + s_f);
    }

    #[test]
    fn warped_vertical_coefficient_for_cosh_profile() {
        // 1-D flat base, f = cosh r, fiber coefficient -(n-2), m = n-1:
        // vertical coefficient must be -(n-1) cosh^2 r.
        let n_total = 4u32;
        let m = n_total - 1;
        for &r in &[0.0, 0.7, 1.3] {
            let base = BaseCurvature::one_dimensional();
            let mut hess = SymMat::zeros(1);
            hess.set(0, 0, math::cosh(r));
            let warp = WarpData {
                f: math::cosh(r),
                hess,
                laplacian: math::cosh(r),
                grad_norm_sq: math::sinh(r) * math::sinh(r),
                grad_f_phi: 0.0,
            };
            let kappa = -((n_total - 2) as f64);
            let s_f = kappa * m as f64;
            let w = warped_components(&base, &warp, m, s_f, kappa).unwrap();
            let expect = -((n_total - 1) as f64) * math::cosh(r) * math::cosh(r);
            assert!(
                (w.ric_vertical_coeff - expect).abs() < 1e-12,
                "r={r}: {} vs {expect}",
                w.ric_vertical_coeff
            );
        }
    }

    #[test]
    fn warped_components_rejects_nonpositive_f() {
        let base = BaseCurvature::one_dimensional();
        let warp = WarpData {
            f: 0.0,
            hess: SymMat::zeros(1),
            laplacian: 0.0,
            grad_norm_sq: 0.0,
            grad_f_phi: 0.0,
        };
        assert!(matches!(
            warped_components(&base, &warp, 1, 0.0, 0.0),
            Err(GeometryError::Positivity { .. })
        ));
    }

    #[test]
    fn drifted_laplacian_examples() {
        let grid = Grid1D::new(0.0, 2.0, 201).unwrap();
        let h2 = grid.h() * grid.h();

        // phi constant: plain Laplacian of x^2 is 2.
        let u: Vec<f64> = grid.nodes().map(|x| x * x).collect();
        let phi = alloc::vec![0.0; grid.npts];
        let metric = alloc::vec![1.0; grid.npts];
        let i = grid.nearest(1.0);
        let v = drifted_laplacian(&u, &phi, &metric, &grid, i).unwrap();
        assert!((v - 2.0).abs() < 1e-9);

        // u = phi = x on a flat grid: 0 - 1*1 = -1.
        let u: Vec<f64> = grid.nodes().collect();
        let v = drifted_laplacian(&u, &u, &metric, &grid, i).unwrap();
        assert!((v + 1.0).abs() < 1e-9);

        // u = cosh r, phi = r at r = 1: cosh(1) - sinh(1).
        let u: Vec<f64> = grid.nodes().map(math::cosh).collect();
        let phi: Vec<f64> = grid.nodes().collect();
        let v = drifted_laplacian(&u, &phi, &metric, &grid, i).unwrap();
        let expect = math::cosh(1.0) - math::sinh(1.0);
        assert!((v - expect).abs() < 10.0 * h2, "{v} vs {expect}");
    }

    #[test]
    fn drifted_laplacian_rejects_degenerate_metric() {
        let grid = Grid1D::new(0.0, 1.0, 11).unwrap();
        let u = alloc::vec![1.0; 11];
        let mut metric = alloc::vec![1.0; 11];
        metric[5] = 0.0;
        assert!(matches!(
            drifted_laplacian(&u, &u, &metric, &grid, 5),
            Err(GeometryError::Positivity { .. })
        ));
    }

    #[test]
    fn frame_requires_unit_axis() {
        assert!(AnsatzFrame::new(2, alloc::vec![0.5, 0.5], Interval::new(0.0, 1.0)).is_err());
        assert!(AnsatzFrame::new(
            2,
            alloc::vec![core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2],
            Interval::new(0.0, 1.0)
        )
        .is_ok());
    }

    #[test]
    fn sectional_matches_constant_curvature_models() {
        // Half-space metric: K = -1 in any dimension.
        for n in 2..=4usize {
            let (ps, frame) = hyperbolic_set(n);
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let k = conformal_sectional(&ps, &frame, 1.7, i, j).unwrap();
                    assert!((k + 1.0).abs() < 1e-12, "n={n} K({i},{j}) = {k}");
                }
            }
        }
    }
}
