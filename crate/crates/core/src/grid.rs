//! Uniform 1-D grids and finite-difference stencils.

use alloc::vec::Vec;
use core::fmt;

/// Uniform grid on `[x_lo, x_hi]` with `npts >= 3` nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    pub x_lo: f64,
    pub x_hi: f64,
    pub npts: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridError {
    pub x_lo: f64,
    pub x_hi: f64,
    pub npts: usize,
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invalid grid: x_lo={}, x_hi={}, npts={} (need finite x_lo < x_hi and npts >= 3) [grid]",
            self.x_lo, self.x_hi, self.npts
        )
    }
}

impl core::error::Error for GridError {}

impl Grid1D {
    pub fn new(x_lo: f64, x_hi: f64, npts: usize) -> Result<Self, GridError> {
        if !(x_lo.is_finite() && x_hi.is_finite()) || x_lo >= x_hi || npts < 3 {
            return Err(GridError { x_lo, x_hi, npts });
        }
        Ok(Self { x_lo, x_hi, npts })
    }

    /// Node spacing.
    pub fn h(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.npts - 1) as f64
    }

    /// Coordinate of node `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + self.h() * i as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.npts).map(|i| self.x(i))
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let t = (x - self.x_lo) / self.h();
        if t <= 0.0 {
            return 0;
        }
        let i = (t + 0.5) as usize;
        i.min(self.npts - 1)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.x_lo && x <= self.x_hi
    }
}

/// First derivative at node `i`, second order (centered interior, one-sided ends).
pub fn d1(u: &[f64], i: usize, h: f64) -> f64 {
    let n = u.len();
    if i == 0 {
        (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h)
    } else if i == n - 1 {
        (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h)
    } else {
        (u[i + 1] - u[i - 1]) / (2.0 * h)
    }
}

/// Second derivative at node `i`, second order (centered interior, one-sided ends).
pub fn d2(u: &[f64], i: usize, h: f64) -> f64 {
    let n = u.len();
    if i == 0 {
        (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h)
    } else if i == n - 1 {
        (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / (h * h)
    } else {
        (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h)
    }
}

/// Fourth-order centered first derivative. Needs `2 <= i < n-2`.
pub fn d1_c4(u: &[f64], i: usize, h: f64) -> f64 {
    (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (12.0 * h)
}

/// Fourth-order centered second derivative. Needs `2 <= i < n-2`.
pub fn d2_c4(u: &[f64], i: usize, h: f64) -> f64 {
    (-u[i + 2] + 16.0 * u[i + 1] - 30.0 * u[i] + 16.0 * u[i - 1] - u[i - 2]) / (12.0 * h * h)
}

/// Signed arclength from node `i0` to node `i` under the metric `A(x) dx²`,
/// by trapezoidal quadrature of `sqrt(A)`.
pub fn arclength(metric: &[f64], grid: &Grid1D, i0: usize, i: usize) -> f64 {
    let h = grid.h();
    let (lo, hi, sign) = if i >= i0 { (i0, i, 1.0) } else { (i, i0, -1.0) };
    let mut s = 0.0;
    for k in lo..hi {
        s += 0.5 * (crate::math::sqrt(metric[k]) + crate::math::sqrt(metric[k + 1])) * h;
    }
    sign * s
}

/// Log-spaced sample points in `[lo, hi]`, both endpoints included.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (llo, lhi) = (crate::math::ln(lo), crate::math::ln(hi));
    (0..n)
        .map(|i| crate::math::exp(llo + (lhi - llo) * i as f64 / (n - 1) as f64))
        .collect()
}
