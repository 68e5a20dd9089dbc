//! Numerical core for warped-product solutions of the Ricci-Bourguignon flow.
//!
//! The flow `∂ₜḡ = −2(Ric + ∇²φ − ρ S ḡ)` restricted to warped metrics
//! `ḡ(t) = g(t) + f(t)² g_F` over a base manifold reduces to a coupled
//! system for the base metric and the warping function, and the substitution
//! `u = f^{1/σ}` turns the warping equation into a scalar parabolic equation
//! with a power nonlinearity. This crate implements that reduction and the
//! machinery built on top of it:
//!
//! - [`params`]: the scalar parameter algebra (σ, unified coefficients,
//!   nonlinearity regimes).
//! - [`geometry`]: curvature and differential-operator kernels for conformal
//!   base metrics and warped products.
//! - [`ansatz`]: the ODE system of the conformal ansatz, a catalog of
//!   explicit closed-form flow solutions, and a direct flow-residual checker.
//! - [`reduced_flow`]: an explicit method-of-lines solver for the scalar
//!   equation and the coupled base system on 1-D grids.
//! - [`estimate`]: the parabolic gradient-estimate toolkit (log transform,
//!   cut-off construction, bound bracket, evolution-identity check, weighted
//!   Laplacian comparison, empirical estimate verifier).
//! - [`classify`]: Hamilton-type classification of maximal solutions from
//!   curvature-scale profiles.
//!
//! The crate is `no_std`-compatible (`--no-default-features --features libm`);
//! all containers come from `alloc` and float math is routed through a small
//! internal shim that picks std intrinsics or `libm`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub(crate) mod math;

pub mod ansatz;
pub mod classify;
pub mod estimate;
pub mod geometry;
pub mod grid;
pub mod params;
pub mod profile;
pub mod reduced_flow;
pub mod rng;
