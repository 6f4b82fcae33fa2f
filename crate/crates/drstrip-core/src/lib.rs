//! Spectral thresholds of curved planar strips with mixed
//! Dirichlet-Robin boundary conditions.
//!
//! A strip of half-width `a` around a plane curve with signed curvature
//! `kappa(s)` carries curvilinear coordinates (s, t) with Jacobian
//! g(s, t) = 1 - kappa(s) t. The Laplacian with a Dirichlet condition on
//! the edge t = -a and a Robin condition (coefficient `alpha(s)`) on
//! t = +a is bounded below by the lowest eigenvalue of a one-dimensional
//! transverse operator; this crate computes those transverse thresholds,
//! their curvature derivatives and flat/critical limits, the full
//! two-dimensional ground states they bound, and the Hardy-type weights
//! that quantify the gap for asymptotically straight strips.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats, and the
//! command-line interface live in the companion `drstrip-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod annulus;
pub mod error;
pub mod geometry;
pub mod hardy;
pub mod num;
pub mod profile;
pub mod strip2d;
pub mod transverse;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;
