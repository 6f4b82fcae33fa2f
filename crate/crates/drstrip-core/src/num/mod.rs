//! Numerical kernels: special functions, root finding, and the banded /
//! tridiagonal symmetric eigensolvers used by the discretizations.

pub mod band;
pub mod bessel;
pub mod rng;
pub mod roots;
pub mod tridiag;
