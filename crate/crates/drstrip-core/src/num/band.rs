//! Symmetric banded matrices with shifted LDL^T factorization.
//!
//! The two-dimensional discretizations assemble into a symmetric banded
//! stiffness matrix `K` and a diagonal mass matrix `M`. Factoring
//! `K - sigma M = L D L^T` yields, besides a solver for inverse iteration,
//! the *inertia*: the number of negative entries of `D` equals the number
//! of generalized eigenvalues below `sigma` (Sylvester's law, `M` positive
//! definite). Every eigenvalue bracket downstream is certified by these
//! counts rather than trusted from iteration heuristics.
//!
//! No pivoting is performed; an indefinite shift that hits a near-zero
//! pivot returns [`Error::Factorization`] and the caller nudges `sigma`.

use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use libm::fabs;

/// Symmetric banded matrix, upper storage: entry `(i, i+j)` for
/// `0 <= j <= hbw` lives at `data[i*(hbw+1) + j]`.
#[derive(Clone, Debug)]
pub struct SymBand {
    n: usize,
    hbw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, hbw: usize) -> Self {
        SymBand {
            n,
            hbw,
            data: vec![0.0; n * (hbw + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.hbw
    }

    /// Entry (i, j); zero outside the band.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        let off = c - r;
        if off > self.hbw {
            0.0
        } else {
            self.data[r * (self.hbw + 1) + off]
        }
    }

    /// Add `v` to entry (i, j) (and by symmetry (j, i)). Panics if the
    /// entry falls outside the band: assembly bugs must not pass silently.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        let off = c - r;
        assert!(off <= self.hbw, "entry ({}, {}) outside band {}", i, j, self.hbw);
        self.data[r * (self.hbw + 1) + off] += v;
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        let w = self.hbw + 1;
        for i in 0..self.n {
            let mut s = self.data[i * w] * x[i];
            let jmax = (self.hbw).min(self.n - 1 - i);
            for j in 1..=jmax {
                s += self.data[i * w + j] * x[i + j];
            }
            let jlo = i.saturating_sub(self.hbw);
            for r in jlo..i {
                s += self.data[r * w + (i - r)] * x[r];
            }
            y[i] = s;
        }
    }
}

/// L D L^T factorization of `A - sigma M` (M diagonal), with inertia.
pub struct LdlFactor {
    n: usize,
    hbw: usize,
    /// Strictly-lower factor, banded: L(i, i-k) at `low[i*hbw + (k-1)]`.
    low: Vec<f64>,
    d: Vec<f64>,
    /// Number of negative pivots = number of generalized eigenvalues of
    /// (A, M) strictly below the factorization shift.
    pub neg: usize,
}

/// Factor `A - sigma * diag(m) = L D L^T`.
pub fn ldlt_shifted(a: &SymBand, m: &[f64], sigma: f64) -> Result<LdlFactor> {
    let n = a.n;
    let hbw = a.hbw;
    debug_assert_eq!(m.len(), n);
    let mut low = vec![0.0; n * hbw];
    let mut d = vec![0.0; n];
    // Breakdown scale: a pivot this small relative to the matrix means the
    // shift is numerically an eigenvalue; caller must nudge it.
    let mut scale = 0.0f64;
    for i in 0..n {
        scale = scale.max(fabs(a.at(i, i) - sigma * m[i]));
    }
    let breakdown = (scale.max(1e-300)) * 1e-14;

    for i in 0..n {
        let lo = i.saturating_sub(hbw);
        for j in lo..i {
            // L(i,j) = (A(i,j) - sum_k L(i,k) d_k L(j,k)) / d_j, k < j.
            let mut s = a.at(i, j);
            for k in lo..j {
                s -= low[i * hbw + (i - k - 1)] * d[k] * low[j * hbw + (j - k - 1)];
            }
            low[i * hbw + (i - j - 1)] = s / d[j];
        }
        let mut s = a.at(i, i) - sigma * m[i];
        for k in lo..i {
            let l = low[i * hbw + (i - k - 1)];
            s -= l * l * d[k];
        }
        if !s.is_finite() || fabs(s) < breakdown {
            return Err(Error::factorization("zero pivot: shift hits an eigenvalue"));
        }
        d[i] = s;
    }
    let neg = d.iter().filter(|&&x| x < 0.0).count();
    Ok(LdlFactor { n, hbw, low, d, neg })
}

impl LdlFactor {
    /// Solve (A - sigma M) x = b in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        debug_assert_eq!(b.len(), self.n);
        let hbw = self.hbw;
        // Forward: L y = b.
        for i in 0..self.n {
            let lo = i.saturating_sub(hbw);
            let mut s = b[i];
            for k in lo..i {
                s -= self.low[i * hbw + (i - k - 1)] * b[k];
            }
            b[i] = s;
        }
        // Diagonal.
        for i in 0..self.n {
            b[i] /= self.d[i];
        }
        // Backward: L^T x = y.
        for i in (0..self.n).rev() {
            let hi = (i + hbw).min(self.n - 1);
            let mut s = b[i];
            for r in i + 1..=hi {
                s -= self.low[r * hbw + (r - i - 1)] * b[r];
            }
            b[i] = s;
        }
    }
}

/// Number of generalized eigenvalues of (A, M) strictly below `sigma`,
/// retrying with slightly nudged shifts when the factorization breaks down.
pub fn eig_count_below(a: &SymBand, m: &[f64], sigma: f64) -> Result<usize> {
    let mut shift = sigma;
    let mut step = fabs(sigma).max(1.0) * 1e-12;
    for _ in 0..8 {
        match ldlt_shifted(a, m, shift) {
            Ok(f) => return Ok(f.neg),
            Err(_) => {
                shift = sigma + step;
                step *= 16.0;
            }
        }
    }
    Err(Error::factorization("eigenvalue count: persistent breakdown"))
}
