//! Scalar coefficient profiles along the strip axis.
//!
//! Curvature and boundary-coefficient data enter either as closed forms
//! (constants, smooth compactly supported bumps) or as sampled tables from
//! external files. All variants expose evaluation, a sup-norm over an
//! interval, and support metadata; hypothesis checks (`sup |kappa| a < 1`)
//! and inequality constants consume the sup-norm, so it is exact for the
//! primitive variants and a dense sampled estimate only for sums.

use crate::{Error, Result};
use alloc::vec::Vec;
use libm::{exp, fabs};

/// Where a profile can be nonzero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Support {
    /// Identically zero.
    Empty,
    /// Vanishes outside the closed interval.
    Bounded(f64, f64),
    /// No bounded vanishing interval (e.g. nonzero constant).
    Unbounded,
}

/// Piecewise-smooth scalar function of the arclength coordinate.
#[derive(Clone, Debug)]
pub enum Profile {
    /// Constant value everywhere.
    Const(f64),
    /// `amplitude * exp(1 - 1/(1 - u^2))` with `u = (s - center)/halfwidth`,
    /// zero for `|u| >= 1`. Smooth, compactly supported, peak = amplitude.
    Bump {
        center: f64,
        halfwidth: f64,
        amplitude: f64,
    },
    /// Piecewise-linear interpolation of `(s, v)` samples with strictly
    /// increasing abscissae; zero outside the sampled range.
    Samples { s: Vec<f64>, v: Vec<f64> },
    /// Pointwise sum of profiles.
    Sum(Vec<Profile>),
}

impl Profile {
    pub fn bump(center: f64, halfwidth: f64, amplitude: f64) -> Result<Profile> {
        if !(halfwidth > 0.0) || !center.is_finite() || !amplitude.is_finite() {
            return Err(Error::invalid("bump profile: halfwidth must be positive"));
        }
        Ok(Profile::Bump {
            center,
            halfwidth,
            amplitude,
        })
    }

    pub fn samples(s: Vec<f64>, v: Vec<f64>) -> Result<Profile> {
        if s.len() != v.len() || s.len() < 2 {
            return Err(Error::invalid("sample profile: need >= 2 (s, v) pairs"));
        }
        if s.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("sample profile: s must increase strictly"));
        }
        if s.iter().chain(v.iter()).any(|x| !x.is_finite()) {
            return Err(Error::invalid("sample profile: non-finite entry"));
        }
        Ok(Profile::Samples { s, v })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Const(c) => *c,
            Profile::Bump {
                center,
                halfwidth,
                amplitude,
            } => {
                let u = (x - center) / halfwidth;
                let w = 1.0 - u * u;
                if w <= 0.0 {
                    0.0
                } else {
                    amplitude * exp(1.0 - 1.0 / w)
                }
            }
            Profile::Samples { s, v } => {
                let n = s.len();
                if x < s[0] || x > s[n - 1] {
                    return 0.0;
                }
                // Binary search for the containing panel.
                let mut lo = 0;
                let mut hi = n - 1;
                while hi - lo > 1 {
                    let mid = (lo + hi) / 2;
                    if s[mid] <= x {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let w = (x - s[lo]) / (s[hi] - s[lo]);
                v[lo] + w * (v[hi] - v[lo])
            }
            Profile::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
        }
    }

    /// sup of |f| over [lo, hi]. Exact for Const/Bump/Samples; for Sum it
    /// is a dense sampled estimate (breakpoints plus a fine uniform grid).
    pub fn sup_norm(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Profile::Const(c) => fabs(*c),
            Profile::Bump {
                center,
                halfwidth,
                amplitude,
            } => {
                // |f| increases toward the center; max at the point of the
                // interval closest to `center`.
                let x = center.clamp(lo, hi);
                let u = (x - center) / halfwidth;
                let w = 1.0 - u * u;
                if w <= 0.0 {
                    0.0
                } else {
                    fabs(*amplitude) * exp(1.0 - 1.0 / w)
                }
            }
            Profile::Samples { s, v } => {
                // Piecewise linear: extrema at nodes or interval endpoints.
                let mut m = fabs(self.eval(lo)).max(fabs(self.eval(hi)));
                for (si, vi) in s.iter().zip(v) {
                    if *si >= lo && *si <= hi {
                        m = m.max(fabs(*vi));
                    }
                }
                m
            }
            Profile::Sum(_) => {
                let n = 8192;
                let mut m = 0.0f64;
                for i in 0..=n {
                    let x = lo + (hi - lo) * i as f64 / n as f64;
                    m = m.max(fabs(self.eval(x)));
                }
                m
            }
        }
    }

    pub fn support(&self) -> Support {
        match self {
            Profile::Const(c) => {
                if *c == 0.0 {
                    Support::Empty
                } else {
                    Support::Unbounded
                }
            }
            Profile::Bump {
                center,
                halfwidth,
                amplitude,
            } => {
                if *amplitude == 0.0 {
                    Support::Empty
                } else {
                    Support::Bounded(center - halfwidth, center + halfwidth)
                }
            }
            Profile::Samples { s, v } => {
                if v.iter().all(|&x| x == 0.0) {
                    Support::Empty
                } else {
                    Support::Bounded(s[0], *s.last().unwrap())
                }
            }
            Profile::Sum(parts) => {
                let mut acc = Support::Empty;
                for p in parts {
                    acc = match (acc, p.support()) {
                        (a, Support::Empty) => a,
                        (Support::Empty, b) => b,
                        (Support::Unbounded, _) | (_, Support::Unbounded) => {
                            return Support::Unbounded
                        }
                        (Support::Bounded(a0, a1), Support::Bounded(b0, b1)) => {
                            Support::Bounded(a0.min(b0), a1.max(b1))
                        }
                    };
                }
                acc
            }
        }
    }
}
