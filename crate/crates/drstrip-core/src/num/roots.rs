//! Bracketed root finding for scalar functions.
//!
//! Secular functions in this crate (Bessel cross products, Sturm counts)
//! are cheap to evaluate and may oscillate, so the strategy is always the
//! same: scan a grid for a sign change, then bisect the bracket. Bisection
//! is preferred over faster schemes because it is unconditionally robust
//! and deterministic, which matters for reproducible sweeps.

use crate::{Error, Result};
use libm::fabs;

/// Maximum number of bisection halvings; 2^-200 underflows any tolerance.
const MAX_BISECT: usize = 200;

/// Refine a root of `f` inside `[lo, hi]` by bisection.
///
/// `flo` and `fhi` are the already-computed endpoint values; they must have
/// opposite (nonzero) signs. Stops when the bracket width drops below
/// `xtol` (absolute) and returns the bracket midpoint.
pub fn bisect<F>(f: F, lo: f64, hi: f64, flo: f64, fhi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::invalid("bisect: empty bracket"));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return Err(Error::invalid("bisect: endpoints do not straddle a root"));
    }
    let (mut lo, mut hi, mut flo) = (lo, hi, flo);
    for _ in 0..MAX_BISECT {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if (fmid > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Find the leftmost root of `f` in `[lo, hi]` by scanning `panels` equal
/// subintervals for a sign change and bisecting the first bracket found.
///
/// Returns `Err(Error::Solver)` when no sign change is detected, which
/// callers treat as "no eigenvalue in this window" and widen the window.
pub fn first_root<F>(f: F, lo: f64, hi: f64, panels: usize, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || panels == 0 {
        return Err(Error::invalid("first_root: empty scan interval"));
    }
    let h = (hi - lo) / panels as f64;
    let mut x0 = lo;
    let mut f0 = f(x0);
    if f0 == 0.0 {
        return Ok(x0);
    }
    for i in 1..=panels {
        // Recompute the abscissa from the index so the final node hits `hi`
        // exactly regardless of rounding in repeated addition.
        let x1 = if i == panels { hi } else { lo + h * i as f64 };
        let f1 = f(x1);
        if f1 == 0.0 {
            return Ok(x1);
        }
        if !f0.is_finite() || !f1.is_finite() {
            return Err(Error::solver("first_root: non-finite secular value"));
        }
        if (f0 > 0.0) != (f1 > 0.0) {
            return bisect(&f, x0, x1, f0, f1, xtol);
        }
        x0 = x1;
        f0 = f1;
    }
    Err(Error::solver("first_root: no sign change in scan window"))
}

/// Bisect for the boundary of a monotone predicate: returns `x` such that
/// `pred` is false on `[lo, x)` and true on `[x, hi]`, to within `xtol`.
///
/// `pred(hi)` must be true and `pred(lo)` false; used for critical-parameter
/// searches where the quantity of interest is a sign rather than a value.
pub fn predicate_boundary<P>(mut pred: P, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    P: FnMut(f64) -> bool,
{
    if !(lo < hi) {
        return Err(Error::invalid("predicate_boundary: empty bracket"));
    }
    if pred(lo) || !pred(hi) {
        return Err(Error::invalid(
            "predicate_boundary: predicate not bracketed by endpoints",
        ));
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..MAX_BISECT {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Convenience: absolute tolerance scaled to the magnitude of a bracket.
pub fn scaled_xtol(lo: f64, hi: f64, rtol: f64) -> f64 {
    let scale = fabs(lo).max(fabs(hi)).max(1.0);
    rtol * scale
}
