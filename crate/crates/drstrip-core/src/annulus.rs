//! Constant-curvature thresholds in closed form via cylinder functions.
//!
//! For constant curvature `kappa != 0` the substitution r = (1 - kappa t)/|kappa|
//! turns the transverse problem into the radial Laplacian on an annulus:
//! the Dirichlet edge t = -a maps to radius `(1 + |kappa| a)/|kappa|` when
//! kappa > 0 (outer) and `(1 - |kappa| a)/|kappa|` when kappa < 0 (inner);
//! the Robin edge t = +a maps to the other radius. Eigenvalues are zeros of
//! a cross product of cylinder functions, giving an evaluation path wholly
//! independent of any mesh — the oracle against which the finite-difference
//! solver is checked.
//!
//! The secular function is a single entire function of the spectral
//! parameter, evaluated through three branches:
//! * oscillatory (J, Y) for lambda above a small window,
//! * evanescent (scaled I, K) below it, rescaled by a bounded exponential
//!   so deep Robin wells (|lambda| huge) neither overflow nor flip sign,
//! * an ascending-series branch inside the window, where the other two
//!   lose digits to the log singularities; the series form also evaluates
//!   lambda = 0 exactly, reproducing the zero-threshold curvature locus
//!   kappa = alpha (1 - kappa a) ln((1 - kappa a)/(1 + kappa a)).
//!
//! The flat limits kappa -> +-1/a connect to disc eigenvalues: the Robin
//! hole closes removably (fast convergence), the Dirichlet hole closes at
//! a 1/ln(1/eps) rate, which the extrapolation helpers account for.

use crate::num::{bessel, roots};
use crate::transverse::OuterBc;
use crate::{Error, Result};
use libm::{exp, fabs, log, sqrt};

use core::f64::consts::{FRAC_2_PI, PI};

/// |lambda| window (in units of (2a)^{-2}) where the series branch takes
/// over from the J/Y and I/K branches.
pub const SERIES_WINDOW_COEFF: f64 = 1e-4;

/// Largest |lambda| r^2 the series branch accepts before alternating-term
/// cancellation costs digits; beyond it the standard branches are accurate
/// anyway (arguments are large).
const SERIES_Z_MAX: f64 = 30.0;

/// Exponent budget before the evanescent branch rescales: e^600 stays
/// comfortably inside f64 range while leaving headroom for the cross terms.
const EXP_BUDGET: f64 = 600.0;

/// Which branch of the secular function to evaluate. `Auto` picks by the
/// window rule; the explicit choices exist so the overlap of adjacent
/// branches can be verified directly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Branch {
    Auto,
    /// Ascending-series branch (entire in lambda, small |lambda| only).
    Series,
    /// J/Y or I/K branch according to the sign of lambda.
    Standard,
}

/// Annulus geometry for constant curvature.
struct Radii {
    /// Radius of the Dirichlet edge (t = -a).
    r_d: f64,
    /// Radius of the Robin edge (t = +a).
    r_r: f64,
    /// Sign of the outward normal derivative at the Robin edge in r:
    /// -1 when the Robin edge is the inner circle (kappa > 0), +1 when it
    /// is the outer circle (kappa < 0).
    sgn_r: f64,
}

fn radii(kappa: f64, a: f64) -> Radii {
    let b = fabs(kappa);
    if kappa > 0.0 {
        Radii {
            r_d: (1.0 + b * a) / b,
            r_r: (1.0 - b * a) / b,
            sgn_r: -1.0,
        }
    } else {
        Radii {
            r_d: (1.0 - b * a) / b,
            r_r: (1.0 + b * a) / b,
            sgn_r: 1.0,
        }
    }
}

fn validate(kappa: f64, a: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid("half-width a must be positive and finite"));
    }
    if !kappa.is_finite() || fabs(kappa) * a >= 1.0 {
        return Err(Error::invalid("thin-width condition |kappa| a < 1 violated"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// entire-series building blocks (lambda near zero)
// ---------------------------------------------------------------------------

const TERM_EPS: f64 = 1e-18;

/// phi(z) = sum (-z/4)^m / (m!)^2, so J0(x) = phi(x^2), I0(x) = phi(-x^2).
fn phi(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..60 {
        let mf = m as f64;
        term *= -z / (4.0 * mf * mf);
        sum += term;
        if fabs(term) < TERM_EPS * fabs(sum).max(1e-300) {
            break;
        }
    }
    sum
}

/// sigma(z) = sum_{m>=1} (-1)^{m+1} H_m (z/4)^m / (m!)^2, the regular part
/// of Y0: Y0(x) = (2/pi)[(ln(x/2) + gamma) J0(x) + sigma(x^2)].
fn sigma(z: f64) -> f64 {
    let mut t = 1.0;
    let mut h = 0.0;
    let mut sign = 1.0;
    let mut sum = 0.0;
    for m in 1..60 {
        let mf = m as f64;
        t *= z / (4.0 * mf * mf);
        h += 1.0 / mf;
        let term = sign * h * t;
        sum += term;
        sign = -sign;
        if fabs(term) < TERM_EPS * fabs(sum).max(1e-300) {
            break;
        }
    }
    sum
}

/// phi1(z) = sum (-1)^m (z/4)^m / (m!(m+1)!), so J1(x) = (x/2) phi1(x^2).
fn phi1(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..60 {
        let mf = m as f64;
        term *= -z / (4.0 * mf * (mf + 1.0));
        sum += term;
        if fabs(term) < TERM_EPS * fabs(sum).max(1e-300) {
            break;
        }
    }
    sum
}

/// sigma1(z) = sum (-1)^k (H_k + H_{k+1}) (z/4)^k / (k!(k+1)!), the regular
/// series in Y1(x) = (2/pi)(ln(x/2)+gamma) J1(x) - 2/(pi x) - (x/(2 pi)) sigma1(x^2).
fn sigma1(z: f64) -> f64 {
    let mut t = 1.0;
    let mut h = 0.0;
    let mut sign = 1.0;
    let mut sum = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            t *= z / (4.0 * kf * (kf + 1.0));
            h += 1.0 / kf;
        }
        let term = sign * (2.0 * h + 1.0 / (kf + 1.0)) * t;
        sum += term;
        sign = -sign;
        if k > 0 && fabs(term) < TERM_EPS * fabs(sum).max(1e-300) {
            break;
        }
    }
    sum
}

// ---------------------------------------------------------------------------
// secular function
// ---------------------------------------------------------------------------

/// Cross products C0, C1 through the oscillatory / evanescent branches.
/// Both are entire continuations of the same functions; the evanescent
/// side is rescaled by exp(-max(0, |mu (r_d - r_r)| - budget)), a positive
/// factor that preserves roots and signs.
fn cross_standard(lam: f64, g: &Radii) -> (f64, f64) {
    if lam >= 0.0 {
        let k = sqrt(lam);
        let (xd, xr) = (k * g.r_d, k * g.r_r);
        let (jd, yd) = (bessel::j0(xd), bessel::y0(xd));
        let c0 = jd * bessel::y0(xr) - yd * bessel::j0(xr);
        let c1 = k * (jd * bessel::y1(xr) - yd * bessel::j1(xr));
        (c0, c1)
    } else {
        let mu = sqrt(-lam);
        let (xd, xr) = (mu * g.r_d, mu * g.r_r);
        let e1 = mu * (g.r_d - g.r_r);
        let s = (fabs(e1) - EXP_BUDGET).max(0.0);
        let ep = exp(e1 - s);
        let em = exp(-e1 - s);
        let (id, kd) = (bessel::i0_scaled(xd), bessel::k0_scaled(xd));
        let c0 = -FRAC_2_PI * (id * bessel::k0_scaled(xr) * ep - kd * bessel::i0_scaled(xr) * em);
        let c1 = -(2.0 * mu / PI)
            * (id * bessel::k1_scaled(xr) * ep + kd * bessel::i1_scaled(xr) * em);
        (c0, c1)
    }
}

/// Cross products through the ascending series: entire in lambda, accurate
/// for |lambda| r^2 small, exact at lambda = 0.
fn cross_series(lam: f64, g: &Radii) -> (f64, f64) {
    let zd = lam * g.r_d * g.r_d;
    let zr = lam * g.r_r * g.r_r;
    let lnr = log(g.r_r / g.r_d);
    let (pd, pr) = (phi(zd), phi(zr));
    let c0 = FRAC_2_PI * (pd * pr * lnr + pd * sigma(zr) - sigma(zd) * pr);
    let c1 = FRAC_2_PI
        * (0.5 * lam * g.r_r * phi1(zr) * pd * lnr - pd / g.r_r
            - 0.25 * lam * g.r_r * (sigma1(zr) * pd + 2.0 * phi1(zr) * sigma(zd)));
    (c0, c1)
}

/// Secular function F(lambda) for constant curvature: F vanishes exactly at
/// the eigenvalues of the transverse operator. `branch` selects the
/// evaluation path; `Auto` uses the series inside the window
/// |lambda| < SERIES_WINDOW_COEFF (2a)^{-2} (while |lambda| r^2 stays
/// small) and the standard pair outside.
pub fn secular_in_branch(
    lam: f64,
    kappa: f64,
    alpha: OuterBc,
    a: f64,
    branch: Branch,
) -> Result<f64> {
    validate(kappa, a)?;
    if kappa == 0.0 {
        return Err(Error::invalid("secular function needs kappa != 0"));
    }
    if !lam.is_finite() {
        return Err(Error::range("spectral parameter must be finite"));
    }
    let g = radii(kappa, a);
    let window = SERIES_WINDOW_COEFF / (4.0 * a * a);
    let z_big = fabs(lam) * g.r_d.max(g.r_r) * g.r_d.max(g.r_r);
    let use_series = match branch {
        Branch::Series => true,
        Branch::Standard => false,
        Branch::Auto => fabs(lam) < window && z_big < SERIES_Z_MAX,
    };
    if use_series && z_big > 4.0 * SERIES_Z_MAX {
        return Err(Error::range("series branch: |lambda| r^2 too large"));
    }
    let (c0, c1) = if use_series {
        cross_series(lam, &g)
    } else {
        cross_standard(lam, &g)
    };
    let f = match alpha {
        OuterBc::Dirichlet => c0,
        OuterBc::Robin(al) => -g.sgn_r * c1 + al * c0,
    };
    if !f.is_finite() {
        return Err(Error::range("secular function overflowed"));
    }
    Ok(f)
}

/// F(lambda) with automatic branch selection.
pub fn secular(lam: f64, kappa: f64, alpha: OuterBc, a: f64) -> Result<f64> {
    secular_in_branch(lam, kappa, alpha, a, Branch::Auto)
}

/// One evaluation of the secular function, tagged with the branch that
/// produced it (`Series` inside the near-zero window, `Standard` outside).
#[derive(Clone, Copy, Debug)]
pub struct CrossEval {
    pub lam: f64,
    pub value: f64,
    pub branch: Branch,
}

/// Evaluate F(lambda) and report which branch the window rule selected.
pub fn cross_eval(lam: f64, kappa: f64, alpha: OuterBc, a: f64) -> Result<CrossEval> {
    validate(kappa, a)?;
    if kappa == 0.0 {
        return Err(Error::invalid("secular function needs kappa != 0"));
    }
    let g = radii(kappa, a);
    let window = SERIES_WINDOW_COEFF / (4.0 * a * a);
    let rmax = g.r_d.max(g.r_r);
    let series = fabs(lam) < window && fabs(lam) * rmax * rmax < SERIES_Z_MAX;
    let branch = if series { Branch::Series } else { Branch::Standard };
    Ok(CrossEval {
        lam,
        value: secular_in_branch(lam, kappa, alpha, a, branch)?,
        branch,
    })
}

/// Below this |kappa| a the annulus radii exceed ~1e7 half-widths and the
/// floating-point representation of sqrt(lambda) * r no longer resolves the
/// cylinder-function phase; the straight-strip dispersion relation is then
/// the more accurate evaluation (its O(kappa) model error is smaller than
/// the phase noise).
const STRAIGHT_DISPATCH: f64 = 1e-7;

/// Lowest eigenvalue for constant curvature via the secular function.
/// Falls back to the straight-strip dispersion relation for negligible
/// curvature (see `STRAIGHT_DISPATCH`).
///
/// Search strategy: the Robin edge is a rank-one perturbation, so at most
/// one eigenvalue is negative: a single sign test over
/// [closed-form lower bound, 0] finds it. Otherwise the positive axis is
/// scanned upward in fine panels until the first zero.
pub fn lambda_bessel(kappa: f64, alpha: OuterBc, a: f64) -> Result<f64> {
    validate(kappa, a)?;
    if fabs(kappa) * a < STRAIGHT_DISPATCH {
        return crate::transverse::straight_lambda(alpha, a);
    }
    let u = 1.0 / (4.0 * a * a); // (2a)^{-2}, the natural spectral scale
    let f = |lam: f64| secular(lam, kappa, alpha, a).unwrap_or(f64::NAN);

    // Negative part: unique candidate below zero.
    let lb = crate::transverse::closed_form_lower_bound(kappa, alpha, a);
    if lb < 0.0 {
        let lo = lb - 0.02 * fabs(lb).max(u);
        let (flo, f0) = (f(lo), f(0.0));
        if flo.is_nan() || f0.is_nan() {
            return Err(Error::solver("secular function not finite on bracket"));
        }
        if f0 == 0.0 {
            return Ok(0.0);
        }
        if (flo > 0.0) != (f0 > 0.0) {
            let xtol = 1e-13 * fabs(lo).max(u);
            return roots::bisect(f, lo, 0.0, flo, f0, xtol);
        }
    }

    // Positive part: scan upward from 0 in windows; the gap between the
    // two lowest eigenvalues is O((pi/(2a))^2), far wider than a panel.
    let mut lo = 0.0;
    let width = 4.0 * PI * PI * u; // (pi/a)^2 per window
    for _ in 0..16 {
        let hi = lo + width;
        match roots::first_root(f, lo, hi, 2000, 1e-13 * hi) {
            Ok(r) => return Ok(r),
            Err(Error::Solver(_)) => lo = hi,
            Err(e) => return Err(e),
        }
    }
    Err(Error::solver("no eigenvalue found in the scan range"))
}

/// Curvature where the threshold crosses zero for a fixed Robin
/// coefficient: the positive root of
/// kappa = alpha (1 - kappa a) ln((1 - kappa a)/(1 + kappa a)).
/// Exists precisely for 2 a alpha < -1 (where the straight strip is
/// already negative); returns Some(0) at 2 a alpha = -1, None when the
/// threshold never crosses zero (2 a alpha > -1) or the input is bad.
pub fn zero_threshold_curvature(alpha: f64, a: f64) -> Option<f64> {
    if !(a > 0.0) || !alpha.is_finite() {
        return None;
    }
    let tau = 2.0 * a * alpha;
    if tau == -1.0 {
        return Some(0.0);
    }
    if tau > -1.0 {
        return None;
    }
    // G(kappa) = kappa - alpha (1 - kappa a) ln((1 - kappa a)/(1 + kappa a)):
    // G ~ kappa (1 + 2 a alpha) < 0 near 0, G -> 1/a > 0 at the width limit.
    let g = |k: f64| {
        let (m, p) = (1.0 - k * a, 1.0 + k * a);
        k - alpha * m * log(m / p)
    };
    let lo = 1e-9 / a;
    let hi = (1.0 - 1e-12) / a;
    roots::bisect(g, lo, hi, g(lo), g(hi), 1e-15 / a).ok()
}

// ---------------------------------------------------------------------------
// flat-limit disc problem
// ---------------------------------------------------------------------------

/// First positive zero of J0, located with the crate's own J0.
fn j0_first_zero() -> f64 {
    roots::first_root(bessel::j0, 2.0, 3.0, 32, 1e-15).expect("J0 changes sign in (2, 3)")
}

/// Disc eigenvalue nu(alpha) on radius 2a through the radial secular
/// functions: alpha J0(2ak) = k J1(2ak) for nu = k^2 > 0,
/// mu I1(2a mu) + alpha I0(2a mu) = 0 for nu = -mu^2 < 0, nu(0) = 0.
pub fn disc_nu_bessel(alpha: OuterBc, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid("half-width a must be positive"));
    }
    let rr = 2.0 * a;
    let al = match alpha {
        OuterBc::Dirichlet => {
            let k = j0_first_zero() / rr;
            return Ok(k * k);
        }
        OuterBc::Robin(al) => al,
    };
    if al == 0.0 {
        return Ok(0.0); // constant eigenfunction
    }
    if al > 0.0 {
        let f = |k: f64| al * bessel::j0(rr * k) - k * bessel::j1(rr * k);
        let hi = j0_first_zero() / rr;
        let lo = 1e-12 * hi;
        let k = roots::bisect(f, lo, hi, f(lo), f(hi), 1e-15 * hi)?;
        Ok(k * k)
    } else {
        let f = |mu: f64| mu * bessel::i1(rr * mu) + al * bessel::i0(rr * mu);
        let hi = 1.5 * fabs(al) + 2.0 / a;
        let lo = 1e-12 * hi;
        let mu = roots::bisect(f, lo, hi, f(lo), f(hi), 1e-15 * hi)?;
        Ok(-mu * mu)
    }
}

/// Side from which constant curvature approaches the width limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitSide {
    /// kappa -> +1/a: the Robin edge collapses; a finite Robin condition
    /// on a shrinking hole is removable, so lambda converges fast to the
    /// *Dirichlet* disc eigenvalue.
    RobinHoleCloses,
    /// kappa -> -1/a: the Dirichlet edge collapses; a Dirichlet point has
    /// positive capacity in 2D, so lambda approaches the Robin disc
    /// eigenvalue nu(alpha) only like 1/ln(1/eps).
    DirichletHoleCloses,
}

/// The disc eigenvalue the flat limit converges to.
pub fn flat_limit_target(side: LimitSide, alpha: OuterBc, a: f64) -> Result<f64> {
    match side {
        // Whatever condition sits on the shrinking hole, the surviving
        // boundary is the Dirichlet edge grown to the full disc rim.
        LimitSide::RobinHoleCloses => disc_nu_bessel(OuterBc::Dirichlet, a),
        LimitSide::DirichletHoleCloses => disc_nu_bessel(alpha, a),
    }
}

/// Extrapolated flat limit: evaluates lambda at |kappa| a = 1 - eps for
/// eps = 1e-4, 1e-5 and removes the leading 1/ln(1/eps) term. Within about
/// half a percent of the disc value even on the slow (Dirichlet-hole) side.
pub fn flat_limit_extrapolated(side: LimitSide, alpha: OuterBc, a: f64) -> Result<f64> {
    let sign = match side {
        LimitSide::RobinHoleCloses => 1.0,
        LimitSide::DirichletHoleCloses => -1.0,
    };
    let mut probes = [0.0f64; 2];
    let mut ells = [0.0f64; 2];
    for (i, eps) in [1e-4f64, 1e-5].iter().enumerate() {
        probes[i] = lambda_bessel(sign * (1.0 - eps) / a, alpha, a)?;
        ells[i] = 1.0 / log(1.0 / eps);
    }
    let slope = (probes[0] - probes[1]) / (ells[0] - ells[1]);
    Ok(probes[1] - slope * ells[1])
}

/// Robin coefficient above which the threshold loses monotonicity in the
/// curvature on (0, 1/a), located by bisecting the sign of
/// min over kappa of d lambda / d kappa. The slope comes from central
/// differences of the cross-product eigenvalue, which stays accurate all
/// the way into the degenerate corner kappa a -> 1 where mesh-based
/// derivatives lose the edge layer; the kappa grid therefore carries a
/// geometric tail reaching 0.9999/a.
pub fn critical_alpha_bessel(a: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0) || !(tol > 0.0) {
        return Err(Error::invalid("critical_alpha: need a > 0 and tol > 0"));
    }
    let mut grid: alloc::vec::Vec<f64> = (1..=19).map(|j| 0.05 * j as f64 * 0.95 / a).collect();
    for k in [0.97, 0.98, 0.99, 0.995, 0.999, 0.9995, 0.9999] {
        grid.push(k / a);
    }
    let min_slope = |al: f64| -> Result<f64> {
        let mut worst = f64::INFINITY;
        for &k in &grid {
            // Step well above the eigenvalue solver's 1e-13 resolution and
            // well below the slope's curvature scale.
            let dk = 1e-6 / a;
            let hi = lambda_bessel(k + dk, OuterBc::Robin(al), a)?;
            let lo = lambda_bessel(k - dk, OuterBc::Robin(al), a)?;
            worst = worst.min((hi - lo) / (2.0 * dk));
        }
        Ok(worst)
    };
    let (lo, hi) = (0.4 / a, 1.2 / a);
    if min_slope(lo)? <= 0.0 || min_slope(hi)? >= 0.0 {
        return Err(Error::solver("critical_alpha: bracket does not straddle"));
    }
    let mut cache_err: Option<Error> = None;
    let root = roots::predicate_boundary(
        |al| match min_slope(al) {
            Ok(s) => s < 0.0,
            Err(e) => {
                cache_err = Some(e);
                true
            }
        },
        lo,
        hi,
        // alpha scales like 1/a, so the bisection width does too.
        tol / a,
    );
    match cache_err {
        Some(e) => Err(e),
        None => root,
    }
}
