//! Cylinder functions of orders zero and one: J, Y, I, K.
//!
//! The secular functions for circular-arc geometries need the oscillatory
//! pair (J, Y) for positive spectral parameter, the evanescent pair (I, K)
//! for negative parameter, and exponentially scaled variants of I and K so
//! that cross products survive deep evanescent regimes without overflow.
//!
//! Each function uses its ascending series below a switch point and a
//! Hankel-type asymptotic expansion above it, truncated at the smallest
//! term. Relative accuracy is ~1e-12 over most of the range; the worst case
//! is K near its switch point x = 9, where the optimally truncated
//! asymptotic tail is ~2e-8. Root-finding tolerances downstream stay well
//! above these floors.
//!
//! `y0/y1/k0/k1` return NaN for x <= 0 (outside their real domain); callers
//! bracket-check arguments before evaluating.

use core::f64::consts::{FRAC_2_PI, FRAC_PI_2, FRAC_PI_4, PI};
use libm::{cos, exp, fabs, log, sin, sqrt};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Series/asymptotic switch points, chosen so the truncated asymptotic
/// tail and the series cancellation error roughly balance.
const JY_SWITCH: f64 = 12.0;
const I_SWITCH: f64 = 12.0;
const K_SWITCH: f64 = 9.0;

/// Stop a series once the term is this small relative to the sum.
const SERIES_EPS: f64 = 1e-17;
const SERIES_MAX: usize = 80;

// ---------------------------------------------------------------------------
// ascending series
// ---------------------------------------------------------------------------

/// J0 via its ascending series: sum of (-q)^k / (k!)^2, q = x^2/4.
fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX {
        let kf = k as f64;
        term *= -q / (kf * kf);
        sum += term;
        if fabs(term) < SERIES_EPS * fabs(sum).max(1e-300) {
            break;
        }
    }
    sum
}

/// J1 via its ascending series: (x/2) * sum of (-q)^k / (k!(k+1)!).
fn j1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..SERIES_MAX {
        let kf = k as f64;
        term *= -q / (kf * (kf + 1.0));
        sum += term;
        if fabs(term) < SERIES_EPS * fabs(sum).max(1e-300) {
            break;
        }
    }
    sum
}

/// Y0 series: (2/pi) [ (ln(x/2) + gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2 ].
fn y0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut t = 1.0; // q^k / (k!)^2
    let mut h = 0.0; // harmonic number H_k
    let mut sign = 1.0;
    let mut s = 0.0;
    for k in 1..SERIES_MAX {
        let kf = k as f64;
        t *= q / (kf * kf);
        h += 1.0 / kf;
        let term = sign * h * t;
        s += term;
        sign = -sign;
        if fabs(term) < SERIES_EPS * fabs(s).max(1e-300) {
            break;
        }
    }
    FRAC_2_PI * ((log(0.5 * x) + EULER_GAMMA) * j0_series(x) + s)
}

/// Y1 series:
/// (2/pi)(ln(x/2)+gamma) J1 - 2/(pi x)
///   - (x/(2 pi)) sum_{k>=0} (-1)^k (H_k + H_{k+1}) q^k/(k!(k+1)!).
fn y1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut t = 1.0; // q^k / (k!(k+1)!)
    let mut h = 0.0; // H_k
    let mut sign = 1.0;
    let mut s = 0.0;
    for k in 0..SERIES_MAX {
        let kf = k as f64;
        if k > 0 {
            t *= q / (kf * (kf + 1.0));
            h += 1.0 / kf;
        }
        let term = sign * (2.0 * h + 1.0 / (kf + 1.0)) * t; // H_k + H_{k+1}
        s += term;
        sign = -sign;
        if k > 0 && fabs(term) < SERIES_EPS * fabs(s).max(1e-300) {
            break;
        }
    }
    FRAC_2_PI * (log(0.5 * x) + EULER_GAMMA) * j1_series(x) - FRAC_2_PI / x
        - x / (2.0 * PI) * s
}

/// I0 ascending series: sum of q^k / (k!)^2.
fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..SERIES_MAX {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    sum
}

/// I1 ascending series: (x/2) * sum of q^k / (k!(k+1)!).
fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..SERIES_MAX {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    sum
}

/// K0 series: -(ln(x/2)+gamma) I0 + sum_{k>=1} H_k q^k/(k!)^2.
fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut t = 1.0;
    let mut h = 0.0;
    let mut s = 0.0;
    for k in 1..SERIES_MAX {
        let kf = k as f64;
        t *= q / (kf * kf);
        h += 1.0 / kf;
        let term = h * t;
        s += term;
        if term < SERIES_EPS * s.max(1e-300) {
            break;
        }
    }
    -(log(0.5 * x) + EULER_GAMMA) * i0_series(x) + s
}

/// K1 series:
/// 1/x + (ln(x/2)+gamma) I1 - (x/4) sum_{k>=0} (H_k + H_{k+1}) q^k/(k!(k+1)!).
fn k1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut t = 1.0;
    let mut h = 0.0;
    let mut s = 0.0;
    for k in 0..SERIES_MAX {
        let kf = k as f64;
        if k > 0 {
            t *= q / (kf * (kf + 1.0));
            h += 1.0 / kf;
        }
        let term = (2.0 * h + 1.0 / (kf + 1.0)) * t;
        s += term;
        if k > 0 && term < SERIES_EPS * s {
            break;
        }
    }
    1.0 / x + (log(0.5 * x) + EULER_GAMMA) * i1_series(x) - 0.25 * x * s
}

// ---------------------------------------------------------------------------
// asymptotic expansions
// ---------------------------------------------------------------------------

/// Coefficient recurrence shared by all four asymptotic expansions:
/// c_k = c_{k-1} (4 nu^2 - (2k-1)^2) / (8 k x), c_0 = 1. The callback
/// receives (k, c_k); iteration stops at the smallest term.
fn asym_terms<F: FnMut(usize, f64)>(nu2_4: f64, x: f64, mut add: F) {
    let mut c = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..64 {
        let m = (2 * k - 1) as f64;
        c *= (nu2_4 - m * m) / (8.0 * k as f64 * x);
        if fabs(c) >= prev {
            break; // smallest term reached: stop before divergence
        }
        add(k, c);
        prev = fabs(c);
        if prev < 1e-18 {
            break;
        }
    }
}

/// Hankel asymptotics for (J_nu, Y_nu), nu in {0, 1}, x large:
/// J = sqrt(2/(pi x)) (P cos w - Q sin w), Y = sqrt(2/(pi x)) (P sin w + Q cos w),
/// w = x - nu pi/2 - pi/4, P = 1 - c2 + c4 - ..., Q = c1 - c3 + ... .
fn jy_asym(nu: usize, x: f64) -> (f64, f64) {
    let mut p = 1.0;
    let mut q = 0.0;
    asym_terms(4.0 * (nu * nu) as f64, x, |k, c| match k % 4 {
        1 => q += c,
        2 => p -= c,
        3 => q -= c,
        _ => p += c,
    });
    let w = x - nu as f64 * FRAC_PI_2 - FRAC_PI_4;
    let (sw, cw) = (sin(w), cos(w));
    let f = sqrt(2.0 / (PI * x));
    (f * (p * cw - q * sw), f * (p * sw + q * cw))
}

/// e^{-x} I_nu(x) for large x: (1/sqrt(2 pi x)) sum (-1)^k c_k.
fn i_asym_scaled(nu: usize, x: f64) -> f64 {
    let mut s = 1.0;
    let mut sign = -1.0;
    asym_terms(4.0 * (nu * nu) as f64, x, |_, c| {
        s += sign * c;
        sign = -sign;
    });
    s / sqrt(2.0 * PI * x)
}

/// e^{x} K_nu(x) for large x: sqrt(pi/(2x)) sum c_k.
fn k_asym_scaled(nu: usize, x: f64) -> f64 {
    let mut s = 1.0;
    asym_terms(4.0 * (nu * nu) as f64, x, |_, c| s += c);
    s * sqrt(0.5 * PI / x)
}

// ---------------------------------------------------------------------------
// public interface
// ---------------------------------------------------------------------------

/// Bessel function of the first kind, order zero. Even in x.
pub fn j0(x: f64) -> f64 {
    let x = fabs(x);
    if x <= JY_SWITCH {
        j0_series(x)
    } else {
        jy_asym(0, x).0
    }
}

/// Bessel function of the first kind, order one. Odd in x.
pub fn j1(x: f64) -> f64 {
    let ax = fabs(x);
    let v = if ax <= JY_SWITCH {
        j1_series(ax)
    } else {
        jy_asym(1, ax).0
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Bessel function of the second kind, order zero. NaN for x <= 0.
pub fn y0(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x <= JY_SWITCH {
        y0_series(x)
    } else {
        jy_asym(0, x).1
    }
}

/// Bessel function of the second kind, order one. NaN for x <= 0.
pub fn y1(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x <= JY_SWITCH {
        y1_series(x)
    } else {
        jy_asym(1, x).1
    }
}

/// Modified Bessel function of the first kind, order zero. Even in x.
/// Overflows (returns +inf) past x ~ 713; use [`i0_scaled`] there.
pub fn i0(x: f64) -> f64 {
    let x = fabs(x);
    if x < I_SWITCH {
        i0_series(x)
    } else {
        i_asym_scaled(0, x) * exp(x)
    }
}

/// Modified Bessel function of the first kind, order one. Odd in x.
pub fn i1(x: f64) -> f64 {
    let ax = fabs(x);
    let v = if ax < I_SWITCH {
        i1_series(ax)
    } else {
        i_asym_scaled(1, ax) * exp(ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// Modified Bessel function of the second kind, order zero. NaN for x <= 0.
pub fn k0(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < K_SWITCH {
        k0_series(x)
    } else {
        k_asym_scaled(0, x) * exp(-x)
    }
}

/// Modified Bessel function of the second kind, order one. NaN for x <= 0.
pub fn k1(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < K_SWITCH {
        k1_series(x)
    } else {
        k_asym_scaled(1, x) * exp(-x)
    }
}

/// e^{-x} I0(x): finite for all x >= 0, no overflow.
pub fn i0_scaled(x: f64) -> f64 {
    let x = fabs(x);
    if x < I_SWITCH {
        i0_series(x) * exp(-x)
    } else {
        i_asym_scaled(0, x)
    }
}

/// e^{-x} I1(x).
pub fn i1_scaled(x: f64) -> f64 {
    let x = fabs(x);
    if x < I_SWITCH {
        i1_series(x) * exp(-x)
    } else {
        i_asym_scaled(1, x)
    }
}

/// e^{x} K0(x): removes the decay, finite for all x > 0. NaN for x <= 0.
pub fn k0_scaled(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < K_SWITCH {
        k0_series(x) * exp(x)
    } else {
        k_asym_scaled(0, x)
    }
}

/// e^{x} K1(x). NaN for x <= 0.
pub fn k1_scaled(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < K_SWITCH {
        k1_series(x) * exp(x)
    } else {
        k_asym_scaled(1, x)
    }
}
