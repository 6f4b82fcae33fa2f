//! Plane curves from curvature data and the tubular strip map.
//!
//! A curve is reconstructed from its signed curvature by integrating
//! theta' = kappa(s), Gamma' = (cos theta, sin theta) with classical RK4.
//! The unit tangent is stored through the angle theta, so tangent and
//! normal are exactly unit length at every node and the frame relation
//! N' = -kappa Gamma' holds analytically rather than to solver accuracy.
//!
//! The strip map L(s, t) = Gamma(s) + t N(s) with |t| <= a has Jacobian
//! g(s, t) = 1 - kappa(s) t; the thin-width hypothesis `sup|kappa| a < 1`
//! keeps it a local diffeomorphism. Global injectivity is *sampled*, not
//! proved: the check reports a violation when two strip cross-sections with
//! well-separated arclength come closer than a resolution threshold, and
//! "not detected" otherwise.

use crate::profile::Profile;
use crate::{Error, Result};
use alloc::vec::Vec;
use libm::{cos, fabs, hypot, sin, sqrt};

/// Curve sampled on a uniform arclength grid.
#[derive(Clone, Debug)]
pub struct Curve {
    /// Uniform arclength nodes, `s[0] = s_min`, `s[n] = s_max`.
    pub s: Vec<f64>,
    /// Positions Gamma(s_i).
    pub pos: Vec<[f64; 2]>,
    /// Tangent angles theta(s_i).
    pub theta: Vec<f64>,
}

/// Integrate the frame equations with RK4 over `n` uniform steps.
pub fn build_curve(kappa: &Profile, s_min: f64, s_max: f64, n: usize) -> Result<Curve> {
    if !(s_min < s_max) || n == 0 {
        return Err(Error::invalid("build_curve: need s_min < s_max and n > 0"));
    }
    let h = (s_max - s_min) / n as f64;
    let mut s = Vec::with_capacity(n + 1);
    let mut pos = Vec::with_capacity(n + 1);
    let mut theta = Vec::with_capacity(n + 1);
    let (mut x, mut y, mut th) = (0.0f64, 0.0f64, 0.0f64);
    s.push(s_min);
    pos.push([x, y]);
    theta.push(th);
    // State u = (x, y, theta), u' = f(s, u) = (cos th, sin th, kappa(s)).
    for i in 0..n {
        let si = s_min + h * i as f64;
        let k1 = [cos(th), sin(th), kappa.eval(si)];
        let th2 = th + 0.5 * h * k1[2];
        let k2 = [cos(th2), sin(th2), kappa.eval(si + 0.5 * h)];
        let th3 = th + 0.5 * h * k2[2];
        let k3 = [cos(th3), sin(th3), kappa.eval(si + 0.5 * h)];
        let th4 = th + h * k3[2];
        let k4 = [cos(th4), sin(th4), kappa.eval(si + h)];
        x += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        th += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
        let snext = if i + 1 == n { s_max } else { s_min + h * (i + 1) as f64 };
        s.push(snext);
        pos.push([x, y]);
        theta.push(th);
    }
    Ok(Curve { s, pos, theta })
}

impl Curve {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Unit tangent at node i (exactly unit by construction).
    pub fn tangent(&self, i: usize) -> [f64; 2] {
        [cos(self.theta[i]), sin(self.theta[i])]
    }

    /// Unit normal at node i, rotated +90 degrees from the tangent.
    pub fn normal(&self, i: usize) -> [f64; 2] {
        [-sin(self.theta[i]), cos(self.theta[i])]
    }

    /// Strip map at node i: Gamma(s_i) + t N(s_i).
    pub fn strip_point(&self, i: usize, t: f64) -> [f64; 2] {
        let p = self.pos[i];
        let n = self.normal(i);
        [p[0] + t * n[0], p[1] + t * n[1]]
    }
}

/// Jacobian of the strip map: g(s, t) = 1 - kappa(s) t.
pub fn jacobian(kappa: &Profile, s: f64, t: f64) -> f64 {
    1.0 - kappa.eval(s) * t
}

/// Outcome of the strip-hypothesis check.
#[derive(Clone, Debug, PartialEq)]
pub enum StripCheck {
    /// Thin-width condition holds and sampling found no self-overlap.
    /// Sampling cannot *prove* injectivity, hence "not detected".
    OverlapNotDetected { kappa_sup: f64 },
    /// sup|kappa| a >= 1: the map degenerates inside the strip.
    WidthTooLarge { kappa_sup: f64 },
    /// Two cross-sections at well-separated arclengths nearly intersect.
    OverlapDetected { s_first: f64, s_second: f64 },
}

/// Validate the strip hypotheses for curvature `kappa` on [s_min, s_max]
/// with half-width `a`, sampling `n` cross-sections.
///
/// Self-overlap detection: centers closer in the plane than one strip
/// diameter while `|s_i - s_j|` exceeds the locality scale
/// `pi/(2 sup|kappa|)` (an arc cannot bend back onto itself sooner).
pub fn check_strip(
    kappa: &Profile,
    s_min: f64,
    s_max: f64,
    a: f64,
    n: usize,
) -> Result<StripCheck> {
    if !(a > 0.0) {
        return Err(Error::invalid("check_strip: half-width must be positive"));
    }
    let kappa_sup = kappa.sup_norm(s_min, s_max);
    if kappa_sup * a >= 1.0 {
        return Ok(StripCheck::WidthTooLarge { kappa_sup });
    }
    let curve = build_curve(kappa, s_min, s_max, n.max(2))?;
    // Two cross-sections intersect only if their centers are closer than
    // the strip diameter 2a; require also arclength separation beyond the
    // scale where the curve could have turned back (quarter turn at max
    // curvature plus one strip diameter).
    let l_loc = if kappa_sup > 0.0 {
        core::f64::consts::FRAC_PI_2 / kappa_sup + 2.0 * a
    } else {
        f64::INFINITY
    };
    let m = curve.len();
    for i in 0..m {
        for j in (i + 1)..m {
            if curve.s[j] - curve.s[i] <= l_loc {
                continue;
            }
            let (p, q) = (curve.pos[i], curve.pos[j]);
            if hypot(p[0] - q[0], p[1] - q[1]) < 2.0 * a {
                return Ok(StripCheck::OverlapDetected {
                    s_first: curve.s[i],
                    s_second: curve.s[j],
                });
            }
        }
    }
    Ok(StripCheck::OverlapNotDetected { kappa_sup })
}

/// Max deviation of the discrete frame relation N' = -kappa Gamma' over the
/// curve, by centered differences; O(h^2) for smooth curvature. Used as a
/// self-test that curve, tangent, and normal stay mutually consistent.
pub fn frame_defect(curve: &Curve, kappa: &Profile) -> f64 {
    let n = curve.len();
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let h = curve.s[i + 1] - curve.s[i - 1];
        let np = curve.normal(i + 1);
        let nm = curve.normal(i - 1);
        let tg = curve.tangent(i);
        let k = kappa.eval(curve.s[i]);
        for d in 0..2 {
            let deriv = (np[d] - nm[d]) / h;
            worst = worst.max(fabs(deriv + k * tg[d]));
        }
    }
    worst
}

/// Euclidean norm helper for tests and callers.
pub fn norm2(v: [f64; 2]) -> f64 {
    sqrt(v[0] * v[0] + v[1] * v[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn constant_curvature_gives_circle() {
        let k = 0.5;
        let kappa = Profile::Const(k);
        let c = build_curve(&kappa, 0.0, 2.0 * PI / k, 4000).unwrap();
        // Center of the osculating circle at s=0: Gamma(0) + N(0)/k.
        let cx = c.pos[0][0] - c.normal(0)[0] / -k;
        let cy = c.pos[0][1] - c.normal(0)[1] / -k;
        for i in (0..c.len()).step_by(333) {
            let r = hypot(c.pos[i][0] - cx, c.pos[i][1] - cy);
            assert_relative_eq!(r, 1.0 / k, epsilon = 1e-10);
        }
        // Full turn: endpoint returns to start, angle advances 2 pi.
        let last = c.len() - 1;
        assert!(hypot(c.pos[last][0] - c.pos[0][0], c.pos[last][1] - c.pos[0][1]) < 1e-9);
        assert_relative_eq!(c.theta[last], 2.0 * PI, epsilon = 1e-10);
    }

    #[test]
    fn straight_outside_bump_support() {
        let kappa = Profile::bump(0.0, 1.0, 0.4).unwrap();
        let c = build_curve(&kappa, -5.0, 5.0, 2000).unwrap();
        // Before the bump the curve runs along +x from the origin.
        let i = c.s.iter().position(|&s| s >= -1.5).unwrap();
        assert_relative_eq!(c.pos[i][1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(c.theta[i], 0.0, epsilon = 1e-12);
        // After the bump theta equals the total turning angle, constant.
        let j = c.s.iter().position(|&s| s >= 1.5).unwrap();
        assert_relative_eq!(c.theta[j], c.theta[c.len() - 1], epsilon = 1e-12);
        assert!(c.theta[j] > 0.1);
        // Frame relation N' = -kappa Gamma' to discretization accuracy
        // (O(h^2) with the bump's third derivative in the constant).
        let d1 = frame_defect(&c, &kappa);
        assert!(d1 < 1e-3, "frame defect {}", d1);
        let c2 = build_curve(&kappa, -5.0, 5.0, 8000).unwrap();
        let d2 = frame_defect(&c2, &kappa);
        assert!(d2 < d1 / 8.0, "no h^2 decay: {} vs {}", d2, d1);
    }

    #[test]
    fn strip_points_offset_along_normal() {
        let kappa = Profile::Const(0.0);
        let c = build_curve(&kappa, 0.0, 1.0, 10).unwrap();
        let p = c.strip_point(5, 0.3);
        assert_relative_eq!(p[0], c.pos[5][0], epsilon = 1e-15);
        assert_relative_eq!(p[1], 0.3, epsilon = 1e-15);
        assert_eq!(norm2(c.tangent(3)), 1.0);
    }

    #[test]
    fn jacobian_formula() {
        let kappa = Profile::Const(0.25);
        assert_relative_eq!(jacobian(&kappa, 0.0, 0.5), 1.0 - 0.125);
    }

    #[test]
    fn hypothesis_check_flags_width() {
        let kappa = Profile::Const(0.8);
        match check_strip(&kappa, 0.0, 1.0, 1.3, 100).unwrap() {
            StripCheck::WidthTooLarge { kappa_sup } => assert_eq!(kappa_sup, 0.8),
            other => panic!("expected WidthTooLarge, got {:?}", other),
        }
    }

    #[test]
    fn hypothesis_check_detects_overlap() {
        // 1.5 turns of a circle of radius 2: cross-sections from the first
        // and second laps coincide in the plane.
        let kappa = Profile::Const(0.5);
        let c = check_strip(&kappa, 0.0, 3.0 * PI / 0.5, 0.4, 400).unwrap();
        assert!(matches!(c, StripCheck::OverlapDetected { .. }));
        // A straight strip never overlaps.
        let straight = check_strip(&Profile::Const(0.0), 0.0, 100.0, 0.4, 400).unwrap();
        assert!(matches!(straight, StripCheck::OverlapNotDetected { .. }));
        // A gentle bump with small total turning stays clean.
        let bump = Profile::bump(0.0, 1.0, -0.5).unwrap();
        let b = check_strip(&bump, -20.0, 20.0, 1.0, 800).unwrap();
        assert!(matches!(b, StripCheck::OverlapNotDetected { .. }));
    }
}
