//! One-dimensional transverse spectral problems on the strip cross-section.
//!
//! For constant curvature `kappa` and Robin coefficient `alpha`, the lowest
//! eigenvalue lambda(kappa, alpha) of
//!
//! ```text
//!   b[psi] = int_{-a}^{a} |psi'|^2 (1 - kappa t) dt + alpha (1 - kappa a) |psi(a)|^2,
//!   psi(-a) = 0,    norm^2 = int |psi|^2 (1 - kappa t) dt,
//! ```
//!
//! bounds the two-dimensional strip Laplacian from below slice by slice.
//! The discretization is a lumped P1 scheme on a uniform grid: midpoint
//! weights `1 - kappa (t + h/2)` in the stiffness term reproduce the exact
//! element integrals, and row-sum lumping makes the mass matrix diagonal,
//! so the problem reduces to a symmetric tridiagonal eigenvalue problem
//! solved by certified Sturm bisection. Eigenvalues converge at O(h^2) and
//! each public entry point pairs meshes (n, 2n) into a Richardson
//! extrapolation with an error estimate.
//!
//! The same machinery covers the flat-limit disc problem (weight `r` on
//! (0, 2a)) and parameter studies: the curvature derivative of lambda and
//! the critical Robin coefficient where monotonicity in kappa fails.

use crate::num::tridiag;
use crate::{Error, Result};
use alloc::vec::Vec;
use libm::{cos, cosh, fabs, sin, sinh, sqrt};

/// Boundary condition on the outer edge t = +a.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OuterBc {
    /// psi'(a) + alpha psi(a) = 0.
    Robin(f64),
    /// psi(a) = 0.
    Dirichlet,
}

impl OuterBc {
    /// Robin coefficient if finite.
    pub fn coeff(self) -> Option<f64> {
        match self {
            OuterBc::Robin(al) => Some(al),
            OuterBc::Dirichlet => None,
        }
    }
}

/// Eigenvalue with a mesh-refinement error estimate.
#[derive(Clone, Copy, Debug)]
pub struct Threshold {
    /// Richardson-extrapolated value from meshes (n, 2n).
    pub value: f64,
    /// Error estimate |lambda_2n - lambda_n| / 3 (the h^2 model's bound on
    /// the extrapolation residual of the finer mesh).
    pub err: f64,
    /// Finer mesh resolution used.
    pub n: usize,
}

fn validate(kappa: f64, a: f64, n: usize) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid("half-width a must be positive and finite"));
    }
    if !kappa.is_finite() || fabs(kappa) * a >= 1.0 {
        return Err(Error::invalid("thin-width condition |kappa| a < 1 violated"));
    }
    if n < 4 {
        return Err(Error::invalid("mesh must have at least 4 intervals"));
    }
    Ok(())
}

/// Assembled generalized tridiagonal pencil (K, M) with M diagonal.
struct Pencil {
    kd: Vec<f64>, // K diagonal
    ke: Vec<f64>, // K off-diagonal
    m: Vec<f64>,  // M diagonal (positive)
}

impl Pencil {
    /// Symmetrize to the standard tridiagonal T = M^{-1/2} K M^{-1/2}.
    fn standard(&self) -> (Vec<f64>, Vec<f64>) {
        let d: Vec<f64> = self
            .kd
            .iter()
            .zip(&self.m)
            .map(|(k, m)| k / m)
            .collect();
        let e: Vec<f64> = self
            .ke
            .iter()
            .enumerate()
            .map(|(i, k)| k / sqrt(self.m[i] * self.m[i + 1]))
            .collect();
        (d, e)
    }

    fn ground(&self) -> Result<f64> {
        let (d, e) = self.standard();
        tridiag::eigenvalue(&d, &e, 0, 1e-14)
    }
}

/// Lumped P1 pencil for the transverse operator on (-a, a) with weight
/// 1 - kappa t, Dirichlet at t = -a. Unknowns are nodes 1..=n (Robin) or
/// 1..=n-1 (Dirichlet outer edge).
fn assemble(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> Pencil {
    let h = 2.0 * a / n as f64;
    let t = |i: usize| -a + h * i as f64;
    let w = |i: usize| 1.0 - kappa * (t(i) + 0.5 * h); // weight at cell midpoint
    let robin = matches!(alpha, OuterBc::Robin(_));
    let m_count = if robin { n } else { n - 1 };
    let mut kd = Vec::with_capacity(m_count);
    let mut ke = Vec::with_capacity(m_count - 1);
    let mut m = Vec::with_capacity(m_count);
    for i in 1..=m_count {
        if i < n {
            kd.push((w(i - 1) + w(i)) / h);
            m.push(h * (1.0 - kappa * t(i)));
        } else {
            // Robin end node t = a: half cell plus the boundary term.
            let al = match alpha {
                OuterBc::Robin(al) => al,
                OuterBc::Dirichlet => unreachable!(),
            };
            kd.push(w(n - 1) / h + al * (1.0 - kappa * a));
            // Row-sum lumped half-cell mass: int of hat * (1 - kappa t).
            m.push(0.5 * h * (1.0 - kappa * (a - h / 3.0)));
        }
        if i < m_count {
            ke.push(-w(i) / h);
        }
    }
    Pencil { kd, ke, m }
}

/// Lowest transverse eigenvalue on a single mesh of n intervals.
pub fn lambda_fd(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> Result<f64> {
    validate(kappa, a, n)?;
    assemble(kappa, alpha, a, n).ground()
}

/// Sturm-bisection resolution floor of the fine mesh: rounding in the
/// pivot recurrence limits eigenvalues to ~eps * ||T||.
fn resolution_floor(p: &Pencil) -> f64 {
    let (d, e) = p.standard();
    let (glo, ghi) = tridiag::gershgorin(&d, &e);
    f64::EPSILON * fabs(glo).max(fabs(ghi))
}

/// Richardson-extrapolated eigenvalue over meshes (n, 2n). The error
/// estimate is the h^2-model extrapolation residual |lambda_2n - lambda_n|/3
/// or the fine mesh's eigenvalue resolution floor, whichever is larger, so
/// it stays honest when the meshes run into rounding noise.
pub fn lambda_fd_extrap(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> Result<Threshold> {
    let c = lambda_fd(kappa, alpha, a, n)?;
    let f = lambda_fd(kappa, alpha, a, 2 * n)?;
    let floor = resolution_floor(&assemble(kappa, alpha, a, 2 * n));
    Ok(Threshold {
        value: (4.0 * f - c) / 3.0,
        err: (fabs(f - c) / 3.0).max(floor),
        n: 2 * n,
    })
}

/// Refine until the Richardson error estimate drops below
/// `tol * max(1, |lambda|)`, doubling from n = 64 up to n = 32768.
pub fn lambda_to_tol(kappa: f64, alpha: OuterBc, a: f64, tol: f64) -> Result<Threshold> {
    // Cap at n = 8192 before doubling once more inside the extrapolation:
    // beyond that the Sturm resolution floor (~eps * ||T|| ~ eps * n^2)
    // dominates the h^2 differences and the error estimate goes flat.
    let mut n = 64;
    loop {
        let th = lambda_fd_extrap(kappa, alpha, a, n)?;
        if th.err <= tol * fabs(th.value).max(1.0) || n >= 8192 {
            return Ok(th);
        }
        n *= 2;
    }
}

/// Ground state on a single mesh: eigenvalue plus eigenfunction values on
/// all nodes t_i = -a + i h, i = 0..=n (Dirichlet zeros included),
/// normalized so the discrete weighted norm sum psi_i^2 M_ii equals 1 and
/// psi >= 0.
pub fn mode_fd(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> Result<(f64, Vec<f64>)> {
    validate(kappa, a, n)?;
    let p = assemble(kappa, alpha, a, n);
    let (d, e) = p.standard();
    let lam = tridiag::eigenvalue(&d, &e, 0, 1e-14)?;
    let phi = tridiag::eigenvector(&d, &e, lam)?;
    // psi = M^{-1/2} phi has unit weighted norm automatically.
    let mut psi = Vec::with_capacity(n + 1);
    psi.push(0.0);
    for (i, f) in phi.iter().enumerate() {
        psi.push(f / sqrt(p.m[i]));
    }
    if matches!(alpha, OuterBc::Dirichlet) {
        psi.push(0.0);
    }
    debug_assert_eq!(psi.len(), n + 1);
    Ok((lam, psi))
}

/// Same eigenvalue through the unitarily transformed form: substituting
/// phi = (1 - kappa t)^{1/2} psi turns the weighted form into a flat one
/// with the attractive potential -kappa^2 / (4 (1 - kappa t)^2) and Robin
/// coefficient alpha + kappa / (2 (1 - kappa a)). An independent
/// discretization path used to cross-validate `lambda_fd`.
pub fn lambda_transformed(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> Result<f64> {
    validate(kappa, a, n)?;
    let h = 2.0 * a / n as f64;
    let t = |i: usize| -a + h * i as f64;
    let robin = matches!(alpha, OuterBc::Robin(_));
    let m_count = if robin { n } else { n - 1 };
    let mut kd = Vec::with_capacity(m_count);
    let mut ke = Vec::with_capacity(m_count - 1);
    let mut m = Vec::with_capacity(m_count);
    let pot = |x: f64| {
        let g = 1.0 - kappa * x;
        -kappa * kappa / (4.0 * g * g)
    };
    for i in 1..=m_count {
        if i < n {
            kd.push(2.0 / h + pot(t(i)) * h);
            m.push(h);
        } else {
            let al = match alpha {
                OuterBc::Robin(al) => al,
                OuterBc::Dirichlet => unreachable!(),
            };
            let al_eff = al + kappa / (2.0 * (1.0 - kappa * a));
            kd.push(1.0 / h + al_eff + pot(a) * 0.5 * h);
            m.push(0.5 * h);
        }
        if i < m_count {
            ke.push(-1.0 / h);
        }
    }
    Pencil { kd, ke, m }.ground()
}

/// Closed-form lower bound: lambda(kappa, alpha) >= -alpha^2 (1 + |kappa| a)^2 / (1 - |kappa| a)^2
/// for alpha < 0; zero otherwise (and for a Dirichlet outer edge).
pub fn closed_form_lower_bound(kappa_sup: f64, alpha: OuterBc, a: f64) -> f64 {
    match alpha {
        OuterBc::Dirichlet => 0.0,
        OuterBc::Robin(al) if al >= 0.0 => 0.0,
        OuterBc::Robin(al) => {
            let ka = fabs(kappa_sup) * a;
            let r = (1.0 + ka) / (1.0 - ka);
            -al * al * r * r
        }
    }
}

/// Curvature derivative of the threshold at fixed (alpha, a):
/// d lambda / d kappa = int psi psi' / (1 - kappa t) dt for the weighted-unit
/// ground state, evaluated by midpoint quadrature on the discrete mode.
pub fn dlambda_dkappa(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> Result<f64> {
    let (_, psi) = mode_fd(kappa, alpha, a, n)?;
    let h = 2.0 * a / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let tmid = -a + h * (i as f64 + 0.5);
        // psi psi' integrated over the cell = (psi_{i+1}^2 - psi_i^2)/2.
        sum += 0.5 * (psi[i + 1] * psi[i + 1] - psi[i] * psi[i]) / (1.0 - kappa * tmid);
    }
    Ok(sum)
}

/// Straight-strip threshold lambda(0, alpha; a), from the transcendental
/// dispersion relations (independent of any mesh):
/// positive branch  k cos(2ak) + alpha sin(2ak) = 0, lambda = k^2;
/// negative branch  mu cosh(2a mu) + alpha sinh(2a mu) = 0, lambda = -mu^2;
/// lambda = 0 exactly at 2 a alpha = -1.
pub fn straight_lambda(alpha: OuterBc, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::invalid("half-width a must be positive"));
    }
    let al = match alpha {
        OuterBc::Dirichlet => {
            let k = core::f64::consts::PI / (2.0 * a);
            return Ok(k * k);
        }
        OuterBc::Robin(al) => al,
    };
    if !al.is_finite() {
        return Err(Error::invalid("robin coefficient must be finite"));
    }
    let tau = 2.0 * a * al;
    if tau == -1.0 {
        return Ok(0.0);
    }
    if tau > -1.0 {
        // Single root in (0, pi/(2a)); F > 0 near 0 since F ~ k (1 + tau).
        let f = |k: f64| k * cos(2.0 * a * k) + al * sin(2.0 * a * k);
        let hi = core::f64::consts::PI / (2.0 * a);
        let lo = 1e-12 * hi;
        let k = crate::num::roots::bisect(f, lo, hi, f(lo), f(hi), 1e-15 * hi)?;
        Ok(k * k)
    } else {
        // Negative threshold: G ~ mu (1 + tau) < 0 near 0, positive past
        // mu = |alpha| (since tanh < 1).
        let g = |mu: f64| mu * cosh(2.0 * a * mu) + al * sinh(2.0 * a * mu);
        let hi = fabs(al) + 1.0 / a;
        let lo = 1e-12 * hi;
        let mu = crate::num::roots::bisect(g, lo, hi, g(lo), g(hi), 1e-15 * hi)?;
        Ok(-mu * mu)
    }
}

/// Flat-limit disc problem: lowest eigenvalue nu(alpha) of the radial
/// operator -(1/r)(r u')' on (0, 2a) with a natural condition at r = 0 and
/// Robin (or Dirichlet) at r = 2a, discretized with the same lumped P1
/// scheme (weight r). Single mesh of n intervals.
pub fn disc_nu_fd(alpha: OuterBc, a: f64, n: usize) -> Result<f64> {
    if !(a > 0.0) || n < 4 {
        return Err(Error::invalid("disc_nu_fd: need a > 0 and n >= 4"));
    }
    let rr = 2.0 * a;
    let h = rr / n as f64;
    let robin = matches!(alpha, OuterBc::Robin(_));
    let m_count = if robin { n + 1 } else { n };
    let w = |i: usize| h * (i as f64 + 0.5); // r at cell midpoint
    let mut kd = Vec::with_capacity(m_count);
    let mut ke = Vec::with_capacity(m_count - 1);
    let mut m = Vec::with_capacity(m_count);
    for i in 0..m_count {
        if i == 0 {
            kd.push(w(0) / h);
            m.push(h * h / 6.0);
        } else if i < n {
            kd.push((w(i - 1) + w(i)) / h);
            m.push(h * h * i as f64);
        } else {
            let al = match alpha {
                OuterBc::Robin(al) => al,
                OuterBc::Dirichlet => unreachable!(),
            };
            kd.push(w(n - 1) / h + al * rr);
            m.push(0.5 * h * (rr - h / 3.0));
        }
        if i + 1 < m_count {
            ke.push(-w(i) / h);
        }
    }
    Pencil { kd, ke, m }.ground()
}

/// Richardson-extrapolated disc eigenvalue.
pub fn disc_nu_extrap(alpha: OuterBc, a: f64, n: usize) -> Result<Threshold> {
    let c = disc_nu_fd(alpha, a, n)?;
    let f = disc_nu_fd(alpha, a, 2 * n)?;
    // Same resolution-floor guard as the strip extrapolation.
    let floor = f64::EPSILON * 8.0 * (n as f64 / a) * (n as f64 / a);
    Ok(Threshold {
        value: (4.0 * f - c) / 3.0,
        err: (fabs(f - c) / 3.0).max(floor),
        n: 2 * n,
    })
}

/// Critical Robin coefficient: the threshold is increasing in kappa on
/// (0, 1/a) for small alpha but loses monotonicity as alpha grows; this
/// locates the alpha where min over kappa of d lambda / d kappa changes
/// sign. The minimizer sits at the kappa -> 1/a end, so the kappa grid
/// combines a uniform part with a geometric tail reaching 0.999/a.
pub fn critical_alpha(a: f64, n: usize, tol: f64) -> Result<f64> {
    if !(a > 0.0) || !(tol > 0.0) {
        return Err(Error::invalid("critical_alpha: need a > 0 and tol > 0"));
    }
    let mut grid = Vec::new();
    for j in 1..=19 {
        grid.push(0.05 * j as f64 * 0.95 / a);
    }
    for k in [0.97, 0.98, 0.99, 0.995, 0.999] {
        grid.push(k / a);
    }
    let min_slope = |al: f64| -> Result<f64> {
        let mut worst = f64::INFINITY;
        for &k in &grid {
            let s = dlambda_dkappa(k, OuterBc::Robin(al), a, n)?;
            worst = worst.min(s);
        }
        Ok(worst)
    };
    // Monotonicity in alpha of the sign: bracket [0.4/a, 1.2/a].
    let (lo, hi) = (0.4 / a, 1.2 / a);
    if min_slope(lo)? <= 0.0 || min_slope(hi)? >= 0.0 {
        return Err(Error::solver("critical_alpha: bracket does not straddle"));
    }
    let mut cache_err: Option<Error> = None;
    let root = crate::num::roots::predicate_boundary(
        |al| match min_slope(al) {
            Ok(s) => s < 0.0,
            Err(e) => {
                cache_err = Some(e);
                true
            }
        },
        lo,
        hi,
        tol / a,
    );
    if let Some(e) = cache_err {
        return Err(e);
    }
    root
}
