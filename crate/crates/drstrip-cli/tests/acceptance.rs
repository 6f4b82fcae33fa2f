//! Acceptance gate: one test per shipped guarantee, each printing exactly
//! one pass/fail line under `cargo test --test acceptance`. Tolerances and
//! runtime budgets are stated next to each criterion.

use drstrip_core::annulus::{
    critical_alpha_bessel, flat_limit_extrapolated, flat_limit_target, lambda_bessel,
    zero_threshold_curvature, LimitSide,
};
use drstrip_core::hardy::{
    hardy_constant, hardy_lemma_check, stability_audit, stability_epsilon, verify_hardy,
};
use drstrip_core::num::rng::Rng;
use drstrip_core::profile::Profile;
use drstrip_core::strip2d::{dk_upper_bound, verify_threshold_bound, EndBc, StripProblem};
use drstrip_core::transverse::{
    disc_nu_extrap, dlambda_dkappa, lambda_to_tol, lambda_transformed, straight_lambda, OuterBc,
};
use std::f64::consts::PI;
use std::time::Instant;

/// Threshold of the straight strip with Dirichlet on both edges.
const STRAIGHT_DD: f64 = PI * PI / 4.0;
/// Threshold of the straight Dirichlet-Neumann strip.
const STRAIGHT_DN: f64 = PI * PI / 16.0;
/// Dirichlet disc threshold: (first zero of J0)^2 / 4 at a = 1.
const DISC_DIRICHLET: f64 = 1.4457964907366961;

fn robin(al: f64) -> OuterBc {
    OuterBc::Robin(al)
}

/// lambda(kappa, alpha) through the mesh-free cross-product solver, with
/// the closed-form value at kappa = 0.
fn oracle(kappa: f64, alpha: OuterBc, a: f64) -> f64 {
    if kappa == 0.0 {
        straight_lambda(alpha, a).unwrap()
    } else {
        lambda_bessel(kappa, alpha, a).unwrap()
    }
}

/// Richardson-extrapolated value of the transformed-form discretization.
fn transformed_extrap(kappa: f64, alpha: OuterBc, a: f64, n: usize) -> f64 {
    let coarse = lambda_transformed(kappa, alpha, a, n / 2).unwrap();
    let fine = lambda_transformed(kappa, alpha, a, n).unwrap();
    (4.0 * fine - coarse) / 3.0
}

// Criterion 1: straight-strip thresholds from the extrapolated 1D solver,
// within 1e-4 of the closed forms pi^2/4 (Dirichlet) and pi^2/16 (Neumann).
// Budget: under 1 s each.
#[test]
fn criterion_01_straight_strip_thresholds() {
    let t0 = Instant::now();
    let dd = lambda_to_tol(0.0, OuterBc::Dirichlet, 1.0, 1e-7).unwrap();
    assert!(
        (dd.value - STRAIGHT_DD).abs() <= 1e-4,
        "Dirichlet-Dirichlet: {} vs {}",
        dd.value,
        STRAIGHT_DD
    );
    assert!(t0.elapsed().as_secs_f64() < 1.0, "Dirichlet case over budget");

    let t0 = Instant::now();
    let dn = lambda_to_tol(0.0, robin(0.0), 1.0, 1e-7).unwrap();
    assert!(
        (dn.value - STRAIGHT_DN).abs() <= 1e-4,
        "Dirichlet-Neumann: {} vs {}",
        dn.value,
        STRAIGHT_DN
    );
    assert!(t0.elapsed().as_secs_f64() < 1.0, "Neumann case over budget");
}

// Criterion 2: disc thresholds nu(dirichlet) = (first J0 zero)^2/4 within
// 1e-4 and nu(0) = 0 within 1e-8. Budget: under 1 s.
#[test]
fn criterion_02_disc_limits() {
    let t0 = Instant::now();
    let nu_d = disc_nu_extrap(OuterBc::Dirichlet, 1.0, 2048).unwrap();
    assert!(
        (nu_d.value - DISC_DIRICHLET).abs() <= 1e-4,
        "nu(dirichlet) = {}",
        nu_d.value
    );
    let nu_0 = disc_nu_extrap(robin(0.0), 1.0, 2048).unwrap();
    assert!(nu_0.value.abs() <= 1e-8, "nu(0) = {}", nu_0.value);
    assert!(t0.elapsed().as_secs_f64() < 1.0, "disc limits over budget");
}

// Criterion 3: three independent evaluation paths agree at 20 pseudo-random
// (kappa, alpha): weighted-form vs transformed-form discretizations within
// 1e-6, weighted-form vs cross-product solver within 1e-4. Budget: 30 s.
#[test]
fn criterion_03_oracle_triangulation() {
    let t0 = Instant::now();
    let mut rng = Rng::new(0x5eed);
    for trial in 0..20 {
        let mag = 0.05 + 0.80 * rng.uniform();
        let kappa = if rng.uniform() < 0.5 { -mag } else { mag };
        let alpha = rng.uniform_in(-2.0, 2.0);
        let fd = lambda_to_tol(kappa, robin(alpha), 1.0, 1e-8).unwrap();
        let tr = transformed_extrap(kappa, robin(alpha), 1.0, fd.n);
        let bessel = lambda_bessel(kappa, robin(alpha), 1.0).unwrap();
        assert!(
            (fd.value - tr).abs() <= 1e-6,
            "trial {}: fd {} vs transformed {} at ({}, {})",
            trial,
            fd.value,
            tr,
            kappa,
            alpha
        );
        assert!(
            (fd.value - bessel).abs() <= 1e-4,
            "trial {}: fd {} vs bessel {} at ({}, {})",
            trial,
            fd.value,
            bessel,
            kappa,
            alpha
        );
    }
    assert!(t0.elapsed().as_secs_f64() < 30.0, "triangulation over budget");
}

// Criterion 4: shape of lambda(kappa, alpha) — strict monotonicity in
// alpha, strict monotonicity in kappa on (-1/a, 0] for every alpha and
// everywhere for alpha <= 0, the disc limits at kappa = +-0.999/a within
// 2%, evenness of the Dirichlet case in kappa within 1e-5, and the
// a^{-2} scaling law within 1e-6 relative. Budget: 2 min.
#[test]
fn criterion_04_threshold_shape_suite() {
    let t0 = Instant::now();

    // Strict monotonicity in alpha, capped by the Dirichlet value.
    for &kappa in &[-0.9, -0.6, -0.3, -0.1, 0.0, 0.1, 0.3, 0.6, 0.9] {
        let mut prev = f64::NEG_INFINITY;
        for &al in &[-2.0, -1.0, 0.0, 1.0, 2.0] {
            let v = oracle(kappa, robin(al), 1.0);
            assert!(v > prev, "alpha-monotonicity at kappa {}: {} !> {}", kappa, v, prev);
            prev = v;
        }
        let cap = oracle(kappa, OuterBc::Dirichlet, 1.0);
        assert!(prev < cap, "Dirichlet cap at kappa {}", kappa);
    }

    // Strict monotonicity in kappa on (-1/a, 0] for every alpha.
    let neg_grid = [-0.999, -0.9, -0.7, -0.5, -0.3, -0.1, -0.01, 0.0];
    let all_bcs = [
        robin(-2.0),
        robin(-1.0),
        robin(0.0),
        robin(1.0),
        robin(2.0),
        OuterBc::Dirichlet,
    ];
    for &bc in &all_bcs {
        let mut prev = f64::NEG_INFINITY;
        for &kappa in &neg_grid {
            let v = oracle(kappa, bc, 1.0);
            assert!(v > prev, "kappa-monotonicity at {:?}: {} !> {}", bc, v, prev);
            prev = v;
        }
    }

    // ... and across the whole interval when alpha <= 0.
    let full_grid = [
        -0.999, -0.9, -0.6, -0.3, -0.1, 0.0, 0.1, 0.3, 0.6, 0.9, 0.99, 0.999,
    ];
    for &al in &[-2.0, -1.0, -0.5, 0.0] {
        let mut prev = f64::NEG_INFINITY;
        for &kappa in &full_grid {
            let v = oracle(kappa, robin(al), 1.0);
            assert!(v > prev, "global monotonicity at alpha {}: {} !> {}", al, v, prev);
            prev = v;
        }
    }

    // Disc limits at kappa = +-0.999. The Robin-hole side converges fast
    // for finite alpha (raw value suffices); closing a Dirichlet hole is
    // logarithmically slow, so those limits go through the 1/ln
    // extrapolation. Tolerance 2% of max(1, |target|).
    for &bc in &all_bcs {
        let target = flat_limit_target(LimitSide::RobinHoleCloses, bc, 1.0).unwrap();
        let value = match bc {
            OuterBc::Robin(_) => lambda_bessel(0.999, bc, 1.0).unwrap(),
            OuterBc::Dirichlet => {
                flat_limit_extrapolated(LimitSide::RobinHoleCloses, bc, 1.0).unwrap()
            }
        };
        let tol = 0.02 * target.abs().max(1.0);
        assert!(
            (value - target).abs() <= tol,
            "limit kappa->+1 at {:?}: {} vs {}",
            bc,
            value,
            target
        );

        let target = flat_limit_target(LimitSide::DirichletHoleCloses, bc, 1.0).unwrap();
        let value = flat_limit_extrapolated(LimitSide::DirichletHoleCloses, bc, 1.0).unwrap();
        let tol = 0.02 * target.abs().max(1.0);
        assert!(
            (value - target).abs() <= tol,
            "limit kappa->-1 at {:?}: {} vs {}",
            bc,
            value,
            target
        );
    }

    // Dirichlet case is even in kappa.
    for &kappa in &[0.1, 0.35, 0.6, 0.9, 0.99] {
        let plus = lambda_bessel(kappa, OuterBc::Dirichlet, 1.0).unwrap();
        let minus = lambda_bessel(-kappa, OuterBc::Dirichlet, 1.0).unwrap();
        assert!(
            (plus - minus).abs() <= 1e-5,
            "evenness at kappa {}: {} vs {}",
            kappa,
            plus,
            minus
        );
    }

    // Scaling law lambda(kappa, alpha; a) = a^{-2} lambda(kappa a, alpha a; 1).
    let cases = [
        (0.3, robin(-1.0), 0.5),
        (-0.2, robin(0.7), 2.0),
        (0.25, robin(0.0), 1.7),
        (-0.1, robin(-2.0), 3.0),
        (0.2, OuterBc::Dirichlet, 2.5),
    ];
    for &(kappa, bc, a) in &cases {
        let lhs = lambda_bessel(kappa, bc, a).unwrap();
        let scaled_bc = match bc {
            OuterBc::Robin(al) => robin(al * a),
            OuterBc::Dirichlet => OuterBc::Dirichlet,
        };
        let rhs = lambda_bessel(kappa * a, scaled_bc, 1.0).unwrap() / (a * a);
        assert!(
            (lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0 / (a * a)),
            "scaling at ({}, {:?}, {}): {} vs {}",
            kappa,
            bc,
            a,
            lhs,
            rhs
        );
    }

    assert!(t0.elapsed().as_secs_f64() < 120.0, "shape suite over budget");
}

// Criterion 5: the quadrature formula for d lambda / d kappa matches
// central differences of the eigenvalue to 1e-3 relative at 10 points.
#[test]
fn criterion_05_curvature_derivative() {
    let points = [
        (-0.7, -1.5),
        (-0.5, -0.5),
        (-0.3, 0.8),
        (-0.1, 2.0),
        (0.1, -2.0),
        (0.2, 1.2),
        (0.3, 0.0),
        (0.45, -0.8),
        (0.6, 0.5),
        (0.7, -0.2),
    ];
    for &(kappa, alpha) in &points {
        let formula = dlambda_dkappa(kappa, robin(alpha), 1.0, 2048).unwrap();
        let h = 1e-5;
        let central = (lambda_bessel(kappa + h, robin(alpha), 1.0).unwrap()
            - lambda_bessel(kappa - h, robin(alpha), 1.0).unwrap())
            / (2.0 * h);
        let scale = central.abs().max(1e-3);
        assert!(
            (formula - central).abs() <= 1e-3 * scale,
            "derivative at ({}, {}): formula {} vs central {}",
            kappa,
            alpha,
            formula,
            central
        );
    }
}

// Criterion 6: the zero-threshold locus. At alpha = -1, a = 1 the computed
// locus curvature satisfies |lambda(kappa0, -1)| <= 1e-5, and the straight
// strip at alpha = -1/(2a) has threshold exactly zero.
#[test]
fn criterion_06_zero_threshold_locus() {
    let kappa0 = zero_threshold_curvature(-1.0, 1.0).expect("locus exists for 2a*alpha < -1");
    let lam = lambda_bessel(kappa0, robin(-1.0), 1.0).unwrap();
    assert!(lam.abs() <= 1e-5, "lambda at locus = {}", lam);
    for &a in &[0.5, 1.0, 2.0] {
        let v = straight_lambda(robin(-1.0 / (2.0 * a)), a).unwrap();
        assert_eq!(v, 0.0, "straight threshold at 2a*alpha = -1 must be exact");
    }
}

// Criterion 7: the constant-coefficient lower bound against the 2D
// threshold on five problems with mixed-sign alpha(s) and bump kappa(s),
// each satisfying kappa <= 0 everywhere or alpha <= 0 everywhere:
// lambda(inf kappa, inf alpha) <= inf_s lambda(kappa(s), alpha(s))
// <= lambda_2d + 10 * mesh error, at ns = nt = 128. Budget: 5 min.
#[test]
fn criterion_07_lower_bound_chain() {
    let t0 = Instant::now();
    let problems: Vec<(Profile, Profile, f64)> = vec![
        // Negative curvature bump, negative alpha bump.
        (
            Profile::bump(0.0, 1.5, -0.5).unwrap(),
            Profile::bump(0.0, 2.0, -0.3).unwrap(),
            0.0,
        ),
        // Negative curvature, sign-changing alpha.
        (
            Profile::bump(0.0, 2.0, -0.35).unwrap(),
            Profile::Sum(vec![
                Profile::Const(0.2),
                Profile::bump(0.0, 3.0, -0.7).unwrap(),
            ]),
            0.2,
        ),
        // Positive curvature allowed because alpha stays negative.
        (
            Profile::bump(1.0, 1.0, 0.4).unwrap(),
            Profile::Const(-0.6),
            -0.6,
        ),
        // Sign-changing curvature with non-positive alpha.
        (
            Profile::Sum(vec![
                Profile::bump(-2.0, 1.0, -0.3).unwrap(),
                Profile::bump(2.0, 1.0, 0.25).unwrap(),
            ]),
            Profile::Sum(vec![
                Profile::Const(-0.4),
                Profile::bump(0.0, 2.0, 0.4).unwrap(),
            ]),
            -0.4,
        ),
        // Negative curvature, sign-changing alpha around a positive base.
        (
            Profile::bump(0.0, 1.0, -0.6).unwrap(),
            Profile::Sum(vec![
                Profile::Const(0.3),
                Profile::bump(0.0, 4.0, -0.8).unwrap(),
            ]),
            0.3,
        ),
    ];
    for (idx, (kappa, alpha, alpha0)) in problems.into_iter().enumerate() {
        let problem = StripProblem {
            a: 1.0,
            s_min: -12.0,
            s_max: 12.0,
            kappa,
            alpha,
            alpha0,
            end_bc: EndBc::Neumann,
        };
        let rep = verify_threshold_bound(&problem, 128, 128, 1e-9).unwrap();
        assert!(rep.sign_hypothesis, "problem {} breaks the sign hypothesis", idx);
        assert!(
            rep.constant_bound <= rep.intermediate + 1e-12 * rep.intermediate.abs().max(1.0),
            "problem {}: constant {} above intermediate {}",
            idx,
            rep.constant_bound,
            rep.intermediate
        );
        assert!(
            rep.intermediate <= rep.lambda_hat + 10.0 * rep.mesh_err,
            "problem {}: intermediate {} above 2d value {} + {}",
            idx,
            rep.intermediate,
            rep.lambda_hat,
            10.0 * rep.mesh_err
        );
        assert!(rep.chain_ok, "problem {} chain flag", idx);
    }
    assert!(t0.elapsed().as_secs_f64() < 300.0, "bound chain over budget");
}

// Criterion 8: a compactly supported curvature with negative integral
// binds below the straight threshold: Dirichlet truncation on [-20, 20]
// puts the 2D value under pi^2/16 by more than 1e-3, conclusively
// (margin > 10x mesh error), with the margin growing with the interval.
#[test]
fn criterion_08_binding_below_threshold() {
    let problem = StripProblem {
        a: 1.0,
        s_min: -20.0,
        s_max: 20.0,
        kappa: Profile::bump(0.0, 1.0, -0.5).unwrap(),
        alpha: Profile::Const(0.0),
        alpha0: 0.0,
        end_bc: EndBc::Dirichlet,
    };
    let rep = dk_upper_bound(&problem, 160, 16, 1e-9, &[0.5, 1.0]).unwrap();
    assert!(rep.kappa_integral < 0.0);
    assert!(rep.conclusive, "margin {} vs mesh err", rep.margin);
    assert!(rep.margin > 1e-3, "margin {} too small", rep.margin);
    assert!(
        rep.sweep[1].margin >= rep.sweep[0].margin,
        "margin should not shrink as the truncation grows"
    );
}

// Criterion 9: Hardy certificate and audits. The certificate constant is
// positive; 1000 randomized discrete trials never violate the form
// inequality beyond 10x the mesh error; the unweighted interval lemma
// holds on 100 random compactly supported fields.
#[test]
fn criterion_09_hardy_inequality() {
    let problem = StripProblem {
        a: 1.0,
        s_min: -8.0,
        s_max: 8.0,
        kappa: Profile::bump(0.0, 1.0, 0.3).unwrap(),
        alpha: Profile::Const(0.0),
        alpha0: 0.0,
        end_bc: EndBc::Dirichlet,
    };
    let cert = hardy_constant(&problem).unwrap();
    assert!(cert.c > 0.0, "certificate constant must be positive");
    assert_eq!(cert.c.to_bits(), cert.recompute_c().to_bits());

    let audit = verify_hardy(&problem, &cert, 1000, 2024, 128, 24).unwrap();
    assert_eq!(
        audit.violations, 0,
        "{} of {} trials violated the inequality (min ratio {})",
        audit.violations, audit.trials, audit.min_ratio
    );

    // Interval lemma on random smooth fields over a 200 x 16 grid.
    let (ns, nt, s_min, s_max) = (200usize, 16usize, -10.0, 10.0);
    let mut rng = Rng::new(99);
    for trial in 0..100 {
        let mut psi = vec![0.0f64; (ns + 1) * (nt + 1)];
        let n_bumps = 1 + (rng.uniform() * 3.0) as usize;
        for _ in 0..n_bumps {
            let hw = rng.uniform_in(0.5, 4.0);
            let c0 = rng.uniform_in(s_min + hw + 0.25, s_max - hw - 0.25);
            let amp = rng.normal();
            let phase = rng.uniform_in(0.0, PI);
            for j in 1..ns {
                let s = s_min + (s_max - s_min) * j as f64 / ns as f64;
                let u = (s - c0) / hw;
                if u.abs() >= 1.0 {
                    continue;
                }
                let env = amp * (1.0 - 1.0 / (1.0 - u * u)).exp();
                for i in 0..=nt {
                    let t = -1.0 + 2.0 * i as f64 / nt as f64;
                    psi[j * (nt + 1) + i] += env * (phase + 1.3 * t).sin();
                }
            }
        }
        if trial % 4 == 0 {
            for (pos, v) in psi.iter_mut().enumerate() {
                let j = pos / (nt + 1);
                if j != 0 && j != ns {
                    *v += 0.02 * rng.normal();
                }
            }
        }
        let half = rng.uniform_in(0.5, 3.0);
        let mid = rng.uniform_in(-4.0, 4.0);
        let chk = hardy_lemma_check(&psi, ns, nt, s_min, s_max, 1.0, mid - half, mid + half)
            .unwrap();
        assert!(
            chk.holds(),
            "trial {}: lemma lhs {} > rhs {}",
            trial,
            chk.lhs,
            chk.rhs
        );
    }
}

// Criterion 10: stability of the positive-curvature bound under a small
// negative part: at half the computed budget epsilon0, the perturbed
// (sign-changing) curvature keeps the 2D threshold above lambda(0, 0)
// minus 10x the mesh error.
#[test]
fn criterion_10_stability_budget() {
    let problem = StripProblem {
        a: 1.0,
        s_min: -8.0,
        s_max: 8.0,
        kappa: Profile::bump(0.0, 1.0, 0.3).unwrap(),
        alpha: Profile::Const(0.0),
        alpha0: 0.0,
        end_bc: EndBc::Neumann,
    };
    let cert = hardy_constant(&problem).unwrap();
    let stab = stability_epsilon(&cert, -4.0, 4.0).unwrap();
    assert!(stab.epsilon0 > 0.0 && stab.weight_nonneg);

    // Negative bump centered at s = 2, outside the curvature support, so
    // the perturbed curvature genuinely changes sign.
    let neg = Profile::bump(2.0, 1.0, 1.0).unwrap();
    let eps = 0.5 * stab.epsilon0;
    let audit = stability_audit(&problem, eps, &neg, 96, 16).unwrap();
    assert!(
        audit.ok,
        "perturbed threshold {} below lambda(0,0) {} - {}",
        audit.lambda_hat,
        audit.lambda0,
        10.0 * audit.mesh_err
    );
}

// Criterion 11: the critical Robin coefficient where the threshold loses
// curvature-monotonicity lies in [0.73, 0.83] at a = 1. Budget: 5 min.
#[test]
fn criterion_11_critical_robin_coefficient() {
    let t0 = Instant::now();
    let alpha_c = critical_alpha_bessel(1.0, 1e-4).unwrap();
    assert!(
        (0.73..=0.83).contains(&alpha_c),
        "critical alpha = {}",
        alpha_c
    );
    assert!(t0.elapsed().as_secs_f64() < 300.0, "critical alpha over budget");
    // Scaling cross-check: a = 2 halves the critical coefficient.
    let alpha_c2 = critical_alpha_bessel(2.0, 1e-4).unwrap();
    assert!(
        (alpha_c2 - alpha_c / 2.0).abs() <= 2e-4,
        "scaling: {} vs {}",
        alpha_c2,
        alpha_c / 2.0
    );
}

// The zero-threshold locus only exists below the coupling 2a*alpha = -1;
// the boundary case itself sits exactly at zero (annulus solver evidence
// for the criterion-6 statement, pinned here against regressions).
#[test]
fn locus_boundary_cases_stay_pinned() {
    assert_eq!(zero_threshold_curvature(-0.4, 1.0), None);
    assert_eq!(zero_threshold_curvature(-0.5, 1.0), Some(0.0));
    assert!(lambda_bessel(0.4, robin(-0.5), 1.0).unwrap() > 0.0);
}
