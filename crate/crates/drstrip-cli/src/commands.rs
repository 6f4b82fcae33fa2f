//! Command implementations. Each command validates its inputs, computes a
//! typed report, and only then renders output, so an invalid run never
//! leaves a partial file behind. All numeric output goes through fixed
//! format strings, making reruns byte-identical for identical inputs.

use crate::config::{build_problem, build_profile, AlphaArg, StripConfig};
use crate::CliError;
use drstrip_core::annulus;
use drstrip_core::hardy;
use drstrip_core::strip2d::{self, assemble_2d, ground_state, EndBc};
use drstrip_core::transverse::{self, OuterBc};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Fixed scientific format for every computed number in CSV and text
/// output (JSON uses serde's shortest round-trip form, also deterministic).
pub fn sci(x: f64) -> String {
    format!("{:.12e}", x)
}

/// Threshold for treating a curvature as straight when naming the oracle;
/// mirrors the dispatch inside the annulus solver, where smaller |kappa|a
/// cannot be resolved by the cylinder-function phase.
const STRAIGHT_TOKEN: f64 = 1e-7;

fn oracle_lambda(kappa: f64, alpha: OuterBc, a: f64) -> Result<(f64, &'static str), CliError> {
    if kappa.abs() * a < STRAIGHT_TOKEN {
        Ok((transverse::straight_lambda(alpha, a)?, "closed-form"))
    } else {
        Ok((annulus::lambda_bessel(kappa, alpha, a)?, "bessel"))
    }
}

// ---------------------------------------------------------------- lambda

#[derive(Serialize)]
pub struct LambdaReport {
    pub kappa: f64,
    pub alpha: String,
    pub a: f64,
    pub fd_value: f64,
    pub fd_err: f64,
    pub fd_n: usize,
    pub transformed: f64,
    pub delta_transformed: f64,
    pub oracle: f64,
    pub oracle_solver: &'static str,
    pub delta_oracle: f64,
}

pub fn cmd_lambda(kappa: f64, alpha: &AlphaArg, a: f64, tol: f64) -> Result<LambdaReport, CliError> {
    let bc = alpha.to_bc();
    let fd = transverse::lambda_to_tol(kappa, bc, a, tol)?;
    let transformed = transverse::lambda_transformed(kappa, bc, a, fd.n)?;
    let (oracle, oracle_solver) = oracle_lambda(kappa, bc, a)?;
    Ok(LambdaReport {
        kappa,
        alpha: alpha.token(),
        a,
        fd_value: fd.value,
        fd_err: fd.err,
        fd_n: fd.n,
        transformed,
        delta_transformed: transformed - fd.value,
        oracle,
        oracle_solver,
        delta_oracle: fd.value - oracle,
    })
}

impl LambdaReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "threshold lambda(kappa={}, alpha={}, a={})",
            self.kappa, self.alpha, self.a
        );
        let _ = writeln!(
            s,
            "  finite differences  {}  (n={}, err={})",
            sci(self.fd_value),
            self.fd_n,
            sci(self.fd_err)
        );
        let _ = writeln!(
            s,
            "  transformed form    {}  (delta={})",
            sci(self.transformed),
            sci(self.delta_transformed)
        );
        let _ = writeln!(
            s,
            "  oracle ({})  {}  (delta={})",
            self.oracle_solver,
            sci(self.oracle),
            sci(self.delta_oracle)
        );
        s
    }
}

// ------------------------------------------------------------------ disc

#[derive(Serialize)]
pub struct DiscReport {
    pub alpha: String,
    pub a: f64,
    pub bessel: f64,
    pub fd_value: f64,
    pub fd_err: f64,
    pub fd_n: usize,
    pub delta: f64,
}

pub fn cmd_disc(alpha: &AlphaArg, a: f64) -> Result<DiscReport, CliError> {
    let bc = alpha.to_bc();
    let bessel = annulus::disc_nu_bessel(bc, a)?;
    let fd = transverse::disc_nu_extrap(bc, a, 2048)?;
    Ok(DiscReport {
        alpha: alpha.token(),
        a,
        bessel,
        fd_value: fd.value,
        fd_err: fd.err,
        fd_n: fd.n,
        delta: fd.value - bessel,
    })
}

impl DiscReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "disc threshold nu(alpha={}, a={})", self.alpha, self.a);
        let _ = writeln!(s, "  bessel oracle       {}", sci(self.bessel));
        let _ = writeln!(
            s,
            "  finite differences  {}  (n={}, err={}, delta={})",
            sci(self.fd_value),
            self.fd_n,
            sci(self.fd_err),
            sci(self.delta)
        );
        s
    }
}

// ----------------------------------------------------------------- sweep

pub struct SweepRow {
    pub kappa: f64,
    pub alpha: String,
    pub lambda: Option<f64>,
    pub solver: &'static str,
    pub delta_oracle: Option<f64>,
    pub status: String,
}

pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

fn sanitize(msg: &str) -> String {
    msg.replace([',', '\n', '\r'], ";")
}

fn sweep_point(a: f64, tol: f64, alpha: &AlphaArg, kappa: f64) -> SweepRow {
    let bc = alpha.to_bc();
    match transverse::lambda_to_tol(kappa, bc, a, tol) {
        Ok(th) => match oracle_lambda(kappa, bc, a) {
            Ok((oracle, _)) => SweepRow {
                kappa,
                alpha: alpha.token(),
                lambda: Some(th.value),
                solver: "fd",
                delta_oracle: Some(th.value - oracle),
                status: "ok".into(),
            },
            Err(e) => SweepRow {
                kappa,
                alpha: alpha.token(),
                lambda: Some(th.value),
                solver: "fd",
                delta_oracle: None,
                status: sanitize(&format!("oracle failed: {}", e)),
            },
        },
        Err(e) => SweepRow {
            kappa,
            alpha: alpha.token(),
            lambda: None,
            solver: "fd",
            delta_oracle: None,
            status: sanitize(&e.to_string()),
        },
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    a: f64,
    alphas: &[AlphaArg],
    kappa_min: f64,
    kappa_max: f64,
    points: usize,
    tol: f64,
    threads: usize,
) -> Result<SweepTable, CliError> {
    if !(a > 0.0) {
        return Err(CliError::Validation("half-width a must be positive".into()));
    }
    if alphas.is_empty() {
        return Err(CliError::Validation("at least one alpha is required".into()));
    }
    if points < 2 {
        return Err(CliError::Validation("sweep needs at least 2 points".into()));
    }
    if !(kappa_min < kappa_max) {
        return Err(CliError::Validation("need kappa_min < kappa_max".into()));
    }
    if kappa_min * a <= -1.0 || kappa_max * a >= 1.0 {
        return Err(CliError::Validation(
            "curvature range must stay inside (-1/a, 1/a)".into(),
        ));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| kappa_min + (kappa_max - kappa_min) * i as f64 / (points - 1) as f64)
        .collect();
    // One task per (alpha, kappa) pair; rows collected in input order so
    // the output is deterministic no matter the scheduling.
    let jobs: Vec<(usize, usize)> = (0..alphas.len())
        .flat_map(|ai| (0..points).map(move |ki| (ai, ki)))
        .collect();
    let run = || {
        jobs.par_iter()
            .map(|&(ai, ki)| sweep_point(a, tol, &alphas[ai], grid[ki]))
            .collect::<Vec<_>>()
    };
    let rows = if threads == 0 {
        run()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Solver(format!("thread pool: {}", e)))?;
        pool.install(run)
    };
    Ok(SweepTable { rows })
}

impl SweepTable {
    pub fn csv(&self) -> String {
        let mut out = String::from("kappa,alpha,lambda,solver,delta_oracle,status\n");
        for r in &self.rows {
            let lambda = r.lambda.map(sci).unwrap_or_default();
            let delta = r.delta_oracle.map(sci).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                sci(r.kappa),
                r.alpha,
                lambda,
                r.solver,
                delta,
                r.status
            );
        }
        out
    }

    pub fn human(&self) -> String {
        let bad = self.rows.iter().filter(|r| r.status != "ok").count();
        let worst = self
            .rows
            .iter()
            .filter_map(|r| r.delta_oracle)
            .fold(0.0f64, |m, d| m.max(d.abs()));
        format!(
            "sweep: {} rows, {} failures, max |delta_oracle| = {}\n",
            self.rows.len(),
            bad,
            sci(worst)
        )
    }
}

// -------------------------------------------------------- critical-alpha

#[derive(Serialize)]
pub struct CriticalAlphaReport {
    pub a: f64,
    pub alpha_critical: f64,
}

pub fn cmd_critical_alpha(a: f64, tol: f64) -> Result<CriticalAlphaReport, CliError> {
    // Central differences of the annulus oracle resolve the slope into the
    // degenerate corner kappa a -> 1, where mesh derivatives cannot.
    let alpha_critical = annulus::critical_alpha_bessel(a, tol.max(1e-6))?;
    Ok(CriticalAlphaReport { a, alpha_critical })
}

impl CriticalAlphaReport {
    pub fn human(&self) -> String {
        format!(
            "critical alpha(a={}) = {}  (threshold loses kappa-monotonicity above this)\n",
            self.a,
            sci(self.alpha_critical)
        )
    }
}

// --------------------------------------------------------------- bound2d

#[derive(Serialize)]
pub struct Bound2dReport {
    pub ns: usize,
    pub nt: usize,
    pub end_bc: &'static str,
    pub lambda_hat: f64,
    pub mesh_err: f64,
    pub intermediate_bound: f64,
    pub constant_bound: f64,
    pub sign_hypothesis: bool,
    pub chain_ok: bool,
}

pub fn cmd_bound2d(cfg: &StripConfig, tol: f64) -> Result<Bound2dReport, CliError> {
    let problem = build_problem(cfg)?;
    let rep = strip2d::verify_threshold_bound(&problem, cfg.ns, cfg.nt, tol)?;
    if !rep.sign_hypothesis {
        return Err(CliError::Validation(
            "bound not asserted: need kappa <= 0 everywhere or alpha <= 0 everywhere".into(),
        ));
    }
    let out = Bound2dReport {
        ns: cfg.ns,
        nt: cfg.nt,
        end_bc: match problem.end_bc {
            EndBc::Neumann => "neumann",
            EndBc::Dirichlet => "dirichlet",
        },
        lambda_hat: rep.lambda_hat,
        mesh_err: rep.mesh_err,
        intermediate_bound: rep.intermediate,
        constant_bound: rep.constant_bound,
        sign_hypothesis: rep.sign_hypothesis,
        chain_ok: rep.chain_ok,
    };
    if !out.chain_ok {
        return Err(CliError::Audit(format!(
            "bound chain violated: constant {} / intermediate {} / 2d {} (mesh err {})",
            sci(out.constant_bound),
            sci(out.intermediate_bound),
            sci(out.lambda_hat),
            sci(out.mesh_err)
        )));
    }
    Ok(out)
}

impl Bound2dReport {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "threshold bound audit ({} ends, ns={}, nt={})",
            self.end_bc, self.ns, self.nt
        );
        let _ = writeln!(s, "  constant bound      {}", sci(self.constant_bound));
        let _ = writeln!(s, "  intermediate bound  {}", sci(self.intermediate_bound));
        let _ = writeln!(
            s,
            "  2d threshold        {}  (mesh err {})",
            sci(self.lambda_hat),
            sci(self.mesh_err)
        );
        let _ = writeln!(s, "  chain in order: {}", self.chain_ok);
        s
    }
}

/// Ground-state field dump: full node grid including boundary zeros.
pub fn dump_field(cfg: &StripConfig, tol: f64) -> Result<String, CliError> {
    let problem = build_problem(cfg)?;
    let pair = assemble_2d(&problem, cfg.ns, cfg.nt)?;
    let gs = ground_state(&pair, problem.spectral_floor(), tol.max(1e-12))?;
    let mesh = pair.mesh;
    let mut out = String::from("s,t,psi\n");
    for j in 0..=mesh.ns {
        let s = mesh.s_min + mesh.hs() * j as f64;
        for i in 0..=mesh.nt {
            let t = mesh.t(i);
            let v = match (mesh.col_of_node(j), i) {
                (_, 0) => 0.0,
                (None, _) => 0.0,
                (Some(c), _) => gs.vec[mesh.dof(c, i)],
            };
            let _ = writeln!(out, "{},{},{}", sci(s), sci(t), sci(v));
        }
    }
    Ok(out)
}

// -------------------------------------------------------------------- dk

#[derive(Serialize)]
pub struct DkPointOut {
    pub s_min: f64,
    pub s_max: f64,
    pub lambda_hat: f64,
    pub mesh_err: f64,
    pub margin: f64,
}

#[derive(Serialize)]
pub struct DkOut {
    pub lambda0: f64,
    pub kappa_integral: f64,
    pub sweep: Vec<DkPointOut>,
    pub margin: f64,
    pub conclusive: bool,
}

pub fn cmd_dk(cfg: &StripConfig, tol: f64) -> Result<DkOut, CliError> {
    let problem = build_problem(cfg)?;
    let fractions = cfg
        .fractions
        .clone()
        .unwrap_or_else(|| vec![0.25, 0.5, 0.75, 1.0]);
    let rep = strip2d::dk_upper_bound(&problem, cfg.ns, cfg.nt, tol, &fractions)?;
    let out = DkOut {
        lambda0: rep.lambda0,
        kappa_integral: rep.kappa_integral,
        sweep: rep
            .sweep
            .iter()
            .map(|p| DkPointOut {
                s_min: p.s_min,
                s_max: p.s_max,
                lambda_hat: p.lambda_hat,
                mesh_err: p.mesh_err,
                margin: p.margin,
            })
            .collect(),
        margin: rep.margin,
        conclusive: rep.conclusive,
    };
    if !out.conclusive {
        return Err(CliError::Audit(format!(
            "binding below threshold not conclusive: margin {} vs mesh err {}",
            sci(out.margin),
            sci(out.sweep.last().map(|p| p.mesh_err).unwrap_or(f64::NAN))
        )));
    }
    Ok(out)
}

impl DkOut {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "upper-bound audit: lambda(0, alpha0) = {}, integral of kappa = {}",
            sci(self.lambda0),
            sci(self.kappa_integral)
        );
        for p in &self.sweep {
            let _ = writeln!(
                s,
                "  [{:>8.3}, {:>8.3}]  lambda_hat {}  margin {}  (mesh err {})",
                p.s_min,
                p.s_max,
                sci(p.lambda_hat),
                sci(p.margin),
                sci(p.mesh_err)
            );
        }
        let _ = writeln!(
            s,
            "  final margin {} ({})",
            sci(self.margin),
            if self.conclusive {
                "conclusive"
            } else {
                "not conclusive"
            }
        );
        s
    }
}

// ----------------------------------------------------------------- hardy

#[derive(Serialize)]
pub struct CertificateOut {
    #[serde(rename = "J")]
    pub j: [f64; 2],
    pub s0: f64,
    pub min_mu: f64,
    pub c: f64,
    pub supnorm_kappa: f64,
    pub a: f64,
    pub epsilon0: f64,
}

#[derive(Serialize)]
pub struct HardyOut {
    pub certificate: CertificateOut,
    pub trials: usize,
    pub violations: usize,
    pub min_ratio: f64,
    pub ground_ratio: f64,
    pub audit_tol: f64,
    pub mesh_err: f64,
}

pub fn cmd_hardy(
    cfg: &StripConfig,
    trials_flag: Option<usize>,
    seed: u64,
) -> Result<HardyOut, CliError> {
    let problem = build_problem(cfg)?;
    let cert = hardy::hardy_constant(&problem)?;
    // The serialized budget takes I = J: a negative perturbation inside
    // the certified interval itself.
    let stab = hardy::stability_epsilon(&cert, cert.j_lo, cert.j_hi)?;
    let trials = trials_flag.or(cfg.trials).unwrap_or(1000);
    let audit = hardy::verify_hardy(&problem, &cert, trials, seed, cfg.ns, cfg.nt)?;
    let out = HardyOut {
        certificate: CertificateOut {
            j: [cert.j_lo, cert.j_hi],
            s0: cert.s0,
            min_mu: cert.min_mu,
            c: cert.c,
            supnorm_kappa: cert.supnorm_kappa,
            a: cert.a,
            epsilon0: stab.epsilon0,
        },
        trials: audit.trials,
        violations: audit.violations,
        min_ratio: audit.min_ratio,
        ground_ratio: audit.ground_ratio,
        audit_tol: audit.tol,
        mesh_err: audit.mesh_err,
    };
    if out.violations > 0 {
        return Err(CliError::Audit(format!(
            "hardy audit: {} of {} trials violated the inequality beyond tolerance",
            out.violations, out.trials
        )));
    }
    Ok(out)
}

impl HardyOut {
    pub fn human(&self) -> String {
        let c = &self.certificate;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "hardy certificate: J = [{}, {}], s0 = {}, min excess {}",
            sci(c.j[0]),
            sci(c.j[1]),
            sci(c.s0),
            sci(c.min_mu)
        );
        let _ = writeln!(
            s,
            "  c = {}  (sup |kappa| = {}, a = {}, epsilon0 = {})",
            sci(c.c),
            sci(c.supnorm_kappa),
            sci(c.a),
            sci(c.epsilon0)
        );
        let _ = writeln!(
            s,
            "  audit: {} trials, {} violations, min ratio {} (tol {})",
            self.trials,
            self.violations,
            sci(self.min_ratio),
            sci(self.audit_tol)
        );
        s
    }
}

// ------------------------------------------------------------- stability

#[derive(Serialize)]
pub struct StabilityOut {
    pub certificate: CertificateOut,
    pub cap: f64,
    pub weight_nonneg: bool,
    pub eps_used: f64,
    pub lambda0: f64,
    pub lambda_hat: f64,
    pub mesh_err: f64,
    pub ok: bool,
}

pub fn cmd_stability(cfg: &StripConfig) -> Result<StabilityOut, CliError> {
    let problem = build_problem(cfg)?;
    let spec = cfg.stability.as_ref().ok_or_else(|| {
        CliError::Validation("config needs a `stability` section for this command".into())
    })?;
    if !(spec.eps_fraction > 0.0 && spec.eps_fraction <= 1.0) {
        return Err(CliError::Validation("eps_fraction must lie in (0, 1]".into()));
    }
    if !(spec.i[1] > spec.i[0]) {
        return Err(CliError::Validation("interval i must have positive length".into()));
    }
    // The Dirichlet-Neumann setting of the stability statement: the
    // unperturbed boundary condition is plain Neumann.
    if cfg.alpha0 != 0.0 {
        return Err(CliError::Validation(
            "stability audit requires alpha0 = 0 (Neumann reference)".into(),
        ));
    }
    let neg_bump = build_profile(&spec.neg_bump)?;
    let cert = hardy::hardy_constant(&problem)?;
    let stab = hardy::stability_epsilon(&cert, spec.i[0], spec.i[1])?;
    let eps = spec.eps_fraction * stab.epsilon0;
    let audit = hardy::stability_audit(&problem, eps, &neg_bump, cfg.ns, cfg.nt)?;
    let out = StabilityOut {
        certificate: CertificateOut {
            j: [cert.j_lo, cert.j_hi],
            s0: cert.s0,
            min_mu: cert.min_mu,
            c: cert.c,
            supnorm_kappa: cert.supnorm_kappa,
            a: cert.a,
            epsilon0: stab.epsilon0,
        },
        cap: stab.cap,
        weight_nonneg: stab.weight_nonneg,
        eps_used: eps,
        lambda0: audit.lambda0,
        lambda_hat: audit.lambda_hat,
        mesh_err: audit.mesh_err,
        ok: audit.ok,
    };
    if !out.weight_nonneg {
        return Err(CliError::Audit(
            "stability weight went negative at the computed budget".into(),
        ));
    }
    if !out.ok {
        return Err(CliError::Audit(format!(
            "perturbed threshold {} fell below lambda(0,0) = {} beyond tolerance {}",
            sci(out.lambda_hat),
            sci(out.lambda0),
            sci(10.0 * out.mesh_err)
        )));
    }
    Ok(out)
}

impl StabilityOut {
    pub fn human(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "stability budget epsilon0 = {}  (cap {}, weight non-negative: {})",
            sci(self.certificate.epsilon0),
            sci(self.cap),
            self.weight_nonneg
        );
        let _ = writeln!(
            s,
            "  audit at eps = {}: perturbed threshold {} vs lambda(0,0) = {} (mesh err {}) -> {}",
            sci(self.eps_used),
            sci(self.lambda_hat),
            sci(self.lambda0),
            sci(self.mesh_err),
            if self.ok { "holds" } else { "violated" }
        );
        s
    }
}

// ------------------------------------------------------------- reporting

pub fn to_json<T: Serialize>(report: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Solver(format!("serialization: {}", e)))?;
    text.push('\n');
    Ok(text)
}

/// Final, all-at-once file write: nothing is created until the content is
/// fully computed.
pub fn write_output(path: &std::path::Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Validation(format!("cannot write {}: {}", path.display(), e)))
}
