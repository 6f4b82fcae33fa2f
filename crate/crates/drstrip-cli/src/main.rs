use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use drstrip_cli::commands::{self, to_json, write_output};
use drstrip_cli::config::{AlphaArg, StripConfig};
use drstrip_cli::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "drstrip",
    version,
    about = "Spectral thresholds of curved Dirichlet-Robin strips: solvers, sweeps, and inequality audits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Relative tolerance for eigenvalue refinement.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Write the machine-readable report (JSON, or CSV for sweep) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized audits.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Transverse threshold lambda(kappa, alpha) by both discretizations
    /// and the cross-product oracle, with agreement deltas.
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        /// Robin coefficient, or the token `dirichlet`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        a: f64,
    },
    /// Threshold curves lambda(kappa, alpha) over a curvature grid (CSV).
    Sweep {
        #[arg(long)]
        a: f64,
        /// Comma-separated Robin coefficients and/or `dirichlet`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alphas: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        kappa_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        kappa_max: f64,
        #[arg(long)]
        points: usize,
    },
    /// Robin coefficient above which the threshold loses monotonicity in
    /// the curvature.
    CriticalAlpha {
        #[arg(long)]
        a: f64,
    },
    /// Audit the constant-coefficient lower bound against the 2D threshold.
    Bound2d {
        #[arg(long)]
        config: PathBuf,
        /// Also dump the 2D ground state as CSV (s,t,psi).
        #[arg(long)]
        dump_field: Option<PathBuf>,
    },
    /// Audit binding below the straight threshold for negative total
    /// curvature (Dirichlet-truncated upper bounds over nested intervals).
    Dk {
        #[arg(long)]
        config: PathBuf,
    },
    /// Hardy certificate (interval, constant) plus a randomized audit of
    /// the inequality on the discretized form.
    Hardy {
        #[arg(long)]
        config: PathBuf,
        /// Number of randomized trials (default 1000 or config value).
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Curvature-negativity budget epsilon0 and the perturbed-threshold
    /// audit (requires a `stability` section in the config).
    Stability {
        #[arg(long)]
        config: PathBuf,
    },
    /// Threshold nu(alpha) of the limiting disc of radius 2a.
    Disc {
        /// Robin coefficient, or the token `dirichlet`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        a: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Validation("--tol must be positive".into()));
    }
    match cli.cmd {
        Cmd::Lambda { kappa, alpha, a } => {
            let alpha = AlphaArg::parse(&alpha)?;
            let rep = commands::cmd_lambda(kappa, &alpha, a, cli.tol)?;
            print!("{}", rep.human());
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
        Cmd::Sweep {
            a,
            alphas,
            kappa_min,
            kappa_max,
            points,
        } => {
            let alphas = alphas
                .iter()
                .map(|t| AlphaArg::parse(t))
                .collect::<Result<Vec<_>, _>>()?;
            let table =
                commands::cmd_sweep(a, &alphas, kappa_min, kappa_max, points, cli.tol, cli.threads)?;
            print!("{}", table.human());
            match &cli.out {
                Some(out) => write_output(out, &table.csv())?,
                None => print!("{}", table.csv()),
            }
            Ok(())
        }
        Cmd::CriticalAlpha { a } => {
            let rep = commands::cmd_critical_alpha(a, cli.tol)?;
            print!("{}", rep.human());
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
        Cmd::Bound2d { config, dump_field } => {
            let cfg = StripConfig::from_file(&config)?;
            let rep = commands::cmd_bound2d(&cfg, cli.tol)?;
            print!("{}", rep.human());
            if let Some(path) = &dump_field {
                let csv = commands::dump_field(&cfg, cli.tol)?;
                write_output(path, &csv)?;
            }
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
        Cmd::Dk { config } => {
            let cfg = StripConfig::from_file(&config)?;
            let rep = commands::cmd_dk(&cfg, cli.tol)?;
            print!("{}", rep.human());
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
        Cmd::Hardy { config, trials } => {
            let cfg = StripConfig::from_file(&config)?;
            let rep = commands::cmd_hardy(&cfg, trials, cli.seed)?;
            print!("{}", rep.human());
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
        Cmd::Stability { config } => {
            let cfg = StripConfig::from_file(&config)?;
            let rep = commands::cmd_stability(&cfg)?;
            print!("{}", rep.human());
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
        Cmd::Disc { alpha, a } => {
            let alpha = AlphaArg::parse(&alpha)?;
            let rep = commands::cmd_disc(&alpha, a)?;
            print!("{}", rep.human());
            if let Some(out) = &cli.out {
                write_output(out, &to_json(&rep)?)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful outcomes; anything else is
            // an input problem.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
