//! Subcommand plumbing for the `tdgl` binary. Kept in a library so the
//! integration tests can drive the CLI in-process.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use tdgl::config::{scenario, RunConfig};
use tdgl::error::Error;
use tdgl::{asymptotics, convergence, diagnostics, gap, output, runner};

#[derive(Parser)]
#[command(name = "tdgl", about = "Hybrid TDGL/BCS-gap vortex dynamics solver", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a config file and write diagnostics, snapshots and a manifest.
    Run {
        config: PathBuf,
    },
    /// Run a named preset (fig1_H015, fig1_H030, fig3_homog, fig3_inhomog,
    /// fig4_homog, fig4_inhomog, fig5_axis, fig5_tilt, fig5_tilt_inhomog).
    Scenario {
        name: String,
        /// Output directory override.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Temporal convergence study against a fine-step reference.
    Converge {
        config: PathBuf,
        /// Comma-separated ladder of time steps, coarse to fine.
        #[arg(long, value_delimiter = ',')]
        ladder: Vec<f64>,
        /// Reference time step (at most min(ladder)/4).
        #[arg(long = "ref")]
        tau_ref: f64,
        /// Comparison time.
        #[arg(long, default_value_t = 0.064)]
        time: f64,
        /// Report CSV path (default: <output.dir>/convergence.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the near-critical expansion coefficients and identity checks.
    Coeffs {
        #[arg(long, default_value_t = 0.882)]
        beta0: f64,
        #[arg(long, default_value_t = 29.3)]
        omega: f64,
    },
    /// Build the gap nonlinearity table for a config and dump it as CSV.
    Gaptable {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a config without running or writing anything.
    Check {
        config: PathBuf,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::Io { .. } | Error::Domain(_) => 1,
        _ => 2,
    }
}

fn load_config(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    RunConfig::parse(&text)
}

fn do_run(cfg: &RunConfig) -> Result<i32, Error> {
    let (prepared, result) = runner::execute(cfg)?;
    let written = output::write_outputs(cfg, &prepared, &result)?;
    let last = result.diagnostics.last().unwrap();
    println!(
        "steps: {}   t: {}   energy: {:.6e}   max|psi|: {:.6}   mean|psi|: {:.6}",
        last.n, last.t, last.energy, last.max_abs_psi, last.mean_abs_psi
    );
    let h_const = prepared.field.is_time_constant();
    let viol = diagnostics::monitor_energy_decay(&result.diagnostics, h_const, 1e-8);
    println!("energy-decay violations: {}", viol.len());
    for p in &written {
        println!("wrote {}", p.display());
    }
    if let Some(step) = result.blowup {
        eprintln!("numerical blowup at step {step}; partial results written");
        return Ok(2);
    }
    Ok(0)
}

fn real_main(args: Vec<String>) -> Result<i32, Error> {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exits
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };

    match cli.command {
        Command::Run { config } => do_run(&load_config(&config)?),
        Command::Scenario { name, out } => {
            let mut cfg = scenario(&name)?;
            if let Some(dir) = out {
                cfg.output.dir = dir;
            }
            do_run(&cfg)
        }
        Command::Converge { config, ladder, tau_ref, time, out } => {
            let cfg = load_config(&config)?;
            let report = convergence::convergence_study(&cfg, &ladder, tau_ref, time)?;
            let path = out.unwrap_or_else(|| cfg.output.dir.join("convergence.csv"));
            convergence::write_report_csv(&path, &report)?;
            println!("tau        L2(psi)      rate    H1(psi)      rate    Hcurl(A)     rate");
            for r in &report.rows {
                let fr = |v: Option<f64>| v.map_or("  -  ".to_string(), |x| format!("{x:5.2}"));
                println!(
                    "{:<9} {:.4e}  {}  {:.4e}  {}  {:.4e}  {}",
                    r.tau,
                    r.l2_psi,
                    fr(r.rate_l2),
                    r.h1_psi,
                    fr(r.rate_h1),
                    r.hcurl_a,
                    fr(r.rate_hcurl)
                );
            }
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Coeffs { beta0, omega } => {
            let c = asymptotics::gamma_hats(beta0, omega, 1e-12)?;
            let nu0_eq13 = gap::nu0_from_gap_normalization(beta0, omega, 1e-12)?;
            let nu0_bcs = gap::nu0_bcs_zero_temperature(omega)?;
            println!("beta0 = {beta0}, omega_tilde = {omega}");
            println!("gamma0  = {:.15}", c.gamma0);
            println!("gamma1  = {:.15}   (tanh(beta0*omega) = {:.15})", c.gamma1, (beta0 * omega).tanh());
            println!("gamma21 = {:.15}", c.gamma21);
            println!("gamma22 = {:.15}", c.gamma22);
            println!("gamma23 = {:.15}", c.gamma23);
            println!("nu0 (gap normalization) = {nu0_eq13:.15}");
            println!("nu0 (2/arcsinh omega)   = {nu0_bcs:.15}");
            println!("identity nu0*gamma0 - 1 = {:+.3e}", nu0_eq13 * c.gamma0 - 1.0);
            Ok(0)
        }
        Command::Gaptable { config, out } => {
            let cfg = load_config(&config)?;
            let prepared = runner::prepare(&cfg)?;
            output::write_gap_table(&out, &prepared.table)?;
            println!(
                "wrote {} ({} s-samples x {} delta rows, L = {:.6})",
                out.display(),
                prepared.table.s_grid.len(),
                prepared.table.delta_grid.len(),
                prepared.table.lipschitz_l
            );
            Ok(0)
        }
        Command::Check { config } => {
            let cfg = load_config(&config)?;
            runner::validate(&cfg)?;
            println!("ok");
            Ok(0)
        }
    }
}

/// Run the CLI; returns the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    match real_main(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
