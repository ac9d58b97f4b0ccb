//! Temporal convergence study: run a fine-step reference on a fixed grid,
//! then each ladder member from identical initial data, and report errors and
//! successive log2 rates at the comparison time.

use crate::config::RunConfig;
use crate::diagnostics;
use crate::error::{Error, Result};
use crate::runner::{self, Prepared};
use crate::stepper::{self, SimState};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub l2_psi: f64,
    pub h1_psi: f64,
    pub hcurl_a: f64,
    /// log2(e_prev / e_this) against the previous (coarser) ladder entry.
    pub rate_l2: Option<f64>,
    pub rate_h1: Option<f64>,
    pub rate_hcurl: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub tau_ref: f64,
    pub compare_time: f64,
    pub rows: Vec<ConvergenceRow>,
}

fn steps_for(tau: f64, time: f64) -> Result<usize> {
    let n = (time / tau).round();
    if n < 1.0 || ((n * tau - time) / time).abs() > 1e-9 {
        return Err(Error::config(
            "scheme.tau",
            format!("tau = {tau} does not divide the comparison time {time}"),
        ));
    }
    Ok(n as usize)
}

fn run_to(prepared: &Prepared, tau: f64, n_steps: usize) -> Result<SimState> {
    let mut scheme = prepared.scheme;
    scheme.tau = tau;
    scheme.n_steps = n_steps;
    let stepper = stepper::Stepper::new(
        prepared.grid,
        scheme,
        &prepared.table,
        &prepared.delta,
        &prepared.field,
    )?;
    let result = stepper::run(&stepper, prepared.initial.clone(), &[])?;
    if let Some(step) = result.blowup {
        return Err(Error::Blowup { step, context: format!("convergence run at tau={tau}") });
    }
    Ok(result.final_state)
}

/// Run the study. `ladder` is ordered coarse to fine; rates are computed
/// between consecutive entries. The reference time step must be at most a
/// quarter of the smallest ladder step.
pub fn convergence_study(
    base: &RunConfig,
    ladder: &[f64],
    tau_ref: f64,
    compare_time: f64,
) -> Result<ConvergenceReport> {
    if ladder.is_empty() {
        return Err(Error::config("ladder", "must contain at least one tau"));
    }
    let min_tau = ladder.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(tau_ref <= min_tau / 4.0) {
        return Err(Error::config(
            "ref",
            format!("tau_ref = {tau_ref} must be at most min(ladder)/4 = {}", min_tau / 4.0),
        ));
    }
    let ref_steps = steps_for(tau_ref, compare_time)?;
    let ladder_steps: Vec<usize> =
        ladder.iter().map(|&t| steps_for(t, compare_time)).collect::<Result<_>>()?;

    let prepared = runner::prepare(base)?;
    let reference = run_to(&prepared, tau_ref, ref_steps)?;

    // ladder members are independent runs; compute them in parallel and
    // assemble in ladder order
    let errors: Vec<Result<(f64, f64, f64)>> = ladder
        .par_iter()
        .zip(ladder_steps.par_iter())
        .map(|(&tau, &n)| {
            let state = run_to(&prepared, tau, n)?;
            let dpsi = diagnostics::psi_diff(&state.psi, &reference.psi)?;
            let da = diagnostics::a_diff(&state.a, &reference.a)?;
            Ok((
                diagnostics::l2_complex(&dpsi),
                diagnostics::h1_complex(&dpsi),
                diagnostics::hcurl_vector(&da),
            ))
        })
        .collect();

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ladder.len());
    for (k, res) in errors.into_iter().enumerate() {
        let (l2, h1, hc) = res?;
        let rate = |prev: f64, this: f64, tau_prev: f64, tau_this: f64| -> Option<f64> {
            if prev > 0.0 && this > 0.0 {
                Some((prev / this).ln() / (tau_prev / tau_this).ln())
            } else {
                None
            }
        };
        let (rate_l2, rate_h1, rate_hcurl) = if k == 0 {
            (None, None, None)
        } else {
            let p = &rows[k - 1];
            (
                rate(p.l2_psi, l2, p.tau, ladder[k]),
                rate(p.h1_psi, h1, p.tau, ladder[k]),
                rate(p.hcurl_a, hc, p.tau, ladder[k]),
            )
        };
        rows.push(ConvergenceRow {
            tau: ladder[k],
            l2_psi: l2,
            h1_psi: h1,
            hcurl_a: hc,
            rate_l2,
            rate_h1,
            rate_hcurl,
        });
    }
    Ok(ConvergenceReport { tau_ref, compare_time, rows })
}

/// Convergence report CSV: tau,l2_psi,rate_l2,h1_psi,rate_h1,hcurl_a,rate_hcurl.
pub fn write_report_csv(path: &std::path::Path, report: &ConvergenceReport) -> Result<()> {
    use std::io::Write;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::io(parent.display().to_string(), e))?;
        }
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let e = |err| Error::io(path.display().to_string(), err);
    writeln!(f, "tau,l2_psi,rate_l2,h1_psi,rate_h1,hcurl_a,rate_hcurl").map_err(e)?;
    let fmt = |r: Option<f64>| r.map_or(String::new(), |v| v.to_string());
    for r in &report.rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{}",
            r.tau,
            r.l2_psi,
            fmt(r.rate_l2),
            r.h1_psi,
            fmt(r.rate_h1),
            r.hcurl_a,
            fmt(r.rate_hcurl)
        )
        .map_err(e)?;
    }
    Ok(())
}
