//! Turns a validated `RunConfig` into grids, tables, and a stepper, and
//! executes the simulation loop.

use crate::config::{RunConfig, StabilizerSpec};
use crate::error::{Error, Result};
use crate::gap::{GapParams, GapTable};
use crate::grid::{ComplexField, Grid, ScalarField, VectorField};
use crate::inhomogeneity::{self, InhomogeneitySpec};
use crate::output;
use crate::stepper::{self, AppliedField, RunResult, SchemeParams, SimState, Stepper};
use num_complex::Complex64;

/// Everything a run needs, with the stabilizer resolved.
pub struct Prepared {
    pub grid: Grid,
    pub scheme: SchemeParams,
    pub table: GapTable,
    pub delta: ScalarField,
    pub field: AppliedField,
    pub initial: SimState,
}

impl Prepared {
    pub fn stepper(&self) -> Result<Stepper<'_>> {
        Stepper::new(self.grid, self.scheme, &self.table, &self.delta, &self.field)
    }
}

/// Cheap validation without building the gap table.
pub fn validate(cfg: &RunConfig) -> Result<()> {
    let grid = Grid::new(cfg.grid.dim, &cfg.grid.lo, &cfg.grid.hi, &cfg.grid.n)?;
    if !cfg.field.dim_ok(grid.dim) {
        return Err(Error::config("field.h", "component count does not match grid.dim"));
    }
    if cfg.init.a.len() != grid.dim {
        return Err(Error::config("init.a", "component count does not match grid.dim"));
    }
    let scheme = SchemeParams {
        tau: cfg.scheme.tau,
        stabilizer: match cfg.scheme.stabilizer {
            StabilizerSpec::Auto => 0.0,
            StabilizerSpec::Fixed(v) => v,
        },
        sigma: cfg.physics.sigma,
        kappa: cfg.physics.kappa,
        n_steps: cfg.scheme.n_steps,
        solver_tol: cfg.scheme.solver_tol,
        solver_maxit: cfg.scheme.solver_maxit,
        psi_bc: cfg.scheme.psi_bc,
        a_bc: cfg.scheme.a_bc,
    };
    scheme.validate()
}

/// Build grid, inhomogeneity, gap table (delta rows = the exact distinct
/// values of the field), resolve S, and set up the initial state.
pub fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    validate(cfg)?;
    let grid = Grid::new(cfg.grid.dim, &cfg.grid.lo, &cfg.grid.hi, &cfg.grid.n)?;
    let delta = inhomogeneity::generate_inhomogeneity(&cfg.inhomogeneity, &grid);
    let delta_values = match &cfg.inhomogeneity {
        InhomogeneitySpec::None => vec![0.0],
        _ => inhomogeneity::distinct_delta_values(&delta),
    };

    let params = GapParams::new(
        cfg.physics.beta,
        cfg.physics.beta0,
        cfg.physics.omega_tilde,
        cfg.physics.nu0_mode,
        cfg.physics.quad_tol,
    )?;
    let table = match &cfg.physics.gap_table {
        Some(path) => {
            let t = output::read_gap_table(path)?;
            if (t.params.beta - params.beta).abs() > 1e-12
                || (t.params.omega_tilde - params.omega_tilde).abs() > 1e-12
                || (t.params.nu0 - params.nu0).abs() > 1e-12
            {
                return Err(Error::config(
                    "physics.gap_table",
                    format!(
                        "table was built for (beta={}, omega={}, nu0={}), run wants \
                         (beta={}, omega={}, nu0={})",
                        t.params.beta,
                        t.params.omega_tilde,
                        t.params.nu0,
                        params.beta,
                        params.omega_tilde,
                        params.nu0
                    ),
                ));
            }
            for dv in &delta_values {
                if !t.delta_grid.iter().any(|g| g == dv) {
                    return Err(Error::config(
                        "physics.gap_table",
                        format!("table has no delta row at {dv}"),
                    ));
                }
            }
            t
        }
        None => GapTable::build(&params, cfg.physics.s_max, cfg.physics.n_s, &delta_values)?,
    };

    let stabilizer = match cfg.scheme.stabilizer {
        StabilizerSpec::Auto => 2.0 * table.lipschitz_l,
        StabilizerSpec::Fixed(v) => v,
    };
    let scheme = SchemeParams {
        tau: cfg.scheme.tau,
        stabilizer,
        sigma: cfg.physics.sigma,
        kappa: cfg.physics.kappa,
        n_steps: cfg.scheme.n_steps,
        solver_tol: cfg.scheme.solver_tol,
        solver_maxit: cfg.scheme.solver_maxit,
        psi_bc: cfg.scheme.psi_bc,
        a_bc: cfg.scheme.a_bc,
    };

    let psi = match &cfg.init.psi_file {
        Some(path) => output::read_psi_csv(path, &grid)?,
        None => ComplexField::uniform(grid, Complex64::new(cfg.init.psi_re, cfg.init.psi_im)),
    };
    let a = VectorField::uniform(grid, &cfg.init.a);
    let initial = SimState::new(psi, a)?;

    Ok(Prepared { grid, scheme, table, delta, field: cfg.field, initial })
}

/// Prepare and run.
pub fn execute(cfg: &RunConfig) -> Result<(Prepared, RunResult)> {
    let prepared = prepare(cfg)?;
    let stepper = prepared.stepper()?;
    let result = stepper::run(&stepper, prepared.initial.clone(), &cfg.output.snapshot_times)?;
    Ok((prepared, result))
}
