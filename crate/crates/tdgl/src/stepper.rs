//! The stabilized linear IMEX step: one Hermitian solve for psi, then one
//! symmetric positive definite solve for A, per step.
//!
//! psi system:  [(1/tau + S + f(|psi|^2_prev, delta)) W + G^H V G(A_prev)] psi_new
//!                 = (1/tau + S) W psi_prev
//! A system:    [sigma/tau W + C^T V C + M(psi_new)] A_new
//!                 = sigma/tau W A_prev - J(psi_new) + H source at t_new

use crate::diagnostics::{self, DiagnosticsRow};
use crate::error::{Error, Result};
use crate::gap::GapTable;
use crate::grid::{check_same_grid, ComplexField, Grid, ScalarField, VectorField};
use crate::ops::BcMode;
use crate::solver::{self, SolveStats};
use crate::system;
use num_complex::Complex64;

/// Time-stepping parameters.
#[derive(Debug, Clone, Copy)]
pub struct SchemeParams {
    pub tau: f64,
    /// Stabilizer S multiplying delta_t psi.
    pub stabilizer: f64,
    pub sigma: f64,
    pub kappa: f64,
    pub n_steps: usize,
    /// Relative residual target of both solves.
    pub solver_tol: f64,
    pub solver_maxit: usize,
    pub psi_bc: BcMode,
    pub a_bc: BcMode,
}

impl SchemeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::Domain(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.stabilizer >= 0.0) {
            return Err(Error::Domain(format!("S must be nonnegative, got {}", self.stabilizer)));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Domain(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.kappa > 0.0) {
            return Err(Error::Domain(format!("kappa must be positive, got {}", self.kappa)));
        }
        if !(self.solver_tol > 0.0 && self.solver_tol < 1.0) {
            return Err(Error::Domain(format!(
                "solver_tol must lie in (0,1), got {}",
                self.solver_tol
            )));
        }
        Ok(())
    }
}

/// Applied magnetic field H(t), spatially uniform. 2D fields are the scalar
/// out-of-plane component; 3D fields have three components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AppliedField {
    Zero,
    Constant2d(f64),
    /// H(t) = 0.5 + exp(-t), out of plane.
    HalfPlusExp2d,
    Constant3d([f64; 3]),
}

impl AppliedField {
    /// One value per curl block (1 in 2D, 3 in 3D) at time t.
    pub fn block_values(&self, dim: usize, t: f64) -> Vec<f64> {
        match self {
            AppliedField::Zero => vec![0.0; if dim == 2 { 1 } else { 3 }],
            AppliedField::Constant2d(h) => vec![*h],
            AppliedField::HalfPlusExp2d => vec![0.5 + (-t).exp()],
            AppliedField::Constant3d(h) => h.to_vec(),
        }
    }

    pub fn is_time_constant(&self) -> bool {
        !matches!(self, AppliedField::HalfPlusExp2d)
    }

    pub fn dim_ok(&self, dim: usize) -> bool {
        match self {
            AppliedField::Zero => true,
            AppliedField::Constant2d(_) | AppliedField::HalfPlusExp2d => dim == 2,
            AppliedField::Constant3d(_) => dim == 3,
        }
    }
}

/// Simulation state after n steps: psi^n, A^n, t = n tau, and the cached
/// |psi^n|^2 used to freeze the nonlinearity in the next step.
#[derive(Debug, Clone)]
pub struct SimState {
    pub psi: ComplexField,
    pub a: VectorField,
    pub t: f64,
    pub n: usize,
    pub s_prev: ScalarField,
}

impl SimState {
    pub fn new(psi: ComplexField, a: VectorField) -> Result<SimState> {
        check_same_grid!(psi.grid, a.grid);
        let s_prev = psi.modulus_squared();
        Ok(SimState { psi, a, t: 0.0, n: 0, s_prev })
    }
}

/// Per-step solver bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub psi: SolveStats,
    pub a: SolveStats,
}

/// Precomputed context for stepping one configuration.
pub struct Stepper<'a> {
    pub grid: Grid,
    pub scheme: SchemeParams,
    pub table: &'a GapTable,
    pub delta: &'a ScalarField,
    pub field: &'a AppliedField,
    node_w: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        grid: Grid,
        scheme: SchemeParams,
        table: &'a GapTable,
        delta: &'a ScalarField,
        field: &'a AppliedField,
    ) -> Result<Stepper<'a>> {
        scheme.validate()?;
        check_same_grid!(grid, delta.grid);
        if !field.dim_ok(grid.dim) {
            return Err(Error::Domain(format!(
                "applied field {:?} does not match grid dimension {}",
                field, grid.dim
            )));
        }
        Ok(Stepper { grid, scheme, table, delta, field, node_w: system::node_weights(&grid) })
    }

    /// Solve the psi system of one step; the state is not advanced.
    pub fn psi_step(&self, state: &SimState) -> Result<(ComplexField, SolveStats)> {
        let g = &self.grid;
        let n = g.len();
        let shift = 1.0 / self.scheme.tau + self.scheme.stabilizer;
        let f_diag: Vec<f64> = (0..n)
            .map(|i| self.table.lookup_f(state.s_prev.values[i], self.delta.values[i]))
            .collect();
        let rhs: Vec<Complex64> =
            (0..n).map(|i| shift * self.node_w[i] * state.psi.values[i]).collect();
        if rhs.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Blowup { step: state.n, context: "non-finite psi rhs".into() });
        }
        let sys = system::PsiSystem {
            grid: g,
            a: &state.a,
            kappa: self.scheme.kappa,
            psi_bc: self.scheme.psi_bc,
            shift,
            f_diag: &f_diag,
            node_w: &self.node_w,
        };
        let mut x = state.psi.values.clone();
        let stats =
            solver::bicgstab(&sys, &rhs, &mut x, self.scheme.solver_tol, self.scheme.solver_maxit)?;
        Ok((ComplexField { grid: *g, values: x }, stats))
    }

    /// Solve the A system given the already-updated psi^n; H is evaluated at
    /// the end-of-step time.
    pub fn a_step(&self, state: &SimState, psi_new: &ComplexField) -> Result<(VectorField, SolveStats)> {
        let g = &self.grid;
        let n = g.len();
        let t_new = (state.n + 1) as f64 * self.scheme.tau;
        let h_blocks = self.field.block_values(g.dim, t_new);
        let sot = self.scheme.sigma / self.scheme.tau;
        let j = system::supercurrent_nodes(g, self.scheme.kappa, self.scheme.psi_bc, &psi_new.values);
        let src = system::applied_field_source(g, self.scheme.a_bc, &h_blocks, &self.node_w);
        let mut rhs = vec![0.0; g.dim * n];
        for a in 0..g.dim {
            for i in 0..n {
                let k = a * n + i;
                rhs[k] = sot * self.node_w[i] * state.a.values[k] - j[k] + src[k];
            }
        }
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Blowup { step: state.n, context: "non-finite A rhs".into() });
        }
        let sys = system::ASystem {
            grid: g,
            mode: system::deriv_mode(self.scheme.a_bc),
            psi_bc: self.scheme.psi_bc,
            psi: &psi_new.values,
            sigma_over_tau: sot,
            node_w: &self.node_w,
        };
        let mut x = state.a.values.clone();
        let stats =
            solver::cg(&sys, &rhs, &mut x, self.scheme.solver_tol, self.scheme.solver_maxit)?;
        Ok((VectorField { grid: *g, values: x }, stats))
    }

    /// One full IMEX step.
    pub fn step(&self, state: &SimState) -> Result<(SimState, StepInfo)> {
        let (psi_new, psi_stats) = self.psi_step(state)?;
        let (a_new, a_stats) = self.a_step(state, &psi_new)?;
        if !psi_new.is_finite() || !a_new.is_finite() {
            return Err(Error::Blowup { step: state.n + 1, context: "non-finite state".into() });
        }
        let s_prev = psi_new.modulus_squared();
        let n = state.n + 1;
        let new_state =
            SimState { psi: psi_new, a: a_new, t: n as f64 * self.scheme.tau, n, s_prev };
        Ok((new_state, StepInfo { psi: psi_stats, a: a_stats }))
    }

    fn energy_of(&self, state: &SimState) -> Result<f64> {
        let h = self.field.block_values(self.grid.dim, state.t);
        diagnostics::discrete_energy(
            &state.psi,
            &state.a,
            &h,
            self.delta,
            self.table,
            self.scheme.kappa,
            self.scheme.psi_bc,
            self.scheme.a_bc,
        )
    }

    fn row_for(&self, state: &SimState, info: Option<&StepInfo>, prev_energy: Option<f64>) -> Result<DiagnosticsRow> {
        let energy = self.energy_of(state)?;
        let (max_abs, mean_abs) = diagnostics::modulus_stats(&state.psi);
        let violation = match prev_energy {
            None => 0.0,
            Some(e_prev) => {
                let h_now = self.field.block_values(self.grid.dim, state.t);
                let h_prev =
                    self.field.block_values(self.grid.dim, (state.n - 1) as f64 * self.scheme.tau);
                let source =
                    diagnostics::energy_source(&state.a, &h_now, &h_prev, self.scheme.a_bc);
                (energy - e_prev - source).max(0.0)
            }
        };
        Ok(DiagnosticsRow {
            n: state.n,
            t: state.t,
            energy,
            max_abs_psi: max_abs,
            mean_abs_psi: mean_abs,
            psi_iters: info.map_or(0, |i| i.psi.iters),
            a_iters: info.map_or(0, |i| i.a.iters),
            psi_residual: info.map_or(0.0, |i| i.psi.residual),
            a_residual: info.map_or(0.0, |i| i.a.residual),
            energy_violation: violation,
        })
    }
}

/// A saved field snapshot.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub n: usize,
    pub t: f64,
    pub psi: ComplexField,
    pub a: VectorField,
}

/// Result of a full run; `blowup` flags an early halt with partial output.
#[derive(Debug)]
pub struct RunResult {
    pub final_state: SimState,
    pub diagnostics: Vec<DiagnosticsRow>,
    pub snapshots: Vec<Snapshot>,
    pub blowup: Option<usize>,
}

/// Advance `n_steps` from the initial state, recording one diagnostics row per
/// step (plus the t = 0 row) and snapshots at the requested times (rounded to
/// the nearest step).
pub fn run(stepper: &Stepper, initial: SimState, snapshot_times: &[f64]) -> Result<RunResult> {
    check_same_grid!(initial.psi.grid, stepper.grid);
    if !initial.psi.is_finite() || !initial.a.is_finite() {
        let n = initial.n;
        return Ok(RunResult {
            final_state: initial,
            diagnostics: Vec::new(),
            snapshots: Vec::new(),
            blowup: Some(n),
        });
    }
    let tau = stepper.scheme.tau;
    let mut snap_steps: Vec<usize> = snapshot_times
        .iter()
        .map(|&t| (t / tau).round() as usize)
        .filter(|&k| k <= stepper.scheme.n_steps)
        .collect();
    snap_steps.sort_unstable();
    snap_steps.dedup();

    let mut diagnostics = Vec::with_capacity(stepper.scheme.n_steps + 1);
    let mut snapshots = Vec::new();
    let mut state = initial;

    let first_row = stepper.row_for(&state, None, None)?;
    let mut prev_energy = Some(first_row.energy);
    diagnostics.push(first_row);
    if snap_steps.contains(&0) {
        snapshots.push(Snapshot { n: 0, t: 0.0, psi: state.psi.clone(), a: state.a.clone() });
    }

    for _ in 0..stepper.scheme.n_steps {
        let (next, info) = match stepper.step(&state) {
            Ok(v) => v,
            Err(Error::Blowup { step, .. }) => {
                return Ok(RunResult {
                    final_state: state,
                    diagnostics,
                    snapshots,
                    blowup: Some(step),
                });
            }
            Err(e) => return Err(e),
        };
        state = next;
        let row = stepper.row_for(&state, Some(&info), prev_energy)?;
        prev_energy = Some(row.energy);
        diagnostics.push(row);
        if snap_steps.binary_search(&state.n).is_ok() {
            snapshots.push(Snapshot {
                n: state.n,
                t: state.t,
                psi: state.psi.clone(),
                a: state.a.clone(),
            });
        }
    }

    Ok(RunResult { final_state: state, diagnostics, snapshots, blowup: None })
}
