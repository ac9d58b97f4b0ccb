//! Discrete energy, norms, modulus statistics, and invariant monitors.
//!
//! The energy evaluates the same edge covariant gradient and the same
//! discrete curl as the time stepper, so the per-step energy inequality of
//! the scheme is exact up to solver tolerance.

use crate::error::{Error, Result};
use crate::gap::GapTable;
use crate::grid::{check_same_grid, ComplexField, ScalarField, VectorField};
use crate::ops::{self, BcMode};
use crate::system;

/// Per-step record written to the diagnostics CSV.
#[derive(Debug, Clone)]
pub struct DiagnosticsRow {
    pub n: usize,
    pub t: f64,
    pub energy: f64,
    pub max_abs_psi: f64,
    pub mean_abs_psi: f64,
    pub psi_iters: usize,
    pub a_iters: usize,
    pub psi_residual: f64,
    pub a_residual: f64,
    /// max(0, E_n - E_{n-1} - (H_n - curl A_n, dt H_n)).
    pub energy_violation: f64,
}

/// Discrete free energy
/// E = 1/2 sum_w [ |(i/kappa grad + A) psi|^2 + F(|psi|^2, delta) + |curl A - H|^2 ].
/// `h_blocks` holds the spatially uniform applied field per curl block
/// (1 value in 2D, 3 in 3D).
#[allow(clippy::too_many_arguments)]
pub fn discrete_energy(
    psi: &ComplexField,
    a: &VectorField,
    h_blocks: &[f64],
    delta: &ScalarField,
    table: &GapTable,
    kappa: f64,
    psi_bc: BcMode,
    a_bc: BcMode,
) -> Result<f64> {
    let g = psi.grid;
    check_same_grid!(g, a.grid);
    check_same_grid!(g, delta.grid);
    if h_blocks.len() != system::curl_block_count(&g) {
        return Err(Error::Shape(format!(
            "expected {} applied-field components, got {}",
            system::curl_block_count(&g),
            h_blocks.len()
        )));
    }
    let w = system::node_weights(&g);
    let kin = system::kinetic_energy_sum(&g, a, kappa, psi_bc, &psi.values);

    let mut pot = 0.0;
    for i in 0..g.len() {
        let s = psi.values[i].norm_sqr();
        pot += w[i] * table.lookup_big_f_energy(s, delta.values[i]);
    }

    let blocks = system::curl_forward(&g, system::deriv_mode(a_bc), &a.values);
    let mut curl_term = 0.0;
    for (b, block) in blocks.iter().enumerate() {
        for i in 0..g.len() {
            let d = block[i] - h_blocks[b];
            curl_term += w[i] * d * d;
        }
    }

    Ok(0.5 * g.cell_volume() * (kin + pot + curl_term))
}

/// Right-hand source of the energy inequality, (H_n - curl A_n, dt H_n),
/// with the same curl and quadrature as the energy.
pub fn energy_source(a: &VectorField, h_now: &[f64], h_prev: &[f64], a_bc: BcMode) -> f64 {
    let g = a.grid;
    let w = system::node_weights(&g);
    let blocks = system::curl_forward(&g, system::deriv_mode(a_bc), &a.values);
    let mut acc = 0.0;
    for (b, block) in blocks.iter().enumerate() {
        let dh = h_now[b] - h_prev[b];
        if dh == 0.0 {
            continue;
        }
        for i in 0..g.len() {
            acc += w[i] * (h_now[b] - block[i]) * dh;
        }
    }
    acc * g.cell_volume()
}

/// Trapezoid-weighted L2 norm of a scalar field.
pub fn l2_scalar(f: &ScalarField) -> f64 {
    let g = f.grid;
    let mut acc = 0.0;
    for i in 0..g.len() {
        acc += g.trapezoid_weight(i) * f.values[i] * f.values[i];
    }
    (acc * g.cell_volume()).sqrt()
}

/// Trapezoid-weighted L2 norm of a complex field.
pub fn l2_complex(f: &ComplexField) -> f64 {
    let g = f.grid;
    let mut acc = 0.0;
    for i in 0..g.len() {
        acc += g.trapezoid_weight(i) * f.values[i].norm_sqr();
    }
    (acc * g.cell_volume()).sqrt()
}

/// Trapezoid-weighted L2 norm of a vector field (all components).
pub fn l2_vector(v: &VectorField) -> f64 {
    let g = v.grid;
    let mut acc = 0.0;
    for a in 0..g.dim {
        for i in 0..g.len() {
            let x = v.at(a, i);
            acc += g.trapezoid_weight(i) * x * x;
        }
    }
    (acc * g.cell_volume()).sqrt()
}

/// H1 norm sqrt(L2^2 + ||grad||_L2^2) with free-standing stencils.
pub fn h1_complex(f: &ComplexField) -> f64 {
    let g = f.grid;
    let l2sq = l2_complex(f).powi(2);
    let grads = ops::grad_complex(f);
    let mut acc = 0.0;
    for comp in &grads {
        for i in 0..g.len() {
            acc += g.trapezoid_weight(i) * comp[i].norm_sqr();
        }
    }
    (l2sq + acc * g.cell_volume()).sqrt()
}

/// H(curl) norm sqrt(L2^2 + ||curl||_L2^2) with free-standing stencils.
pub fn hcurl_vector(v: &VectorField) -> f64 {
    let l2sq = l2_vector(v).powi(2);
    let curl_sq = match ops::curl(v) {
        ops::CurlField::TwoD(s) => l2_scalar(&s).powi(2),
        ops::CurlField::ThreeD(c) => l2_vector(&c).powi(2),
    };
    (l2sq + curl_sq).sqrt()
}

/// Pointwise difference of two complex fields.
pub fn psi_diff(a: &ComplexField, b: &ComplexField) -> Result<ComplexField> {
    check_same_grid!(a.grid, b.grid);
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    Ok(ComplexField { grid: a.grid, values })
}

/// Pointwise difference of two vector fields.
pub fn a_diff(a: &VectorField, b: &VectorField) -> Result<VectorField> {
    check_same_grid!(a.grid, b.grid);
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x - y).collect();
    Ok(VectorField { grid: a.grid, values })
}

/// (max |psi|, trapezoid-weighted mean |psi| over the domain).
pub fn modulus_stats(psi: &ComplexField) -> (f64, f64) {
    let g = psi.grid;
    let mut max = 0.0f64;
    let mut mean = 0.0;
    for i in 0..g.len() {
        let m = psi.values[i].norm();
        max = max.max(m);
        mean += g.trapezoid_weight(i) * m;
    }
    (max, mean * g.cell_volume() / g.volume())
}

/// Step indices violating the energy inequality. For a time-constant H the
/// check is plain monotonicity E_n <= E_{n-1} + tol; otherwise the recorded
/// per-step violation (measured against the dt H source term) is used.
/// tol = rel_tol * (1 + |E_{n-1}|).
pub fn monitor_energy_decay(rows: &[DiagnosticsRow], h_constant: bool, rel_tol: f64) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1..rows.len() {
        let tol = rel_tol * (1.0 + rows[k - 1].energy.abs());
        let bad = if h_constant {
            rows[k].energy > rows[k - 1].energy + tol
        } else {
            rows[k].energy_violation > tol
        };
        if bad {
            out.push(rows[k].n);
        }
    }
    out
}

/// Step indices where max |psi| exceeds the bound.
pub fn monitor_max_modulus(rows: &[DiagnosticsRow], bound: f64) -> Vec<usize> {
    rows.iter().filter(|r| r.max_abs_psi > bound).map(|r| r.n).collect()
}
