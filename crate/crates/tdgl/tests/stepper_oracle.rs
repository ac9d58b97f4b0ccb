//! IMEX-step solves compared against a dense Gaussian-elimination oracle on a
//! degenerate 3x3 grid, with the system matrices assembled from first
//! principles (independent of the library's matrix-free kernels).

mod common;

use num_complex::Complex64;
use tdgl::gap::{GapParams, GapTable};
use tdgl::grid::{ComplexField, Grid, ScalarField, VectorField};
use tdgl::ops::BcMode;
use tdgl::stepper::{AppliedField, SchemeParams, SimState, Stepper};

fn scheme(tau: f64) -> SchemeParams {
    SchemeParams {
        tau,
        stabilizer: 4.0,
        sigma: 1.0,
        kappa: 2.0,
        n_steps: 1,
        solver_tol: 1e-12,
        solver_maxit: 50_000,
        psi_bc: BcMode::HomogeneousNeumann,
        a_bc: BcMode::GaugeCoupled,
    }
}

fn table() -> GapTable {
    let p = GapParams::at_beta(8.82).unwrap();
    GapTable::build(&p, 2.0, 129, &[0.0]).unwrap()
}

/// Edge list of the covariant gradient: (p, q, cross_weight, a_e) per axis
/// edge, with the homogeneous-Neumann convention of dropping A on
/// boundary-normal edges.
fn covariant_edges(g: &Grid, a: &VectorField, psi_bc: BcMode) -> Vec<(usize, usize, f64, f64, usize)> {
    let mut out = Vec::new();
    for axis in 0..g.dim {
        let stride = if axis == 0 { 1 } else { g.n[0] };
        for idx in 0..g.len() {
            let c = g.coords(idx);
            if c[axis] + 1 >= g.n[axis] {
                continue;
            }
            let mut v = 1.0;
            for b in 0..g.dim {
                if b != axis {
                    let cb = c[b];
                    if cb == 0 || cb == g.n[b] - 1 {
                        v *= 0.5;
                    }
                }
            }
            let boundary_edge = c[axis] == 0 || c[axis] + 2 == g.n[axis];
            let a_e = if psi_bc == BcMode::HomogeneousNeumann && boundary_edge {
                0.0
            } else {
                0.5 * (a.at(axis, idx) + a.at(axis, idx + stride))
            };
            out.push((idx, idx + stride, v, a_e, axis));
        }
    }
    out
}

/// Dense psi system: (1/tau + S + f) W + G^H V G.
fn assemble_psi_matrix(
    g: &Grid,
    t: &GapTable,
    delta: &ScalarField,
    a: &VectorField,
    psi_prev: &ComplexField,
    shift: f64,
    kappa: f64,
    psi_bc: BcMode,
) -> Vec<Vec<Complex64>> {
    let n = g.len();
    let mut mat = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        let f = t.lookup_f(psi_prev.values[i].norm_sqr(), delta.values[i]);
        mat[i][i] += (shift + f) * g.trapezoid_weight(i);
    }
    for (p, q, v, a_e, axis) in covariant_edges(g, a, psi_bc) {
        let h = g.h[axis];
        let dp = Complex64::new(0.5 * a_e, -1.0 / (kappa * h)); // dg/dpsi_p
        let dq = Complex64::new(0.5 * a_e, 1.0 / (kappa * h)); // dg/dpsi_q
        mat[p][p] += v * dp.conj() * dp;
        mat[p][q] += v * dp.conj() * dq;
        mat[q][p] += v * dq.conj() * dp;
        mat[q][q] += v * dq.conj() * dq;
    }
    mat
}

/// Dense 2D curl (free-standing rows): N x 2N matrix, columns [A0 | A1].
fn assemble_curl_2d(g: &Grid) -> Vec<Vec<f64>> {
    let n = g.len();
    let mut c = vec![vec![0.0; 2 * n]; n];
    // D coefficient helper
    let add_deriv = |c: &mut Vec<Vec<f64>>, axis: usize, comp: usize, sign: f64| {
        let stride = if axis == 0 { 1 } else { g.n[0] };
        let h = g.h[axis];
        for row in 0..n {
            let ca = g.coords(row)[axis];
            let col = |j: usize| comp * n + j;
            if ca > 0 && ca + 1 < g.n[axis] {
                c[row][col(row + stride)] += sign / (2.0 * h);
                c[row][col(row - stride)] -= sign / (2.0 * h);
            } else if ca == 0 {
                c[row][col(row)] += sign * -3.0 / (2.0 * h);
                c[row][col(row + stride)] += sign * 4.0 / (2.0 * h);
                c[row][col(row + 2 * stride)] += sign * -1.0 / (2.0 * h);
            } else {
                c[row][col(row)] += sign * 3.0 / (2.0 * h);
                c[row][col(row - stride)] += sign * -4.0 / (2.0 * h);
                c[row][col(row - 2 * stride)] += sign * 1.0 / (2.0 * h);
            }
        }
    };
    add_deriv(&mut c, 0, 1, 1.0); // d1 A2
    add_deriv(&mut c, 1, 0, -1.0); // -d2 A1
    c
}

/// Dense A system sigma/tau W + C^T V C + M(psi), plus its rhs.
#[allow(clippy::too_many_arguments)]
fn assemble_a_system(
    g: &Grid,
    psi: &ComplexField,
    a_prev: &VectorField,
    sot: f64,
    kappa: f64,
    h_value: f64,
    psi_bc: BcMode,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let w: Vec<f64> = (0..n).map(|i| g.trapezoid_weight(i)).collect();
    let c = assemble_curl_2d(g);
    let mut mat = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..2 * n {
        mat[i][i] += sot * w[i % n];
    }
    // C^T V C
    for row in 0..n {
        for i in 0..2 * n {
            if c[row][i] == 0.0 {
                continue;
            }
            for j in 0..2 * n {
                if c[row][j] != 0.0 {
                    mat[i][j] += w[row] * c[row][i] * c[row][j];
                }
            }
        }
    }
    // edge mass from |psi_e_avg|^2 and the edge supercurrent
    let mut rhs = vec![0.0; 2 * n];
    for i in 0..2 * n {
        rhs[i] = sot * w[i % n] * a_prev.values[i];
    }
    for (p, q, v, _ae, axis) in covariant_edges(g, a_prev, psi_bc) {
        // skip A-free edges (their a_e is forced to 0 under Neumann psi bc);
        // detect via the same convention
        let cgrid = g.coords(p);
        let boundary_edge = cgrid[axis] == 0 || cgrid[axis] + 2 == g.n[axis];
        if psi_bc == BcMode::HomogeneousNeumann && boundary_edge {
            continue;
        }
        let avg = 0.5 * (psi.values[p] + psi.values[q]);
        let m_e = v * avg.norm_sqr();
        for (i, j) in [(p, p), (p, q), (q, p), (q, q)] {
            mat[axis * n + i][axis * n + j] += 0.25 * m_e;
        }
        let h = g.h[axis];
        let dpsi = (psi.values[q] - psi.values[p]) / h;
        let j_e = (avg * dpsi.conj()).im / kappa;
        rhs[axis * n + p] -= 0.5 * v * j_e;
        rhs[axis * n + q] -= 0.5 * v * j_e;
    }
    // gauge-coupled H source: C^T V H
    for row in 0..n {
        for i in 0..2 * n {
            if c[row][i] != 0.0 {
                rhs[i] += c[row][i] * w[row] * h_value;
            }
        }
    }
    (mat, rhs)
}

#[test]
fn psi_step_matches_dense_solve() {
    // a square grid and an anisotropic one (different spacing per axis)
    let grids = [
        Grid::square(2, 1.0, 3).unwrap(),
        Grid::new(2, &[-1.0, -0.5], &[1.0, 0.7], &[3, 4]).unwrap(),
    ];
    for g in grids {
        let t = table();
        let delta = ScalarField::zeros(g);
        let field = AppliedField::Zero;
        let sch = scheme(0.25);
        let stepper = Stepper::new(g, sch, &t, &delta, &field).unwrap();

        let psi0 =
            ComplexField::from_fn(g, |p| Complex64::new(0.6 + 0.1 * p[0], 0.5 - 0.2 * p[1]));
        let a0 = VectorField::from_fn(g, |p| vec![0.2 * p[1], -0.1 * p[0] + 0.05]);
        let state = SimState::new(psi0.clone(), a0.clone()).unwrap();

        let (psi_new, stats) = stepper.psi_step(&state).unwrap();
        assert!(stats.residual <= sch.solver_tol);

        let n = g.len();
        let shift = 1.0 / sch.tau + sch.stabilizer;
        let b: Vec<Complex64> =
            (0..n).map(|i| shift * g.trapezoid_weight(i) * psi0.values[i]).collect();
        let mat = assemble_psi_matrix(&g, &t, &delta, &a0, &psi0, shift, sch.kappa, sch.psi_bc);
        let dense = common::dense_solve_complex(mat, b);
        for i in 0..n {
            assert!(
                (dense[i] - psi_new.values[i]).norm() < 1e-8,
                "node {i}: dense {} vs krylov {}",
                dense[i],
                psi_new.values[i]
            );
        }
    }
}

#[test]
fn a_step_matches_dense_solve() {
    let g = Grid::square(2, 1.0, 3).unwrap();
    let t = table();
    let delta = ScalarField::zeros(g);
    let h_value = 0.3;
    let field = AppliedField::Constant2d(h_value);
    let sch = scheme(0.25);
    let stepper = Stepper::new(g, sch, &t, &delta, &field).unwrap();

    let psi = ComplexField::from_fn(g, |p| Complex64::new(0.7, 0.1 * p[0] * p[1] + 0.2));
    let a0 = VectorField::from_fn(g, |p| vec![0.1 * p[1] + 0.02, -0.3 * p[0]]);
    let state = SimState::new(psi.clone(), a0.clone()).unwrap();
    let (a_new, stats) = stepper.a_step(&state, &psi).unwrap();
    assert!(stats.residual <= sch.solver_tol);

    let (mat, rhs) =
        assemble_a_system(&g, &psi, &a0, sch.sigma / sch.tau, sch.kappa, h_value, sch.psi_bc);
    let dense = common::dense_solve_real(mat, rhs);
    for i in 0..2 * g.len() {
        assert!(
            (dense[i] - a_new.values[i]).abs() < 1e-8,
            "entry {i}: dense {} vs krylov {}",
            dense[i],
            a_new.values[i]
        );
    }
}

#[test]
fn psi_system_is_linear_in_previous_psi() {
    // the psi matrix depends on (A, |psi|^2_prev) only: scaling the rhs state
    // while freezing the cached modulus scales the solution
    let g = Grid::square(2, 1.0, 3).unwrap();
    let t = table();
    let delta = ScalarField::zeros(g);
    let field = AppliedField::Zero;
    let stepper = Stepper::new(g, scheme(0.25), &t, &delta, &field).unwrap();
    let psi0 = ComplexField::from_fn(g, |p| Complex64::new(0.5 + 0.1 * p[1], -0.2 * p[0]));
    let a0 = VectorField::from_fn(g, |p| vec![0.1 * p[1], 0.2]);
    let s1 = SimState::new(psi0.clone(), a0.clone()).unwrap();
    let (out1, _) = stepper.psi_step(&s1).unwrap();

    let mut s2 = SimState::new(psi0.clone(), a0).unwrap();
    for v in s2.psi.values.iter_mut() {
        *v *= 2.0;
    }
    s2.s_prev = psi0.modulus_squared(); // frozen coefficient
    let (out2, _) = stepper.psi_step(&s2).unwrap();
    for i in 0..g.len() {
        assert!((out2.values[i] - 2.0 * out1.values[i]).norm() < 1e-9, "node {i}");
    }
}
