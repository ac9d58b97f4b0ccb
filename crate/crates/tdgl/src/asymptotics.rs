//! Near-critical-temperature expansion coefficients of the gap nonlinearity
//! and the limiting Ginzburg-Landau comparator it reduces to.
//!
//! Only the beta = beta0/(1 - eps^2) scaling is computed: the linear scaling
//! beta = beta0/(1 - eps) leaves an O(eps) term whose leading order forces
//! psi0 = 0 and does not reduce to a GL-type equation, so it is documented
//! here but evaluated nowhere.

use crate::error::Result;
use crate::gap::{self, GapParams, Nu0Mode};
use crate::quad;

/// sinh(x) - x without cancellation: series for small x, direct otherwise.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // sum x^(2k+1)/(2k+1)!, k >= 1
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut acc = term;
        let mut k = 1.0;
        while term.abs() > 1e-18 * acc.abs() {
            k += 1.0;
            term *= x2 / ((2.0 * k) * (2.0 * k + 1.0));
            acc += term;
        }
        acc
    } else {
        x.sinh() - x
    }
}

/// The five expansion integrals evaluated at (beta0, omega_tilde).
#[derive(Debug, Clone, Copy)]
pub struct GammaCoefficients {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma21: f64,
    pub gamma22: f64,
    pub gamma23: f64,
    pub beta0: f64,
    pub omega_tilde: f64,
}

/// Evaluate the coefficient integrals by panel Gauss-Legendre quadrature.
pub fn gamma_hats(beta0: f64, omega_tilde: f64, quad_tol: f64) -> Result<GammaCoefficients> {
    let a = beta0;
    let gamma0 = quad::integrate(|xi| gap::tanh_over_2xi(a, xi), 0.0, omega_tilde, quad_tol)?;
    let gamma1 = quad::integrate(
        |xi| {
            let c = (a * xi).cosh();
            a / (c * c)
        },
        0.0,
        omega_tilde,
        quad_tol,
    )?;
    // tanh(a xi)/(2 xi^3) - a sech^2(a xi)/(2 xi^2): the two singular parts
    // cancel. Rewritten as (a^3/2) sech^2(u) (sinh(2u) - 2u)/(2u^3), which is
    // cancellation-free down to the xi -> 0 limit a^3/3.
    let gamma21 = quad::integrate(
        |xi| {
            let u = a * xi;
            if u < 1e-12 {
                a * a * a / 3.0
            } else if u < 20.0 {
                let c = u.cosh();
                (a * a * a / 2.0) * (sinh_minus_x(2.0 * u) / (2.0 * u * u * u)) / (c * c)
            } else {
                // tanh ~ 1, u sech^2 ~ 0 far in the tail
                let c = u.cosh();
                let s2 = 1.0 / (c * c);
                (a * a * a / 2.0) * (u.tanh() - u * s2) / (u * u * u)
            }
        },
        0.0,
        omega_tilde,
        quad_tol,
    )?;
    let gamma22 = quad::integrate(
        |xi| {
            let u = a * xi;
            let c = u.cosh();
            let s2 = 1.0 / (c * c);
            a * s2 - a * a * xi * u.tanh() * s2
        },
        0.0,
        omega_tilde,
        quad_tol,
    )?;
    let gamma23 = quad::integrate(
        |xi| {
            let u = a * xi;
            if u.abs() < 1e-4 {
                a * a * a * (1.0 - 4.0 * u * u / 3.0)
            } else {
                let c = u.cosh();
                a * a * u.tanh() / (c * c) / xi
            }
        },
        0.0,
        omega_tilde,
        quad_tol,
    )?;
    Ok(GammaCoefficients { gamma0, gamma1, gamma21, gamma22, gamma23, beta0, omega_tilde })
}

/// The limiting cubic-GL nonlinearity (nu0/2)(gamma21 s - 1 + gamma23 delta0^2),
/// a drop-in f for comparator runs of the classical TDGL limit.
pub fn limiting_gl_f(s: f64, delta0: f64, coeffs: &GammaCoefficients, nu0: f64) -> f64 {
    nu0 / 2.0 * (coeffs.gamma21 * s - 1.0 + coeffs.gamma23 * delta0 * delta0)
}

/// One row of the hybrid-vs-limit consistency table.
#[derive(Debug, Clone, Copy)]
pub struct ConsistencyRow {
    pub eps: f64,
    /// max over the sample set of |f(eps^2 s0, eps delta0; beta(eps)) - eps^2 f_GL(s0, delta0)|.
    pub max_discrepancy: f64,
}

/// Pointwise check of the formal reduction: with beta = beta0/(1-eps^2) and
/// psi = eps psi0, the hybrid f approaches eps^2 times the limiting GL f.
pub fn hybrid_vs_limit_consistency(
    beta0: f64,
    omega_tilde: f64,
    eps_list: &[f64],
    quad_tol: f64,
) -> Result<Vec<ConsistencyRow>> {
    let coeffs = gamma_hats(beta0, omega_tilde, quad_tol)?;
    let nu0 = 1.0 / coeffs.gamma0; // gap normalization makes f(0; beta0) = 0
    let s_samples = [0.25, 0.5, 1.0];
    let d_samples = [0.0, 0.3];
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let beta = beta0 / (1.0 - eps * eps);
        let p = GapParams {
            beta,
            beta0,
            omega_tilde,
            nu0,
            nu0_mode: Nu0Mode::GapNormalization,
            quad_tol,
        };
        let mut worst = 0.0f64;
        for &s0 in &s_samples {
            for &d0 in &d_samples {
                let hybrid = gap::eval_f(eps * eps * s0, eps * d0, &p)?;
                let limit = eps * eps * limiting_gl_f(s0, d0, &coeffs, nu0);
                worst = worst.max((hybrid - limit).abs());
            }
        }
        rows.push(ConsistencyRow { eps, max_discrepancy: worst });
    }
    Ok(rows)
}
