//! Matrix-free Krylov solvers: preconditioned CG for the (symmetric positive
//! definite) vector-potential system and preconditioned BiCGStab for the
//! complex order-parameter system. Jacobi (diagonal) preconditioning.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Matrix-free real linear operator.
pub trait RealOp {
    fn len(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
    /// Diagonal for Jacobi preconditioning.
    fn diagonal(&self) -> Vec<f64>;
}

/// Matrix-free complex linear operator.
pub trait ComplexOp {
    fn len(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
    fn diagonal(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    pub iters: usize,
    /// Final relative residual ||b - Ax|| / ||b||.
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn cnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Preconditioned conjugate gradients; `x` holds the initial guess and the
/// solution. The operator must be symmetric positive definite.
pub fn cg<A: RealOp>(op: &A, b: &[f64], x: &mut [f64], tol: f64, maxit: usize) -> Result<SolveStats> {
    let n = op.len();
    assert_eq!(b.len(), n);
    assert_eq!(x.len(), n);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        x.fill(0.0);
        return Ok(SolveStats { iters: 0, residual: 0.0 });
    }
    let inv_diag: Vec<f64> = op.diagonal().iter().map(|d| 1.0 / d).collect();

    let mut r = vec![0.0; n];
    op.apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut res = norm(&r) / bnorm;
    if res <= tol {
        return Ok(SolveStats { iters: 0, residual: res });
    }

    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];

    for iter in 1..=maxit {
        op.apply(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= 0.0 || !pq.is_finite() {
            return Err(Error::SolveFailure { iters: iter, residual: res });
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        res = norm(&r) / bnorm;
        if res <= tol {
            return Ok(SolveStats { iters: iter, residual: res });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::SolveFailure { iters: maxit, residual: res })
}

/// Preconditioned BiCGStab; `x` holds the initial guess and the solution.
pub fn bicgstab<A: ComplexOp>(
    op: &A,
    b: &[Complex64],
    x: &mut [Complex64],
    tol: f64,
    maxit: usize,
) -> Result<SolveStats> {
    let n = op.len();
    assert_eq!(b.len(), n);
    assert_eq!(x.len(), n);
    let zero = Complex64::new(0.0, 0.0);
    let bnorm = cnorm(b);
    if bnorm == 0.0 {
        x.fill(zero);
        return Ok(SolveStats { iters: 0, residual: 0.0 });
    }
    let inv_diag: Vec<f64> = op.diagonal().iter().map(|d| 1.0 / d).collect();

    let mut r = vec![zero; n];
    op.apply(x, &mut r);
    for i in 0..n {
        r[i] = b[i] - r[i];
    }
    let mut res = cnorm(&r) / bnorm;
    if res <= tol {
        return Ok(SolveStats { iters: 0, residual: res });
    }

    let r_shadow = r.clone();
    let mut rho = Complex64::new(1.0, 0.0);
    let mut alpha = Complex64::new(1.0, 0.0);
    let mut omega = Complex64::new(1.0, 0.0);
    let mut p = vec![zero; n];
    let mut v = vec![zero; n];
    let mut phat = vec![zero; n];
    let mut shat = vec![zero; n];
    let mut t = vec![zero; n];

    for iter in 1..=maxit {
        let rho_new = cdot(&r_shadow, &r);
        if rho_new.norm() < 1e-300 {
            return Err(Error::SolveFailure { iters: iter, residual: res });
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        for i in 0..n {
            phat[i] = p[i] * inv_diag[i];
        }
        op.apply(&phat, &mut v);
        let denom = cdot(&r_shadow, &v);
        if denom.norm() < 1e-300 {
            return Err(Error::SolveFailure { iters: iter, residual: res });
        }
        alpha = rho / denom;
        // s = r - alpha v (reuse r)
        for i in 0..n {
            r[i] -= alpha * v[i];
        }
        let snorm = cnorm(&r) / bnorm;
        if snorm <= tol {
            for i in 0..n {
                x[i] += alpha * phat[i];
            }
            return Ok(SolveStats { iters: iter, residual: snorm });
        }
        for i in 0..n {
            shat[i] = r[i] * inv_diag[i];
        }
        op.apply(&shat, &mut t);
        let tt = cdot(&t, &t);
        if tt.norm() < 1e-300 {
            return Err(Error::SolveFailure { iters: iter, residual: snorm });
        }
        omega = cdot(&t, &r) / tt;
        for i in 0..n {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] -= omega * t[i];
        }
        res = cnorm(&r) / bnorm;
        if res <= tol {
            return Ok(SolveStats { iters: iter, residual: res });
        }
        if omega.norm() < 1e-300 {
            return Err(Error::SolveFailure { iters: iter, residual: res });
        }
    }
    Err(Error::SolveFailure { iters: maxit, residual: res })
}
