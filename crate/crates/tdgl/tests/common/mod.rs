//! Shared test oracles, independent of the library's quadrature and solver
//! paths: adaptive Simpson integration and a dense Gaussian-elimination solve.
#![allow(dead_code)]

use num_complex::Complex64;

fn simpson_panel(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, fa, m, fm, flm);
    let right = simpson_panel(m, fm, b, fb, frm);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1)
        + simpson_rec(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson_panel(a, fa, b, fb, fm);
    simpson_rec(&f, a, b, fa, fb, fm, whole, tol, 40)
}

/// Gap nonlinearity by the Simpson oracle (removable singularity handled by
/// the small-argument limit of the integrand).
pub fn oracle_f(s: f64, delta: f64, beta: f64, nu0: f64, omega: f64, tol: f64) -> f64 {
    let integrand = |xi: f64| {
        let e = (xi * xi + s).sqrt();
        if beta * e < 1e-8 {
            let c = (beta * delta).cosh();
            return beta / (2.0 * c * c);
        }
        ((beta * (e + delta)).tanh() + (beta * (e - delta)).tanh()) / (4.0 * e)
    };
    1.0 - nu0 * simpson(integrand, 0.0, omega, tol)
}

fn ln_cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p() - std::f64::consts::LN_2
}

/// Gap potential by the Simpson oracle.
pub fn oracle_big_f(s: f64, delta: f64, beta: f64, nu0: f64, omega: f64, tol: f64) -> f64 {
    let integrand = |xi: f64| {
        let e = (xi * xi + s).sqrt();
        ln_cosh(beta * (e + delta)) + ln_cosh(beta * (e - delta))
    };
    s - nu0 / (2.0 * beta) * simpson(integrand, 0.0, omega, tol)
}

/// Bisection root of s -> oracle_f(s) on [lo, hi].
pub fn oracle_root(delta: f64, beta: f64, nu0: f64, omega: f64, lo: f64, hi: f64) -> f64 {
    let f = |s: f64| oracle_f(s, delta, beta, nu0, omega, 1e-12);
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a);
    assert!(fa.signum() != f(b).signum(), "oracle root not bracketed");
    for _ in 0..120 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Dense complex solve by Gaussian elimination with partial pivoting.
pub fn dense_solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        let d = a[col][col];
        assert!(d.norm() > 1e-14, "singular dense system");
        for row in col + 1..n {
            let factor = a[row][col] / d;
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let bv = b[col];
            b[row] -= factor * bv;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

/// Dense real solve via the complex path.
pub fn dense_solve_real(a: Vec<Vec<f64>>, b: Vec<f64>) -> Vec<f64> {
    let ac = a
        .into_iter()
        .map(|row| row.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
        .collect();
    let bc = b.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    dense_solve_complex(ac, bc).into_iter().map(|v| v.re).collect()
}
