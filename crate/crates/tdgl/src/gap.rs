//! BCS-derived gap nonlinearity: the function f(|psi|^2, delta), its potential
//! F, the normalization constant nu0, and a pre-computed lookup table used by
//! the time stepper.
//!
//! f(s, delta) = 1 - integral_0^omega  nu0/(4 sqrt(xi^2+s))
//!                  * [tanh(beta(sqrt(xi^2+s)+delta)) + tanh(beta(sqrt(xi^2+s)-delta))] dxi
//! F(s, delta) = s - nu0/(2 beta) integral_0^omega
//!                  [lncosh(beta(E+delta)) + lncosh(beta(E-delta))] dxi,   F' = f.

use crate::error::{Error, Result};
use crate::quad;
use rayon::prelude::*;

/// How nu0 is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nu0Mode {
    /// nu0 * integral_0^omega tanh(beta0 xi)/(2 xi) dxi = 1.
    GapNormalization,
    /// Zero-temperature closed form nu0 = 2 / arcsinh(omega).
    BcsZeroT,
}

/// Physical constants of the gap nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapParams {
    /// Dimensionless inverse temperature beta = psi00 / (2 kB T).
    pub beta: f64,
    /// Value of beta at the critical temperature.
    pub beta0: f64,
    /// Normalized Debye frequency (upper cutoff of the gap integral).
    pub omega_tilde: f64,
    /// Coupling normalization.
    pub nu0: f64,
    pub nu0_mode: Nu0Mode,
    /// Absolute quadrature tolerance.
    pub quad_tol: f64,
}

pub const DEFAULT_BETA0: f64 = 0.882;
pub const DEFAULT_OMEGA_TILDE: f64 = 29.3;
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

impl GapParams {
    /// Build params with nu0 resolved from the chosen mode.
    pub fn new(beta: f64, beta0: f64, omega_tilde: f64, mode: Nu0Mode, quad_tol: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::Domain(format!("beta must be positive, got {beta}")));
        }
        if !(beta0 > 0.0) {
            return Err(Error::Domain(format!("beta0 must be positive, got {beta0}")));
        }
        if !(omega_tilde > 0.0) {
            return Err(Error::Domain(format!("omega_tilde must be positive, got {omega_tilde}")));
        }
        if !(quad_tol > 0.0) {
            return Err(Error::Domain(format!("quad_tol must be positive, got {quad_tol}")));
        }
        let nu0 = match mode {
            Nu0Mode::BcsZeroT => nu0_bcs_zero_temperature(omega_tilde)?,
            Nu0Mode::GapNormalization => nu0_from_gap_normalization(beta0, omega_tilde, quad_tol)?,
        };
        Ok(GapParams { beta, beta0, omega_tilde, nu0, nu0_mode: mode, quad_tol })
    }

    /// Section-4 defaults at the given beta.
    pub fn at_beta(beta: f64) -> Result<Self> {
        Self::new(beta, DEFAULT_BETA0, DEFAULT_OMEGA_TILDE, Nu0Mode::BcsZeroT, DEFAULT_QUAD_TOL)
    }
}

/// beta for a reduced temperature T/Tc: beta = beta0 / (T/Tc).
pub fn beta_from_reduced_temperature(t_ratio: f64, beta0: f64) -> Result<f64> {
    if !(t_ratio > 0.0) {
        return Err(Error::Domain(format!("t_ratio must be positive, got {t_ratio}")));
    }
    Ok(beta0 / t_ratio)
}

/// nu0 from the normalization identity nu0 * integral tanh(beta0 xi)/(2 xi) = 1.
pub fn nu0_from_gap_normalization(beta0: f64, omega_tilde: f64, quad_tol: f64) -> Result<f64> {
    if !(beta0 > 0.0) || !(omega_tilde > 0.0) {
        return Err(Error::Domain("beta0 and omega_tilde must be positive".into()));
    }
    let i = quad::integrate(|xi| tanh_over_2xi(beta0, xi), 0.0, omega_tilde, quad_tol)?;
    if !i.is_finite() || i <= 0.0 {
        return Err(Error::QuadratureFailure(format!("normalization integral = {i}")));
    }
    Ok(1.0 / i)
}

/// Zero-temperature approximation nu0 = 2/arcsinh(omega) = 2/ln(omega + sqrt(omega^2+1)).
pub fn nu0_bcs_zero_temperature(omega_tilde: f64) -> Result<f64> {
    if !(omega_tilde > 0.0) {
        return Err(Error::Domain(format!("omega_tilde must be positive, got {omega_tilde}")));
    }
    Ok(2.0 / omega_tilde.asinh())
}

/// tanh(a x)/(2x) with its x->0 limit a/2; series branch keyed on the
/// argument a*x so the two branches agree to roundoff at the switch.
pub(crate) fn tanh_over_2xi(a: f64, xi: f64) -> f64 {
    let u = a * xi;
    if u.abs() < 1e-4 {
        // tanh(u)/u = 1 - u^2/3 + 2u^4/15 - ...
        (a / 2.0) * (1.0 - u * u / 3.0)
    } else {
        u.tanh() / (2.0 * xi)
    }
}

/// Overflow-safe ln cosh(x) = |x| + ln(1 + e^(-2|x|)) - ln 2.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let ax = x.abs();
    ax + (-2.0 * ax).exp().ln_1p() - std::f64::consts::LN_2
}

/// Integrand of f (without the leading 1 and the nu0 factor):
/// [tanh(beta(E+delta)) + tanh(beta(E-delta))] / (4E), E = sqrt(xi^2 + s).
///
/// For small beta*E the two tanh terms nearly cancel when delta != 0; the
/// identity tanh(p) + tanh(q) = sinh(p+q) / (cosh(p) cosh(q)) avoids that and
/// carries the removable singularity at E -> 0 (limit beta sech^2(beta delta)/2).
fn f_integrand(xi: f64, s: f64, delta: f64, beta: f64) -> f64 {
    let e = (xi * xi + s).sqrt();
    let u = 2.0 * beta * e;
    if u < 1e-3 {
        // sinh(u)/(4E) * exp(-(lncosh(p) + lncosh(q))), overflow-safe
        let sinh_u_over_4e = if u < 1e-4 {
            (beta / 2.0) * (1.0 + u * u / 6.0)
        } else {
            u.sinh() / (4.0 * e)
        };
        let p = beta * (e + delta);
        let q = beta * (e - delta);
        sinh_u_over_4e * (-(ln_cosh(p) + ln_cosh(q))).exp()
    } else {
        ((beta * (e + delta)).tanh() + (beta * (e - delta)).tanh()) / (4.0 * e)
    }
}

/// f(s, delta) by quadrature.
pub fn eval_f(s: f64, delta: f64, p: &GapParams) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("|psi|^2 must be nonnegative, got {s}")));
    }
    let beta = p.beta;
    let i = quad::integrate(|xi| f_integrand(xi, s, delta, beta), 0.0, p.omega_tilde, p.quad_tol)?;
    Ok(1.0 - p.nu0 * i)
}

/// F(s, delta) by quadrature; F' = f in s.
pub fn eval_big_f(s: f64, delta: f64, p: &GapParams) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("|psi|^2 must be nonnegative, got {s}")));
    }
    let beta = p.beta;
    let i = quad::integrate(
        |xi| {
            let e = (xi * xi + s).sqrt();
            ln_cosh(beta * (e + delta)) + ln_cosh(beta * (e - delta))
        },
        0.0,
        p.omega_tilde,
        p.quad_tol,
    )?;
    Ok(s - p.nu0 / (2.0 * beta) * i)
}

/// Bisection root of s -> f(s, delta) on [lo, hi].
pub fn find_gap_root_in(p: &GapParams, delta: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("root tolerance must be positive, got {tol}")));
    }
    let f_lo = eval_f(lo, delta, p)?;
    let f_hi = eval_f(hi, delta, p)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoRootInBracket { lo, hi, f_lo, f_hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = f_lo;
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = eval_f(m, delta, p)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Root of f(., delta) on the default bracket [0, 2].
pub fn find_gap_root(p: &GapParams, delta: f64, tol: f64) -> Result<f64> {
    find_gap_root_in(p, delta, 0.0, 2.0, tol)
}

/// Pre-computed table of f and F over (s, delta) with bilinear lookup.
///
/// F_values holds the quadrature values of F at the nodes. The energy path
/// uses `lookup_big_f_energy`, the exact integral of the piecewise-linear
/// interpolant of f (anchored at F(0, delta)), so that the looked-up potential
/// is differentiable with derivative exactly equal to `lookup_f`.
#[derive(Debug, Clone)]
pub struct GapTable {
    pub s_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    /// f at the nodes, row-major: f_values[i_delta * n_s + i_s].
    pub f_values: Vec<f64>,
    /// Quadrature F at the nodes, same layout.
    pub big_f_values: Vec<f64>,
    /// Cumulative trapezoid of f per delta row (= exact integral of the
    /// piecewise-linear f), anchored at F(0, delta).
    f_cumint: Vec<f64>,
    pub params: GapParams,
    /// sup |df/ds| estimate over the table (centered differences, +10%).
    pub lipschitz_l: f64,
}

impl GapTable {
    /// Tabulate f and F at the tensor product of `n_s` uniform s samples on
    /// [0, s_max] and the given delta samples (strictly increasing).
    pub fn build(p: &GapParams, s_max: f64, n_s: usize, delta_values: &[f64]) -> Result<GapTable> {
        if !(s_max >= 1.5) {
            return Err(Error::Domain(format!(
                "s_max must be at least 1.5 to bracket the gap root, got {s_max}"
            )));
        }
        if n_s < 64 {
            return Err(Error::Domain(format!("n_s must be at least 64, got {n_s}")));
        }
        if delta_values.is_empty() {
            return Err(Error::Domain("delta grid must be nonempty".into()));
        }
        if delta_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("delta grid must be strictly increasing".into()));
        }
        let s_grid: Vec<f64> = (0..n_s)
            .map(|i| s_max * i as f64 / (n_s - 1) as f64)
            .collect();
        let delta_grid = delta_values.to_vec();

        let n_d = delta_grid.len();
        let mut f_values = vec![0.0; n_d * n_s];
        let mut big_f_values = vec![0.0; n_d * n_s];

        // Each sample is an independent quadrature; parallelize over rows.
        let row_results: Vec<Result<(Vec<f64>, Vec<f64>)>> = delta_grid
            .par_iter()
            .map(|&delta| {
                let mut fr = vec![0.0; n_s];
                let mut gr = vec![0.0; n_s];
                for (i, &s) in s_grid.iter().enumerate() {
                    fr[i] = eval_f(s, delta, p)?;
                    gr[i] = eval_big_f(s, delta, p)?;
                }
                Ok((fr, gr))
            })
            .collect();
        for (j, row) in row_results.into_iter().enumerate() {
            let (fr, gr) = row?;
            f_values[j * n_s..(j + 1) * n_s].copy_from_slice(&fr);
            big_f_values[j * n_s..(j + 1) * n_s].copy_from_slice(&gr);
        }

        Self::from_values(*p, s_grid, delta_grid, f_values, big_f_values)
    }

    /// Assemble a table from precomputed node values (build path and dump
    /// reload). Validates the grids, checks the single-sign-change invariant
    /// per delta row, and recomputes the Lipschitz estimate and the
    /// integrated potential.
    pub fn from_values(
        params: GapParams,
        s_grid: Vec<f64>,
        delta_grid: Vec<f64>,
        f_values: Vec<f64>,
        big_f_values: Vec<f64>,
    ) -> Result<GapTable> {
        let n_s = s_grid.len();
        let n_d = delta_grid.len();
        if n_s < 2 || n_d == 0 {
            return Err(Error::Domain("table grids must be nonempty".into()));
        }
        if f_values.len() != n_s * n_d || big_f_values.len() != n_s * n_d {
            return Err(Error::Domain(format!(
                "table dimensions inconsistent: {}x{} grid vs {} f entries",
                n_s,
                n_d,
                f_values.len()
            )));
        }
        if s_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("s grid must be strictly increasing".into()));
        }
        if delta_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("delta grid must be strictly increasing".into()));
        }
        if f_values.iter().chain(big_f_values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::QuadratureFailure("non-finite table entry".into()));
        }

        // Small-delta rows cross zero exactly once (f < 0 below the gap root,
        // > 0 above); a large delta can suppress the root entirely (f > 0
        // everywhere, locally normal material). More than one crossing or a
        // negative tail means s_max fails to bracket the root.
        for j in 0..n_d {
            let row = &f_values[j * n_s..(j + 1) * n_s];
            let mut crossings = 0;
            for w in row.windows(2) {
                if w[0] < 0.0 && w[1] >= 0.0 || w[0] >= 0.0 && w[1] < 0.0 {
                    crossings += 1;
                }
            }
            if crossings > 1 || row[n_s - 1] < 0.0 {
                return Err(Error::Domain(format!(
                    "f row at delta={} crosses zero {crossings} times with f(s_max)={}; \
                     s_max too small to bracket the gap root?",
                    delta_grid[j],
                    row[n_s - 1]
                )));
            }
        }

        // Lipschitz estimate: centered differences at interior samples, +10%.
        let ds = s_grid[1] - s_grid[0];
        let mut l = 0.0f64;
        for j in 0..n_d {
            let row = &f_values[j * n_s..(j + 1) * n_s];
            for i in 1..n_s - 1 {
                l = l.max(((row[i + 1] - row[i - 1]) / (2.0 * ds)).abs());
            }
        }
        let lipschitz_l = 1.1 * l;

        let f_cumint = cumulative_f_integral(&s_grid, &delta_grid, &f_values, &big_f_values);

        Ok(GapTable { s_grid, delta_grid, f_values, big_f_values, f_cumint, params, lipschitz_l })
    }

    /// Spec defaults: s_max = 2, 513 s-samples (s = 1 is then an exact node).
    pub fn build_default(p: &GapParams, delta_values: &[f64]) -> Result<GapTable> {
        Self::build(p, 2.0, 513, delta_values)
    }

    pub fn s_max(&self) -> f64 {
        *self.s_grid.last().unwrap()
    }

    /// Index/weight pair for a clamped 1-D linear interpolation. Non-finite
    /// coordinates clamp low (the stepper's blowup guards fire afterwards).
    fn locate(grid: &[f64], x: f64) -> (usize, f64) {
        let n = grid.len();
        if n == 1 || !(x > grid[0]) {
            return (0, 0.0);
        }
        if x >= grid[n - 1] {
            return (n - 2, 1.0);
        }
        // uniform in s; delta grids are short enough for a scan
        let mut i = match grid.binary_search_by(|g| g.partial_cmp(&x).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        if i >= n - 1 {
            i = n - 2;
        }
        let t = (x - grid[i]) / (grid[i + 1] - grid[i]);
        (i, t)
    }

    fn bilinear(&self, values: &[f64], s: f64, delta: f64) -> f64 {
        let n_s = self.s_grid.len();
        let (i, t) = Self::locate(&self.s_grid, s);
        let (j, u) = Self::locate(&self.delta_grid, delta);
        let at = |jj: usize, ii: usize| values[jj * n_s + ii];
        if self.delta_grid.len() == 1 {
            return (1.0 - t) * at(0, i) + t * at(0, i + 1);
        }
        let lo = (1.0 - t) * at(j, i) + t * at(j, i + 1);
        let hi = (1.0 - t) * at(j + 1, i) + t * at(j + 1, i + 1);
        (1.0 - u) * lo + u * hi
    }

    /// Bilinear f lookup, clamped at the table edges.
    pub fn lookup_f(&self, s: f64, delta: f64) -> f64 {
        self.bilinear(&self.f_values, s, delta)
    }

    /// Bilinear lookup of the tabulated quadrature F.
    pub fn lookup_big_f(&self, s: f64, delta: f64) -> f64 {
        self.bilinear(&self.big_f_values, s, delta)
    }

    /// Potential consistent with `lookup_f`: F(0, delta) + integral of the
    /// interpolated f from 0 to s (piecewise quadratic, C^1, derivative = f).
    /// Clamped input continues linearly with slope f(s_max) past the edge.
    pub fn lookup_big_f_energy(&self, s: f64, delta: f64) -> f64 {
        let n_s = self.s_grid.len();
        let row_energy = |j: usize, s: f64| -> f64 {
            let row_f = &self.f_values[j * n_s..(j + 1) * n_s];
            let row_c = &self.f_cumint[j * n_s..(j + 1) * n_s];
            let s_cl = s.max(0.0);
            if s_cl >= self.s_max() {
                return row_c[n_s - 1] + row_f[n_s - 1] * (s_cl - self.s_max());
            }
            let (i, t) = Self::locate(&self.s_grid, s_cl);
            let ds = self.s_grid[i + 1] - self.s_grid[i];
            let f_at = (1.0 - t) * row_f[i] + t * row_f[i + 1];
            row_c[i] + 0.5 * (row_f[i] + f_at) * t * ds
        };
        let (j, u) = Self::locate(&self.delta_grid, delta);
        if self.delta_grid.len() == 1 {
            return row_energy(0, s);
        }
        (1.0 - u) * row_energy(j, s) + u * row_energy(j + 1, s)
    }

    /// Root of the interpolated f row at `delta` (bisection on the table).
    /// This is the fixed point of the tabulated dynamics.
    pub fn find_root(&self, delta: f64) -> Result<f64> {
        let f0 = self.lookup_f(0.0, delta);
        let f1 = self.lookup_f(self.s_max(), delta);
        if f0.signum() == f1.signum() {
            return Err(Error::NoRootInBracket { lo: 0.0, hi: self.s_max(), f_lo: f0, f_hi: f1 });
        }
        let (mut a, mut b) = (0.0, self.s_max());
        let mut fa = f0;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let fm = self.lookup_f(m, delta);
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        Ok(0.5 * (a + b))
    }
}

/// Trapezoid cumulative integral of each f row (exact for the piecewise-linear
/// interpolant), shifted to match the quadrature F at s = 0.
fn cumulative_f_integral(
    s_grid: &[f64],
    delta_grid: &[f64],
    f_values: &[f64],
    big_f_values: &[f64],
) -> Vec<f64> {
    let n_s = s_grid.len();
    let mut out = vec![0.0; f_values.len()];
    for j in 0..delta_grid.len() {
        let row_f = &f_values[j * n_s..(j + 1) * n_s];
        let mut acc = big_f_values[j * n_s];
        out[j * n_s] = acc;
        for i in 1..n_s {
            acc += 0.5 * (row_f[i - 1] + row_f[i]) * (s_grid[i] - s_grid[i - 1]);
            out[j * n_s + i] = acc;
        }
    }
    out
}
