//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! The heavyweight simulations are shared between criteria through OnceLock
//! so the suite stays within a few minutes.

mod common;

use num_complex::Complex64;
use std::sync::OnceLock;
use tdgl::config::{scenario, RunConfig};
use tdgl::convergence::{convergence_study, ConvergenceReport};
use tdgl::gap::{self, GapParams, Nu0Mode};
use tdgl::grid::ScalarField;
use tdgl::runner::{self, Prepared};
use tdgl::stepper::RunResult;
use tdgl::{diagnostics, ops};

const BETA0: f64 = 0.882;
const OMEGA: f64 = 29.3;
const BETA_COLD: f64 = 8.82;

type Bundle = (Prepared, RunResult);

fn execute(cfg: &RunConfig) -> Bundle {
    let (prepared, result) = runner::execute(cfg).expect("run failed");
    assert!(result.blowup.is_none(), "unexpected blowup");
    (prepared, result)
}

/// Invariant run: 64^2 nodes on (-pi,pi)^2, kappa=2, beta=8.82, sigma=1,
/// S=2L (auto), tau=0.25, constant H=0.3, psi0=0.8+0.6i, 400 steps.
fn criterion4_run() -> &'static Bundle {
    static RUN: OnceLock<Bundle> = OnceLock::new();
    RUN.get_or_init(|| {
        let cfg = RunConfig::parse(
            "
[grid]
dim = 2
lo = -3.141592653589793, -3.141592653589793
hi = 3.141592653589793, 3.141592653589793
n = 64, 64

[physics]
kappa = 2
beta = 8.82
sigma = 1

[scheme]
tau = 0.25
n_steps = 400
stabilizer = auto
a_bc = gauge_coupled

[field]
profile = constant
h = 0.3

[init]
psi_re = 0.8
psi_im = 0.6
",
        )
        .unwrap();
        execute(&cfg)
    })
}

fn fig_run(name: &str) -> Bundle {
    let cfg = scenario(name).unwrap();
    execute(&cfg)
}

fn fig1_runs() -> &'static (Bundle, Bundle) {
    static RUNS: OnceLock<(Bundle, Bundle)> = OnceLock::new();
    RUNS.get_or_init(|| (fig_run("fig1_H015"), fig_run("fig1_H030")))
}

fn fig5_runs() -> &'static (Bundle, Bundle) {
    static RUNS: OnceLock<(Bundle, Bundle)> = OnceLock::new();
    RUNS.get_or_init(|| (fig_run("fig5_tilt"), fig_run("fig5_tilt_inhomog")))
}

fn quadrature_gap_root() -> f64 {
    let p = GapParams::at_beta(BETA_COLD).unwrap();
    gap::find_gap_root(&p, 0.0, 1e-12).unwrap()
}

#[test]
fn criterion_01_gap_normalization_identity() {
    let p = GapParams::new(BETA0, BETA0, OMEGA, Nu0Mode::GapNormalization, 1e-12).unwrap();
    let f00 = gap::eval_f(0.0, 0.0, &p).unwrap();
    assert!(f00.abs() <= 1e-9, "|f(0,0)| = {:.3e}", f00.abs());
    println!("criterion 1 (gap normalization identity): PASS  |f(0,0)| = {:.3e}", f00.abs());
}

#[test]
fn criterion_02_gap_root_near_one() {
    let x0 = quadrature_gap_root();
    assert!((x0 - 1.0).abs() <= 0.05, "x0 = {x0}");
    // independent adaptive-quadrature cross-check
    let nu0 = gap::nu0_bcs_zero_temperature(OMEGA).unwrap();
    let x_oracle = common::oracle_root(0.0, BETA_COLD, nu0, OMEGA, 0.5, 1.5);
    assert!((x0 - x_oracle).abs() < 1e-6, "bisection {x0} vs oracle {x_oracle}");
    println!("criterion 2 (gap root): PASS  x0 = {x0:.12} (oracle {x_oracle:.12})");
}

#[test]
fn criterion_03_asymptotic_coefficients() {
    let c = tdgl::asymptotics::gamma_hats(BETA0, OMEGA, 1e-12).unwrap();
    let nu0 = gap::nu0_from_gap_normalization(BETA0, OMEGA, 1e-12).unwrap();
    assert!((c.gamma1 - 1.0).abs() <= 1e-6, "gamma1 = {}", c.gamma1);
    assert!((c.gamma22 - 0.5).abs() <= 0.02, "gamma22 = {}", c.gamma22);
    assert!(c.gamma21 >= 0.0, "gamma21 = {}", c.gamma21);
    let residual = (nu0 * c.gamma0 - 1.0).abs();
    assert!(residual <= 1e-9, "nu0*gamma0 - 1 = {residual:.3e}");
    println!(
        "criterion 3 (asymptotic coefficients): PASS  gamma1-1 = {:+.2e}, gamma22-1/2 = {:+.2e}, \
         gamma21 = {:.6}, |nu0*gamma0-1| = {:.2e}",
        c.gamma1 - 1.0,
        c.gamma22 - 0.5,
        c.gamma21,
        residual
    );
}

#[test]
fn criterion_04_maximum_modulus_bound() {
    let (_, result) = criterion4_run();
    let x0 = quadrature_gap_root();
    let bound = 1.0f64.max(x0.sqrt()) + 1e-8;
    let violations = diagnostics::monitor_max_modulus(&result.diagnostics, bound);
    let observed =
        result.diagnostics.iter().map(|r| r.max_abs_psi).fold(0.0f64, f64::max);
    assert!(violations.is_empty(), "violations at steps {violations:?}, max = {observed}");
    println!(
        "criterion 4 (maximum modulus bound): PASS  max_n max|psi| = {observed:.12} <= {bound:.12}"
    );
}

#[test]
fn criterion_05_energy_decay() {
    let (_, crit4) = criterion4_run();
    let mut worst: f64 = 0.0;
    for (label, rows) in [
        ("invariant run", &crit4.diagnostics),
        ("fig3_inhomog", &fig_run("fig3_inhomog").1.diagnostics),
        ("fig4_inhomog", &fig_run("fig4_inhomog").1.diagnostics),
    ] {
        let viol = diagnostics::monitor_energy_decay(rows, true, 1e-8);
        assert!(viol.is_empty(), "{label}: energy increases at steps {viol:?}");
        for w in rows.windows(2) {
            worst = worst.max((w[1].energy - w[0].energy) / (1.0 + w[0].energy.abs()));
        }
    }
    println!(
        "criterion 5 (energy decay, invariant run + fig3/fig4 inhomogeneous): PASS  \
         worst relative increase = {worst:.3e} (tolerance 1e-8)"
    );
}

fn table1_report() -> ConvergenceReport {
    // Table-1 setup: Omega_1, 64^2 nodes, kappa=2, H = 0.5 + exp(-t), errors
    // at t = 0.064 against a tau = 5e-4 reference; S = 4, matching the
    // production morphology runs on this domain.
    let cfg = RunConfig::parse(
        "
[grid]
dim = 2
lo = -3.141592653589793, -3.141592653589793
hi = 3.141592653589793, 3.141592653589793
n = 64, 64

[physics]
kappa = 2
beta = 8.82

[scheme]
tau = 0.032
n_steps = 2
stabilizer = 4
a_bc = gauge_coupled

[field]
profile = half_plus_exp
",
    )
    .unwrap();
    convergence_study(&cfg, &[0.032, 0.016, 0.008, 0.004, 0.002], 5e-4, 0.064).unwrap()
}

#[test]
fn criterion_06_temporal_convergence_rates() {
    let report = table1_report();
    let mut psi_rates = Vec::new();
    let mut a_rates = Vec::new();
    for row in &report.rows[1..] {
        let rl2 = row.rate_l2.unwrap();
        let rh1 = row.rate_h1.unwrap();
        let rhc = row.rate_hcurl.unwrap();
        assert!((0.7..=1.35).contains(&rl2), "L2(psi) rate {rl2} at tau={}", row.tau);
        assert!((0.7..=1.35).contains(&rh1), "H1(psi) rate {rh1} at tau={}", row.tau);
        assert!((0.9..=2.3).contains(&rhc), "Hcurl(A) rate {rhc} at tau={}", row.tau);
        psi_rates.push((rl2, rh1));
        a_rates.push(rhc);
    }
    // halving check on the two smallest tau: e(tau)/e(tau/2) consistent with
    // a first-order scheme
    let k = report.rows.len();
    for rows in [&report.rows[k - 2..k], &report.rows[k - 3..k - 1]] {
        let ratio = rows[0].l2_psi / rows[1].l2_psi;
        assert!((1.5..=2.6).contains(&ratio), "halving ratio {ratio}");
    }
    println!(
        "criterion 6 (temporal convergence, rate bands): PASS  L2/H1(psi) rates = {psi_rates:?}, \
         Hcurl(A) rates = {a_rates:?}"
    );
}

#[test]
fn criterion_07_field_suppression_ordering() {
    let ((_, low), (_, high)) = {
        let (a, b) = fig1_runs();
        ((&a.0, &a.1), (&b.0, &b.1))
    };
    let last_low = low.diagnostics.last().unwrap();
    let last_high = high.diagnostics.last().unwrap();
    assert!(
        last_high.mean_abs_psi < last_low.mean_abs_psi,
        "mean|psi|(t=100): H=0.3 {} !< H=0.15 {}",
        last_high.mean_abs_psi,
        last_low.mean_abs_psi
    );
    for (rl, rh) in low.diagnostics.iter().zip(&high.diagnostics) {
        if rl.t >= 20.0 {
            assert!(
                rh.mean_abs_psi <= rl.mean_abs_psi,
                "domination fails at t = {}: {} > {}",
                rl.t,
                rh.mean_abs_psi,
                rl.mean_abs_psi
            );
        }
    }
    println!(
        "criterion 7 (field suppression): PASS  mean|psi|(t=100): H=0.15 -> {:.6}, H=0.3 -> {:.6}",
        last_low.mean_abs_psi, last_high.mean_abs_psi
    );
}

#[test]
fn criterion_08_fixed_point_stationarity() {
    let cfg = RunConfig::parse(
        "
[grid]
dim = 2
lo = -3.141592653589793, -3.141592653589793
hi = 3.141592653589793, 3.141592653589793
n = 33, 33

[physics]
kappa = 2
beta = 8.82

[scheme]
tau = 0.25
n_steps = 50

[init]
a = 0, 0
",
    )
    .unwrap();
    let prepared = runner::prepare(&cfg).unwrap();
    // fixed point of the tabulated dynamics: |psi|^2 at the table root
    let x0 = prepared.table.find_root(0.0).unwrap();
    let m = x0.sqrt();
    let mut initial = prepared.initial.clone();
    for v in initial.psi.values.iter_mut() {
        *v = Complex64::new(0.8, 0.6) * m;
    }
    initial.s_prev = initial.psi.modulus_squared();
    let psi0 = initial.psi.values.clone();
    let stepper = prepared.stepper().unwrap();
    let result = tdgl::stepper::run(&stepper, initial, &[]).unwrap();

    let drift = result
        .final_state
        .psi
        .values
        .iter()
        .zip(&psi0)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    assert!(drift <= 1e-10, "fixed point drifted by {drift:.3e} after 50 steps");

    let e0 = result.diagnostics[0].energy;
    let e_worst = result
        .diagnostics
        .iter()
        .map(|r| (r.energy - e0).abs() / e0.abs())
        .fold(0.0f64, f64::max);
    assert!(e_worst <= 1e-12, "energy wandered by {e_worst:.3e} relative");
    println!(
        "criterion 8 (fixed point): PASS  max drift = {drift:.3e}, relative energy wander = {e_worst:.3e}"
    );
}

#[test]
fn criterion_09_three_dimensional_invariants_and_pinning() {
    let (tilt, tilt_inhomog) = fig5_runs();
    let x0 = quadrature_gap_root();
    let bound = 1.0f64.max(x0.sqrt()) + 1e-8;
    for (label, bundle) in [("fig5_tilt", tilt), ("fig5_tilt_inhomog", tilt_inhomog)] {
        assert!(bundle.1.blowup.is_none(), "{label} blew up");
        let mv = diagnostics::monitor_max_modulus(&bundle.1.diagnostics, bound);
        assert!(mv.is_empty(), "{label}: max-modulus violations {mv:?}");
        let ev = diagnostics::monitor_energy_decay(&bundle.1.diagnostics, true, 1e-8);
        assert!(ev.is_empty(), "{label}: energy violations {ev:?}");
    }
    // pinning changes the final |psi| field
    let g = tilt.1.final_state.psi.grid;
    let diff = ScalarField {
        grid: g,
        values: tilt
            .1
            .final_state
            .psi
            .values
            .iter()
            .zip(&tilt_inhomog.1.final_state.psi.values)
            .map(|(a, b)| a.norm() - b.norm())
            .collect(),
    };
    let l2 = diagnostics::l2_scalar(&diff);
    assert!(l2 > 1e-3, "inhomogeneity made no difference: L2 = {l2:.3e}");
    println!(
        "criterion 9 (3D smoke + invariants): PASS  zero violations in both runs, \
         L2(|psi|_homog - |psi|_inhomog) = {l2:.4}"
    );
}

#[test]
fn criterion_10_operator_truncation_orders() {
    use tdgl::grid::{ComplexField, Grid, VectorField};
    let levels = [17usize, 33, 65];
    let band = 3.2..=4.8;
    let mut summary = Vec::new();

    let interior_max = |g: &Grid, margin: usize, err: &dyn Fn(usize) -> f64| -> f64 {
        let mut m = 0.0f64;
        for i in 0..g.len() {
            let c = g.coords(i);
            if (0..g.dim).all(|a| c[a] >= margin && c[a] + margin < g.n[a]) {
                m = m.max(err(i));
            }
        }
        m
    };

    let mut check = |label: &str, errs: Vec<f64>| {
        for w in errs.windows(2) {
            let r = w[0] / w[1];
            assert!(band.contains(&r), "{label}: ratio {r:.2} outside [3.2, 4.8] ({errs:?})");
            summary.push(format!("{label} {r:.2}"));
        }
    };

    // gradient
    let errs: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let g = Grid::square(2, std::f64::consts::PI, n).unwrap();
            let f = ScalarField::from_fn(g, |p| p[0].sin());
            let gr = ops::grad_scalar(&f);
            interior_max(&g, 1, &|i| (gr.at(0, i) - g.pos(i)[0].cos()).abs())
        })
        .collect();
    check("grad", errs);

    // curl
    let errs: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let g = Grid::square(2, std::f64::consts::PI, n).unwrap();
            let v = VectorField::from_fn(g, |p| vec![(0.8 * p[1]).sin(), (0.6 * p[0]).sin()]);
            let c = ops::curl(&v);
            interior_max(&g, 1, &|i| {
                let p = g.pos(i);
                (c.as_scalar().values[i] - (0.6 * (0.6 * p[0]).cos() - 0.8 * (0.8 * p[1]).cos()))
                    .abs()
            })
        })
        .collect();
    check("curl", errs);

    // curl curl
    let errs: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let g = Grid::square(2, std::f64::consts::PI, n).unwrap();
            let v = VectorField::from_fn(g, |p| vec![p[1].sin(), 0.0]);
            let cc = ops::curl_curl(&v);
            interior_max(&g, 2, &|i| {
                (cc.at(0, i) - g.pos(i)[1].sin()).abs().max(cc.at(1, i).abs())
            })
        })
        .collect();
    check("curl_curl", errs);

    // covariant Laplacian (gauge-null pair, interior truncation)
    let kappa = 2.0;
    let avec = [0.3, -0.2];
    let errs: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let g = Grid::square(2, std::f64::consts::PI, n).unwrap();
            let psi = ComplexField::from_fn(g, |p| {
                Complex64::new(0.0, kappa * (avec[0] * p[0] + avec[1] * p[1])).exp()
            });
            let a = VectorField::uniform(g, &avec);
            let r = ops::covariant_laplacian(&psi, &a, kappa, ops::BcMode::GaugeCoupled).unwrap();
            interior_max(&g, 1, &|i| r.values[i].norm())
        })
        .collect();
    check("covariant_laplacian", errs);

    // supercurrent
    let errs: Vec<f64> = levels
        .iter()
        .map(|&n| {
            let g = Grid::square(2, std::f64::consts::PI, n).unwrap();
            let psi = ComplexField::from_fn(g, |p| Complex64::new(0.0, 0.5 * p[0]).exp());
            let j = ops::supercurrent(&psi, kappa);
            interior_max(&g, 1, &|i| (j.at(0, i) + 0.5 / kappa).abs())
        })
        .collect();
    check("supercurrent", errs);

    println!("criterion 10 (operator truncation orders): PASS  ratios: {}", summary.join(", "));
}
