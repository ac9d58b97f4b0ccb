//! Run configuration: a strict flat INI format (unknown keys rejected),
//! section-by-section defaults, and the named scenario presets.

use crate::error::{Error, Result};
use crate::gap::{Nu0Mode, DEFAULT_BETA0, DEFAULT_OMEGA_TILDE, DEFAULT_QUAD_TOL};
use crate::inhomogeneity::InhomogeneitySpec;
use crate::ops::BcMode;
use crate::stepper::AppliedField;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicsSpec {
    pub kappa: f64,
    pub sigma: f64,
    pub beta: f64,
    pub beta0: f64,
    pub omega_tilde: f64,
    pub nu0_mode: Nu0Mode,
    pub quad_tol: f64,
    /// Gap-table extent and resolution.
    pub s_max: f64,
    pub n_s: usize,
    /// Load a pre-computed table instead of building one.
    pub gap_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StabilizerSpec {
    /// S = 2 * lipschitz_L from the built table.
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub tau: f64,
    pub n_steps: usize,
    pub stabilizer: StabilizerSpec,
    pub solver_tol: f64,
    pub solver_maxit: usize,
    pub psi_bc: BcMode,
    pub a_bc: BcMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitSpec {
    pub psi_re: f64,
    pub psi_im: f64,
    /// Uniform initial vector potential, one value per component.
    pub a: Vec<f64>,
    /// Optional CSV field file overriding the uniform psi.
    pub psi_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Vtk,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub snapshot_times: Vec<f64>,
    pub formats: Vec<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub physics: PhysicsSpec,
    pub scheme: SchemeSpec,
    pub field: AppliedField,
    pub init: InitSpec,
    pub inhomogeneity: InhomogeneitySpec,
    pub output: OutputSpec,
}

// ---------------------------------------------------------------------------
// parsing

type Section = BTreeMap<String, String>;

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if out.contains_key(&name) {
                return Err(Error::config(&name, "duplicate section"));
            }
            out.insert(name.clone(), Section::new());
            current = Some(name);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::config(
                format!("line {}", lineno + 1),
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let section = current
            .as_ref()
            .ok_or_else(|| Error::config(format!("line {}", lineno + 1), "key before any [section]"))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let entries = out.get_mut(section).unwrap();
        if entries.contains_key(&key) {
            return Err(Error::config(format!("{section}.{key}"), "duplicate key"));
        }
        entries.insert(key, value);
    }
    Ok(out)
}

struct SectionReader {
    name: String,
    entries: Section,
}

impl SectionReader {
    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn take_f64(&mut self, key: &str) -> Result<Option<f64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::config(format!("{}.{key}", self.name), format!("not a number: `{v}`"))),
        }
    }

    fn take_usize(&mut self, key: &str) -> Result<Option<usize>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| Error::config(format!("{}.{key}", self.name), format!("not an integer: `{v}`"))),
        }
    }

    fn take_u64(&mut self, key: &str) -> Result<Option<u64>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u64>()
                .map(Some)
                .map_err(|_| Error::config(format!("{}.{key}", self.name), format!("not an integer: `{v}`"))),
        }
    }

    fn take_f64_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map(Some)
                .map_err(|_| {
                    Error::config(format!("{}.{key}", self.name), format!("not a number list: `{v}`"))
                }),
        }
    }

    fn take_usize_list(&mut self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<usize>, _>>()
                .map(Some)
                .map_err(|_| {
                    Error::config(format!("{}.{key}", self.name), format!("not an integer list: `{v}`"))
                }),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.entries.keys().next() {
            return Err(Error::config(format!("{}.{key}", self.name), "unknown key"));
        }
        Ok(())
    }
}

fn reader(map: &mut BTreeMap<String, Section>, name: &str) -> SectionReader {
    SectionReader { name: name.to_string(), entries: map.remove(name).unwrap_or_default() }
}

fn require<T>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::config(key, "missing required key"))
}

fn bc_from_str(key: &str, v: &str) -> Result<BcMode> {
    match v {
        "neumann" => Ok(BcMode::HomogeneousNeumann),
        "gauge_coupled" => Ok(BcMode::GaugeCoupled),
        _ => Err(Error::config(key, format!("expected `neumann` or `gauge_coupled`, got `{v}`"))),
    }
}

fn bc_to_str(bc: BcMode) -> &'static str {
    match bc {
        BcMode::HomogeneousNeumann => "neumann",
        BcMode::GaugeCoupled => "gauge_coupled",
    }
}

impl RunConfig {
    /// Parse and validate the strict INI text.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut map = parse_sections(text)?;
        let known = ["grid", "physics", "scheme", "field", "init", "inhomogeneity", "output"];
        if let Some(name) = map.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(Error::config(name.clone(), "unknown section"));
        }

        // [grid]
        let mut s = reader(&mut map, "grid");
        let dim = require(s.take_usize("dim")?, "grid.dim")?;
        let lo = require(s.take_f64_list("lo")?, "grid.lo")?;
        let hi = require(s.take_f64_list("hi")?, "grid.hi")?;
        let n = require(s.take_usize_list("n")?, "grid.n")?;
        s.finish()?;
        if dim != 2 && dim != 3 {
            return Err(Error::config("grid.dim", format!("must be 2 or 3, got {dim}")));
        }
        if lo.len() != dim || hi.len() != dim || n.len() != dim {
            return Err(Error::config("grid", "lo/hi/n must each have `dim` entries"));
        }
        let grid = GridSpec { dim, lo, hi, n };

        // [physics]
        let mut s = reader(&mut map, "physics");
        let kappa = s.take_f64("kappa")?.unwrap_or(2.0);
        let sigma = s.take_f64("sigma")?.unwrap_or(1.0);
        let beta0 = s.take_f64("beta0")?.unwrap_or(DEFAULT_BETA0);
        let beta_key = s.take_f64("beta")?;
        let t_ratio = s.take_f64("t_ratio")?;
        let beta = match (beta_key, t_ratio) {
            (Some(_), Some(_)) => {
                return Err(Error::config("physics.beta", "give either beta or t_ratio, not both"))
            }
            (Some(b), None) => b,
            (None, Some(tr)) => crate::gap::beta_from_reduced_temperature(tr, beta0)
                .map_err(|e| Error::config("physics.t_ratio", e.to_string()))?,
            (None, None) => beta0 / 0.1, // section-4 default T = 0.1 Tc
        };
        let omega_tilde = s.take_f64("omega_tilde")?.unwrap_or(DEFAULT_OMEGA_TILDE);
        let nu0_mode = match s.take("nu0_mode").as_deref() {
            None | Some("bcs_zero_t") => Nu0Mode::BcsZeroT,
            Some("gap_normalization") => Nu0Mode::GapNormalization,
            Some(v) => {
                return Err(Error::config(
                    "physics.nu0_mode",
                    format!("expected `bcs_zero_t` or `gap_normalization`, got `{v}`"),
                ))
            }
        };
        let quad_tol = s.take_f64("quad_tol")?.unwrap_or(DEFAULT_QUAD_TOL);
        let s_max = s.take_f64("s_max")?.unwrap_or(2.0);
        let n_s = s.take_usize("n_s")?.unwrap_or(513);
        let gap_table = s.take("gap_table").map(PathBuf::from);
        s.finish()?;
        if !(kappa > 0.0) {
            return Err(Error::config("physics.kappa", "must be positive"));
        }
        if !(sigma > 0.0) {
            return Err(Error::config("physics.sigma", "must be positive"));
        }
        if !(beta > 0.0) {
            return Err(Error::config("physics.beta", "must be positive"));
        }
        if !(quad_tol > 0.0) {
            return Err(Error::config("physics.quad_tol", "must be positive"));
        }
        let physics = PhysicsSpec {
            kappa, sigma, beta, beta0, omega_tilde, nu0_mode, quad_tol, s_max, n_s, gap_table,
        };

        // [scheme]
        let mut s = reader(&mut map, "scheme");
        let tau = require(s.take_f64("tau")?, "scheme.tau")?;
        let n_steps = require(s.take_usize("n_steps")?, "scheme.n_steps")?;
        let stabilizer = match s.take("stabilizer").as_deref() {
            None | Some("auto") => StabilizerSpec::Auto,
            Some(v) => StabilizerSpec::Fixed(v.parse::<f64>().map_err(|_| {
                Error::config("scheme.stabilizer", format!("expected `auto` or a number, got `{v}`"))
            })?),
        };
        let solver_tol = s.take_f64("solver_tol")?.unwrap_or(1e-10);
        let solver_maxit = s.take_usize("solver_maxit")?.unwrap_or(50_000);
        let psi_bc = match s.take("psi_bc") {
            None => BcMode::HomogeneousNeumann,
            Some(v) => bc_from_str("scheme.psi_bc", &v)?,
        };
        let a_bc = match s.take("a_bc") {
            None => BcMode::HomogeneousNeumann,
            Some(v) => bc_from_str("scheme.a_bc", &v)?,
        };
        s.finish()?;
        if !(tau > 0.0) {
            return Err(Error::config("scheme.tau", format!("must be positive, got {tau}")));
        }
        if let StabilizerSpec::Fixed(v) = stabilizer {
            if !(v >= 0.0) {
                return Err(Error::config("scheme.stabilizer", "must be nonnegative"));
            }
        }
        if !(solver_tol > 0.0 && solver_tol < 1.0) {
            return Err(Error::config("scheme.solver_tol", "must lie in (0, 1)"));
        }
        let scheme =
            SchemeSpec { tau, n_steps, stabilizer, solver_tol, solver_maxit, psi_bc, a_bc };

        // [field]
        let mut s = reader(&mut map, "field");
        let profile = s.take("profile").unwrap_or_else(|| "zero".to_string());
        let h = s.take_f64_list("h")?;
        s.finish()?;
        let field = match profile.as_str() {
            "zero" => AppliedField::Zero,
            "half_plus_exp" => {
                if dim != 2 {
                    return Err(Error::config("field.profile", "half_plus_exp is 2D only"));
                }
                AppliedField::HalfPlusExp2d
            }
            "constant" => {
                let h = require(h, "field.h")?;
                match (dim, h.len()) {
                    (2, 1) => AppliedField::Constant2d(h[0]),
                    (3, 3) => AppliedField::Constant3d([h[0], h[1], h[2]]),
                    _ => {
                        return Err(Error::config(
                            "field.h",
                            format!("expected {} component(s) for dim {dim}", if dim == 2 { 1 } else { 3 }),
                        ))
                    }
                }
            }
            v => {
                return Err(Error::config(
                    "field.profile",
                    format!("expected `zero`, `constant` or `half_plus_exp`, got `{v}`"),
                ))
            }
        };

        // [init]
        let mut s = reader(&mut map, "init");
        let psi_re = s.take_f64("psi_re")?.unwrap_or(0.8);
        let psi_im = s.take_f64("psi_im")?.unwrap_or(0.6);
        let a = s.take_f64_list("a")?.unwrap_or_else(|| vec![1e-6; dim]);
        let psi_file = s.take("psi_file").map(PathBuf::from);
        s.finish()?;
        if a.len() != dim {
            return Err(Error::config("init.a", format!("expected {dim} components")));
        }
        let init = InitSpec { psi_re, psi_im, a, psi_file };

        // [inhomogeneity]
        let mut s = reader(&mut map, "inhomogeneity");
        let ty = s.take("type").unwrap_or_else(|| "none".to_string());
        let inhomogeneity = match ty.as_str() {
            "none" => {
                s.finish()?;
                InhomogeneitySpec::None
            }
            // `random_blobs_2d` is the same disk-union construction in 2D
            "random_spheres" | "random_blobs_2d" => {
                if ty == "random_blobs_2d" && dim != 2 {
                    return Err(Error::config("inhomogeneity.type", "random_blobs_2d is 2D only"));
                }
                let count = require(s.take_usize("count")?, "inhomogeneity.count")?;
                let radius_min = require(s.take_f64("radius_min")?, "inhomogeneity.radius_min")?;
                let radius_max = require(s.take_f64("radius_max")?, "inhomogeneity.radius_max")?;
                let delta_value = require(s.take_f64("delta_value")?, "inhomogeneity.delta_value")?;
                let seed = require(s.take_u64("seed")?, "inhomogeneity.seed")?;
                s.finish()?;
                if !(radius_min > 0.0 && radius_max >= radius_min) {
                    return Err(Error::config(
                        "inhomogeneity.radius_min",
                        "need 0 < radius_min <= radius_max",
                    ));
                }
                InhomogeneitySpec::RandomSpheres {
                    count,
                    radius_range: (radius_min, radius_max),
                    delta_value,
                    seed,
                }
            }
            v => {
                return Err(Error::config(
                    "inhomogeneity.type",
                    format!("expected `none`, `random_spheres` or `random_blobs_2d`, got `{v}`"),
                ))
            }
        };

        // [output]
        let mut s = reader(&mut map, "output");
        let dir = PathBuf::from(s.take("dir").unwrap_or_else(|| "out".to_string()));
        let snapshot_times = s.take_f64_list("snapshot_times")?.unwrap_or_default();
        let formats = match s.take("formats") {
            None => vec![OutputFormat::Vtk, OutputFormat::Csv],
            Some(v) => {
                let mut out = Vec::new();
                for part in v.split(',') {
                    match part.trim() {
                        "vtk" => out.push(OutputFormat::Vtk),
                        "csv" => out.push(OutputFormat::Csv),
                        other => {
                            return Err(Error::config(
                                "output.formats",
                                format!("expected `vtk` or `csv`, got `{other}`"),
                            ))
                        }
                    }
                }
                out
            }
        };
        s.finish()?;
        let output = OutputSpec { dir, snapshot_times, formats };

        Ok(RunConfig { grid, physics, scheme, field, init, inhomogeneity, output })
    }

    /// Serialize back to the INI format with round-trip float precision.
    /// `resolved_stabilizer` replaces `auto` so a manifest reruns bitwise.
    pub fn to_ini(&self, resolved_stabilizer: Option<f64>) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        writeln!(s, "[grid]").unwrap();
        writeln!(s, "dim = {}", self.grid.dim).unwrap();
        writeln!(s, "lo = {}", join(&self.grid.lo)).unwrap();
        writeln!(s, "hi = {}", join(&self.grid.hi)).unwrap();
        writeln!(
            s,
            "n = {}",
            self.grid.n.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )
        .unwrap();
        writeln!(s).unwrap();
        writeln!(s, "[physics]").unwrap();
        writeln!(s, "kappa = {}", self.physics.kappa).unwrap();
        writeln!(s, "sigma = {}", self.physics.sigma).unwrap();
        writeln!(s, "beta = {}", self.physics.beta).unwrap();
        writeln!(s, "beta0 = {}", self.physics.beta0).unwrap();
        writeln!(s, "omega_tilde = {}", self.physics.omega_tilde).unwrap();
        let mode = match self.physics.nu0_mode {
            Nu0Mode::BcsZeroT => "bcs_zero_t",
            Nu0Mode::GapNormalization => "gap_normalization",
        };
        writeln!(s, "nu0_mode = {mode}").unwrap();
        writeln!(s, "quad_tol = {}", self.physics.quad_tol).unwrap();
        writeln!(s, "s_max = {}", self.physics.s_max).unwrap();
        writeln!(s, "n_s = {}", self.physics.n_s).unwrap();
        if let Some(p) = &self.physics.gap_table {
            writeln!(s, "gap_table = {}", p.display()).unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "[scheme]").unwrap();
        writeln!(s, "tau = {}", self.scheme.tau).unwrap();
        writeln!(s, "n_steps = {}", self.scheme.n_steps).unwrap();
        match (resolved_stabilizer, self.scheme.stabilizer) {
            (Some(v), _) | (None, StabilizerSpec::Fixed(v)) => {
                writeln!(s, "stabilizer = {v}").unwrap()
            }
            (None, StabilizerSpec::Auto) => writeln!(s, "stabilizer = auto").unwrap(),
        }
        writeln!(s, "solver_tol = {}", self.scheme.solver_tol).unwrap();
        writeln!(s, "solver_maxit = {}", self.scheme.solver_maxit).unwrap();
        writeln!(s, "psi_bc = {}", bc_to_str(self.scheme.psi_bc)).unwrap();
        writeln!(s, "a_bc = {}", bc_to_str(self.scheme.a_bc)).unwrap();
        writeln!(s).unwrap();
        writeln!(s, "[field]").unwrap();
        match &self.field {
            AppliedField::Zero => writeln!(s, "profile = zero").unwrap(),
            AppliedField::Constant2d(h) => {
                writeln!(s, "profile = constant").unwrap();
                writeln!(s, "h = {h}").unwrap();
            }
            AppliedField::HalfPlusExp2d => writeln!(s, "profile = half_plus_exp").unwrap(),
            AppliedField::Constant3d(h) => {
                writeln!(s, "profile = constant").unwrap();
                writeln!(s, "h = {}", join(&h[..])).unwrap();
            }
        }
        writeln!(s).unwrap();
        writeln!(s, "[init]").unwrap();
        writeln!(s, "psi_re = {}", self.init.psi_re).unwrap();
        writeln!(s, "psi_im = {}", self.init.psi_im).unwrap();
        writeln!(s, "a = {}", join(&self.init.a)).unwrap();
        if let Some(p) = &self.init.psi_file {
            writeln!(s, "psi_file = {}", p.display()).unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "[inhomogeneity]").unwrap();
        match &self.inhomogeneity {
            InhomogeneitySpec::None => writeln!(s, "type = none").unwrap(),
            InhomogeneitySpec::RandomSpheres { count, radius_range, delta_value, seed } => {
                writeln!(s, "type = random_spheres").unwrap();
                writeln!(s, "count = {count}").unwrap();
                writeln!(s, "radius_min = {}", radius_range.0).unwrap();
                writeln!(s, "radius_max = {}", radius_range.1).unwrap();
                writeln!(s, "delta_value = {delta_value}").unwrap();
                writeln!(s, "seed = {seed}").unwrap();
            }
        }
        writeln!(s).unwrap();
        writeln!(s, "[output]").unwrap();
        writeln!(s, "dir = {}", self.output.dir.display()).unwrap();
        if !self.output.snapshot_times.is_empty() {
            writeln!(s, "snapshot_times = {}", join(&self.output.snapshot_times)).unwrap();
        }
        let fm: Vec<&str> = self
            .output
            .formats
            .iter()
            .map(|f| match f {
                OutputFormat::Vtk => "vtk",
                OutputFormat::Csv => "csv",
            })
            .collect();
        writeln!(s, "formats = {}", fm.join(", ")).unwrap();
        s
    }
}

/// Named experiment presets.
pub fn scenario(name: &str) -> Result<RunConfig> {
    let square2 = |half: f64, nodes: usize| GridSpec {
        dim: 2,
        lo: vec![-half, -half],
        hi: vec![half, half],
        n: vec![nodes, nodes],
    };
    let physics = |beta: f64| PhysicsSpec {
        kappa: 2.0,
        sigma: 1.0,
        beta,
        beta0: DEFAULT_BETA0,
        omega_tilde: DEFAULT_OMEGA_TILDE,
        nu0_mode: Nu0Mode::BcsZeroT,
        quad_tol: DEFAULT_QUAD_TOL,
        s_max: 2.0,
        n_s: 513,
        gap_table: None,
    };
    let scheme = |tau: f64, n_steps: usize, stab: StabilizerSpec| SchemeSpec {
        tau,
        n_steps,
        stabilizer: stab,
        solver_tol: 1e-10,
        solver_maxit: 50_000,
        psi_bc: BcMode::HomogeneousNeumann,
        // the applied field enters through the gauge-coupled natural BC
        a_bc: BcMode::GaugeCoupled,
    };
    let output = |name: &str, times: &[f64]| OutputSpec {
        dir: PathBuf::from(format!("out/{name}")),
        snapshot_times: times.to_vec(),
        formats: vec![OutputFormat::Vtk, OutputFormat::Csv],
    };
    let sc_init = InitSpec { psi_re: 0.8, psi_im: 0.6, a: vec![1e-6, 1e-6], psi_file: None };
    let fig_times = [20.0, 40.0, 60.0, 80.0, 100.0];

    let cfg = match name {
        // near-critical field suppression, small-amplitude start
        "fig1_H015" | "fig1_H030" => {
            let h = if name == "fig1_H015" { 0.15 } else { 0.3 };
            RunConfig {
                grid: square2(PI, 64),
                physics: physics(DEFAULT_BETA0 / 0.96),
                scheme: scheme(0.5, 200, StabilizerSpec::Auto),
                field: AppliedField::Constant2d(h),
                init: InitSpec { psi_re: 0.08, psi_im: 0.06, a: vec![1e-6, 1e-6], psi_file: None },
                inhomogeneity: InhomogeneitySpec::None,
                output: output(name, &fig_times),
            }
        }
        // vortex morphology on (-pi,pi)^2, S = 4
        "fig3_homog" | "fig3_inhomog" => RunConfig {
            grid: square2(PI, 64),
            physics: physics(8.82),
            scheme: scheme(0.25, 400, StabilizerSpec::Fixed(4.0)),
            field: AppliedField::Constant2d(0.3),
            init: sc_init.clone(),
            inhomogeneity: if name == "fig3_inhomog" {
                InhomogeneitySpec::RandomSpheres {
                    count: 12,
                    radius_range: (0.3, 0.8),
                    delta_value: 0.4,
                    seed: 7,
                }
            } else {
                InhomogeneitySpec::None
            },
            output: output(name, &fig_times),
        },
        // vortex morphology on (-2pi,2pi)^2, S = 2
        "fig4_homog" | "fig4_inhomog" => RunConfig {
            grid: square2(2.0 * PI, 96),
            physics: physics(8.82),
            scheme: scheme(0.25, 400, StabilizerSpec::Fixed(2.0)),
            field: AppliedField::Constant2d(0.3),
            init: sc_init.clone(),
            inhomogeneity: if name == "fig4_inhomog" {
                InhomogeneitySpec::RandomSpheres {
                    count: 24,
                    radius_range: (0.4, 1.0),
                    delta_value: 0.4,
                    seed: 8,
                }
            } else {
                InhomogeneitySpec::None
            },
            output: output(name, &fig_times),
        },
        // 3D cube, axis-aligned or tilted field, optional sphere pinning
        "fig5_axis" | "fig5_tilt" | "fig5_tilt_inhomog" => {
            let h = if name == "fig5_axis" {
                [0.0, 0.0, 0.5]
            } else {
                [0.0, 0.5 * (PI / 36.0).sin(), 0.5 * (PI / 36.0).cos()]
            };
            RunConfig {
                grid: GridSpec {
                    dim: 3,
                    lo: vec![-PI; 3],
                    hi: vec![PI; 3],
                    n: vec![20; 3],
                },
                physics: physics(8.82),
                scheme: scheme(0.5, 800, StabilizerSpec::Auto),
                field: AppliedField::Constant3d(h),
                init: InitSpec {
                    psi_re: 0.8,
                    psi_im: 0.6,
                    a: vec![1e-6, 1e-6, 1e-6],
                    psi_file: None,
                },
                inhomogeneity: if name == "fig5_tilt_inhomog" {
                    InhomogeneitySpec::RandomSpheres {
                        count: 10,
                        radius_range: (0.4, 0.9),
                        delta_value: 0.4,
                        seed: 11,
                    }
                } else {
                    InhomogeneitySpec::None
                },
                output: output(name, &[80.0, 240.0, 400.0]),
            }
        }
        _ => {
            return Err(Error::config(
                "scenario",
                format!(
                    "unknown scenario `{name}`; known: fig1_H015 fig1_H030 fig3_homog \
                     fig3_inhomog fig4_homog fig4_inhomog fig5_axis fig5_tilt fig5_tilt_inhomog"
                ),
            ))
        }
    };
    Ok(cfg)
}

pub const SCENARIO_NAMES: [&str; 9] = [
    "fig1_H015",
    "fig1_H030",
    "fig3_homog",
    "fig3_inhomog",
    "fig4_homog",
    "fig4_inhomog",
    "fig5_axis",
    "fig5_tilt",
    "fig5_tilt_inhomog",
];
