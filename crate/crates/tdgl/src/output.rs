//! File outputs: diagnostics CSV, legacy-VTK structured-points snapshots
//! (binary big-endian), flat CSV snapshots, the run manifest, and the gap
//! table dump. Floats are written with Rust's shortest round-trip formatting,
//! so re-reading reproduces them bitwise.

use crate::config::{OutputFormat, RunConfig};
use crate::diagnostics::DiagnosticsRow;
use crate::error::{Error, Result};
use crate::gap::{GapParams, GapTable, Nu0Mode};
use crate::grid::{ComplexField, Grid, ScalarField, VectorField};
use crate::ops;
use crate::runner::Prepared;
use crate::stepper::{RunResult, Snapshot};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

fn create(path: &Path) -> Result<fs::File> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent.display().to_string(), e))?;
        }
    }
    fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn werr(path: &Path, e: std::io::Error) -> Error {
    Error::io(path.display().to_string(), e)
}

/// Diagnostics CSV: one row per step including t = 0.
pub fn write_diagnostics_csv(path: &Path, rows: &[DiagnosticsRow]) -> Result<()> {
    let mut f = std::io::BufWriter::new(create(path)?);
    writeln!(f, "n,t,energy,max_abs_psi,mean_abs_psi,psi_iters,a_iters,energy_violation")
        .map_err(|e| werr(path, e))?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{},{},{},{},{}",
            r.n, r.t, r.energy, r.max_abs_psi, r.mean_abs_psi, r.psi_iters, r.a_iters,
            r.energy_violation
        )
        .map_err(|e| werr(path, e))?;
    }
    f.flush().map_err(|e| werr(path, e))
}

fn write_be_f64s(out: &mut impl Write, vals: impl Iterator<Item = f64>) -> std::io::Result<()> {
    for v in vals {
        out.write_all(&v.to_be_bytes())?;
    }
    Ok(())
}

/// Legacy VTK structured points, binary big-endian. Point data: |psi|, Re psi,
/// Im psi, A (3-vector, zero-padded in 2D), curl A (scalar in 2D, vector in
/// 3D), delta. Node order x-fastest matches the VTK convention.
pub fn write_vtk_snapshot(
    path: &Path,
    title: &str,
    psi: &ComplexField,
    a: &VectorField,
    delta: &ScalarField,
) -> Result<()> {
    let g = psi.grid;
    let n = g.len();
    let mut f = std::io::BufWriter::new(create(path)?);
    let e = |e| werr(path, e);

    writeln!(f, "# vtk DataFile Version 3.0").map_err(e)?;
    writeln!(f, "{title}").map_err(e)?;
    writeln!(f, "BINARY").map_err(e)?;
    writeln!(f, "DATASET STRUCTURED_POINTS").map_err(e)?;
    writeln!(f, "DIMENSIONS {} {} {}", g.n[0], g.n[1], g.n[2]).map_err(e)?;
    writeln!(f, "ORIGIN {} {} {}", g.lo[0], g.lo[1], if g.dim == 3 { g.lo[2] } else { 0.0 })
        .map_err(e)?;
    writeln!(f, "SPACING {} {} {}", g.h[0], g.h[1], if g.dim == 3 { g.h[2] } else { 1.0 })
        .map_err(e)?;
    writeln!(f, "POINT_DATA {n}").map_err(e)?;

    let scalar = |f: &mut std::io::BufWriter<fs::File>, name: &str, vals: &mut dyn Iterator<Item = f64>| -> Result<()> {
        writeln!(f, "SCALARS {name} double 1").map_err(e)?;
        writeln!(f, "LOOKUP_TABLE default").map_err(e)?;
        write_be_f64s(f, vals).map_err(e)?;
        writeln!(f).map_err(e)?;
        Ok(())
    };

    scalar(&mut f, "abs_psi", &mut psi.values.iter().map(|v| v.norm()))?;
    scalar(&mut f, "psi_re", &mut psi.values.iter().map(|v| v.re))?;
    scalar(&mut f, "psi_im", &mut psi.values.iter().map(|v| v.im))?;

    writeln!(f, "VECTORS a double").map_err(e)?;
    for i in 0..n {
        let z = if g.dim == 3 { a.at(2, i) } else { 0.0 };
        write_be_f64s(&mut f, [a.at(0, i), a.at(1, i), z].into_iter()).map_err(e)?;
    }
    writeln!(f).map_err(e)?;

    match ops::curl(a) {
        ops::CurlField::TwoD(c) => {
            scalar(&mut f, "curl_a", &mut c.values.iter().copied())?;
        }
        ops::CurlField::ThreeD(c) => {
            writeln!(f, "VECTORS curl_a double").map_err(e)?;
            for i in 0..n {
                write_be_f64s(&mut f, [c.at(0, i), c.at(1, i), c.at(2, i)].into_iter())
                    .map_err(e)?;
            }
            writeln!(f).map_err(e)?;
        }
    }

    scalar(&mut f, "delta", &mut delta.values.iter().copied())?;
    f.flush().map_err(e)
}

/// Flat CSV snapshot fallback: coordinates and all point values per node.
pub fn write_snapshot_csv(
    path: &Path,
    psi: &ComplexField,
    a: &VectorField,
    delta: &ScalarField,
) -> Result<()> {
    let g = psi.grid;
    let mut f = std::io::BufWriter::new(create(path)?);
    let e = |e| werr(path, e);
    let curl = ops::curl(a);
    if g.dim == 2 {
        writeln!(f, "x,y,psi_re,psi_im,abs_psi,a_x,a_y,curl_a,delta").map_err(e)?;
    } else {
        writeln!(f, "x,y,z,psi_re,psi_im,abs_psi,a_x,a_y,a_z,curl_a_x,curl_a_y,curl_a_z,delta")
            .map_err(e)?;
    }
    for i in 0..g.len() {
        let p = g.pos(i);
        let v = psi.values[i];
        if g.dim == 2 {
            let c = curl.as_scalar().values[i];
            writeln!(
                f,
                "{},{},{},{},{},{},{},{},{}",
                p[0], p[1], v.re, v.im, v.norm(), a.at(0, i), a.at(1, i), c, delta.values[i]
            )
            .map_err(e)?;
        } else {
            let c = curl.as_vector();
            writeln!(
                f,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                p[0], p[1], p[2], v.re, v.im, v.norm(), a.at(0, i), a.at(1, i), a.at(2, i),
                c.at(0, i), c.at(1, i), c.at(2, i), delta.values[i]
            )
            .map_err(e)?;
        }
    }
    f.flush().map_err(e)
}

/// Uniform-psi init override / snapshot exchange format.
pub fn write_psi_csv(path: &Path, psi: &ComplexField) -> Result<()> {
    let g = psi.grid;
    let mut f = std::io::BufWriter::new(create(path)?);
    let e = |e| werr(path, e);
    writeln!(f, "# tdgl psi field v1").map_err(e)?;
    writeln!(f, "# n = {}", g.n[..g.dim].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
        .map_err(e)?;
    writeln!(f, "re,im").map_err(e)?;
    for v in &psi.values {
        writeln!(f, "{},{}", v.re, v.im).map_err(e)?;
    }
    f.flush().map_err(e)
}

pub fn read_psi_csv(path: &Path, grid: &Grid) -> Result<ComplexField> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut values = Vec::with_capacity(grid.len());
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "re,im" {
            continue;
        }
        let (re, im) = line.split_once(',').ok_or_else(|| {
            Error::config("init.psi_file", format!("bad row `{line}` in {}", path.display()))
        })?;
        let re: f64 = re.trim().parse().map_err(|_| {
            Error::config("init.psi_file", format!("bad number `{re}` in {}", path.display()))
        })?;
        let im: f64 = im.trim().parse().map_err(|_| {
            Error::config("init.psi_file", format!("bad number `{im}` in {}", path.display()))
        })?;
        values.push(num_complex::Complex64::new(re, im));
    }
    if values.len() != grid.len() {
        return Err(Error::config(
            "init.psi_file",
            format!("expected {} nodes, file has {}", grid.len(), values.len()),
        ));
    }
    Ok(ComplexField { grid: *grid, values })
}

/// Gap table dump: `# key = value` header then `s,delta,f,F` rows.
pub fn write_gap_table(path: &Path, table: &GapTable) -> Result<()> {
    let mut f = std::io::BufWriter::new(create(path)?);
    let e = |e| werr(path, e);
    let p = &table.params;
    writeln!(f, "# tdgl gap table v1").map_err(e)?;
    writeln!(f, "# beta = {}", p.beta).map_err(e)?;
    writeln!(f, "# beta0 = {}", p.beta0).map_err(e)?;
    writeln!(f, "# omega_tilde = {}", p.omega_tilde).map_err(e)?;
    writeln!(f, "# nu0 = {}", p.nu0).map_err(e)?;
    let mode = match p.nu0_mode {
        Nu0Mode::BcsZeroT => "bcs_zero_t",
        Nu0Mode::GapNormalization => "gap_normalization",
    };
    writeln!(f, "# nu0_mode = {mode}").map_err(e)?;
    writeln!(f, "# quad_tol = {}", p.quad_tol).map_err(e)?;
    writeln!(f, "# lipschitz_L = {}", table.lipschitz_l).map_err(e)?;
    writeln!(f, "# n_s = {}", table.s_grid.len()).map_err(e)?;
    writeln!(f, "# n_delta = {}", table.delta_grid.len()).map_err(e)?;
    writeln!(f, "s,delta,f,F").map_err(e)?;
    let n_s = table.s_grid.len();
    for (j, d) in table.delta_grid.iter().enumerate() {
        for (i, s) in table.s_grid.iter().enumerate() {
            writeln!(f, "{},{},{},{}", s, d, table.f_values[j * n_s + i], table.big_f_values[j * n_s + i])
                .map_err(e)?;
        }
    }
    f.flush().map_err(e)
}

pub fn read_gap_table(path: &Path) -> Result<GapTable> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut header = std::collections::BTreeMap::new();
    let mut rows: Vec<(f64, f64, f64, f64)> = Vec::new();
    let bad =
        |msg: String| Error::config("physics.gap_table", format!("{}: {msg}", path.display()));
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line == "s,delta,f,F" {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(bad(format!("bad row `{line}`")));
        }
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("bad number `{s}`")));
        rows.push((parse(cols[0])?, parse(cols[1])?, parse(cols[2])?, parse(cols[3])?));
    }
    let hf = |k: &str| -> Result<f64> {
        header
            .get(k)
            .ok_or_else(|| bad(format!("missing header `{k}`")))?
            .parse::<f64>()
            .map_err(|_| bad(format!("bad header `{k}`")))
    };
    let mode = match header.get("nu0_mode").map(|s| s.as_str()) {
        Some("gap_normalization") => Nu0Mode::GapNormalization,
        _ => Nu0Mode::BcsZeroT,
    };
    let n_s = hf("n_s")? as usize;
    let n_d = hf("n_delta")? as usize;
    if rows.len() != n_s * n_d || n_s == 0 || n_d == 0 {
        return Err(bad(format!("expected {} x {} entries, got {}", n_s, n_d, rows.len())));
    }
    // rows are written delta-major: for each delta, all s in order
    let s_grid: Vec<f64> = rows[..n_s].iter().map(|r| r.0).collect();
    let delta_grid: Vec<f64> = (0..n_d).map(|j| rows[j * n_s].1).collect();
    let f_vals: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let big_f: Vec<f64> = rows.iter().map(|r| r.3).collect();
    let params = GapParams {
        beta: hf("beta")?,
        beta0: hf("beta0")?,
        omega_tilde: hf("omega_tilde")?,
        nu0: hf("nu0")?,
        nu0_mode: mode,
        quad_tol: hf("quad_tol")?,
    };
    GapTable::from_values(params, s_grid, delta_grid, f_vals, big_f)
}

/// Run manifest: the resolved config plus commented provenance values.
/// Re-running the manifest file reproduces the diagnostics bitwise.
pub fn write_manifest(path: &Path, cfg: &RunConfig, prepared: &Prepared) -> Result<()> {
    let mut f = create(path)?;
    let e = |e| werr(path, e);
    let t = &prepared.table;
    writeln!(f, "# tdgl run manifest (re-runnable config)").map_err(e)?;
    writeln!(f, "# nu0 = {}", t.params.nu0).map_err(e)?;
    writeln!(f, "# lipschitz_L = {}", t.lipschitz_l).map_err(e)?;
    writeln!(f, "# stabilizer_resolved = {}", prepared.scheme.stabilizer).map_err(e)?;
    writeln!(f, "# stabilizer_geq_2L = {}", prepared.scheme.stabilizer >= 2.0 * t.lipschitz_l)
        .map_err(e)?;
    writeln!(f, "# two_s_gt_3L = {}", 2.0 * prepared.scheme.stabilizer > 3.0 * t.lipschitz_l)
        .map_err(e)?;
    write!(f, "{}", cfg.to_ini(Some(prepared.scheme.stabilizer))).map_err(e)?;
    Ok(())
}

/// Write everything a run produces into the configured output directory.
/// Returns the file paths written.
pub fn write_outputs(cfg: &RunConfig, prepared: &Prepared, result: &RunResult) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output.dir;
    let mut written = Vec::new();

    let diag = dir.join("diagnostics.csv");
    write_diagnostics_csv(&diag, &result.diagnostics)?;
    written.push(diag);

    let manifest = dir.join("manifest.ini");
    write_manifest(&manifest, cfg, prepared)?;
    written.push(manifest);

    for snap in &result.snapshots {
        written.extend(write_snapshot_files(cfg, prepared, snap)?);
    }
    Ok(written)
}

fn write_snapshot_files(cfg: &RunConfig, prepared: &Prepared, snap: &Snapshot) -> Result<Vec<PathBuf>> {
    let dir = &cfg.output.dir;
    let mut written = Vec::new();
    for fmt in &cfg.output.formats {
        match fmt {
            OutputFormat::Vtk => {
                let path = dir.join(format!("snapshot_t{:08.2}.vtk", snap.t));
                write_vtk_snapshot(
                    &path,
                    &format!("tdgl snapshot n={} t={}", snap.n, snap.t),
                    &snap.psi,
                    &snap.a,
                    &prepared.delta,
                )?;
                written.push(path);
            }
            OutputFormat::Csv => {
                let path = dir.join(format!("snapshot_t{:08.2}.csv", snap.t));
                write_snapshot_csv(&path, &snap.psi, &snap.a, &prepared.delta)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}
