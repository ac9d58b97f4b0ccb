//! Seeded random inhomogeneity fields: delta(x) constant inside a union of
//! overlapping spheres (disks in 2D), zero outside.
//!
//! The PRNG is ChaCha8 seeded from the config's 64-bit seed; draws are
//! center coordinates (axis order) then radius, one sphere at a time, so a
//! seed pins the field bitwise across platforms.

use crate::grid::{Grid, ScalarField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Specification of the random inhomogeneity.
#[derive(Debug, Clone, PartialEq)]
pub enum InhomogeneitySpec {
    None,
    /// Union of `count` spheres (3D) or disks (2D) with uniform random
    /// centers in the domain and radii in `radius_range`.
    RandomSpheres { count: usize, radius_range: (f64, f64), delta_value: f64, seed: u64 },
}

/// Generate delta(x) on the grid.
pub fn generate_inhomogeneity(spec: &InhomogeneitySpec, grid: &Grid) -> ScalarField {
    match spec {
        InhomogeneitySpec::None => ScalarField::zeros(*grid),
        InhomogeneitySpec::RandomSpheres { count, radius_range, delta_value, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut spheres: Vec<([f64; 3], f64)> = Vec::with_capacity(*count);
            for _ in 0..*count {
                let mut c = [0.0; 3];
                for (a, ca) in c.iter_mut().enumerate().take(grid.dim) {
                    *ca = rng.gen_range(grid.lo[a]..=grid.hi[a]);
                }
                let r = if radius_range.0 == radius_range.1 {
                    radius_range.0
                } else {
                    rng.gen_range(radius_range.0..=radius_range.1)
                };
                spheres.push((c, r));
            }
            let mut out = ScalarField::zeros(*grid);
            for i in 0..grid.len() {
                let p = grid.pos(i);
                let inside = spheres.iter().any(|(c, r)| {
                    let mut d2 = 0.0;
                    for a in 0..grid.dim {
                        d2 += (p[a] - c[a]) * (p[a] - c[a]);
                    }
                    d2 <= r * r
                });
                if inside {
                    out.values[i] = *delta_value;
                }
            }
            out
        }
    }
}

/// Sorted distinct values taken by the field (the gap table's delta grid).
pub fn distinct_delta_values(delta: &ScalarField) -> Vec<f64> {
    let mut vals: Vec<f64> = delta.values.clone();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals.dedup();
    vals
}
