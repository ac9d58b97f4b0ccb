//! Uniform tensor-product grids (2D/3D) and node-colocated fields.
//!
//! Node order is lexicographic with axis 0 fastest:
//! idx = i0 + n0*(i1 + n1*i2). All file dumps and operators rely on it.

use crate::error::{Error, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub dim: usize,
    /// Nodes per axis; unused axes are 1.
    pub n: [usize; 3],
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    /// Spacing (hi-lo)/(n-1) per axis; unused axes are 1.
    pub h: [f64; 3],
}

impl Grid {
    pub fn new(dim: usize, lo: &[f64], hi: &[f64], n: &[usize]) -> Result<Grid> {
        if dim != 2 && dim != 3 {
            return Err(Error::Domain(format!("grid dim must be 2 or 3, got {dim}")));
        }
        if lo.len() != dim || hi.len() != dim || n.len() != dim {
            return Err(Error::Domain("grid extents/nodes must have `dim` entries".into()));
        }
        let mut g = Grid { dim, n: [1; 3], lo: [0.0; 3], hi: [0.0; 3], h: [1.0; 3] };
        for a in 0..dim {
            if n[a] < 3 {
                return Err(Error::Domain(format!("need at least 3 nodes per axis, got {}", n[a])));
            }
            if !(lo[a] < hi[a]) {
                return Err(Error::Domain(format!("axis {a}: lo {} must be < hi {}", lo[a], hi[a])));
            }
            g.n[a] = n[a];
            g.lo[a] = lo[a];
            g.hi[a] = hi[a];
            g.h[a] = (hi[a] - lo[a]) / (n[a] - 1) as f64;
        }
        Ok(g)
    }

    pub fn square(dim: usize, half_width: f64, nodes: usize) -> Result<Grid> {
        let lo = vec![-half_width; dim];
        let hi = vec![half_width; dim];
        let n = vec![nodes; dim];
        Grid::new(dim, &lo, &hi, &n)
    }

    /// Total node count.
    pub fn len(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n[0] * (j + self.n[1] * k)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let i = idx % self.n[0];
        let j = (idx / self.n[0]) % self.n[1];
        let k = idx / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    /// Physical position of a node.
    pub fn pos(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.lo[a] + c[a] as f64 * self.h[a];
        }
        p
    }

    /// Cell volume h0*h1(*h2).
    pub fn cell_volume(&self) -> f64 {
        let mut v = 1.0;
        for a in 0..self.dim {
            v *= self.h[a];
        }
        v
    }

    /// Domain volume.
    pub fn volume(&self) -> f64 {
        let mut v = 1.0;
        for a in 0..self.dim {
            v *= self.hi[a] - self.lo[a];
        }
        v
    }

    /// Trapezoid weight of a node: product over axes of 1/2 at axis ends.
    pub fn trapezoid_weight(&self, idx: usize) -> f64 {
        let c = self.coords(idx);
        let mut w = 1.0;
        for a in 0..self.dim {
            if c[a] == 0 || c[a] == self.n[a] - 1 {
                w *= 0.5;
            }
        }
        w
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self.dim == other.dim && self.n == other.n && self.lo == other.lo && self.hi == other.hi
    }
}

macro_rules! check_same_grid {
    ($a:expr, $b:expr) => {
        if !$a.same_shape(&$b) {
            return Err(Error::Shape(format!("grid mismatch: {:?} vs {:?}", $a.n, $b.n)));
        }
    };
}
pub(crate) use check_same_grid;

/// Complex order parameter, one value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(grid: Grid) -> Self {
        ComplexField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn uniform(grid: Grid, v: Complex64) -> Self {
        ComplexField { grid, values: vec![v; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.pos(i)[..grid.dim])).collect();
        ComplexField { grid, values }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// |psi|^2 per node.
    pub fn modulus_squared(&self) -> ScalarField {
        ScalarField { grid: self.grid, values: self.values.iter().map(|v| v.norm_sqr()).collect() }
    }
}

/// Real scalar field (inhomogeneity delta, 2D curl, |psi|^2 caches, ...).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        ScalarField { grid, values: vec![0.0; grid.len()] }
    }

    pub fn uniform(grid: Grid, v: f64) -> Self {
        ScalarField { grid, values: vec![v; grid.len()] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.pos(i)[..grid.dim])).collect();
        ScalarField { grid, values }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Real vector field with `dim` node-colocated components, stored
/// component-major: values[comp * N + node].
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        VectorField { grid, values: vec![0.0; grid.dim * grid.len()] }
    }

    pub fn uniform(grid: Grid, v: &[f64]) -> Self {
        let n = grid.len();
        let mut values = vec![0.0; grid.dim * n];
        for a in 0..grid.dim {
            values[a * n..(a + 1) * n].fill(v[a]);
        }
        VectorField { grid, values }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let n = grid.len();
        let mut values = vec![0.0; grid.dim * n];
        for i in 0..n {
            let v = f(&grid.pos(i)[..grid.dim]);
            for a in 0..grid.dim {
                values[a * n + i] = v[a];
            }
        }
        VectorField { grid, values }
    }

    #[inline]
    pub fn comp(&self, a: usize) -> &[f64] {
        let n = self.grid.len();
        &self.values[a * n..(a + 1) * n]
    }

    #[inline]
    pub fn comp_mut(&mut self, a: usize) -> &mut [f64] {
        let n = self.grid.len();
        &mut self.values[a * n..(a + 1) * n]
    }

    #[inline]
    pub fn at(&self, a: usize, node: usize) -> f64 {
        self.values[a * self.grid.len() + node]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_roundtrip() {
        let g = Grid::new(3, &[-1.0, -1.0, -1.0], &[1.0, 1.0, 1.0], &[4, 5, 6]).unwrap();
        assert_eq!(g.len(), 120);
        for idx in [0usize, 1, 17, 77, 119] {
            let c = g.coords(idx);
            assert_eq!(g.idx(c[0], c[1], c[2]), idx);
        }
        // axis 0 fastest
        assert_eq!(g.idx(1, 0, 0), 1);
        assert_eq!(g.idx(0, 1, 0), 4);
        assert_eq!(g.idx(0, 0, 1), 20);
    }

    #[test]
    fn spacing_and_weights() {
        let g = Grid::square(2, std::f64::consts::PI, 33).unwrap();
        assert!((g.h[0] - 2.0 * std::f64::consts::PI / 32.0).abs() < 1e-15);
        assert_eq!(g.trapezoid_weight(g.idx(0, 0, 0)), 0.25); // corner
        assert_eq!(g.trapezoid_weight(g.idx(1, 0, 0)), 0.5); // edge
        assert_eq!(g.trapezoid_weight(g.idx(5, 7, 0)), 1.0); // interior
        // trapezoid sum * cell volume = domain volume
        let total: f64 = (0..g.len()).map(|i| g.trapezoid_weight(i)).sum();
        assert!((total * g.cell_volume() - g.volume()).abs() < 1e-9);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid::new(1, &[0.0], &[1.0], &[8]).is_err());
        assert!(Grid::new(2, &[0.0, 0.0], &[1.0, 1.0], &[2, 8]).is_err());
        assert!(Grid::new(2, &[0.0, 2.0], &[1.0, 1.0], &[8, 8]).is_err());
    }

    #[test]
    fn vector_component_layout() {
        let g = Grid::square(2, 1.0, 3).unwrap();
        let v = VectorField::from_fn(g, |p| vec![p[0], 10.0 * p[1]]);
        assert_eq!(v.at(0, g.idx(2, 0, 0)), 1.0);
        assert_eq!(v.at(1, g.idx(0, 2, 0)), 10.0);
    }
}
