//! Uniform periodic grids on T^d (d ∈ {1,2}) and real fields on them.
//!
//! The torus is normalized to side length 1, so node i sits at i/n per axis
//! and all positions are stored in [0,1).

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("grid dimension must be 1 or 2, got {0}")]
    BadDimension(usize),
    #[error("grid needs at least 8 points per axis, got {0}")]
    TooCoarse(usize),
    #[error("field has {got} values, grid has {want} nodes")]
    SizeMismatch { got: usize, want: usize },
    #[error("field value at node {0} is not finite")]
    NotFinite(usize),
}

/// Wrap a coordinate into [0,1).
pub fn wrap01(x: f64) -> f64 {
    let y = x - x.floor();
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Signed representative of x in [-1/2, 1/2).
pub fn wrap_half(x: f64) -> f64 {
    let y = wrap01(x);
    if y >= 0.5 {
        y - 1.0
    } else {
        y
    }
}

/// Torus distance between two coordinates.
pub fn torus_dist(a: f64, b: f64) -> f64 {
    wrap_half(a - b).abs()
}

/// Uniform periodic discretization of T^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize) -> Result<Self, GridError> {
        if dim == 0 || dim > 2 {
            return Err(GridError::BadDimension(dim));
        }
        if n < 8 {
            return Err(GridError::TooCoarse(n));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Total node count n^d.
    pub fn node_count(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Position of a node; the second component is 0 for d=1.
    pub fn node(&self, idx: usize) -> [f64; 2] {
        debug_assert!(idx < self.node_count());
        let h = self.spacing();
        match self.dim {
            1 => [idx as f64 * h, 0.0],
            _ => {
                let i = idx / self.n;
                let j = idx % self.n;
                [i as f64 * h, j as f64 * h]
            }
        }
    }

    /// Node index from per-axis indices, wrapping modulo n.
    pub fn index(&self, coords: [i64; 2]) -> usize {
        let m = self.n as i64;
        let w = |v: i64| (v.rem_euclid(m)) as usize;
        match self.dim {
            1 => w(coords[0]),
            _ => w(coords[0]) * self.n + w(coords[1]),
        }
    }

    /// Per-axis indices of a node.
    pub fn coords(&self, idx: usize) -> [i64; 2] {
        match self.dim {
            1 => [idx as i64, 0],
            _ => [(idx / self.n) as i64, (idx % self.n) as i64],
        }
    }

    /// Index shifted by `steps` along `axis`, wrapping.
    pub fn shifted(&self, idx: usize, axis: usize, steps: i64) -> usize {
        let mut c = self.coords(idx);
        c[axis] += steps;
        self.index(c)
    }

    /// Node index closest to a position (componentwise wrap + round).
    pub fn nearest(&self, q: [f64; 2]) -> usize {
        let nf = self.n as f64;
        let r = |x: f64| (wrap01(x) * nf).round() as i64;
        match self.dim {
            1 => self.index([r(q[0]), 0]),
            _ => self.index([r(q[0]), r(q[1])]),
        }
    }
}

/// A real-valued function sampled on the nodes of a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridField {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.node_count()],
        }
    }

    pub fn from_values(grid: TorusGrid, values: Vec<f64>) -> Result<Self, GridError> {
        if values.len() != grid.node_count() {
            return Err(GridError::SizeMismatch {
                got: values.len(),
                want: grid.node_count(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NotFinite(i));
        }
        Ok(Self { grid, values })
    }

    /// Sample a function at every node.
    pub fn from_fn(grid: TorusGrid, mut f: impl FnMut([f64; 2]) -> f64) -> Self {
        let values = (0..grid.node_count()).map(|i| f(grid.node(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_diff(&self, other: &GridField) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn add_scalar(&mut self, a: f64) {
        for v in &mut self.values {
            *v += a;
        }
    }

    /// Shift so that the value at `base` becomes 0.
    pub fn rebase(&mut self, base: usize) {
        let v0 = self.values[base];
        self.add_scalar(-v0);
    }

    /// Central difference along `axis` at a node.
    pub fn central_diff(&self, idx: usize, axis: usize) -> f64 {
        let g = self.grid;
        let fwd = self.values[g.shifted(idx, axis, 1)];
        let bwd = self.values[g.shifted(idx, axis, -1)];
        (fwd - bwd) / (2.0 * g.spacing())
    }

    /// One-sided differences (forward, backward) along `axis`.
    pub fn one_sided_diffs(&self, idx: usize, axis: usize) -> (f64, f64) {
        let g = self.grid;
        let h = g.spacing();
        let f = (self.values[g.shifted(idx, axis, 1)] - self.values[idx]) / h;
        let b = (self.values[idx] - self.values[g.shifted(idx, axis, -1)]) / h;
        (f, b)
    }

    /// Nodes where forward and backward differences agree within `threshold`
    /// on every axis.
    pub fn differentiable_mask(&self, threshold: f64) -> Vec<bool> {
        (0..self.len())
            .map(|i| {
                (0..self.grid.dim()).all(|ax| {
                    let (f, b) = self.one_sided_diffs(i, ax);
                    (f - b).abs() <= threshold
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert_eq!(wrap01(1.25), 0.25);
        assert_eq!(wrap01(-0.25), 0.75);
        assert_eq!(wrap01(1.0), 0.0);
        assert_eq!(wrap_half(0.75), -0.25);
        assert!((torus_dist(0.1, 0.9) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn grid_invariants() {
        assert_eq!(TorusGrid::new(3, 16), Err(GridError::BadDimension(3)));
        assert_eq!(TorusGrid::new(1, 4), Err(GridError::TooCoarse(4)));
        let g = TorusGrid::new(2, 8).unwrap();
        assert_eq!(g.node_count(), 64);
        assert_eq!(g.node(8), [0.125, 0.0]);
        assert_eq!(g.index([-1, 9]), g.index([7, 1]));
    }

    #[test]
    fn nearest_node_wraps() {
        let g = TorusGrid::new(1, 8).unwrap();
        assert_eq!(g.nearest([0.99, 0.0]), 0);
        assert_eq!(g.nearest([0.13, 0.0]), 1);
    }

    #[test]
    fn field_rejects_bad_values() {
        let g = TorusGrid::new(1, 8).unwrap();
        assert!(GridField::from_values(g, vec![0.0; 7]).is_err());
        let mut v = vec![0.0; 8];
        v[3] = f64::NAN;
        assert_eq!(GridField::from_values(g, v), Err(GridError::NotFinite(3)));
    }

    #[test]
    fn central_difference_of_linear_ramp() {
        // periodic sawtooth has exact central differences away from the jump
        let g = TorusGrid::new(1, 16).unwrap();
        let f = GridField::from_fn(g, |q| q[0]);
        assert!((f.central_diff(4, 0) - 1.0).abs() < 1e-12);
        let (fw, bw) = f.one_sided_diffs(0, 0);
        assert!((fw - 1.0).abs() < 1e-12);
        assert!((bw + 15.0).abs() < 1e-12); // jump edge
    }
}
