//! Discrete action kernels and the min-plus (tropical) linear algebra that
//! realizes the Lax-Oleinik semigroups and the additive eigenvalue problem.
//!
//! A kernel K holds approximate minimal actions A_t(node j, node i) between
//! grid nodes over horizon t. The negative semigroup acts by
//! (T⁻u)(i) = min_j (u_j + K[j][i]), the positive one by
//! (T⁺u)(i) = max_j (u_j − K[i][j]); composing kernels adds horizons. The
//! additive eigenvalue (minimum cycle mean) of K gives the Mañé critical
//! value as c = −λ/t.
//!
//! Determinism contract: assembly, application and composition parallelize
//! over output rows with a fixed sequential reduction order per row, so the
//! result is bit-identical for any thread count. Ties resolve to the lowest
//! node index by strict-improvement scans.

pub mod cache;

use crate::grid::{GridField, TorusGrid};
use crate::systems::{HamiltonianSpec, SystemsError};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("kernel horizon must be positive, got {0}")]
    BadHorizon(f64),
    #[error("substep and winding counts must be at least 1")]
    BadResolution,
    #[error("spec dimension {spec} does not match grid dimension {grid}")]
    DimensionMismatch { spec: usize, grid: usize },
    #[error(
        "one-step resolution too coarse: Legendre solve failed at sampled speed {max_speed:.3} \
         (horizon/substeps = {tau:.4}): {source}"
    )]
    Resolution {
        max_speed: f64,
        tau: f64,
        source: SystemsError,
    },
    #[error("kernels live on different grids")]
    GridMismatch,
    #[error("kernel entry {0} is not finite")]
    NotFinite(usize),
}

/// Which Lax-Oleinik semigroup a kernel application realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semigroup {
    /// (T⁻u)(i) = min_j (u_j + K[j][i])
    Negative,
    /// (T⁺u)(i) = max_j (u_j − K[i][j])
    Positive,
}

/// Matrix of minimal actions between grid nodes at a fixed horizon.
///
/// Entry (j,i) approximates A_t(node j, node i): the one-step rule evaluates
/// the Lagrangian at the midpoint of the lifted segment over horizon t/m for
/// every integer winding |w|∞ ≤ W, and the kernel is the m-fold min-plus
/// power of that one-step kernel.
#[derive(Debug, Clone)]
pub struct ActionKernel {
    grid: TorusGrid,
    t: f64,
    winding: i32,
    substeps: usize,
    entries: Vec<f64>,
}

impl ActionKernel {
    /// Assemble the kernel for `spec` on `grid` at horizon `t` with winding
    /// bound `winding` and `substeps` min-plus compositions.
    pub fn assemble(
        spec: &HamiltonianSpec,
        grid: TorusGrid,
        t: f64,
        winding: i32,
        substeps: usize,
    ) -> Result<Self, KernelError> {
        if t <= 0.0 {
            return Err(KernelError::BadHorizon(t));
        }
        if substeps < 1 || winding < 1 {
            return Err(KernelError::BadResolution);
        }
        if spec.dim() != grid.dim() {
            return Err(KernelError::DimensionMismatch {
                spec: spec.dim(),
                grid: grid.dim(),
            });
        }
        let tau = t / substeps as f64;
        let one_step = Self::one_step(spec, grid, tau, winding)?;
        let mut kernel = one_step.clone();
        for _ in 1..substeps {
            kernel = kernel.compose(&one_step)?;
        }
        kernel.winding = winding;
        kernel.substeps = substeps;
        kernel.t = t;
        Ok(kernel)
    }

    fn one_step(
        spec: &HamiltonianSpec,
        grid: TorusGrid,
        tau: f64,
        winding: i32,
    ) -> Result<Self, KernelError> {
        let n = grid.node_count();
        let dim = grid.dim();
        let w_range: Vec<[i32; 2]> = match dim {
            1 => (-winding..=winding).map(|w| [w, 0]).collect(),
            _ => (-winding..=winding)
                .flat_map(|a| (-winding..=winding).map(move |b| [a, b]))
                .collect(),
        };
        let max_speed = (0.5 + winding as f64) / tau;

        let mut entries = vec![0.0f64; n * n];
        let result: Result<Vec<()>, KernelError> = entries
            .par_chunks_mut(n)
            .enumerate()
            .map(|(j, row)| {
                let a = grid.node(j);
                for (i, slot) in row.iter_mut().enumerate() {
                    let b = grid.node(i);
                    let mut best = f64::INFINITY;
                    for w in &w_range {
                        let disp = [b[0] - a[0] + w[0] as f64, b[1] - a[1] + w[1] as f64];
                        let mid = [
                            crate::grid::wrap01(a[0] + 0.5 * disp[0]),
                            crate::grid::wrap01(a[1] + 0.5 * disp[1]),
                        ];
                        let v = [disp[0] / tau, disp[1] / tau];
                        let l = spec
                            .lagrangian(mid, v)
                            .map_err(|e| KernelError::Resolution {
                                max_speed,
                                tau,
                                source: e,
                            })?;
                        let cost = tau * l;
                        if cost < best {
                            best = cost;
                        }
                    }
                    *slot = best;
                }
                Ok(())
            })
            .collect();
        result?;
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::NotFinite(i));
        }
        Ok(Self {
            grid,
            t: tau,
            winding,
            substeps: 1,
            entries,
        })
    }

    /// Kernel with explicit entries (row j = source, column i = target).
    pub fn from_entries(grid: TorusGrid, t: f64, entries: Vec<f64>) -> Result<Self, KernelError> {
        let n = grid.node_count();
        if entries.len() != n * n {
            return Err(KernelError::BadResolution);
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::NotFinite(i));
        }
        Ok(Self {
            grid,
            t,
            winding: 1,
            substeps: 1,
            entries,
        })
    }

    /// Min-plus identity: zero diagonal, `off_value` elsewhere (entries must
    /// stay finite, so the off-diagonal is a large finite cost).
    pub fn min_plus_identity(grid: TorusGrid, off_value: f64) -> Self {
        let n = grid.node_count();
        let mut entries = vec![off_value; n * n];
        for i in 0..n {
            entries[i * n + i] = 0.0;
        }
        Self {
            grid,
            t: 0.0,
            winding: 1,
            substeps: 1,
            entries,
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn winding(&self) -> i32 {
        self.winding
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn size(&self) -> usize {
        self.grid.node_count()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        self.entries[from * self.size() + to]
    }

    /// Entrywise shift (used to form the c·t-shifted kernel).
    pub fn shifted(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.entries {
            *v += s;
        }
        out
    }

    /// Apply a Lax-Oleinik semigroup step to a field.
    pub fn apply(&self, u: &GridField, sign: Semigroup) -> GridField {
        let n = self.size();
        debug_assert_eq!(u.len(), n);
        let uv = u.values();
        let mut out = vec![0.0f64; n];
        match sign {
            Semigroup::Negative => {
                out.par_iter_mut().enumerate().for_each(|(i, slot)| {
                    let mut best = f64::INFINITY;
                    for (j, &uj) in uv.iter().enumerate() {
                        let cand = uj + self.entries[j * n + i];
                        if cand < best {
                            best = cand;
                        }
                    }
                    *slot = best;
                });
            }
            Semigroup::Positive => {
                out.par_iter_mut().enumerate().for_each(|(i, slot)| {
                    let row = &self.entries[i * n..(i + 1) * n];
                    let mut best = f64::NEG_INFINITY;
                    for j in 0..n {
                        let cand = uv[j] - row[j];
                        if cand > best {
                            best = cand;
                        }
                    }
                    *slot = best;
                });
            }
        }
        GridField::from_values(self.grid, out).expect("finite min-plus image")
    }

    /// Min-plus matrix product; horizons add. Realizes T_{t+s} = T_t ∘ T_s.
    pub fn compose(&self, other: &ActionKernel) -> Result<ActionKernel, KernelError> {
        if self.grid != other.grid {
            return Err(KernelError::GridMismatch);
        }
        let n = self.size();
        let mut entries = vec![0.0f64; n * n];
        entries.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let lhs = &self.entries[j * n..(j + 1) * n];
            for slot in row.iter_mut() {
                *slot = f64::INFINITY;
            }
            for (k, &ljk) in lhs.iter().enumerate() {
                let rhs = &other.entries[k * n..(k + 1) * n];
                for (i, slot) in row.iter_mut().enumerate() {
                    let cand = ljk + rhs[i];
                    if cand < *slot {
                        *slot = cand;
                    }
                }
            }
        });
        Ok(ActionKernel {
            grid: self.grid,
            t: self.t + other.t,
            winding: self.winding.max(other.winding),
            substeps: self.substeps + other.substeps,
            entries,
        })
    }

    /// Minimum directed cycle mean of the kernel seen as a complete graph.
    pub fn min_mean_cycle(&self) -> f64 {
        karp_min_mean_cycle(&self.entries, self.size())
    }

    /// Additive eigenpair: λ from Karp, an eigenvector from value iteration
    /// on the λ-shifted kernel, and the achieved residual.
    pub fn eigen(&self, tol: f64, max_iter: usize) -> MinPlusEig {
        let lambda = self.min_mean_cycle();
        let shifted = self.shifted(-lambda);
        let mut u = GridField::zeros(self.grid);
        let mut residual = f64::INFINITY;
        for _ in 0..max_iter {
            let next = shifted.apply(&u, Semigroup::Negative);
            residual = next.sup_diff(&u);
            u = next;
            if residual <= tol {
                break;
            }
        }
        MinPlusEig {
            lambda,
            critical_value: -lambda / self.t,
            eigenvector: u,
            residual,
        }
    }
}

/// Additive eigenvalue data for a kernel.
#[derive(Debug, Clone)]
pub struct MinPlusEig {
    /// Minimum cycle mean.
    pub lambda: f64,
    /// c = −λ/t.
    pub critical_value: f64,
    pub eigenvector: GridField,
    pub residual: f64,
}

/// Karp's dynamic program for the minimum directed cycle mean of a dense
/// weight matrix (row = source). All entries must be finite.
pub fn karp_min_mean_cycle(weights: &[f64], n: usize) -> f64 {
    assert_eq!(weights.len(), n * n, "square matrix required");
    if n == 0 {
        return 0.0;
    }
    // d[k][v] = min weight of a walk of exactly k edges from node 0 to v
    let mut d = vec![f64::INFINITY; (n + 1) * n];
    d[0] = 0.0;
    for k in 1..=n {
        let (prev, cur) = d.split_at_mut(k * n);
        let prev = &prev[(k - 1) * n..];
        let cur = &mut cur[..n];
        for v in cur.iter_mut() {
            *v = f64::INFINITY;
        }
        for u in 0..n {
            let du = prev[u];
            if du == f64::INFINITY {
                continue;
            }
            let row = &weights[u * n..(u + 1) * n];
            for v in 0..n {
                let cand = du + row[v];
                if cand < cur[v] {
                    cur[v] = cand;
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    for v in 0..n {
        let dn = d[n * n + v];
        if dn == f64::INFINITY {
            continue;
        }
        let mut worst = f64::NEG_INFINITY;
        for k in 0..n {
            let dk = d[k * n + v];
            if dk == f64::INFINITY {
                continue;
            }
            let mean = (dn - dk) / (n - k) as f64;
            if mean > worst {
                worst = mean;
            }
        }
        if worst < best {
            best = worst;
        }
    }
    best
}
