//! Peierls barrier via min-plus powers of the critically shifted kernel.
//!
//! The liminf defining h is realized as the entrywise minimum over a
//! trailing window of powers: discrete powers can oscillate with the cycle
//! period of the critical graph even though the continuous limit is a true
//! limit, and the window minimum converges regardless.

use super::WeakKamError;
use crate::defaults;
use crate::grid::TorusGrid;
use crate::minplus::ActionKernel;
use std::collections::VecDeque;

#[derive(Debug, Clone, Copy)]
pub struct BarrierOptions {
    /// Trailing window length of the liminf realization.
    pub window: usize,
    /// Stabilization tolerance on the window minimum.
    pub tol: f64,
    pub max_powers: usize,
    /// Aubry threshold; defaults to 5/n when `None` (diagonal barrier error
    /// scales with grid error).
    pub aubry_tol: Option<f64>,
    /// Allowed |cycle mean| of the shifted kernel before iterating.
    pub shift_consistency_tol: f64,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        Self {
            window: defaults::BARRIER_WINDOW,
            tol: defaults::BARRIER_TOL,
            max_powers: defaults::BARRIER_MAX_POWERS,
            aubry_tol: None,
            shift_consistency_tol: 1e-7,
        }
    }
}

/// Peierls barrier matrix with Aubry diagnostics.
#[derive(Debug, Clone)]
pub struct BarrierResult {
    c: f64,
    t: f64,
    grid: TorusGrid,
    h: Vec<f64>,
    diag_min: f64,
    aubry_mask: Vec<bool>,
    aubry_tol: f64,
    aubry_widened: bool,
    powers_used: usize,
    window: usize,
}

impl BarrierResult {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// Full barrier matrix, row-major (row q1, column q2).
    pub fn h_matrix(&self) -> &[f64] {
        &self.h
    }

    pub fn h_value(&self, q1: usize, q2: usize) -> f64 {
        self.h[q1 * self.grid.node_count() + q2]
    }

    pub fn diag(&self, q: usize) -> f64 {
        self.h_value(q, q)
    }

    pub fn diag_min(&self) -> f64 {
        self.diag_min
    }

    /// Mask computed at the default Aubry tolerance.
    pub fn aubry_mask(&self) -> &[bool] {
        &self.aubry_mask
    }

    pub fn aubry_tol(&self) -> f64 {
        self.aubry_tol
    }

    pub fn aubry_widened(&self) -> bool {
        self.aubry_widened
    }

    pub fn powers_used(&self) -> usize {
        self.powers_used
    }

    pub fn window(&self) -> usize {
        self.window
    }
}

/// Iterate min-plus powers of K + c·t and take the stabilized trailing
/// window minimum. `shift` is the per-application drift c·t.
pub fn peierls_barrier(
    kernel: &ActionKernel,
    shift: f64,
    opts: BarrierOptions,
) -> Result<BarrierResult, WeakKamError> {
    let shifted = kernel.shifted(shift);
    let cycle_mean = shifted.min_mean_cycle();
    if cycle_mean.abs() > opts.shift_consistency_tol {
        return Err(WeakKamError::InconsistentShift { cycle_mean });
    }

    let n = kernel.size();
    let window = opts.window.max(1);
    let mut ring: VecDeque<Vec<f64>> = VecDeque::with_capacity(window);
    let mut power = shifted.clone();
    ring.push_back(power.entries().to_vec());

    let mut current_min: Option<Vec<f64>> = None;
    let mut stable_steps = 0usize;
    let mut powers_used = 1usize;
    let mut last_delta = f64::INFINITY;

    while powers_used < opts.max_powers {
        power = power.compose(&shifted)?;
        powers_used += 1;
        if ring.len() == window {
            ring.pop_front();
        }
        ring.push_back(power.entries().to_vec());
        if ring.len() < window {
            continue;
        }
        let mut m = ring[0].clone();
        for buf in ring.iter().skip(1) {
            for (slot, v) in m.iter_mut().zip(buf) {
                if *v < *slot {
                    *slot = *v;
                }
            }
        }
        if let Some(prev) = &current_min {
            last_delta = prev
                .iter()
                .zip(&m)
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            if last_delta <= opts.tol {
                stable_steps += 1;
            } else {
                stable_steps = 0;
            }
        }
        current_min = Some(m);
        if stable_steps >= window {
            break;
        }
    }

    let h = current_min.ok_or(WeakKamError::NoStabilize {
        powers: powers_used,
        last_delta,
    })?;
    if stable_steps < window {
        return Err(WeakKamError::NoStabilize {
            powers: powers_used,
            last_delta,
        });
    }

    let grid = kernel.grid();
    let diag_min = (0..n).map(|i| h[i * n + i]).fold(f64::INFINITY, f64::min);
    let aubry_tol = opts
        .aubry_tol
        .unwrap_or_else(|| defaults::aubry_tol(grid.n()));
    let mut result = BarrierResult {
        c: shift / kernel.t(),
        t: kernel.t(),
        grid,
        h,
        diag_min,
        aubry_mask: Vec::new(),
        aubry_tol,
        aubry_widened: false,
        powers_used,
        window,
    };
    let mask = aubry_set(&result, aubry_tol);
    result.aubry_mask = mask.mask;
    result.aubry_widened = mask.widened;
    Ok(result)
}

/// Aubry mask with the threshold actually used.
#[derive(Debug, Clone)]
pub struct AubryMask {
    pub mask: Vec<bool>,
    /// True when the default threshold produced an empty set and was widened
    /// to the diagonal minimum plus the tolerance.
    pub widened: bool,
    pub threshold: f64,
}

impl AubryMask {
    pub fn nodes(&self) -> Vec<usize> {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Nodes with h(q,q) ≤ tol; never empty (widened to the diagonal minimum
/// plus tol and flagged when necessary).
pub fn aubry_set(barrier: &BarrierResult, tol: f64) -> AubryMask {
    let n = barrier.grid.node_count();
    let mask: Vec<bool> = (0..n).map(|i| barrier.diag(i) <= tol).collect();
    if mask.iter().any(|&m| m) {
        return AubryMask {
            mask,
            widened: false,
            threshold: tol,
        };
    }
    let threshold = barrier.diag_min + tol.max(0.0);
    AubryMask {
        mask: (0..n).map(|i| barrier.diag(i) <= threshold).collect(),
        widened: true,
        threshold,
    }
}
