//! Function selector for closed exact Lagrangian curves in T*T¹.
//!
//! A sampled curve is decomposed over each grid fiber into branches (the
//! fiber-critical points of an implicit generating function); each branch
//! carries the value of the curve primitive S = ∫ p dq accumulated from
//! sample 0. The selector Φ picks the pointwise minimum of the branch
//! primitives; for curves generated by one fiber variable with a
//! positive-definite quadratic at infinity the min-max construction reduces
//! to this fiberwise minimum, and every downstream use relies only on the
//! selector axioms that `axiom_check` enforces.

use crate::defaults;
use crate::grid::{torus_dist, wrap01, wrap_half, GridField, TorusGrid};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SelectorError {
    #[error("curve needs at least 64 samples, got {0}")]
    TooFewSamples(usize),
    #[error("curve sample {0} is not finite")]
    NotFinite(usize),
    #[error("projection gap {gap:.6} between samples {at} and {next} exceeds 4/count = {max:.6}")]
    GapTooLarge {
        at: usize,
        next: usize,
        gap: f64,
        max: f64,
    },
    #[error("a projection fold at q = {q:.12} lies within 1e-9 of a grid fiber; retry with an offset grid")]
    FoldOnNode { q: f64 },
    #[error("selector requires a 1-dimensional grid, got dimension {0}")]
    UnsupportedDimension(usize),
    #[error("no branch above node {0}; curve does not project onto the torus")]
    EmptyFiber(usize),
}

/// Closed sampled curve in T*T¹ with fixed orientation.
///
/// Consecutive samples must project close on the torus (gap ≤ 4/count); the
/// closing segment joins the last sample back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangianCurve {
    samples: Vec<(f64, f64)>,
    /// Lifted projection; `lift[count]` closes the loop.
    lift: Vec<f64>,
    /// Running primitive ∫ p dq at each sample; `prim[count]` is the full
    /// Liouville integral.
    prim: Vec<f64>,
    winding: i64,
    /// Sample indices where the projection reverses direction.
    folds: Vec<usize>,
}

impl LagrangianCurve {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self, SelectorError> {
        let count = samples.len();
        if count < 64 {
            return Err(SelectorError::TooFewSamples(count));
        }
        let max_gap = 4.0 / count as f64;
        let mut normalized = Vec::with_capacity(count);
        for (i, &(q, p)) in samples.iter().enumerate() {
            if !q.is_finite() || !p.is_finite() {
                return Err(SelectorError::NotFinite(i));
            }
            normalized.push((wrap01(q), p));
        }
        let mut lift = Vec::with_capacity(count + 1);
        lift.push(normalized[0].0);
        for j in 0..count {
            let next = normalized[(j + 1) % count].0;
            let gap = torus_dist(next, normalized[j].0);
            if gap > max_gap {
                return Err(SelectorError::GapTooLarge {
                    at: j,
                    next: (j + 1) % count,
                    gap,
                    max: max_gap,
                });
            }
            lift.push(lift[j] + wrap_half(next - normalized[j].0));
        }
        let winding = (lift[count] - lift[0]).round() as i64;

        // trapezoidal primitive of p dq along the lifted curve
        let mut prim = Vec::with_capacity(count + 1);
        prim.push(0.0);
        for j in 0..count {
            let p0 = normalized[j].1;
            let p1 = normalized[(j + 1) % count].1;
            let dq = lift[j + 1] - lift[j];
            prim.push(prim[j] + 0.5 * (p0 + p1) * dq);
        }

        // folds: sign changes of dq over nonzero segments, cyclically
        let deltas: Vec<f64> = (0..count).map(|j| lift[j + 1] - lift[j]).collect();
        let mut folds = Vec::new();
        let mut prev_sign: Option<(usize, f64)> = None;
        let mut first_sign: Option<f64> = None;
        for (j, &d) in deltas.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            let s = d.signum();
            if first_sign.is_none() {
                first_sign = Some(s);
            }
            if let Some((_, ps)) = prev_sign {
                if ps != s {
                    folds.push(j);
                }
            }
            prev_sign = Some((j, s));
        }
        if let (Some((_, last)), Some(first)) = (prev_sign, first_sign) {
            if last != first {
                folds.push(0);
            }
        }

        Ok(Self {
            samples: normalized,
            lift,
            prim,
            winding,
            folds,
        })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn fold_count(&self) -> usize {
        self.folds.len()
    }

    /// Positions of the projection folds.
    pub fn fold_positions(&self) -> Vec<f64> {
        self.folds.iter().map(|&j| self.samples[j].0).collect()
    }

    /// ∮ p dq by the winding-aware trapezoidal rule.
    pub fn liouville_integral(&self) -> f64 {
        self.prim[self.samples.len()]
    }

    pub fn max_momentum(&self) -> f64 {
        self.samples
            .iter()
            .map(|&(_, p)| p.abs())
            .fold(0.0, f64::max)
    }

    /// Phase-space distance from (q,p) to the curve polyline, torus-aware in
    /// the projection.
    pub fn distance_phase(&self, q: f64, p: f64) -> f64 {
        let count = self.samples.len();
        let mut best = f64::INFINITY;
        for j in 0..count {
            let (qa, pa) = self.samples[j];
            let pb = self.samples[(j + 1) % count].1;
            let dq = self.lift[j + 1] - self.lift[j];
            // local chart around the segment start
            let x = wrap_half(q - qa);
            let y = p - pa;
            let (ex, ey) = (dq, pb - pa);
            let len2 = ex * ex + ey * ey;
            let t = if len2 == 0.0 {
                0.0
            } else {
                ((x * ex + y * ey) / len2).clamp(0.0, 1.0)
            };
            let (rx, ry) = (x - t * ex, y - t * ey);
            best = best.min((rx * rx + ry * ry).sqrt());
        }
        best
    }
}

/// One fiber branch: momentum of the crossing and the primitive value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub p: f64,
    pub s: f64,
}

/// Branches of a curve over every grid fiber (nodes may be offset by a
/// fraction of the spacing to dodge folds sitting on fibers).
#[derive(Debug, Clone)]
pub struct BranchTable {
    grid: TorusGrid,
    /// Node offset in units of the spacing.
    offset: f64,
    branches: Vec<Vec<Branch>>,
    fold_count: usize,
}

impl BranchTable {
    /// Intersect the curve polyline with every (possibly offset) grid fiber
    /// and record momentum and primitive value per crossing, sorted by
    /// momentum.
    pub fn decompose(
        curve: &LagrangianCurve,
        grid: TorusGrid,
        offset: f64,
    ) -> Result<Self, SelectorError> {
        if grid.dim() != 1 {
            return Err(SelectorError::UnsupportedDimension(grid.dim()));
        }
        let n = grid.n();
        let h = grid.spacing();

        for q_fold in curve.fold_positions() {
            let x = q_fold / h - offset;
            if (x - x.round()).abs() * h <= 1e-9 {
                return Err(SelectorError::FoldOnNode { q: q_fold });
            }
        }

        let count = curve.len();
        let mut branches: Vec<Vec<Branch>> = vec![Vec::new(); n];
        for j in 0..count {
            let la = curve.lift[j];
            let lb = curve.lift[j + 1];
            if la == lb {
                continue;
            }
            let pa = curve.samples[j].1;
            let pb = curve.samples[(j + 1) % count].1;
            let (lo, hi) = if la < lb { (la, lb) } else { (lb, la) };
            // fibers sit at (i + offset)·h + z for integer z
            let k_min = ((lo - offset * h) / h).ceil() as i64 - 1;
            let k_max = ((hi - offset * h) / h).floor() as i64 + 1;
            for k in k_min..=k_max {
                let x = (k as f64 + offset) * h;
                // half-open at the segment start so shared vertices count once
                let crosses = if la < lb {
                    la <= x && x < lb
                } else {
                    lb < x && x <= la
                };
                if !crosses {
                    continue;
                }
                let theta = (x - la) / (lb - la);
                let p = pa + theta * (pb - pa);
                let s = curve.prim[j] + 0.5 * (pa + p) * (x - la);
                let node = k.rem_euclid(n as i64) as usize;
                branches[node].push(Branch { p, s });
            }
        }
        for list in &mut branches {
            list.sort_by(|a, b| a.p.total_cmp(&b.p).then(a.s.total_cmp(&b.s)));
        }
        Ok(Self {
            grid,
            offset,
            branches,
            fold_count: curve.fold_count(),
        })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    /// Node offset in units of the grid spacing.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn fold_count(&self) -> usize {
        self.fold_count
    }

    pub fn branches(&self, node: usize) -> &[Branch] {
        &self.branches[node]
    }

    pub fn branch_counts(&self) -> Vec<usize> {
        self.branches.iter().map(|b| b.len()).collect()
    }

    /// Position of a (possibly offset) node.
    pub fn node_position(&self, node: usize) -> f64 {
        wrap01((node as f64 + self.offset) * self.grid.spacing())
    }
}

/// The function selector: pointwise minimum of the branch primitives.
pub fn select(table: &BranchTable) -> Result<GridField, SelectorError> {
    let n = table.grid.node_count();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let list = table.branches(i);
        if list.is_empty() {
            return Err(SelectorError::EmptyFiber(i));
        }
        values.push(list.iter().map(|b| b.s).fold(f64::INFINITY, f64::min));
    }
    Ok(GridField::from_values(table.grid, values).expect("selector values are finite"))
}

#[derive(Debug, Clone, Copy)]
pub struct AxiomCheckOptions {
    /// Phase-space tolerance of the "(q, dΦ(q)) on the curve" axiom.
    pub dist_tol: f64,
    /// Value tolerance of the critical-value axioms.
    pub val_tol: f64,
    /// Kink threshold; defaults to 10/n when `None`.
    pub kink_threshold: Option<f64>,
}

impl Default for AxiomCheckOptions {
    fn default() -> Self {
        Self {
            dist_tol: 2e-2,
            val_tol: 1e-3,
            kink_threshold: None,
        }
    }
}

/// Selector-axiom verification report.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub total_nodes: usize,
    pub kink_nodes: Vec<usize>,
    /// Differentiable nodes where (q, dΦ(q)) is not on the curve.
    pub failed_on_curve: Vec<usize>,
    /// Differentiable nodes where Φ does not match the S value of the
    /// momentum-matched branch.
    pub failed_matched_value: Vec<usize>,
    /// Nodes where Φ is not близко to any branch value (critical-value
    /// axiom); failing this is a hard selector violation.
    pub failed_critical_value: Vec<usize>,
    pub worst_distance: f64,
    pub worst_value_error: f64,
    /// Fraction of nodes that are kinks or fail a differentiable-node axiom.
    pub exceptional_fraction: f64,
}

impl AxiomReport {
    pub fn pass(&self, max_exceptional_fraction: f64) -> bool {
        self.failed_critical_value.is_empty()
            && self.exceptional_fraction <= max_exceptional_fraction
    }
}

/// Verify the selector axioms for Φ against its branch table and curve.
pub fn axiom_check(
    phi: &GridField,
    table: &BranchTable,
    curve: &LagrangianCurve,
    opts: AxiomCheckOptions,
) -> AxiomReport {
    let grid = phi.grid();
    let n = grid.node_count();
    let kink = opts
        .kink_threshold
        .unwrap_or_else(|| defaults::kink_threshold(grid.n()));
    let diff_mask = phi.differentiable_mask(kink);

    let mut report = AxiomReport {
        total_nodes: n,
        kink_nodes: Vec::new(),
        failed_on_curve: Vec::new(),
        failed_matched_value: Vec::new(),
        failed_critical_value: Vec::new(),
        worst_distance: 0.0,
        worst_value_error: 0.0,
        exceptional_fraction: 0.0,
    };

    #[allow(clippy::needless_range_loop)] // node id indexes several structures
    for i in 0..n {
        let branches = table.branches(i);
        let value = phi.get(i);
        // critical-value axiom at every node
        let best_val_err = branches
            .iter()
            .map(|b| (b.s - value).abs())
            .fold(f64::INFINITY, f64::min);
        report.worst_value_error = report.worst_value_error.max(best_val_err);
        if best_val_err > opts.val_tol {
            report.failed_critical_value.push(i);
        }

        if !diff_mask[i] {
            report.kink_nodes.push(i);
            continue;
        }
        let dphi = phi.central_diff(i, 0);
        let q = table.node_position(i);
        let dist = curve.distance_phase(q, dphi);
        report.worst_distance = report.worst_distance.max(dist);
        if dist > opts.dist_tol {
            report.failed_on_curve.push(i);
        }
        if let Some(matched) = branches
            .iter()
            .min_by(|a, b| (a.p - dphi).abs().total_cmp(&(b.p - dphi).abs()))
        {
            if (matched.s - value).abs() > opts.val_tol {
                report.failed_matched_value.push(i);
            }
        }
    }

    let exceptional =
        report.kink_nodes.len() + report.failed_on_curve.len() + report.failed_matched_value.len();
    report.exceptional_fraction = exceptional as f64 / n as f64;
    report
}

/// Endpoints of the one-dimensional Clarke-type hull at a node: min/max of
/// one-sided difference quotients over dyadic scales 1..8.
pub fn limiting_differentials(phi: &GridField, node: usize) -> Result<(f64, f64), SelectorError> {
    let grid = phi.grid();
    if grid.dim() != 1 {
        return Err(SelectorError::UnsupportedDimension(grid.dim()));
    }
    let h = grid.spacing();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for scale in [1i64, 2, 4, 8] {
        let fwd = (phi.get(grid.shifted(node, 0, scale)) - phi.get(node)) / (scale as f64 * h);
        let bwd = (phi.get(node) - phi.get(grid.shifted(node, 0, -scale))) / (scale as f64 * h);
        lo = lo.min(fwd).min(bwd);
        hi = hi.max(fwd).max(bwd);
    }
    Ok((lo, hi))
}

/// Discrete Lipschitz constant of a field (max slope over grid edges).
pub fn lipschitz_constant(phi: &GridField) -> f64 {
    let grid = phi.grid();
    let h = grid.spacing();
    let mut worst = 0.0f64;
    for i in 0..phi.len() {
        for ax in 0..grid.dim() {
            let j = grid.shifted(i, ax, 1);
            worst = worst.max((phi.get(j) - phi.get(i)).abs() / h);
        }
    }
    worst
}
