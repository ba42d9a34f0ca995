//! Weak KAM solutions, Mañé critical value, domination checks, Peierls
//! barrier and Aubry set on the discrete kernel.
//!
//! The critical value comes from the kernel's cycle structure (Karp's
//! minimum mean cycle is exact on the discrete object); the inf-max formula
//! over smooth fields is kept as a cross-check upper bound. Weak KAM
//! solutions are fixed points of the shifted Lax-Oleinik operators, found by
//! value iteration; a negative solution u satisfies T_t⁻u = u − c·t, and the
//! conjugate positive solution is the monotone limit of shifted positive
//! iterates started from u.

mod barrier;
mod infmax;

pub use barrier::{aubry_set, peierls_barrier, AubryMask, BarrierOptions, BarrierResult};
pub use infmax::infmax_upper_bound;

use crate::defaults;
use crate::grid::GridField;
use crate::minplus::{ActionKernel, KernelError, Semigroup};
use crate::systems::HamiltonianSpec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeakKamError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("value iteration hit the cap of {max_iter} iterations (best residual {residual:.3e})")]
    MaxIter {
        max_iter: usize,
        residual: f64,
        best: Box<GridField>,
    },
    #[error("inf-max cross-check failed: upper bound ĉ = {c_hat:.6} sits below c = {c:.6} minus slack (kernel resolution too coarse)")]
    CrosscheckFail { c: f64, c_hat: f64 },
    #[error("positive iteration increased by {worst_increase:.3e} somewhere (inconsistent critical value)")]
    MonotonicityFail { worst_increase: f64 },
    #[error("conjugate solution exceeds the negative solution by {worst:.3e}")]
    ConjugateOrder { worst: f64 },
    #[error("shifted kernel has cycle mean {cycle_mean:.3e}, not ~0; barrier powers would drift")]
    InconsistentShift { cycle_mean: f64 },
    #[error("barrier window minimum did not stabilize within {powers} powers (last change {last_delta:.3e})")]
    NoStabilize { powers: usize, last_delta: f64 },
}

/// Critical value with its cross-check diagnostics.
#[derive(Debug, Clone)]
pub struct CriticalValue {
    /// Mañé critical value c = −λ/t.
    pub c: f64,
    /// Minimum cycle mean λ of the kernel.
    pub lambda: f64,
    /// The exact per-application drift c·t = −λ.
    pub shift: f64,
    /// Inf-max upper bound ĉ from truncated-Fourier trial fields.
    pub c_hat: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CriticalValueOptions {
    /// Tolerance of the c ≤ ĉ + tol cross-check.
    pub crosscheck_tol: f64,
    /// Subgradient descent iterations for the upper bound.
    pub crosscheck_iters: usize,
}

impl Default for CriticalValueOptions {
    fn default() -> Self {
        Self {
            crosscheck_tol: defaults::CROSSCHECK_TOL,
            crosscheck_iters: 400,
        }
    }
}

/// Compute c from the kernel cycle structure and cross-check it against the
/// inf-max upper bound over smooth trial fields. Fails with CrosscheckFail
/// when ĉ < c − 10·tol, which signals a kernel resolution problem.
pub fn critical_value(
    kernel: &ActionKernel,
    spec: &HamiltonianSpec,
    opts: CriticalValueOptions,
) -> Result<CriticalValue, WeakKamError> {
    let lambda = kernel.min_mean_cycle();
    // 0.0 − λ rather than −λ keeps a zero eigenvalue positively signed
    let shift = 0.0 - lambda;
    let c = shift / kernel.t();
    let c_hat = infmax_upper_bound(spec, kernel.grid(), opts.crosscheck_iters);
    if c_hat < c - 10.0 * opts.crosscheck_tol {
        return Err(WeakKamError::CrosscheckFail { c, c_hat });
    }
    Ok(CriticalValue {
        c,
        lambda,
        shift,
        c_hat,
    })
}

/// A converged fixed point of a shifted Lax-Oleinik operator.
#[derive(Debug, Clone)]
pub struct Solution {
    pub u: GridField,
    /// ‖T_t u − u ± c·t‖∞ at the returned field.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Node whose value is pinned to 0.
    pub base: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: defaults::WEAKKAM_TOL,
            max_iter: defaults::WEAKKAM_MAX_ITER,
            base: 0,
        }
    }
}

/// Value iteration u ← T u ± c·t with base-point renormalization.
///
/// `shift` is the exact per-application drift c·t, taken from
/// [`CriticalValue::shift`] so the critical cycle closes to zero in floating
/// point.
pub fn weak_kam_solve(
    kernel: &ActionKernel,
    shift: f64,
    sign: Semigroup,
    opts: SolveOptions,
) -> Result<Solution, WeakKamError> {
    let signed = match sign {
        Semigroup::Negative => shift,
        Semigroup::Positive => -shift,
    };
    let mut u = GridField::zeros(kernel.grid());
    let mut best_residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let mut next = kernel.apply(&u, sign);
        next.add_scalar(signed);
        // the fixed-point residual is invariant under the additive rebase
        let residual = next.sup_diff(&u);
        next.rebase(opts.base);
        u = next;
        best_residual = best_residual.min(residual);
        if residual <= opts.tol {
            return Ok(Solution {
                u,
                residual,
                iterations: it,
            });
        }
    }
    Err(WeakKamError::MaxIter {
        max_iter: opts.max_iter,
        residual: best_residual,
        best: Box::new(u),
    })
}

/// A conjugate pair of weak KAM solutions.
#[derive(Debug, Clone)]
pub struct WeakKamResult {
    pub c: f64,
    pub u_minus: GridField,
    pub u_plus: GridField,
    pub residual_minus: f64,
    pub residual_plus: f64,
    pub iterations: usize,
}

impl WeakKamResult {
    /// Nodes where the pair coincides within `tol`.
    pub fn equality_set(&self, tol: f64) -> Vec<usize> {
        self.u_minus
            .values()
            .iter()
            .zip(self.u_plus.values())
            .enumerate()
            .filter(|(_, (m, p))| (*m - *p).abs() <= tol)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Conjugate a converged negative solution: the positive iterates
/// (T_t⁺)^k u₋ − k·c·t decrease monotonically to the positive solution
/// agreeing with u₋ on the Mather set.
pub fn conjugate_pair(
    kernel: &ActionKernel,
    shift: f64,
    c: f64,
    u_minus: &Solution,
    opts: SolveOptions,
) -> Result<WeakKamResult, WeakKamError> {
    let mut v = u_minus.u.clone();
    let mut iterations = 0;
    let residual_plus;
    loop {
        iterations += 1;
        let mut next = kernel.apply(&v, Semigroup::Positive);
        next.add_scalar(-shift);
        let worst_increase = next
            .values()
            .iter()
            .zip(v.values())
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max);
        if worst_increase > opts.tol {
            return Err(WeakKamError::MonotonicityFail { worst_increase });
        }
        let change = next.sup_diff(&v);
        v = next;
        if change <= opts.tol {
            residual_plus = change;
            break;
        }
        if iterations >= opts.max_iter {
            return Err(WeakKamError::MaxIter {
                max_iter: opts.max_iter,
                residual: change,
                best: Box::new(v),
            });
        }
    }
    let order_violation = v
        .values()
        .iter()
        .zip(u_minus.u.values())
        .map(|(plus, minus)| plus - minus)
        .fold(f64::NEG_INFINITY, f64::max);
    if order_violation > opts.tol {
        return Err(WeakKamError::ConjugateOrder {
            worst: order_violation,
        });
    }
    Ok(WeakKamResult {
        c,
        u_minus: u_minus.u.clone(),
        u_plus: v,
        residual_minus: u_minus.residual,
        residual_plus,
        iterations,
    })
}

/// Outcome of one sub-test of a check, with the worst slack and a witness.
#[derive(Debug, Clone)]
pub struct TestOutcome {
    pub pass: bool,
    /// Worst slack; negative means the inequality failed by that much.
    pub worst_margin: f64,
    pub witness: Option<(usize, usize)>,
}

/// Domination report: a discrete-curve test over kernel pairs and the
/// almost-everywhere derivative criterion.
#[derive(Debug, Clone)]
pub struct DominationReport {
    pub curve: TestOutcome,
    pub derivative: TestOutcome,
    /// Nodes excluded from the derivative test as nondifferentiable.
    pub kink_nodes: Vec<usize>,
}

impl DominationReport {
    pub fn pass(&self) -> bool {
        self.curve.pass && self.derivative.pass
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DominationOptions {
    pub tol: f64,
    /// One-sided difference disagreement that marks a kink node; defaults to
    /// 10/n when `None`.
    pub kink_threshold: Option<f64>,
}

impl Default for DominationOptions {
    fn default() -> Self {
        Self {
            tol: defaults::CHECK_TOL,
            kink_threshold: None,
        }
    }
}

/// Check u ≺ L + k. Test (a): u(b) − u(a) ≤ A_t(a,b) + k·t over all grid
/// pairs for every supplied kernel horizon. Test (b): H(q, du(q)) ≤ k at
/// nodes where the one-sided differences agree within the kink threshold.
pub fn domination_check(
    u: &GridField,
    k: f64,
    spec: &HamiltonianSpec,
    kernels: &[&ActionKernel],
    opts: DominationOptions,
) -> DominationReport {
    let n = u.len();
    let mut curve = TestOutcome {
        pass: true,
        worst_margin: f64::INFINITY,
        witness: None,
    };
    for kernel in kernels {
        debug_assert_eq!(kernel.size(), n);
        let kt = k * kernel.t();
        for a in 0..n {
            for b in 0..n {
                let margin = kernel.entry(a, b) + kt - (u.get(b) - u.get(a));
                if margin < curve.worst_margin {
                    curve.worst_margin = margin;
                    curve.witness = Some((a, b));
                }
            }
        }
    }
    curve.pass = curve.worst_margin >= -opts.tol;

    let grid = u.grid();
    let kink = opts
        .kink_threshold
        .unwrap_or_else(|| defaults::kink_threshold(grid.n()));
    let diff_mask = u.differentiable_mask(kink);
    let mut derivative = TestOutcome {
        pass: true,
        worst_margin: f64::INFINITY,
        witness: None,
    };
    let mut kink_nodes = Vec::new();
    for (i, ok) in diff_mask.iter().enumerate() {
        if !ok {
            kink_nodes.push(i);
            continue;
        }
        let du = [
            u.central_diff(i, 0),
            if grid.dim() == 2 {
                u.central_diff(i, 1)
            } else {
                0.0
            },
        ];
        let margin = k - spec.eval(grid.node(i), du);
        if margin < derivative.worst_margin {
            derivative.worst_margin = margin;
            derivative.witness = Some((i, i));
        }
    }
    derivative.pass = derivative.worst_margin >= -opts.tol;

    DominationReport {
        curve,
        derivative,
        kink_nodes,
    }
}

/// Convenience wrapper assembling one default-resolution kernel.
pub fn domination_check_default(
    u: &GridField,
    k: f64,
    spec: &HamiltonianSpec,
    opts: DominationOptions,
) -> Result<DominationReport, WeakKamError> {
    let t = 0.5;
    let kernel = ActionKernel::assemble(
        spec,
        u.grid(),
        t,
        defaults::KERNEL_WINDING,
        defaults::default_substeps(t),
    )?;
    Ok(domination_check(u, k, spec, &[&kernel], opts))
}

/// Verify the dominated-difference bound u(q2) − u(q1) ≤ h(q1,q2) on all
/// node pairs.
pub fn barrier_bound_check(u: &GridField, barrier: &BarrierResult, tol: f64) -> TestOutcome {
    let n = u.len();
    debug_assert_eq!(n, barrier.grid().node_count());
    let mut worst = f64::INFINITY;
    let mut witness = None;
    for q1 in 0..n {
        for q2 in 0..n {
            let margin = barrier.h_value(q1, q2) - (u.get(q2) - u.get(q1));
            if margin < worst {
                worst = margin;
                witness = Some((q1, q2));
            }
        }
    }
    TestOutcome {
        pass: worst >= -tol,
        worst_margin: worst,
        witness,
    }
}
