//! Default tolerances and resolution parameters, defined once.
//!
//! Grid-dependent defaults are functions of the node count per axis; the
//! constants are pinned here so that tests, the verifier and the CLI all
//! agree on the same numbers.

/// Fiber window |p| ≤ P_MAX on which convexity/coercivity of a Hamiltonian
/// is sampled at registration and outside which flow integration reports
/// escape.
pub const FIBER_WINDOW: f64 = 10.0;

/// Residual |∂H/∂p − v| at which the Legendre Newton iteration is converged.
pub const LEGENDRE_TOL: f64 = 1e-10;

/// Iteration cap for the Legendre Newton solve.
pub const LEGENDRE_MAX_ITER: usize = 50;

/// Largest admissible flow time step.
pub const FLOW_DT_MAX: f64 = 1e-2;

/// Default winding bound per substep in kernel assembly.
pub const KERNEL_WINDING: i32 = 2;

/// Default substep ceiling: m is chosen so that t/m ≤ SUBSTEP_MAX.
pub const SUBSTEP_MAX: f64 = 0.1;

/// Sup-norm residual target for weak KAM value iteration.
pub const WEAKKAM_TOL: f64 = 1e-9;

/// Iteration cap for weak KAM value iteration.
pub const WEAKKAM_MAX_ITER: usize = 20_000;

/// Trailing window of min-plus powers whose entrywise minimum realizes the
/// liminf in the Peierls barrier.
pub const BARRIER_WINDOW: usize = 16;

/// Stabilization tolerance for the barrier window minimum.
pub const BARRIER_TOL: f64 = 1e-6;

/// Cap on min-plus powers in the barrier iteration.
pub const BARRIER_MAX_POWERS: usize = 2048;

/// Slack used by domination and barrier-bound checks.
pub const CHECK_TOL: f64 = 1e-5;

/// Tolerance on the Liouville integral of an exact curve.
pub const EXACT_TOL: f64 = 1e-6;

/// Allowed deviation of H from its mean along a level-set candidate.
pub const LEVEL_TOL: f64 = 1e-6;

/// Phase-space distance tolerance for the flow-invariance stage.
pub const INVARIANCE_TOL: f64 = 1e-3;

/// Horizon of the flow-invariance stage.
pub const INVARIANCE_T: f64 = 10.0;

/// Tolerance on |k − c|.
pub const K_EQUALS_C_TOL: f64 = 1e-3;

/// Ball radius for recurrence detection and limit-point clustering.
pub const RECUR_TOL: f64 = 1e-2;

/// Horizon for ω/α-limit point estimation.
pub const OMEGA_T: f64 = 200.0;

/// Time step used by verifier flow stages.
pub const VERIFIER_DT: f64 = 1e-3;

/// Number of equispaced differentiability nodes sampled by the
/// barrier-inequality stage.
pub const PROP_SAMPLE_NODES: usize = 16;

/// Crosscheck tolerance: the inf-max upper bound ĉ must satisfy c ≤ ĉ + tol.
pub const CROSSCHECK_TOL: f64 = 0.05;

/// Aubry tolerance: diagonal barrier error scales with grid error.
pub fn aubry_tol(n: usize) -> f64 {
    5.0 / n as f64
}

/// One-sided difference disagreement beyond which a node counts as a kink.
pub fn kink_threshold(n: usize) -> f64 {
    10.0 / n as f64
}

/// Hausdorff tolerance of the graph stage.
pub fn graph_tol(n: usize) -> f64 {
    2.0 / n as f64
}

/// Agreement required between dΦ at n and at 2n in the refinement stage.
pub fn dphi_refine_tol(n: usize) -> f64 {
    20.0 / n as f64
}

/// Default substep count for a horizon t.
pub fn default_substeps(t: f64) -> usize {
    (t / SUBSTEP_MAX).ceil().max(1.0) as usize
}

/// Slack allowed in the limit-point barrier inequalities.
pub const BARRIER_INEQ_TOL: f64 = 1e-3;

/// Stride over curve samples for flow-based verifier stages.
pub const CURVE_SUBSAMPLE: usize = 4;
