//! Built-in systems and curves with closed-form behavior.
//!
//! Three Hamiltonians cover the whole test surface: the free Hamiltonian
//! (c = 0, everything flat), the pendulum (c = max V, Aubry set at the
//! potential maximum, explicit weak KAM solutions) and the adapted family
//! H = ½|p − du|², whose graph {p = du} consists of fixed points so that
//! every derived quantity is closed-form.

use crate::grid::wrap01;
use crate::selector::LagrangianCurve;
use crate::systems::{HamiltonianSpec, TrigPoly, TrigTerm};
use std::f64::consts::{PI, TAU};

/// Amplitude of the adapted generator's derivative du = A·cos(2πq).
pub const ADAPTED_DU_AMPLITUDE: f64 = 0.1;

/// H = ½p².
pub fn free_spec() -> HamiltonianSpec {
    HamiltonianSpec::mechanical(1, TrigPoly::zero()).expect("free spec is Tonelli")
}

/// H = ½p² + cos(2πq).
pub fn pendulum_spec() -> HamiltonianSpec {
    HamiltonianSpec::mechanical(1, TrigPoly::new(vec![TrigTerm::cos1(1.0, 1)]))
        .expect("pendulum is Tonelli")
}

/// Generator u(q) = (A/2π)·sin(2πq), so du = A·cos(2πq).
pub fn adapted_generator() -> TrigPoly {
    TrigPoly::new(vec![TrigTerm::sin1(ADAPTED_DU_AMPLITUDE / TAU, 1)])
}

/// H = ½(p − du(q))² for the built-in generator.
pub fn adapted_spec() -> HamiltonianSpec {
    HamiltonianSpec::adapted(1, adapted_generator()).expect("adapted spec is Tonelli")
}

/// u(q) for the adapted generator.
pub fn adapted_u(q: f64) -> f64 {
    ADAPTED_DU_AMPLITUDE / TAU * (TAU * q).sin()
}

/// du(q) for the adapted generator.
pub fn adapted_du(q: f64) -> f64 {
    ADAPTED_DU_AMPLITUDE * (TAU * q).cos()
}

/// Negative weak KAM solution of the pendulum normalized to u(0) = 0:
/// u₋(q) = (2/π)(1 − cos(π·d)) with d the torus distance to the origin.
pub fn pendulum_u_minus(q: f64) -> f64 {
    let d = crate::grid::torus_dist(q, 0.0);
    2.0 / PI * (1.0 - (PI * d).cos())
}

/// |u₋′| of the pendulum, equal to √(2(1 − cos 2πq)).
pub fn pendulum_u_minus_slope(q: f64) -> f64 {
    (2.0 * (1.0 - (TAU * q).cos())).sqrt()
}

/// Positive conjugate solution of the pendulum normalized to u(0) = 0.
pub fn pendulum_u_plus(q: f64) -> f64 {
    -pendulum_u_minus(q)
}

/// The zero section sampled at `count` points.
pub fn zero_section(count: usize) -> LagrangianCurve {
    LagrangianCurve::new((0..count).map(|j| (j as f64 / count as f64, 0.0)).collect())
        .expect("zero section is a valid curve")
}

/// The circle p ≡ p0 (invariant for the free Hamiltonian, exact only for
/// p0 = 0).
pub fn circle(p0: f64, count: usize) -> LagrangianCurve {
    LagrangianCurve::new((0..count).map(|j| (j as f64 / count as f64, p0)).collect())
        .expect("circle is a valid curve")
}

/// Graph curve p = du(q) of the adapted generator: the invariant manifold of
/// [`adapted_spec`], consisting entirely of fixed points.
pub fn adapted_graph_curve(count: usize) -> LagrangianCurve {
    LagrangianCurve::new(
        (0..count)
            .map(|j| {
                let q = j as f64 / count as f64;
                (q, adapted_du(q))
            })
            .collect(),
    )
    .expect("adapted graph is a valid curve")
}

/// Exact closed curve with one folded interval:
/// q(s) = s − 0.2 sin(2πs), p(s) = −0.3 sin(2πs).
///
/// The projection reverses direction on an interval around q = 0 (two folds,
/// three branches inside, one outside). The momentum decreases through the
/// folded band, which keeps the lower envelope of the branch primitives
/// continuous, and the odd symmetry of p against the even dq makes the
/// trapezoidal Liouville integral cancel exactly at any sample count. Not a
/// level set of any built-in Hamiltonian.
pub fn fold_curve(count: usize) -> LagrangianCurve {
    LagrangianCurve::new(
        (0..count)
            .map(|j| {
                let s = j as f64 / count as f64;
                let q = wrap01(s - 0.2 * (TAU * s).sin());
                let p = -0.3 * (TAU * s).sin();
                (q, p)
            })
            .collect(),
    )
    .expect("fold fixture is a valid curve")
}
