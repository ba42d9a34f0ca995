//! Hamiltonian flow integration: Störmer-Verlet for the separable mechanical
//! family, classical RK4 otherwise. Negative durations integrate backward.

use super::{Family, HamiltonianSpec, PhasePoint, SystemsError};
use crate::defaults::FLOW_DT_MAX;
use crate::grid::wrap01;

#[derive(Debug, Clone, Copy)]
pub struct FlowOptions {
    /// Escape threshold on |p|∞; defaults to the Hamiltonian's fiber window.
    pub fiber_window: Option<f64>,
    /// Keep every k-th step in the trajectory (the initial and final states
    /// are always kept).
    pub store_every: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            fiber_window: None,
            store_every: 1,
        }
    }
}

/// A sampled flow orbit; `point(i)` sits at time `i · dt_signed · store_every`
/// except possibly the last point, which sits at the requested duration.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<PhasePoint>,
    pub dt_signed: f64,
    pub store_every: usize,
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        if self.points.len() < 2 {
            return 0.0;
        }
        self.dt_signed * self.store_every as f64 * (self.points.len() - 1) as f64
    }

    pub fn last(&self) -> PhasePoint {
        *self.points.last().expect("trajectory is never empty")
    }
}

/// Integrate the flow of `spec` from `x0` over duration `t` (may be negative)
/// with step `dt`. The duration is rounded to a whole number of steps.
pub fn integrate(
    spec: &HamiltonianSpec,
    x0: PhasePoint,
    t: f64,
    dt: f64,
    opts: FlowOptions,
) -> Result<Trajectory, SystemsError> {
    if dt <= 0.0 || dt > FLOW_DT_MAX {
        return Err(SystemsError::StepTooLarge(dt, FLOW_DT_MAX));
    }
    let window = opts.fiber_window.unwrap_or(spec.fiber_window());
    let store = opts.store_every.max(1);
    let steps = (t.abs() / dt).round() as usize;
    let h = if t < 0.0 { -dt } else { dt };

    let mut points = Vec::with_capacity(steps / store + 2);
    let mut x = x0;
    check_window(&x, 0.0, window)?;
    points.push(x);
    for k in 0..steps {
        x = match spec.family() {
            Family::Mechanical { .. } => verlet_step(spec, x, h),
            _ => rk4_step(spec, x, h),
        };
        check_window(&x, (k + 1) as f64 * h, window)?;
        if (k + 1) % store == 0 || k + 1 == steps {
            points.push(x);
        }
    }
    Ok(Trajectory {
        points,
        dt_signed: h,
        store_every: store,
    })
}

fn check_window(x: &PhasePoint, t: f64, window: f64) -> Result<(), SystemsError> {
    if x.p_norm() > window {
        return Err(SystemsError::Escape {
            t,
            p_norm: x.p_norm(),
            window,
        });
    }
    Ok(())
}

/// Kick-drift-kick leapfrog for H = ½|p|² + V(q).
fn verlet_step(spec: &HamiltonianSpec, x: PhasePoint, h: f64) -> PhasePoint {
    let dq = spec.grad(x.q, x.p).0;
    let p_half = [x.p[0] - 0.5 * h * dq[0], x.p[1] - 0.5 * h * dq[1]];
    let q_new = [
        wrap01(x.q[0] + h * p_half[0]),
        wrap01(x.q[1] + h * p_half[1]),
    ];
    let dq2 = spec.grad(q_new, p_half).0;
    let p_new = [p_half[0] - 0.5 * h * dq2[0], p_half[1] - 0.5 * h * dq2[1]];
    PhasePoint { q: q_new, p: p_new }
}

fn rk4_step(spec: &HamiltonianSpec, x: PhasePoint, h: f64) -> PhasePoint {
    let f = |q: [f64; 2], p: [f64; 2]| {
        let (dq, dp) = spec.grad(q, p);
        ([dp[0], dp[1]], [-dq[0], -dq[1]])
    };
    let (k1q, k1p) = f(x.q, x.p);
    let add = |a: [f64; 2], b: [f64; 2], s: f64| [a[0] + s * b[0], a[1] + s * b[1]];
    let (k2q, k2p) = f(add(x.q, k1q, 0.5 * h), add(x.p, k1p, 0.5 * h));
    let (k3q, k3p) = f(add(x.q, k2q, 0.5 * h), add(x.p, k2p, 0.5 * h));
    let (k4q, k4p) = f(add(x.q, k3q, h), add(x.p, k3p, h));
    let q = [
        wrap01(x.q[0] + h / 6.0 * (k1q[0] + 2.0 * k2q[0] + 2.0 * k3q[0] + k4q[0])),
        wrap01(x.q[1] + h / 6.0 * (k1q[1] + 2.0 * k2q[1] + 2.0 * k3q[1] + k4q[1])),
    ];
    let p = [
        x.p[0] + h / 6.0 * (k1p[0] + 2.0 * k2p[0] + 2.0 * k3p[0] + k4p[0]),
        x.p[1] + h / 6.0 * (k1p[1] + 2.0 * k2p[1] + 2.0 * k3p[1] + k4p[1]),
    ];
    PhasePoint { q, p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::torus_dist;
    use crate::systems::{TrigPoly, TrigTerm};

    fn free() -> HamiltonianSpec {
        HamiltonianSpec::mechanical(1, TrigPoly::zero()).unwrap()
    }

    fn pendulum() -> HamiltonianSpec {
        HamiltonianSpec::mechanical(1, TrigPoly::new(vec![TrigTerm::cos1(1.0, 1)])).unwrap()
    }

    #[test]
    fn zero_duration_returns_initial_point() {
        let x0 = PhasePoint::new_1d(0.3, 0.2);
        let tr = integrate(&pendulum(), x0, 0.0, 1e-3, FlowOptions::default()).unwrap();
        assert_eq!(tr.points, vec![x0]);
    }

    #[test]
    fn free_flow_is_straight_line() {
        let x0 = PhasePoint::new_1d(0.3, 0.5);
        let tr = integrate(&free(), x0, 2.0, 1e-3, FlowOptions::default()).unwrap();
        let end = tr.last();
        // q(T) = q0 + 1 mod 1, p unchanged
        assert!(torus_dist(end.q[0], 0.3) < 1e-9);
        assert!((end.p[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn adapted_graph_points_are_fixed() {
        let u = TrigPoly::new(vec![TrigTerm::sin1(0.1 / std::f64::consts::TAU, 1)]);
        let spec = HamiltonianSpec::adapted(1, u.clone()).unwrap();
        let q = 0.21;
        let x0 = PhasePoint::new_1d(q, u.grad([q, 0.0])[0]);
        // the vector field vanishes on the graph, so X_H(x0) = 0 directly
        let (dq, dp) = spec.grad(x0.q, x0.p);
        assert_eq!((dq, dp), ([0.0, 0.0], [0.0, 0.0]));
        let tr = integrate(&spec, x0, 5.0, 1e-3, FlowOptions::default()).unwrap();
        let end = tr.last();
        assert!(torus_dist(end.q[0], q) < 1e-10);
        assert!((end.p[0] - x0.p[0]).abs() < 1e-10);
    }

    #[test]
    fn energy_drift_within_bound() {
        // |H(x(t)) − H(x0)| ≤ 1e-6·(1+|H0|)·T at dt=1e-3
        let spec = pendulum();
        let x0 = PhasePoint::new_1d(0.25, 1.0);
        let t = 10.0;
        let tr = integrate(&spec, x0, t, 1e-3, FlowOptions::default()).unwrap();
        let h0 = spec.eval_point(x0);
        let drift = tr
            .points
            .iter()
            .map(|x| (spec.eval_point(*x) - h0).abs())
            .fold(0.0, f64::max);
        assert!(
            drift <= 1e-6 * (1.0 + h0.abs()) * t,
            "drift {drift:.3e} exceeds bound"
        );
    }

    #[test]
    fn flow_is_reversible() {
        let spec = pendulum();
        let x0 = PhasePoint::new_1d(0.15, 0.8);
        let fwd = integrate(&spec, x0, 3.0, 1e-3, FlowOptions::default()).unwrap();
        let back = integrate(&spec, fwd.last(), -3.0, 1e-3, FlowOptions::default()).unwrap();
        let x1 = back.last();
        assert!(torus_dist(x1.q[0], x0.q[0]) < 1e-6);
        assert!((x1.p[0] - x0.p[0]).abs() < 1e-6);
    }

    #[test]
    fn escape_is_reported() {
        let spec = pendulum();
        let x0 = PhasePoint::new_1d(0.0, 1.8);
        let opts = FlowOptions {
            fiber_window: Some(1.9),
            store_every: 1,
        };
        // launched from the potential maximum, the orbit accelerates past 1.9
        let err = integrate(&spec, x0, 5.0, 1e-3, opts).unwrap_err();
        assert!(matches!(err, SystemsError::Escape { .. }));
    }

    #[test]
    fn oversized_step_is_rejected() {
        let err = integrate(
            &free(),
            PhasePoint::new_1d(0.0, 0.0),
            1.0,
            0.02,
            FlowOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, SystemsError::StepTooLarge(..)));
    }
}
