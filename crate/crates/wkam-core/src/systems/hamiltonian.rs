//! Evaluable Tonelli Hamiltonians: built-in families plus custom callables,
//! with gradient access and the fiberwise Legendre transform.

use super::{SystemsError, TrigPoly};
use crate::defaults::{FIBER_WINDOW, LEGENDRE_MAX_ITER, LEGENDRE_TOL};
use crate::grid::wrap01;
use std::fmt;
use std::sync::Arc;

/// A point (q,p) of T*T^d; q is stored in [0,1)^d, unused components are 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub q: [f64; 2],
    pub p: [f64; 2],
}

impl PhasePoint {
    pub fn new(q: [f64; 2], p: [f64; 2]) -> Self {
        Self {
            q: [wrap01(q[0]), wrap01(q[1])],
            p,
        }
    }

    pub fn new_1d(q: f64, p: f64) -> Self {
        Self::new([q, 0.0], [p, 0.0])
    }

    pub fn p_norm(&self) -> f64 {
        self.p[0].abs().max(self.p[1].abs())
    }
}

/// User-supplied Hamiltonian with analytic or approximate gradient.
pub trait CustomHamiltonian: Send + Sync {
    fn eval(&self, q: [f64; 2], p: [f64; 2]) -> f64;
    /// Returns (∂H/∂q, ∂H/∂p).
    fn grad(&self, q: [f64; 2], p: [f64; 2]) -> ([f64; 2], [f64; 2]);
}

impl<F, G> CustomHamiltonian for (F, G)
where
    F: Fn([f64; 2], [f64; 2]) -> f64 + Send + Sync,
    G: Fn([f64; 2], [f64; 2]) -> ([f64; 2], [f64; 2]) + Send + Sync,
{
    fn eval(&self, q: [f64; 2], p: [f64; 2]) -> f64 {
        (self.0)(q, p)
    }
    fn grad(&self, q: [f64; 2], p: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        (self.1)(q, p)
    }
}

/// Built-in families plus the custom escape hatch.
#[derive(Clone)]
pub enum Family {
    /// H = ½|p|² + V(q).
    Mechanical {
        potential: TrigPoly,
    },
    /// H = ½|p − du(q)|² for a generator u; its graph {p = du} is invariant
    /// with every point fixed, which makes all derived quantities closed-form.
    Adapted {
        generator: TrigPoly,
    },
    Custom(Arc<dyn CustomHamiltonian>),
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Mechanical { potential } => f
                .debug_struct("Mechanical")
                .field("potential", potential)
                .finish(),
            Family::Adapted { generator } => f
                .debug_struct("Adapted")
                .field("generator", generator)
                .finish(),
            Family::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// An evaluable Tonelli Hamiltonian on T*T^d.
///
/// Registration samples the fiber Hessian for positive definiteness and a
/// coercivity proxy (p·H_p − H ≥ 0 at the window edge) on |p| ≤ fiber_window;
/// superlinearity is asymptotic and cannot be tested globally.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    dim: usize,
    fiber_window: f64,
    family: Family,
}

impl HamiltonianSpec {
    pub fn mechanical(dim: usize, potential: TrigPoly) -> Result<Self, SystemsError> {
        Self::register(dim, FIBER_WINDOW, Family::Mechanical { potential })
    }

    pub fn adapted(dim: usize, generator: TrigPoly) -> Result<Self, SystemsError> {
        Self::register(dim, FIBER_WINDOW, Family::Adapted { generator })
    }

    pub fn custom(dim: usize, h: Arc<dyn CustomHamiltonian>) -> Result<Self, SystemsError> {
        Self::register(dim, FIBER_WINDOW, Family::Custom(h))
    }

    pub fn with_fiber_window(mut self, window: f64) -> Self {
        self.fiber_window = window;
        self
    }

    fn register(dim: usize, fiber_window: f64, family: Family) -> Result<Self, SystemsError> {
        if dim == 0 || dim > 2 {
            return Err(SystemsError::BadDimension(dim));
        }
        let spec = Self {
            dim,
            fiber_window,
            family,
        };
        spec.check_tonelli()?;
        Ok(spec)
    }

    /// Sampled convexity/coercivity check on the fiber window.
    fn check_tonelli(&self) -> Result<(), SystemsError> {
        let nq = 8usize;
        let np = 7usize;
        let qs: Vec<f64> = (0..nq).map(|i| i as f64 / nq as f64).collect();
        let ps: Vec<f64> = (0..np)
            .map(|i| -self.fiber_window + 2.0 * self.fiber_window * i as f64 / (np - 1) as f64)
            .collect();
        let q_iter: Vec<[f64; 2]> = match self.dim {
            1 => qs.iter().map(|&a| [a, 0.0]).collect(),
            _ => qs
                .iter()
                .flat_map(|&a| qs.iter().map(move |&b| [a, b]))
                .collect(),
        };
        let p_iter: Vec<[f64; 2]> = match self.dim {
            1 => ps.iter().map(|&a| [a, 0.0]).collect(),
            _ => ps
                .iter()
                .flat_map(|&a| ps.iter().map(move |&b| [a, b]))
                .collect(),
        };
        for &q in &q_iter {
            for &p in &p_iter {
                let h = self.fiber_hessian(q, p);
                if !positive_definite(h, self.dim) {
                    return Err(SystemsError::NotConvex { q, p });
                }
            }
            // coercivity proxy at the window edge
            let edge = [self.fiber_window, 0.0];
            let hp = self.grad(q, edge).1;
            if edge[0] * hp[0] + edge[1] * hp[1] - self.eval(q, edge) < -1e-9 {
                return Err(SystemsError::NotCoercive { q });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber_window(&self) -> f64 {
        self.fiber_window
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// H(q,p).
    pub fn eval(&self, q: [f64; 2], p: [f64; 2]) -> f64 {
        match &self.family {
            Family::Mechanical { potential } => {
                0.5 * (p[0] * p[0] + p[1] * p[1]) + potential.eval(q)
            }
            Family::Adapted { generator } => {
                let g = generator.grad(q);
                let d = [p[0] - g[0], p[1] - g[1]];
                0.5 * (d[0] * d[0] + d[1] * d[1])
            }
            Family::Custom(h) => h.eval(q, p),
        }
    }

    pub fn eval_point(&self, x: PhasePoint) -> f64 {
        self.eval(x.q, x.p)
    }

    /// (∂H/∂q, ∂H/∂p).
    pub fn grad(&self, q: [f64; 2], p: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        match &self.family {
            Family::Mechanical { potential } => (potential.grad(q), p),
            Family::Adapted { generator } => {
                let g = generator.grad(q);
                let hess = generator.hessian(q);
                let d = [p[0] - g[0], p[1] - g[1]];
                // ∂H/∂q_i = -(p - du)·∂(du)/∂q_i
                let dq = [
                    -(d[0] * hess[0][0] + d[1] * hess[1][0]),
                    -(d[0] * hess[0][1] + d[1] * hess[1][1]),
                ];
                (dq, d)
            }
            Family::Custom(h) => h.grad(q, p),
        }
    }

    /// Fiber Hessian ∂²H/∂p²; identity for the built-in families, finite
    /// differences of ∂H/∂p for custom specs.
    pub fn fiber_hessian(&self, q: [f64; 2], p: [f64; 2]) -> [[f64; 2]; 2] {
        match &self.family {
            Family::Mechanical { .. } | Family::Adapted { .. } => [[1.0, 0.0], [0.0, 1.0]],
            Family::Custom(_) => {
                let h = 1e-5;
                let mut out = [[0.0; 2]; 2];
                for j in 0..self.dim {
                    let mut pp = p;
                    let mut pm = p;
                    pp[j] += h;
                    pm[j] -= h;
                    let gp = self.grad(q, pp).1;
                    let gm = self.grad(q, pm).1;
                    for i in 0..self.dim {
                        out[i][j] = (gp[i] - gm[i]) / (2.0 * h);
                    }
                }
                if self.dim == 1 {
                    out[1][1] = 1.0;
                }
                out
            }
        }
    }

    /// Legendre map (q,p) ↦ (q, ∂H/∂p(q,p)).
    pub fn legendre_map(&self, x: PhasePoint) -> ([f64; 2], [f64; 2]) {
        (x.q, self.grad(x.q, x.p).1)
    }

    /// L(q,v) = max_p (p·v − H(q,p)), by damped Newton on the strictly
    /// concave fiber map. Initialization p = v is exact for the mechanical
    /// family.
    pub fn lagrangian(&self, q: [f64; 2], v: [f64; 2]) -> Result<f64, SystemsError> {
        let p = self.maximizing_momentum(q, v)?;
        Ok(p[0] * v[0] + p[1] * v[1] - self.eval(q, p))
    }

    /// The momentum achieving the Legendre maximum, i.e. the solution of
    /// ∂H/∂p(q,p) = v.
    pub fn maximizing_momentum(&self, q: [f64; 2], v: [f64; 2]) -> Result<[f64; 2], SystemsError> {
        let mut p = v;
        let mut res = self.legendre_residual(q, p, v);
        if res <= LEGENDRE_TOL {
            return Ok(p);
        }
        for _ in 0..LEGENDRE_MAX_ITER {
            let hp = self.grad(q, p).1;
            let hess = self.fiber_hessian(q, p);
            let rhs = [v[0] - hp[0], v[1] - hp[1]];
            let step = solve2(hess, rhs, self.dim);
            // backtracking keeps the residual decreasing
            let mut alpha = 1.0;
            loop {
                let cand = [p[0] + alpha * step[0], p[1] + alpha * step[1]];
                let cand_res = self.legendre_residual(q, cand, v);
                if cand_res < res {
                    p = cand;
                    res = cand_res;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-12 {
                    return Err(SystemsError::NoConvergence {
                        q,
                        v,
                        residual: res,
                    });
                }
            }
            if res <= LEGENDRE_TOL {
                return Ok(p);
            }
        }
        Err(SystemsError::NoConvergence {
            q,
            v,
            residual: res,
        })
    }

    fn legendre_residual(&self, q: [f64; 2], p: [f64; 2], v: [f64; 2]) -> f64 {
        let hp = self.grad(q, p).1;
        let r = [hp[0] - v[0], hp[1] - v[1]];
        r[0].abs().max(r[1].abs())
    }
}

fn positive_definite(h: [[f64; 2]; 2], dim: usize) -> bool {
    if dim == 1 {
        h[0][0] > 0.0
    } else {
        h[0][0] > 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0
    }
}

fn solve2(a: [[f64; 2]; 2], b: [f64; 2], dim: usize) -> [f64; 2] {
    if dim == 1 {
        [b[0] / a[0][0], 0.0]
    } else {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        [
            (b[0] * a[1][1] - b[1] * a[0][1]) / det,
            (a[0][0] * b[1] - a[1][0] * b[0]) / det,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::TrigTerm;
    use std::sync::Arc;

    fn free() -> HamiltonianSpec {
        HamiltonianSpec::mechanical(1, TrigPoly::zero()).unwrap()
    }

    fn pendulum() -> HamiltonianSpec {
        HamiltonianSpec::mechanical(1, TrigPoly::new(vec![TrigTerm::cos1(1.0, 1)])).unwrap()
    }

    /// Brute-force Legendre oracle: grid max of p·v − H over p ∈ [-10,10].
    fn legendre_oracle(spec: &HamiltonianSpec, q: f64, v: f64) -> f64 {
        let m = 200_001;
        (0..m)
            .map(|i| -10.0 + 20.0 * i as f64 / (m - 1) as f64)
            .map(|p| p * v - spec.eval([q, 0.0], [p, 0.0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn eval_free_at_zero_momentum() {
        assert_eq!(free().eval([0.3, 0.0], [0.0, 0.0]), 0.0);
    }

    #[test]
    fn eval_pendulum_at_origin() {
        assert_eq!(pendulum().eval([0.0, 0.0], [0.0, 0.0]), 1.0);
    }

    #[test]
    fn adapted_vanishes_on_its_graph() {
        let u = TrigPoly::new(vec![TrigTerm::sin1(0.1 / std::f64::consts::TAU, 1)]);
        let spec = HamiltonianSpec::adapted(1, u.clone()).unwrap();
        let q = [0.37, 0.0];
        let p = u.grad(q);
        assert_eq!(spec.eval(q, p), 0.0);
    }

    #[test]
    fn lagrangian_of_free_hamiltonian_is_self_conjugate() {
        let l = free().lagrangian([0.2, 0.0], [1.0, 0.0]).unwrap();
        assert!((l - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lagrangian_of_pendulum_matches_closed_form_and_oracle() {
        let spec = pendulum();
        let l = spec.lagrangian([0.0, 0.0], [0.0, 0.0]).unwrap();
        assert!((l + 1.0).abs() < 1e-12); // L = ½v² − V
        let oracle = legendre_oracle(&spec, 0.0, 0.0);
        assert!((l - oracle).abs() < 1e-8);
    }

    #[test]
    fn lagrangian_of_shifted_quadratic() {
        // H = ½(p−a)² as a custom spec; L = ½v² + a·v by completing the square.
        let a = 0.7;
        let h = Arc::new((
            move |_q: [f64; 2], p: [f64; 2]| 0.5 * (p[0] - a) * (p[0] - a),
            move |_q: [f64; 2], p: [f64; 2]| ([0.0, 0.0], [p[0] - a, 0.0]),
        ));
        let spec = HamiltonianSpec::custom(1, h).unwrap();
        for v in [-1.5, 0.0, 0.4, 2.0] {
            let l = spec.lagrangian([0.1, 0.0], [v, 0.0]).unwrap();
            assert!((l - (0.5 * v * v + a * v)).abs() < 1e-9);
            let oracle = legendre_oracle(&spec, 0.1, v);
            assert!((l - oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn legendre_map_examples() {
        let (_, v) = free().legendre_map(PhasePoint::new_1d(0.2, 0.3));
        assert!((v[0] - 0.3).abs() < 1e-15);

        let u = TrigPoly::new(vec![TrigTerm::cos1(0.02, 1)]);
        let spec = HamiltonianSpec::adapted(1, u.clone()).unwrap();
        let q = 0.41;
        let (_, v) = spec.legendre_map(PhasePoint::new_1d(q, u.grad([q, 0.0])[0]));
        assert_eq!(v[0], 0.0);
    }

    #[test]
    fn legendre_map_matches_finite_difference() {
        let spec = pendulum();
        for (q, p) in [(0.1, 0.5), (0.7, -1.2), (0.33, 2.0)] {
            let x = PhasePoint::new_1d(q, p);
            let (_, v) = spec.legendre_map(x);
            let h = 1e-6;
            let fd = (spec.eval(x.q, [p + h, 0.0]) - spec.eval(x.q, [p - h, 0.0])) / (2.0 * h);
            assert!((v[0] - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn fenchel_equality_on_sampled_points() {
        // L(q, H_p(q,p)) + H(q,p) = p·H_p(q,p)
        for spec in [free(), pendulum()] {
            for i in 0..10 {
                for j in 0..10 {
                    let q = [i as f64 / 10.0, 0.0];
                    let p = [-2.0 + 4.0 * j as f64 / 9.0, 0.0];
                    let v = spec.grad(q, p).1;
                    let l = spec.lagrangian(q, v).unwrap();
                    let lhs = l + spec.eval(q, p);
                    let rhs = p[0] * v[0];
                    assert!(
                        (lhs - rhs).abs() < 1e-8,
                        "fenchel violated at q={q:?} p={p:?}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn legendre_involution_recovers_h() {
        // conjugating L back: H(q,p) = max_v (p·v − L(q,v)), via grid max + refine
        let spec = pendulum();
        for (q, p) in [(0.0, 0.7), (0.31, -1.1), (0.6, 0.0)] {
            let m = 20_001;
            let mut best = f64::NEG_INFINITY;
            for i in 0..m {
                let v = -5.0 + 10.0 * i as f64 / (m - 1) as f64;
                let l = spec.lagrangian([q, 0.0], [v, 0.0]).unwrap();
                best = best.max(p * v - l);
            }
            assert!((best - spec.eval([q, 0.0], [p, 0.0])).abs() < 1e-6);
        }
    }

    #[test]
    fn non_convex_spec_is_rejected() {
        let h = Arc::new((
            |q: [f64; 2], p: [f64; 2]| (std::f64::consts::TAU * q[0]).cos() * p[0] * p[0],
            |q: [f64; 2], p: [f64; 2]| {
                let c = (std::f64::consts::TAU * q[0]).cos();
                let s = (std::f64::consts::TAU * q[0]).sin();
                (
                    [-std::f64::consts::TAU * s * p[0] * p[0], 0.0],
                    [2.0 * c * p[0], 0.0],
                )
            },
        ));
        assert!(matches!(
            HamiltonianSpec::custom(1, h),
            Err(SystemsError::NotConvex { .. })
        ));
    }

    #[test]
    fn two_dimensional_mechanical() {
        let v = TrigPoly::new(vec![
            TrigTerm::new(0.5, [1, 0], 0.0),
            TrigTerm::new(0.25, [0, 1], 0.3),
        ]);
        let spec = HamiltonianSpec::mechanical(2, v).unwrap();
        let q = [0.2, 0.8];
        let vv = [0.4, -0.3];
        let l = spec.lagrangian(q, vv).unwrap();
        let expect = 0.5 * (vv[0] * vv[0] + vv[1] * vv[1]) - spec.eval(q, [0.0, 0.0]);
        assert!((l - expect).abs() < 1e-10);
    }
}
