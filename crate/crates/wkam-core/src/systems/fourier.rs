//! Truncated trigonometric series on T^d used to define potentials and
//! generator functions.

use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// One term `amplitude · cos(2π k·q + phase)` with integer wave vector k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub amplitude: f64,
    pub wave: [i32; 2],
    pub phase: f64,
}

impl TrigTerm {
    pub fn new(amplitude: f64, wave: [i32; 2], phase: f64) -> Self {
        Self {
            amplitude,
            wave,
            phase,
        }
    }

    /// `a·cos(2π k q)` on T¹.
    pub fn cos1(amplitude: f64, k: i32) -> Self {
        Self::new(amplitude, [k, 0], 0.0)
    }

    /// `a·sin(2π k q)` on T¹.
    pub fn sin1(amplitude: f64, k: i32) -> Self {
        Self::new(amplitude, [k, 0], -std::f64::consts::FRAC_PI_2)
    }

    fn angle(&self, q: [f64; 2]) -> f64 {
        TAU * (self.wave[0] as f64 * q[0] + self.wave[1] as f64 * q[1]) + self.phase
    }
}

/// A finite sum of [`TrigTerm`]s; smooth and 1-periodic per axis.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrigPoly {
    pub terms: Vec<TrigTerm>,
}

impl TrigPoly {
    pub fn new(terms: Vec<TrigTerm>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn eval(&self, q: [f64; 2]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amplitude * t.angle(q).cos())
            .sum()
    }

    pub fn grad(&self, q: [f64; 2]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for t in &self.terms {
            let s = t.amplitude * t.angle(q).sin() * TAU;
            g[0] -= s * t.wave[0] as f64;
            g[1] -= s * t.wave[1] as f64;
        }
        g
    }

    /// Second derivative matrix.
    pub fn hessian(&self, q: [f64; 2]) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for t in &self.terms {
            let c = t.amplitude * t.angle(q).cos() * TAU * TAU;
            let k = [t.wave[0] as f64, t.wave[1] as f64];
            for i in 0..2 {
                for j in 0..2 {
                    h[i][j] -= c * k[i] * k[j];
                }
            }
        }
        h
    }

    /// Largest |k| appearing in any term.
    pub fn max_mode(&self) -> i32 {
        self.terms
            .iter()
            .flat_map(|t| t.wave.iter().map(|k| k.abs()))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn eval_and_grad_match_finite_differences() {
        let p = TrigPoly::new(vec![
            TrigTerm::cos1(1.0, 1),
            TrigTerm::sin1(0.3, 2),
            TrigTerm::new(0.2, [1, 1], 0.7),
        ]);
        let q = [0.17, 0.43];
        let h = 1e-6;
        for ax in 0..2 {
            let mut qp = q;
            let mut qm = q;
            qp[ax] += h;
            qm[ax] -= h;
            let fd = (p.eval(qp) - p.eval(qm)) / (2.0 * h);
            assert!((p.grad(q)[ax] - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn sin_term_is_sin() {
        let p = TrigPoly::new(vec![TrigTerm::sin1(2.0, 3)]);
        let q = [0.11, 0.0];
        assert!((p.eval(q) - 2.0 * (TAU * 3.0 * q[0]).sin()).abs() < 1e-14);
    }

    #[test]
    fn hessian_of_single_cosine() {
        let p = TrigPoly::new(vec![TrigTerm::cos1(1.0, 1)]);
        let h = p.hessian([0.0, 0.0]);
        assert!((h[0][0] + TAU * TAU).abs() < 1e-12);
        assert_eq!(h[1][1], 0.0);
    }
}
