//! Inf-max upper bound on the critical value: minimize max_q H(q, du(q))
//! over truncated-Fourier trial fields u by subgradient descent on the
//! coefficients. Any trial field gives an upper bound; descent tightens it.

use crate::grid::TorusGrid;
use crate::systems::HamiltonianSpec;
use std::f64::consts::TAU;

struct Ansatz {
    modes: Vec<[i32; 2]>,
    /// Coefficients: cosine then sine per mode.
    coeffs: Vec<f64>,
}

impl Ansatz {
    fn new(dim: usize) -> Self {
        let modes: Vec<[i32; 2]> = match dim {
            1 => vec![[1, 0], [2, 0], [3, 0]],
            _ => vec![[1, 0], [0, 1], [1, 1], [2, 0], [0, 2]],
        };
        let coeffs = vec![0.0; 2 * modes.len()];
        Self { modes, coeffs }
    }

    /// du(q) for the current coefficients.
    fn gradient_field(&self, q: [f64; 2]) -> [f64; 2] {
        let mut g = [0.0; 2];
        for (m, k) in self.modes.iter().enumerate() {
            let angle = TAU * (k[0] as f64 * q[0] + k[1] as f64 * q[1]);
            let (a, b) = (self.coeffs[2 * m], self.coeffs[2 * m + 1]);
            // u term: a cos(angle) + b sin(angle)
            let d = -a * angle.sin() + b * angle.cos();
            g[0] += TAU * k[0] as f64 * d;
            g[1] += TAU * k[1] as f64 * d;
        }
        g
    }

    /// ∂(du_i)/∂coeff at q.
    fn gradient_sensitivity(&self, q: [f64; 2], coeff: usize) -> [f64; 2] {
        let m = coeff / 2;
        let k = self.modes[m];
        let angle = TAU * (k[0] as f64 * q[0] + k[1] as f64 * q[1]);
        let d = if coeff.is_multiple_of(2) {
            -angle.sin()
        } else {
            angle.cos()
        };
        [TAU * k[0] as f64 * d, TAU * k[1] as f64 * d]
    }
}

/// Minimize the grid maximum of H(q, du(q)) over the ansatz class; returns
/// the best value found (always an upper bound for the sampled maximum).
pub fn infmax_upper_bound(spec: &HamiltonianSpec, grid: TorusGrid, iters: usize) -> f64 {
    let mut ansatz = Ansatz::new(spec.dim());
    let eval_max = |a: &Ansatz| -> (f64, usize) {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        for i in 0..grid.node_count() {
            let q = grid.node(i);
            let v = spec.eval(q, a.gradient_field(q));
            if v > best {
                best = v;
                arg = i;
            }
        }
        (best, arg)
    };

    let (mut best_value, _) = eval_max(&ansatz);
    let dim_coeffs = ansatz.coeffs.len();
    for j in 0..iters {
        let (value, argmax) = eval_max(&ansatz);
        if value < best_value {
            best_value = value;
        }
        let q = grid.node(argmax);
        let hp = spec.grad(q, ansatz.gradient_field(q)).1;
        let step = 0.02 / (1.0 + j as f64).sqrt();
        for c in 0..dim_coeffs {
            let s = ansatz.gradient_sensitivity(q, c);
            let g = hp[0] * s[0] + hp[1] * s[1];
            ansatz.coeffs[c] -= step * g;
        }
    }
    let (final_value, _) = eval_max(&ansatz);
    best_value.min(final_value)
}
