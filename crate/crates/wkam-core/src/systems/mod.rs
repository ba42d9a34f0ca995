//! Tonelli Hamiltonians on T*T^d, their Lagrangians via numerical Legendre
//! transform, and Hamiltonian flow integration.

mod flow;
mod fourier;
mod hamiltonian;

pub use flow::{integrate, FlowOptions, Trajectory};
pub use fourier::{TrigPoly, TrigTerm};
pub use hamiltonian::{CustomHamiltonian, Family, HamiltonianSpec, PhasePoint};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystemsError {
    #[error("phase dimension must be 1 or 2, got {0}")]
    BadDimension(usize),
    #[error("fiber Hessian is not positive definite at q={q:?}, p={p:?}")]
    NotConvex { q: [f64; 2], p: [f64; 2] },
    #[error("coercivity proxy p·H_p − H < 0 at the fiber window edge, q={q:?}")]
    NotCoercive { q: [f64; 2] },
    #[error(
        "Legendre Newton iteration did not converge at q={q:?}, v={v:?} (residual {residual:.3e})"
    )]
    NoConvergence {
        q: [f64; 2],
        v: [f64; 2],
        residual: f64,
    },
    #[error("flow left the fiber window |p| ≤ {window} at t={t} (|p| = {p_norm:.3})")]
    Escape { t: f64, p_norm: f64, window: f64 },
    #[error("time step {0} exceeds the admissible maximum {1}")]
    StepTooLarge(f64, f64),
}
