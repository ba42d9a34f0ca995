//! Numerical weak KAM / Aubry-Mather toolkit on discretized tori.
//!
//! The crate builds the variational machinery of Tonelli Hamiltonian dynamics
//! on uniform periodic grids: Lagrangians by numerical Legendre transform,
//! minimal-action kernels realizing the Lax-Oleinik semigroups as min-plus
//! operators, the Mañé critical value as a min-plus eigenvalue, weak KAM
//! solutions, the Peierls barrier and the Aubry set. On top of that sits a
//! function selector for closed exact Lagrangian curves in T*T¹ and a
//! verifier that decides whether a candidate invariant curve is a graph.
//!
//! Entry points:
//! - [`systems::HamiltonianSpec`] — evaluable Tonelli Hamiltonians,
//! - [`minplus::ActionKernel`] — discrete action kernels and min-plus algebra,
//! - [`weakkam`] — critical value, weak KAM solutions, barrier, Aubry set,
//! - [`selector`] — branch decomposition and the function selector,
//! - [`verifier::verify_birkhoff`] — the end-to-end graph verdict pipeline.

pub mod defaults;
pub mod fixtures;
pub mod grid;
pub mod io;
pub mod minplus;
pub mod selector;
pub mod systems;
pub mod verifier;
pub mod weakkam;

pub use grid::{GridError, GridField, TorusGrid};
pub use minplus::{karp_min_mean_cycle, ActionKernel, KernelError, MinPlusEig, Semigroup};
pub use selector::{BranchTable, LagrangianCurve, SelectorError};
pub use systems::{
    Family, FlowOptions, HamiltonianSpec, PhasePoint, SystemsError, Trajectory, TrigPoly, TrigTerm,
};
pub use verifier::{Verdict, VerifierConfig, VerifierReport};
pub use weakkam::{
    AubryMask, BarrierResult, CriticalValue, DominationReport, WeakKamError, WeakKamResult,
};
