//! Shared input builders for the criterion benches.

use wkam_core::fixtures;
use wkam_core::systems::HamiltonianSpec;
use wkam_core::{ActionKernel, TorusGrid};

pub fn pendulum() -> HamiltonianSpec {
    fixtures::pendulum_spec()
}

pub fn adapted() -> HamiltonianSpec {
    fixtures::adapted_spec()
}

pub fn grid(n: usize) -> TorusGrid {
    TorusGrid::new(1, n).expect("bench grid")
}

pub fn pendulum_kernel(n: usize) -> ActionKernel {
    ActionKernel::assemble(&pendulum(), grid(n), 0.5, 2, 8).expect("bench kernel")
}

pub fn adapted_kernel(n: usize) -> ActionKernel {
    ActionKernel::assemble(&adapted(), grid(n), 0.5, 2, 2).expect("bench kernel")
}
