//! Discontinuous Galerkin time stepping on slabs, solved by damped Newton
//! iteration with finite-difference Jacobians.

mod dg;
mod newton;

pub use dg::{
    dg_step, run_transient, slab_dissipation, slab_residual, RunFailure, SlabSolution, TimeGrid,
    Transient,
};
pub use newton::{fd_jacobian, newton_solve, NewtonOptions, NewtonOutcome};
