//! Structure-preserving discretization of dissipative evolution problems.
//!
//! A problem is written as `Q(u)* ∂ₜu = A(u)` with an energy satisfying
//! `E'(u) = Q(u) u`. Galerkin projection in space ([`fem1d`]) followed by
//! discontinuous Galerkin time stepping ([`timestep`]) then yields
//! approximations obeying the discrete dissipation inequality
//! `E(uⁿ) ≤ E(uᵐ) - ∫ D dt`, which [`diagnostics`] checks on the recorded
//! energy ledger. Concrete models live in [`problems`].

pub mod diagnostics;
pub mod error;
pub mod fem1d;
pub mod model;
pub mod problems;
pub mod timestep;

pub use error::{Error, Result};
pub use model::{
    dissipation, energy, factorized_derivative, space_for, verify_structure, EnergyModel,
    Pointwise, State, StructureReport,
};
