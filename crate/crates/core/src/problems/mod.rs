//! The concrete evolution problems.

mod cross_diffusion;
mod fokker_planck;
mod gas;
mod gradient;
mod heat;
mod maxwell;
mod porous;
mod sampling;

pub use cross_diffusion::{
    diffusion_matrix, entropy_density, entropy_hessian, inverse_entropy_hessian, make_cross_diffusion, mobility,
    u_of_w, w_of_u, CrossDiffusion,
};
pub use fokker_planck::{make_fokker_planck, FokkerPlanck, Potential};
pub use gas::{make_gas_pipe, GasPipe};
pub use gradient::{make_gradient_system, Gradient, GradientSystem, Hamiltonian, Hessian};
pub use heat::{make_heat_log, HeatLog};
pub use maxwell::{make_maxwell1d, Conductivity, Maxwell1d};
pub use porous::{make_porous_medium, PorousMedium};
pub use sampling::{random_direction, random_state, ProblemKind};

/// Lower bound for positive quantities (temperature, density).
pub const POSITIVITY_FLOOR: f64 = 1e-10;
