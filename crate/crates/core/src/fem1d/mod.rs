//! One-dimensional meshes, P0 / P1 spaces, Gauss quadrature and assembly of
//! the semi-discrete variational principle.

mod assembly;
mod mesh;
mod product;
mod quadrature;
mod space;

pub use assembly::{assemble_forms, assemble_residual, integrate, l2_project, try_integrate};
pub use mesh::{build_uniform_mesh, Mesh1D};
pub use product::{ProductSpace, QuadPoint};
pub use quadrature::Quadrature;
pub use space::{eval_fe, prolongate, FESpace, FieldSpec, LocalBasis, SpaceKind};
