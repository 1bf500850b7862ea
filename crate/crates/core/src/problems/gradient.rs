use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fem1d::{FieldSpec, Mesh1D, SpaceKind};
use crate::model::{EnergyModel, Pointwise};

pub type Hamiltonian = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type Gradient = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type Hessian = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

const INVERSION_MAX_ITER: usize = 100;
const INVERSION_TOL: f64 = 1e-12;

/// Finite-dimensional system `ẋ = (J - R) ∇H(x)` in entropy variables
/// `u = ∇H(x)`: `[∇²H(x(u))]⁻¹ ∂ₜu = (J - R) u`, `E(u) = H(x(u))`.
///
/// Spatially constant; use it with [`GradientSystem::mesh`] and one `P0`
/// field per component.
#[derive(Clone)]
pub struct GradientSystem {
    dim: usize,
    h: Hamiltonian,
    grad: Gradient,
    hess: Hessian,
    jr: DMatrix<f64>,
}

impl fmt::Debug for GradientSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradientSystem")
            .field("dim", &self.dim)
            .field("j_minus_r", &self.jr)
            .finish_non_exhaustive()
    }
}

pub fn make_gradient_system(
    h: Hamiltonian,
    grad: Gradient,
    hess: Hessian,
    j: DMatrix<f64>,
    r: DMatrix<f64>,
    dim: usize,
) -> Result<GradientSystem> {
    if dim == 0 {
        return Err(Error::argument("gradient system needs at least one component"));
    }
    if j.shape() != (dim, dim) || r.shape() != (dim, dim) {
        return Err(Error::argument(format!("J and R must be {dim}x{dim}")));
    }
    let scale = 1.0 + j.amax() + r.amax();
    if (&j + j.transpose()).amax() > 1e-14 * scale {
        return Err(Error::argument("J must be antisymmetric"));
    }
    if (&r - r.transpose()).amax() > 1e-14 * scale {
        return Err(Error::argument("R must be symmetric"));
    }
    let min_eig = r.clone().symmetric_eigen().eigenvalues.min();
    if min_eig < -1e-12 * scale {
        return Err(Error::argument(format!(
            "R must be positive semi-definite (smallest eigenvalue {min_eig})"
        )));
    }
    Ok(GradientSystem {
        dim,
        h,
        grad,
        hess,
        jr: j - r,
    })
}

impl GradientSystem {
    /// `H(x) = ½|x|²`, `J = 0`, `R = damping · I`, i.e. `ẋ = -damping x`.
    pub fn quadratic(dim: usize, damping: f64) -> Result<Self> {
        make_gradient_system(
            Arc::new(|x: &[f64]| 0.5 * x.iter().map(|v| v * v).sum::<f64>()),
            Arc::new(|x: &[f64]| x.to_vec()),
            Arc::new(move |x: &[f64]| DMatrix::identity(x.len(), x.len())),
            DMatrix::zeros(dim, dim),
            DMatrix::identity(dim, dim) * damping,
            dim,
        )
    }

    /// `H(q, p) = q²/2 + q⁴/4 + p²/2`, canonical `J`, `R = diag(0, damping)`.
    pub fn anharmonic_oscillator(damping: f64) -> Result<Self> {
        make_gradient_system(
            Arc::new(|x: &[f64]| 0.5 * x[0] * x[0] + 0.25 * x[0].powi(4) + 0.5 * x[1] * x[1]),
            Arc::new(|x: &[f64]| vec![x[0] + x[0].powi(3), x[1]]),
            Arc::new(|x: &[f64]| DMatrix::from_row_slice(2, 2, &[1.0 + 3.0 * x[0] * x[0], 0.0, 0.0, 1.0])),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, damping]),
            2,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Single-element mesh on `(0, 1)`, so integrals equal pointwise values.
    pub fn mesh() -> Mesh1D {
        Mesh1D::uniform(1.0, 1).expect("unit mesh")
    }

    pub fn hamiltonian(&self, x: &[f64]) -> f64 {
        (self.h)(x)
    }

    pub fn u_of_x(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }

    /// Solves `∇H(x) = u` by Newton's method starting from `x = u`. Once the
    /// residual is below tolerance one more step is taken, which brings a
    /// quadratically convergent iteration to rounding level.
    pub fn x_of_u(&self, u: &[f64]) -> Result<Vec<f64>> {
        let mut x = u.to_vec();
        let bound = INVERSION_TOL * (1.0 + u.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        let mut res = f64::INFINITY;
        for _ in 0..INVERSION_MAX_ITER {
            let g = (self.grad)(&x);
            let r = DVector::from_iterator(self.dim, g.iter().zip(u).map(|(a, b)| a - b));
            res = r.amax();
            if !res.is_finite() {
                break;
            }
            let dx = (self.hess)(&x).lu().solve(&r).ok_or_else(|| {
                Error::SingularMatrix("Hessian of H is singular during inversion".into())
            })?;
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi -= d;
            }
            if res <= bound {
                return Ok(x);
            }
        }
        Err(Error::NewtonDivergence {
            iterations: INVERSION_MAX_ITER,
            residual_norm: res,
            reason: "inversion of the gradient of H did not converge".into(),
            trace: Vec::new(),
        })
    }

    /// `(J - R) u`.
    pub fn drift(&self, u: &[f64]) -> Vec<f64> {
        (&self.jr * DVector::from_column_slice(u)).iter().copied().collect()
    }
}

impl EnergyModel for GradientSystem {
    fn name(&self) -> &str {
        "gradient"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![FieldSpec::natural(SpaceKind::P0); self.dim]
    }

    fn energy_density(&self, u: Pointwise<'_>, _x: f64) -> Result<f64> {
        Ok((self.h)(&self.x_of_u(u.val)?))
    }

    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let x = self.x_of_u(u.val)?;
        let y = (self.hess)(&x)
            .lu()
            .solve(&DVector::from_column_slice(test.val))
            .ok_or_else(|| Error::SingularMatrix("Hessian of H is singular".into()))?;
        Ok(rate.val.iter().zip(y.iter()).map(|(a, b)| a * b).sum())
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += test.val[i] * self.jr[(i, j)] * u.val[j];
            }
        }
        Ok(s)
    }
}
