use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem1d::{try_integrate, FieldSpec, Mesh1D, ProductSpace, Quadrature, SpaceKind};
use crate::model::{EnergyModel, Pointwise, State};

pub type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Linear Fokker-Planck equation in the relative density `u = ρ / ρ∞`,
/// `ρ∞ = c e^{-V}`: `⟨ρ∞ ∂ₜu, v⟩ = -⟨ρ∞ ∇u, ∇v⟩`, `E(u) = ∫ ½ u² ρ∞`.
#[derive(Clone)]
pub struct FokkerPlanck {
    potential: Potential,
    c: f64,
}

impl fmt::Debug for FokkerPlanck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FokkerPlanck").field("c", &self.c).finish_non_exhaustive()
    }
}

/// `c` is chosen so that `∫ρ∞ = mass` under the default spatial quadrature on
/// `mesh`.
pub fn make_fokker_planck(potential: Potential, mass: f64, mesh: &Mesh1D) -> Result<FokkerPlanck> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::argument(format!("mass must be positive, got {mass}")));
    }
    let z = try_integrate(
        mesh,
        |x| {
            let v = potential(x);
            if v.is_finite() {
                Ok((-v).exp())
            } else {
                Err(Error::argument(format!("potential is not finite at x = {x}")))
            }
        },
        &Quadrature::default_spatial(),
    )?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::argument("potential gives a degenerate normalization"));
    }
    Ok(FokkerPlanck {
        potential,
        c: mass / z,
    })
}

impl FokkerPlanck {
    pub fn normalization(&self) -> f64 {
        self.c
    }

    pub fn rho_inf(&self, x: f64) -> f64 {
        self.c * (-(self.potential)(x)).exp()
    }

    /// `∫ u ρ∞`, the mass of `ρ = u ρ∞`.
    pub fn mass(&self, space: &ProductSpace, u: &State) -> Result<f64> {
        space.check_len(&u.coeffs)?;
        let (mut val, mut grad) = (vec![0.0; 1], vec![0.0; 1]);
        let mut total = 0.0;
        for qp in space.quad_points() {
            space.eval_point(&u.coeffs, qp.element, qp.s, &mut val, &mut grad);
            total += qp.weight * val[0] * self.rho_inf(qp.x);
        }
        Ok(total)
    }
}

impl EnergyModel for FokkerPlanck {
    fn name(&self) -> &str {
        "fokker_planck"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![FieldSpec::natural(SpaceKind::P1Continuous)]
    }

    fn energy_density(&self, u: Pointwise<'_>, x: f64) -> Result<f64> {
        Ok(0.5 * u.val[0] * u.val[0] * self.rho_inf(x))
    }

    fn qstar_form(&self, _u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, x: f64) -> Result<f64> {
        Ok(self.rho_inf(x) * rate.val[0] * test.val[0])
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, x: f64) -> Result<f64> {
        Ok(-self.rho_inf(x) * u.grad[0] * test.grad[0])
    }
}
