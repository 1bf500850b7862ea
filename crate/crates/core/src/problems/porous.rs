use super::POSITIVITY_FLOOR;
use crate::error::{Error, Result};
use crate::fem1d::{FieldSpec, SpaceKind};
use crate::model::{EnergyModel, Pointwise};

/// Porous medium equation `∂ₜρ = Δρᵐ` with energy `∫ ρᵐ / (m-1)`, written as
/// `(c ρᵐ⁻² ∂ₜρ, v) = -(ρ c ∇ρᵐ⁻¹, c ∇(ρᵐ⁻² v))` with `c = m / (m-1)`.
#[derive(Debug, Clone, Copy)]
pub struct PorousMedium {
    m: f64,
}

pub fn make_porous_medium(m: f64) -> Result<PorousMedium> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::argument(format!("porous medium exponent must exceed 1, got {m}")));
    }
    Ok(PorousMedium { m })
}

impl PorousMedium {
    pub fn exponent(&self) -> f64 {
        self.m
    }

    fn c(&self) -> f64 {
        self.m / (self.m - 1.0)
    }
}

impl EnergyModel for PorousMedium {
    fn name(&self) -> &str {
        "pme"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![FieldSpec::natural(SpaceKind::P1Continuous)]
    }

    fn admissible(&self, val: &[f64]) -> bool {
        val[0] > POSITIVITY_FLOOR
    }

    fn energy_density(&self, u: Pointwise<'_>, _x: f64) -> Result<f64> {
        Ok(u.val[0].powf(self.m) / (self.m - 1.0))
    }

    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        Ok(self.c() * u.val[0].powf(self.m - 2.0) * rate.val[0] * test.val[0])
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let m = self.m;
        let c = self.c();
        let (rho, drho) = (u.val[0], u.grad[0]);
        let (v, dv) = (test.val[0], test.grad[0]);
        let grad_pow = (m - 1.0) * rho.powf(m - 2.0) * drho;
        let grad_test = (m - 2.0) * rho.powf(m - 3.0) * drho * v + rho.powf(m - 2.0) * dv;
        Ok(-(rho * c * grad_pow) * (c * grad_test))
    }
}
