use super::POSITIVITY_FLOOR;
use crate::error::Result;
use crate::fem1d::{FieldSpec, SpaceKind};
use crate::model::{EnergyModel, Pointwise};

/// Heat equation `∂ₜu = Δu` (homogeneous Neumann) rewritten for the
/// logarithmic energy `E(u) = -∫ log u`: `Q(u) v = -u⁻² v` and
/// `⟨A(u), v⟩ = -⟨u ∇(u⁻¹), u ∇(u⁻² v)⟩`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HeatLog;

pub fn make_heat_log() -> HeatLog {
    HeatLog
}

impl EnergyModel for HeatLog {
    fn name(&self) -> &str {
        "heat"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![FieldSpec::natural(SpaceKind::P1Continuous)]
    }

    fn admissible(&self, val: &[f64]) -> bool {
        val[0] > POSITIVITY_FLOOR
    }

    fn energy_density(&self, u: Pointwise<'_>, _x: f64) -> Result<f64> {
        Ok(-u.val[0].ln())
    }

    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let u0 = u.val[0];
        Ok(-rate.val[0] * test.val[0] / (u0 * u0))
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let (u0, du) = (u.val[0], u.grad[0]);
        let (v, dv) = (test.val[0], test.grad[0]);
        // u ∇(u⁻¹) and u ∇(u⁻² v)
        let left = u0 * (-du / (u0 * u0));
        let right = u0 * (-2.0 * du * v / (u0 * u0 * u0) + dv / (u0 * u0));
        Ok(-left * right)
    }
}
