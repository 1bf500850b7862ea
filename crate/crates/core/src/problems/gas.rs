use nalgebra::Matrix2;

use super::POSITIVITY_FLOOR;
use crate::error::{Error, Result};
use crate::fem1d::{FieldSpec, SpaceKind};
use crate::model::{EnergyModel, Pointwise};

/// Isentropic gas flow in a closed pipe with friction, density `ρ` and mass
/// flux `q`, pressure law `p(ρ) = ρ^γ`:
///
/// `⟨P'(ρ)/ρ ∂ₜρ, η⟩ = -⟨P'(ρ)/ρ ∂ₓq, η⟩`
///
/// `⟨-q/(2ρ²) ∂ₜρ + ∂ₜq/ρ, w⟩ = ⟨q²/(2ρ²) + P'(ρ), ∂ₓw⟩ - ⟨q ∂ₓq/(2ρ²) + |q|q/ρ², w⟩`
#[derive(Debug, Clone, Copy)]
pub struct GasPipe {
    gamma: f64,
}

pub fn make_gas_pipe(gamma: f64) -> Result<GasPipe> {
    if !(gamma > 1.0 && gamma.is_finite()) {
        return Err(Error::argument(format!("adiabatic exponent must exceed 1, got {gamma}")));
    }
    Ok(GasPipe { gamma })
}

impl GasPipe {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `P(ρ) = ρ ∫₁^ρ p(r)/r² dr = ρ (ρ^{γ-1} - 1) / (γ - 1)`.
    pub fn pressure_potential(&self, rho: f64) -> f64 {
        let g = self.gamma;
        rho * (rho.powf(g - 1.0) - 1.0) / (g - 1.0)
    }

    /// `P'(ρ) = (γ ρ^{γ-1} - 1) / (γ - 1)`.
    pub fn pressure_potential_derivative(&self, rho: f64) -> f64 {
        let g = self.gamma;
        (g * rho.powf(g - 1.0) - 1.0) / (g - 1.0)
    }

    /// Matrix of `Q(ρ, q)`.
    pub fn q_matrix(&self, rho: f64, q: f64) -> Matrix2<f64> {
        Matrix2::new(
            self.pressure_potential_derivative(rho) / rho,
            -q / (2.0 * rho * rho),
            0.0,
            1.0 / rho,
        )
    }
}

impl EnergyModel for GasPipe {
    fn name(&self) -> &str {
        "gas"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![
            FieldSpec::natural(SpaceKind::P1Discontinuous),
            FieldSpec::pinned(SpaceKind::P1Continuous),
        ]
    }

    fn admissible(&self, val: &[f64]) -> bool {
        val[0] > POSITIVITY_FLOOR
    }

    fn energy_density(&self, u: Pointwise<'_>, _x: f64) -> Result<f64> {
        let (rho, q) = (u.val[0], u.val[1]);
        Ok(q * q / (2.0 * rho) + self.pressure_potential(rho))
    }

    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        // ⟨Q* r, v⟩ = r · Q v
        let m = self.q_matrix(u.val[0], u.val[1]);
        let (r, v) = (rate.val, test.val);
        Ok(r[0] * (m[(0, 0)] * v[0] + m[(0, 1)] * v[1]) + r[1] * (m[(1, 0)] * v[0] + m[(1, 1)] * v[1]))
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let (rho, q, dq) = (u.val[0], u.val[1], u.grad[1]);
        let (eta, w, dw) = (test.val[0], test.val[1], test.grad[1]);
        let pp = self.pressure_potential_derivative(rho);
        let r2 = rho * rho;
        let mass = -pp / rho * dq * eta;
        let momentum = (q * q / (2.0 * r2) + pp) * dw - (q * dq / (2.0 * r2) + q.abs() * q / r2) * w;
        Ok(mass + momentum)
    }
}
