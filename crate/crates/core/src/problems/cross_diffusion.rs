use nalgebra::Matrix2;

use crate::error::Result;
use crate::fem1d::{FieldSpec, SpaceKind};
use crate::model::{EnergyModel, Pointwise};

/// Two-species cross-diffusion system in entropy variables
/// `uᵢ = log(wᵢ / w₃)`, `w₃ = 1 - w₁ - w₂`:
/// `⟨[e''(w)]⁻¹ ∂ₜu, v⟩ = -⟨B ∇u, ∇v⟩` with `B = A(w) [e''(w)]⁻¹`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CrossDiffusion;

pub fn make_cross_diffusion() -> CrossDiffusion {
    CrossDiffusion
}

/// `log(1 + e^{u₁} + e^{u₂})` without overflow.
fn log_partition(u: [f64; 2]) -> f64 {
    let m = u[0].max(u[1]).max(0.0);
    m + ((-m).exp() + (u[0] - m).exp() + (u[1] - m).exp()).ln()
}

/// `wᵢ = e^{uᵢ} / (1 + e^{u₁} + e^{u₂})`.
pub fn w_of_u(u: [f64; 2]) -> [f64; 2] {
    let lz = log_partition(u);
    [(u[0] - lz).exp(), (u[1] - lz).exp()]
}

/// `uᵢ = log(wᵢ / (1 - w₁ - w₂))`.
pub fn u_of_w(w: [f64; 2]) -> [f64; 2] {
    let w3 = 1.0 - w[0] - w[1];
    [(w[0] / w3).ln(), (w[1] / w3).ln()]
}

/// `e(w) = Σ_{i=1}^{3} wᵢ (log wᵢ - 1)`.
pub fn entropy_density(w: [f64; 2]) -> f64 {
    let w3 = 1.0 - w[0] - w[1];
    [w[0], w[1], w3].iter().map(|&v| v * (v.ln() - 1.0)).sum()
}

/// `e''(w)`.
pub fn entropy_hessian(w: [f64; 2]) -> Matrix2<f64> {
    let i3 = 1.0 / (1.0 - w[0] - w[1]);
    Matrix2::new(1.0 / w[0] + i3, i3, i3, 1.0 / w[1] + i3)
}

/// `[e''(w)]⁻¹ = diag(w) - w wᵀ`.
pub fn inverse_entropy_hessian(w: [f64; 2]) -> Matrix2<f64> {
    Matrix2::new(
        w[0] - w[0] * w[0],
        -w[0] * w[1],
        -w[0] * w[1],
        w[1] - w[1] * w[1],
    )
}

/// Diffusion matrix of the system in the original variables `w`.
pub fn diffusion_matrix(w: [f64; 2]) -> Matrix2<f64> {
    let s = 1.0 / (2.0 + 4.0 * w[0] + w[1]);
    s * Matrix2::new(1.0 + 2.0 * w[0], w[0], 2.0 * w[1], 2.0 + w[1])
}

/// Mobility `B(u(w)) = A(w) [e''(w)]⁻¹` in entropy variables.
pub fn mobility(w: [f64; 2]) -> Matrix2<f64> {
    let (w1, w2) = (w[0], w[1]);
    let s = 1.0 / (2.0 + 4.0 * w1 + w2);
    let off = -w1 * w2 * (2.0 * w1 + w2);
    s * Matrix2::new(
        w1 * (1.0 + w1 - 2.0 * w1 * w1 - w1 * w2),
        off,
        off,
        w2 * (2.0 - w2 - 2.0 * w1 * w2 - w2 * w2),
    )
}

impl EnergyModel for CrossDiffusion {
    fn name(&self) -> &str {
        "cross_diffusion"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![FieldSpec::natural(SpaceKind::P1Continuous); 2]
    }

    fn energy_density(&self, u: Pointwise<'_>, _x: f64) -> Result<f64> {
        // Σ wᵢ (log wᵢ - 1) with log wᵢ = uᵢ - log Z, log w₃ = -log Z
        let uu = [u.val[0], u.val[1]];
        let lz = log_partition(uu);
        let w = w_of_u(uu);
        let w3 = (-lz).exp();
        Ok(w[0] * (uu[0] - lz - 1.0) + w[1] * (uu[1] - lz - 1.0) + w3 * (-lz - 1.0))
    }

    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let g = inverse_entropy_hessian(w_of_u([u.val[0], u.val[1]]));
        let (r, v) = (rate.val, test.val);
        Ok(r[0] * (g[(0, 0)] * v[0] + g[(0, 1)] * v[1]) + r[1] * (g[(1, 0)] * v[0] + g[(1, 1)] * v[1]))
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let b = mobility(w_of_u([u.val[0], u.val[1]]));
        let (du, dv) = (u.grad, test.grad);
        let f0 = b[(0, 0)] * du[0] + b[(0, 1)] * du[1];
        let f1 = b[(1, 0)] * du[0] + b[(1, 1)] * du[1];
        Ok(-(f0 * dv[0] + f1 * dv[1]))
    }
}
