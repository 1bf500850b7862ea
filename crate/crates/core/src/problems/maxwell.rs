use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem1d::{FieldSpec, SpaceKind};
use crate::model::{EnergyModel, Pointwise};

pub type Conductivity = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One-dimensional Maxwell system in a Kerr medium with fields `E = E_y(x)`,
/// `H = H_z(x)` and perfectly conducting walls `E(0) = E(L) = 0`:
///
/// `⟨d'(E) ∂ₜE, v⟩ + ⟨μ₀ ∂ₜH, w⟩ = ⟨H, ∂ₓv⟩ - ⟨σ(E) E, v⟩ - ⟨∂ₓE, w⟩`
#[derive(Clone)]
pub struct Maxwell1d {
    eps0: f64,
    mu0: f64,
    chi1: f64,
    chi3: f64,
    sigma: Conductivity,
}

impl fmt::Debug for Maxwell1d {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Maxwell1d")
            .field("eps0", &self.eps0)
            .field("mu0", &self.mu0)
            .field("chi1", &self.chi1)
            .field("chi3", &self.chi3)
            .finish_non_exhaustive()
    }
}

pub fn make_maxwell1d(eps0: f64, mu0: f64, chi1: f64, chi3: f64, sigma: Conductivity) -> Result<Maxwell1d> {
    for (name, v) in [("eps0", eps0), ("mu0", mu0), ("chi1", chi1), ("chi3", chi3)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::argument(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(Maxwell1d {
        eps0,
        mu0,
        chi1,
        chi3,
        sigma,
    })
}

impl Maxwell1d {
    /// `d(E) = ε₀ (χ1 + χ3 E²) E`.
    pub fn displacement(&self, e: f64) -> f64 {
        self.eps0 * (self.chi1 + self.chi3 * e * e) * e
    }

    /// `d'(E)`.
    pub fn permittivity(&self, e: f64) -> f64 {
        self.eps0 * (self.chi1 + 3.0 * self.chi3 * e * e)
    }

    /// Electric energy density `d̂(E) = ∫₀ᴱ s d'(s) ds`.
    pub fn electric_energy(&self, e: f64) -> f64 {
        let e2 = e * e;
        self.eps0 * (self.chi1 * e2 / 2.0 + 3.0 * self.chi3 * e2 * e2 / 4.0)
    }

    pub fn magnetic_energy(&self, h: f64) -> f64 {
        0.5 * self.mu0 * h * h
    }

    pub fn conductivity(&self, e: f64) -> f64 {
        (self.sigma)(e)
    }
}

impl EnergyModel for Maxwell1d {
    fn name(&self) -> &str {
        "maxwell1d"
    }

    fn field_specs(&self) -> Vec<FieldSpec> {
        vec![
            FieldSpec::pinned(SpaceKind::P1Continuous),
            FieldSpec::natural(SpaceKind::P0),
        ]
    }

    fn energy_density(&self, u: Pointwise<'_>, _x: f64) -> Result<f64> {
        Ok(self.electric_energy(u.val[0]) + self.magnetic_energy(u.val[1]))
    }

    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        Ok(self.permittivity(u.val[0]) * rate.val[0] * test.val[0] + self.mu0 * rate.val[1] * test.val[1])
    }

    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, _x: f64) -> Result<f64> {
        let (e, h, de) = (u.val[0], u.val[1], u.grad[0]);
        let (v, dv, w) = (test.val[0], test.grad[0], test.val[1]);
        Ok(h * dv - self.conductivity(e) * e * v - de * w)
    }
}
