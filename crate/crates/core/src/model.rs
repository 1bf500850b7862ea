//! The abstract evolution problem `Q(u)* ∂ₜu = A(u)` with energy `E` and
//! factorization `E'(u) = Q(u) u`, evaluated through pointwise integrands.
//!
//! Every pairing is a composite quadrature sum over the mesh, so a model only
//! has to supply three integrands and an admissibility predicate:
//!
//! * `energy_density(u, x)` integrates to `E(u)`,
//! * `qstar_form(u, r, v, x)` integrates to `⟨Q(u)* r, v⟩ = ⟨r, Q(u) v⟩`,
//! * `a_form(u, v, x)` integrates to `⟨A(u), v⟩` (in weak form, first
//!   derivatives only).

use crate::error::{Error, Result};
use crate::fem1d::{FieldSpec, Mesh1D, ProductSpace};

/// Field values and first derivatives at one point; index = field.
#[derive(Debug, Clone, Copy)]
pub struct Pointwise<'a> {
    pub val: &'a [f64],
    pub grad: &'a [f64],
}

impl<'a> Pointwise<'a> {
    pub fn new(val: &'a [f64], grad: &'a [f64]) -> Self {
        debug_assert_eq!(val.len(), grad.len());
        Self { val, grad }
    }
}

/// A dissipative evolution problem in the form required for structure
/// preserving Galerkin discretization.
pub trait EnergyModel: Send + Sync {
    fn name(&self) -> &str;

    /// Requested space and boundary pins, one entry per field.
    fn field_specs(&self) -> Vec<FieldSpec>;

    fn n_fields(&self) -> usize {
        self.field_specs().len()
    }

    /// Pointwise domain constraint (positivity and the like).
    fn admissible(&self, _val: &[f64]) -> bool {
        true
    }

    fn energy_density(&self, u: Pointwise<'_>, x: f64) -> Result<f64>;

    /// Integrand of `⟨Q(u)* rate, test⟩`.
    fn qstar_form(&self, u: Pointwise<'_>, rate: Pointwise<'_>, test: Pointwise<'_>, x: f64)
        -> Result<f64>;

    /// Integrand of `⟨A(u), test⟩`.
    fn a_form(&self, u: Pointwise<'_>, test: Pointwise<'_>, x: f64) -> Result<f64>;
}

/// Coefficients of all fields at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub coeffs: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn new(coeffs: Vec<f64>, t: f64) -> Self {
        Self { coeffs, t }
    }

    pub fn zeros(space: &ProductSpace, t: f64) -> Self {
        Self::new(vec![0.0; space.n_dofs()], t)
    }

    pub fn field<'a>(&'a self, space: &ProductSpace, f: usize) -> &'a [f64] {
        &self.coeffs[space.field_range(f)]
    }

    pub fn max_abs_diff(&self, other: &State) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the product space a model asks for on `mesh`.
pub fn space_for(model: &dyn EnergyModel, mesh: &Mesh1D) -> Result<ProductSpace> {
    ProductSpace::from_specs(mesh, &model.field_specs())
}

pub(crate) fn check_compatible(model: &dyn EnergyModel, space: &ProductSpace) -> Result<()> {
    let specs = model.field_specs();
    if specs.len() != space.n_fields()
        || specs.iter().zip(space.fields()).any(|(s, f)| *s != f.spec())
    {
        return Err(Error::argument(format!(
            "space does not match the field layout of model '{}'",
            model.name()
        )));
    }
    Ok(())
}

/// Scratch buffers for pointwise evaluation.
#[derive(Debug, Clone)]
pub(crate) struct PointBuf {
    pub val: Vec<f64>,
    pub grad: Vec<f64>,
}

impl PointBuf {
    pub fn new(n: usize) -> Self {
        Self {
            val: vec![0.0; n],
            grad: vec![0.0; n],
        }
    }

    pub fn point(&self) -> Pointwise<'_> {
        Pointwise::new(&self.val, &self.grad)
    }

    pub fn clear(&mut self) {
        self.val.fill(0.0);
        self.grad.fill(0.0);
    }
}

pub(crate) fn ensure_admissible(model: &dyn EnergyModel, x: f64, val: &[f64]) -> Result<()> {
    if val.iter().all(|v| v.is_finite()) && model.admissible(val) {
        Ok(())
    } else {
        Err(Error::Admissibility {
            x,
            values: val.to_vec(),
        })
    }
}

/// Quadrature value of `E(u)`.
pub fn energy(model: &dyn EnergyModel, space: &ProductSpace, u: &State) -> Result<f64> {
    check_compatible(model, space)?;
    space.check_len(&u.coeffs)?;
    let mut buf = PointBuf::new(space.n_fields());
    let mut total = 0.0;
    for qp in space.quad_points() {
        space.eval_point(&u.coeffs, qp.element, qp.s, &mut buf.val, &mut buf.grad);
        ensure_admissible(model, qp.x, &buf.val)?;
        total += qp.weight * model.energy_density(buf.point(), qp.x)?;
    }
    Ok(total)
}

/// `D(u) = -⟨A(u), u⟩`.
pub fn dissipation(model: &dyn EnergyModel, space: &ProductSpace, u: &State) -> Result<f64> {
    check_compatible(model, space)?;
    space.check_len(&u.coeffs)?;
    let mut buf = PointBuf::new(space.n_fields());
    let mut total = 0.0;
    for qp in space.quad_points() {
        space.eval_point(&u.coeffs, qp.element, qp.s, &mut buf.val, &mut buf.grad);
        ensure_admissible(model, qp.x, &buf.val)?;
        let p = buf.point();
        total -= qp.weight * model.a_form(p, p, qp.x)?;
    }
    Ok(total)
}

/// `⟨Q(u) u, v⟩`, assembled as `⟨Q(u)* v, u⟩`.
pub fn factorized_derivative(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    u: &State,
    v: &State,
) -> Result<f64> {
    check_compatible(model, space)?;
    space.check_len(&u.coeffs)?;
    space.check_len(&v.coeffs)?;
    let n = space.n_fields();
    let mut ub = PointBuf::new(n);
    let mut vb = PointBuf::new(n);
    let mut total = 0.0;
    for qp in space.quad_points() {
        space.eval_point(&u.coeffs, qp.element, qp.s, &mut ub.val, &mut ub.grad);
        space.eval_point(&v.coeffs, qp.element, qp.s, &mut vb.val, &mut vb.grad);
        ensure_admissible(model, qp.x, &ub.val)?;
        total += qp.weight * model.qstar_form(ub.point(), vb.point(), ub.point(), qp.x)?;
    }
    Ok(total)
}

pub const DEFAULT_STRUCTURE_TOL: f64 = 1e-6;
pub const DEFAULT_FD_STEP: f64 = 1e-5;
const MAX_STEP_HALVINGS: usize = 3;

/// Outcome of comparing `E'(u)[v]` with `⟨Q(u) u, v⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureReport {
    /// Central difference `(E(u + h v) - E(u - h v)) / 2h`.
    pub fd_derivative: f64,
    /// Assembled `⟨Q(u) u, v⟩`.
    pub pairing: f64,
    /// `|fd - pairing| / (1 + |fd|)`.
    pub discrepancy: f64,
    /// Step actually used after any halving.
    pub step: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks the factorization `E'(u) = Q(u) u` in direction `v` by central
/// finite differences. The step is halved up to three times when `u ± h v`
/// leaves the admissible set.
pub fn verify_structure(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    u: &State,
    v: &State,
    h: f64,
    tol: f64,
) -> Result<StructureReport> {
    if !(h > 0.0) {
        return Err(Error::argument(format!("finite-difference step must be positive, got {h}")));
    }
    let pairing = factorized_derivative(model, space, u, v)?;
    let mut step = h;
    let mut halvings = 0;
    let fd = loop {
        let shifted = |sign: f64| {
            let c = u
                .coeffs
                .iter()
                .zip(&v.coeffs)
                .map(|(a, b)| a + sign * step * b)
                .collect();
            energy(model, space, &State::new(c, u.t))
        };
        match shifted(1.0).and_then(|ep| Ok((ep, shifted(-1.0)?))) {
            Ok((ep, em)) => break (ep - em) / (2.0 * step),
            Err(e) if e.is_admissibility() && halvings < MAX_STEP_HALVINGS => {
                step *= 0.5;
                halvings += 1;
            }
            Err(e) => return Err(e),
        }
    };
    let discrepancy = (fd - pairing).abs() / (1.0 + fd.abs());
    Ok(StructureReport {
        fd_derivative: fd,
        pairing,
        discrepancy,
        step,
        tol,
        pass: discrepancy <= tol,
    })
}

/// Verifies admissibility of a coefficient vector at every quadrature point.
pub fn check_admissible(model: &dyn EnergyModel, space: &ProductSpace, coeffs: &[f64]) -> Result<()> {
    space.check_len(coeffs)?;
    let mut buf = PointBuf::new(space.n_fields());
    for qp in space.quad_points() {
        space.eval_point(coeffs, qp.element, qp.s, &mut buf.val, &mut buf.grad);
        ensure_admissible(model, qp.x, &buf.val)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_heat_log, make_porous_medium, GradientSystem};

    fn heat_space(n: usize) -> (crate::problems::HeatLog, ProductSpace) {
        let m = make_heat_log();
        let space = space_for(&m, &Mesh1D::uniform(1.0, n).unwrap()).unwrap();
        (m, space)
    }

    #[test]
    fn heat_constant_state() {
        let (m, space) = heat_space(4);
        let one = State::new(vec![1.0; space.n_dofs()], 0.0);
        assert_eq!(energy(&m, &space, &one).unwrap(), 0.0);
        let c = State::new(vec![2.5; space.n_dofs()], 0.0);
        assert_eq!(dissipation(&m, &space, &c).unwrap(), 0.0);
    }

    #[test]
    fn inadmissible_state_is_reported() {
        let (m, space) = heat_space(4);
        let mut c = vec![1.0; space.n_dofs()];
        c[2] = -0.5;
        let err = energy(&m, &space, &State::new(c, 0.0)).unwrap_err();
        assert!(err.is_admissibility());
    }

    #[test]
    fn mismatched_space_is_rejected() {
        let m = make_heat_log();
        let g = GradientSystem::quadratic(2, 1.0).unwrap();
        let space = space_for(&g, &GradientSystem::mesh()).unwrap();
        let u = State::zeros(&space, 0.0);
        assert!(matches!(energy(&m, &space, &u), Err(Error::Argument(_))));
    }

    #[test]
    fn structure_check_for_quadratic_gradient_system() {
        let g = GradientSystem::quadratic(2, 1.0).unwrap();
        let space = space_for(&g, &GradientSystem::mesh()).unwrap();
        let u = State::new(vec![0.4, -1.1], 0.0);
        let v = State::new(vec![2.0, 0.5], 0.0);
        let r = verify_structure(&g, &space, &u, &v, DEFAULT_FD_STEP, DEFAULT_STRUCTURE_TOL).unwrap();
        assert!(r.pass);
        assert!((r.pairing - (0.8 - 0.55)).abs() < 1e-15);
    }

    #[test]
    fn structure_check_detects_wrong_factor() {
        // heat with Q doubled
        struct Wrong;
        impl EnergyModel for Wrong {
            fn name(&self) -> &str {
                "wrong"
            }
            fn field_specs(&self) -> Vec<FieldSpec> {
                make_heat_log().field_specs()
            }
            fn energy_density(&self, u: Pointwise<'_>, x: f64) -> Result<f64> {
                make_heat_log().energy_density(u, x)
            }
            fn qstar_form(&self, u: Pointwise<'_>, r: Pointwise<'_>, v: Pointwise<'_>, x: f64) -> Result<f64> {
                Ok(2.0 * make_heat_log().qstar_form(u, r, v, x)?)
            }
            fn a_form(&self, u: Pointwise<'_>, v: Pointwise<'_>, x: f64) -> Result<f64> {
                make_heat_log().a_form(u, v, x)
            }
        }
        let space = space_for(&Wrong, &Mesh1D::uniform(1.0, 4).unwrap()).unwrap();
        let u = State::new(vec![1.0, 1.2, 0.9, 1.4, 1.1], 0.0);
        let v = State::new(vec![1.0; 5], 0.0);
        let r = verify_structure(&Wrong, &space, &u, &v, 1e-5, 1e-6).unwrap();
        assert!(!r.pass);
        assert!(r.discrepancy > 0.1);
    }

    #[test]
    fn structure_check_halves_step_near_boundary() {
        let m = make_porous_medium(2.0).unwrap();
        let space = space_for(&m, &Mesh1D::uniform(1.0, 2).unwrap()).unwrap();
        let u = State::new(vec![0.3, 0.3, 1.0], 0.0);
        let v = State::new(vec![-1.0, -1.0, 0.0], 0.0);
        // u - h v is fine, u + h v with h = 0.4 is not
        let r = verify_structure(&m, &space, &u, &v, 0.4, 1e-2).unwrap();
        assert_eq!(r.step, 0.2);
        assert!(verify_structure(&m, &space, &u, &v, 0.0, 1e-6).is_err());
    }
}
