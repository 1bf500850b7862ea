use nalgebra::{DMatrix, DVector};

use super::mesh::Mesh1D;
use super::product::ProductSpace;
use super::quadrature::Quadrature;
use super::space::{FESpace, FieldSpec};
use crate::error::{Error, Result};
use crate::model::{check_compatible, ensure_admissible, EnergyModel, PointBuf, State};

/// Composite quadrature of `f` over the mesh.
pub fn integrate(mesh: &Mesh1D, f: impl FnMut(f64) -> f64, quad: &Quadrature) -> f64 {
    let mut f = f;
    try_integrate(mesh, |x| Ok::<_, Error>(f(x)), quad).expect("infallible integrand")
}

/// Like [`integrate`], propagating the first integrand error.
pub fn try_integrate<E>(
    mesh: &Mesh1D,
    mut f: impl FnMut(f64) -> std::result::Result<f64, E>,
    quad: &Quadrature,
) -> std::result::Result<f64, E> {
    let h = mesh.h();
    let mut total = 0.0;
    for e in 0..mesh.n_elements() {
        for (s, w) in quad.iter() {
            total += w * h * f(mesh.map_point(e, s))?;
        }
    }
    Ok(total)
}

/// L² projection of `f` onto `space`.
///
/// The projection is computed in the space without essential conditions and
/// pinned values are then overwritten (dropped, since they carry no dof).
pub fn l2_project(space: &FESpace, f: impl Fn(f64) -> f64, quad: &Quadrature) -> Result<Vec<f64>> {
    let free = FESpace::new(space.mesh().clone(), FieldSpec::natural(space.kind()))?;
    let n = free.n_dofs();
    let mesh = free.mesh();
    let h = mesh.h();
    let mut mass = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for e in 0..mesh.n_elements() {
        for (s, w) in quad.iter() {
            let fx = f(mesh.map_point(e, s));
            let basis = free.local_basis(e, s);
            for (di, pi, _) in basis.iter() {
                let i = di.expect("unpinned space");
                rhs[i] += w * h * fx * pi;
                for (dj, pj, _) in basis.iter() {
                    mass[(i, dj.expect("unpinned space"))] += w * h * pi * pj;
                }
            }
        }
    }
    let coeffs = mass
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::SingularMatrix("mass matrix".into()))?;
    let spec = space.spec();
    let skip_left = usize::from(spec.pin_left);
    let keep = n - skip_left - usize::from(spec.pin_right);
    Ok(coeffs.iter().skip(skip_left).take(keep).copied().collect())
}

/// Adds `q_scale ⟨Q(u)* rate, φᵢ⟩ - a_scale ⟨A(u), φᵢ⟩` to `out[i]` for every
/// basis function `φᵢ` of the product space. `rate = None` skips the `Q*` term.
pub fn assemble_forms(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    u: &[f64],
    rate: Option<&[f64]>,
    q_scale: f64,
    a_scale: f64,
    out: &mut [f64],
) -> Result<()> {
    space.check_len(u)?;
    space.check_len(out)?;
    if let Some(r) = rate {
        space.check_len(r)?;
    }
    let nf = space.n_fields();
    let mut ub = PointBuf::new(nf);
    let mut rb = PointBuf::new(nf);
    let mut tb = PointBuf::new(nf);
    for qp in space.quad_points() {
        space.eval_point(u, qp.element, qp.s, &mut ub.val, &mut ub.grad);
        ensure_admissible(model, qp.x, &ub.val)?;
        if let Some(r) = rate {
            space.eval_point(r, qp.element, qp.s, &mut rb.val, &mut rb.grad);
        }
        for f in 0..nf {
            let offset = space.offset(f);
            let basis = space.field(f).local_basis(qp.element, qp.s);
            for (dof, phi, dphi) in basis.iter() {
                let Some(i) = dof else { continue };
                tb.clear();
                tb.val[f] = phi;
                tb.grad[f] = dphi;
                let mut c = 0.0;
                if rate.is_some() && q_scale != 0.0 {
                    c += q_scale * model.qstar_form(ub.point(), rb.point(), tb.point(), qp.x)?;
                }
                if a_scale != 0.0 {
                    c -= a_scale * model.a_form(ub.point(), tb.point(), qp.x)?;
                }
                out[offset + i] += qp.weight * c;
            }
        }
    }
    Ok(())
}

/// Residual of the semi-discrete variational principle: entry `i` is
/// `⟨Q(u)* u̇, φᵢ⟩ - ⟨A(u), φᵢ⟩`. Pinned nodes carry no dof and hence no row.
pub fn assemble_residual(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    u: &State,
    udot: &State,
) -> Result<Vec<f64>> {
    check_compatible(model, space)?;
    let mut out = vec![0.0; space.n_dofs()];
    assemble_forms(model, space, &u.coeffs, Some(&udot.coeffs), 1.0, 1.0, &mut out)?;
    Ok(out)
}
