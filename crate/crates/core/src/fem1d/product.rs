use std::ops::Range;

use super::mesh::Mesh1D;
use super::quadrature::Quadrature;
use super::space::{FESpace, FieldSpec};
use crate::error::{Error, Result};

/// A quadrature point of the composite rule.
#[derive(Debug, Clone, Copy)]
pub struct QuadPoint {
    pub element: usize,
    /// Reference coordinate in `[0, 1]`.
    pub s: f64,
    pub x: f64,
    /// Weight already scaled by the element width.
    pub weight: f64,
}

/// Product of scalar spaces on a common mesh, one per field, together with the
/// spatial quadrature rule that defines every pairing.
///
/// Coefficients of all fields are stored in one flat vector, field by field.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductSpace {
    fields: Vec<FESpace>,
    offsets: Vec<usize>,
    quad: Quadrature,
}

impl ProductSpace {
    pub fn new(fields: Vec<FESpace>) -> Result<Self> {
        let first = fields
            .first()
            .ok_or_else(|| Error::argument("product space needs at least one field"))?;
        if fields.iter().any(|f| f.mesh() != first.mesh()) {
            return Err(Error::argument("all fields must live on the same mesh"));
        }
        let mut offsets = Vec::with_capacity(fields.len() + 1);
        offsets.push(0);
        for f in &fields {
            offsets.push(offsets.last().unwrap() + f.n_dofs());
        }
        Ok(Self {
            fields,
            offsets,
            quad: Quadrature::default_spatial(),
        })
    }

    pub fn from_specs(mesh: &Mesh1D, specs: &[FieldSpec]) -> Result<Self> {
        let fields = specs
            .iter()
            .map(|&s| FESpace::new(mesh.clone(), s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(fields)
    }

    pub fn with_quadrature(mut self, quad: Quadrature) -> Self {
        self.quad = quad;
        self
    }

    pub fn mesh(&self) -> &Mesh1D {
        self.fields[0].mesh()
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn n_fields(&self) -> usize {
        self.fields.len()
    }

    pub fn n_dofs(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn field(&self, f: usize) -> &FESpace {
        &self.fields[f]
    }

    pub fn fields(&self) -> &[FESpace] {
        &self.fields
    }

    pub fn field_range(&self, f: usize) -> Range<usize> {
        self.offsets[f]..self.offsets[f + 1]
    }

    pub fn offset(&self, f: usize) -> usize {
        self.offsets[f]
    }

    pub fn check_len(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.n_dofs() {
            return Err(Error::argument(format!(
                "coefficient vector has length {}, space has {} dofs",
                coeffs.len(),
                self.n_dofs()
            )));
        }
        Ok(())
    }

    /// Composite quadrature points, element by element in mesh order.
    pub fn quad_points(&self) -> impl Iterator<Item = QuadPoint> + '_ {
        let mesh = self.mesh();
        let h = mesh.h();
        (0..mesh.n_elements()).flat_map(move |e| {
            self.quad.iter().map(move |(s, w)| QuadPoint {
                element: e,
                s,
                x: mesh.map_point(e, s),
                weight: w * h,
            })
        })
    }

    /// Values and derivatives of every field at `(e, s)`.
    pub fn eval_point(&self, coeffs: &[f64], e: usize, s: f64, val: &mut [f64], grad: &mut [f64]) {
        for (f, space) in self.fields.iter().enumerate() {
            let (v, g) = space.eval_local(&coeffs[self.field_range(f)], e, s);
            val[f] = v;
            grad[f] = g;
        }
    }

    /// Assembles the combined coefficient vector from per-field vectors.
    pub fn join(&self, parts: &[Vec<f64>]) -> Result<Vec<f64>> {
        if parts.len() != self.n_fields() {
            return Err(Error::argument("one coefficient vector per field expected"));
        }
        let mut out = Vec::with_capacity(self.n_dofs());
        for (f, p) in parts.iter().enumerate() {
            if p.len() != self.fields[f].n_dofs() {
                return Err(Error::argument(format!("field {f} has wrong length")));
            }
            out.extend_from_slice(p);
        }
        Ok(out)
    }
}
