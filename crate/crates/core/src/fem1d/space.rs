use super::mesh::Mesh1D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Piecewise constants.
    P0,
    /// Continuous piecewise linears.
    P1Continuous,
    /// Discontinuous piecewise linears.
    P1Discontinuous,
}

/// Requested discretization of one field: space kind plus homogeneous
/// essential conditions at the two endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub kind: SpaceKind,
    pub pin_left: bool,
    pub pin_right: bool,
}

impl FieldSpec {
    pub fn natural(kind: SpaceKind) -> Self {
        Self {
            kind,
            pin_left: false,
            pin_right: false,
        }
    }

    /// Value pinned to zero at both endpoints.
    pub fn pinned(kind: SpaceKind) -> Self {
        Self {
            kind,
            pin_left: true,
            pin_right: true,
        }
    }
}

/// Shape functions of one element evaluated at one reference point.
#[derive(Debug, Clone, Copy)]
pub struct LocalBasis {
    len: usize,
    dofs: [Option<usize>; 2],
    values: [f64; 2],
    grads: [f64; 2],
}

impl LocalBasis {
    /// `(global dof, value, derivative)` for every local shape function.
    /// Pinned nodes report `None` as dof.
    pub fn iter(&self) -> impl Iterator<Item = (Option<usize>, f64, f64)> + '_ {
        (0..self.len).map(move |i| (self.dofs[i], self.values[i], self.grads[i]))
    }
}

/// Scalar finite element space on a 1D mesh.
///
/// Pinned endpoint nodes carry no degree of freedom; their value is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FESpace {
    mesh: Mesh1D,
    spec: FieldSpec,
}

impl FESpace {
    pub fn new(mesh: Mesh1D, spec: FieldSpec) -> Result<Self> {
        if spec.kind != SpaceKind::P1Continuous && (spec.pin_left || spec.pin_right) {
            return Err(Error::argument(
                "essential boundary conditions require a continuous P1 space",
            ));
        }
        if spec.pin_left && spec.pin_right && mesh.n_elements() == 1 {
            return Err(Error::argument(
                "pinning both ends of a single element leaves no degrees of freedom",
            ));
        }
        Ok(Self { mesh, spec })
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn kind(&self) -> SpaceKind {
        self.spec.kind
    }

    pub fn n_dofs(&self) -> usize {
        let n = self.mesh.n_elements();
        match self.spec.kind {
            SpaceKind::P0 => n,
            SpaceKind::P1Continuous => {
                n + 1 - usize::from(self.spec.pin_left) - usize::from(self.spec.pin_right)
            }
            SpaceKind::P1Discontinuous => 2 * n,
        }
    }

    /// Degree of freedom attached to mesh node `i` of a continuous space.
    fn node_dof(&self, i: usize) -> Option<usize> {
        let last = self.mesh.n_elements();
        if (i == 0 && self.spec.pin_left) || (i == last && self.spec.pin_right) {
            None
        } else {
            Some(i - usize::from(self.spec.pin_left))
        }
    }

    pub fn local_basis(&self, e: usize, s: f64) -> LocalBasis {
        let inv_h = 1.0 / self.mesh.h();
        match self.spec.kind {
            SpaceKind::P0 => LocalBasis {
                len: 1,
                dofs: [Some(e), None],
                values: [1.0, 0.0],
                grads: [0.0, 0.0],
            },
            SpaceKind::P1Continuous => LocalBasis {
                len: 2,
                dofs: [self.node_dof(e), self.node_dof(e + 1)],
                values: [1.0 - s, s],
                grads: [-inv_h, inv_h],
            },
            SpaceKind::P1Discontinuous => LocalBasis {
                len: 2,
                dofs: [Some(2 * e), Some(2 * e + 1)],
                values: [1.0 - s, s],
                grads: [-inv_h, inv_h],
            },
        }
    }

    /// Value and derivative of `coeffs` at reference point `s` of element `e`.
    pub fn eval_local(&self, coeffs: &[f64], e: usize, s: f64) -> (f64, f64) {
        let basis = self.local_basis(e, s);
        basis.iter().fold((0.0, 0.0), |(v, g), (dof, phi, dphi)| match dof {
            Some(i) => (v + coeffs[i] * phi, g + coeffs[i] * dphi),
            None => (v, g),
        })
    }

    fn check_len(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.n_dofs() {
            return Err(Error::argument(format!(
                "expected {} coefficients, got {}",
                self.n_dofs(),
                coeffs.len()
            )));
        }
        Ok(())
    }

    /// Nodal interpolant of `f`. Pinned nodes are skipped; P0 uses midpoints.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let nodes = self.mesh.nodes();
        match self.spec.kind {
            SpaceKind::P0 => (0..self.mesh.n_elements())
                .map(|e| f(self.mesh.map_point(e, 0.5)))
                .collect(),
            SpaceKind::P1Continuous => (0..nodes.len())
                .filter(|&i| self.node_dof(i).is_some())
                .map(|i| f(nodes[i]))
                .collect(),
            SpaceKind::P1Discontinuous => (0..self.mesh.n_elements())
                .flat_map(|e| [f(nodes[e]), f(nodes[e + 1])])
                .collect(),
        }
    }
}

/// Value and derivative of a finite element function at a physical point.
///
/// At shared nodes the element to the left is used.
pub fn eval_fe(space: &FESpace, coeffs: &[f64], x: f64) -> Result<(f64, f64)> {
    space.check_len(coeffs)?;
    let (e, s) = space.mesh().locate(x)?;
    Ok(space.eval_local(coeffs, e, s))
}

/// Exact injection of a function on `coarse` into `fine`, whose mesh must be
/// `coarse.mesh().refined()` with the same field spec.
pub fn prolongate(coarse: &FESpace, fine: &FESpace, coeffs: &[f64]) -> Result<Vec<f64>> {
    coarse.check_len(coeffs)?;
    if fine.spec != coarse.spec
        || fine.mesh.n_elements() != 2 * coarse.mesh.n_elements()
        || fine.mesh.length() != coarse.mesh.length()
    {
        return Err(Error::argument("fine space is not a uniform refinement"));
    }
    let out = match coarse.kind() {
        SpaceKind::P0 => (0..fine.mesh.n_elements())
            .map(|e| coeffs[e / 2])
            .collect(),
        SpaceKind::P1Continuous => (0..fine.mesh.n_nodes())
            .filter(|&i| fine.node_dof(i).is_some())
            .map(|i| {
                let e = (i / 2).min(coarse.mesh.n_elements() - 1);
                let s = if i / 2 == e { 0.5 * (i % 2) as f64 } else { 1.0 };
                coarse.eval_local(coeffs, e, s).0
            })
            .collect(),
        SpaceKind::P1Discontinuous => (0..fine.mesh.n_elements())
            .flat_map(|e| {
                let ce = e / 2;
                let s0 = 0.5 * (e % 2) as f64;
                [
                    coarse.eval_local(coeffs, ce, s0).0,
                    coarse.eval_local(coeffs, ce, s0 + 0.5).0,
                ]
            })
            .collect(),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mesh(n: usize) -> Mesh1D {
        Mesh1D::uniform(1.0, n).unwrap()
    }

    #[test]
    fn dof_counts() {
        let m = mesh(5);
        let p0 = FESpace::new(m.clone(), FieldSpec::natural(SpaceKind::P0)).unwrap();
        let p1 = FESpace::new(m.clone(), FieldSpec::natural(SpaceKind::P1Continuous)).unwrap();
        let p1p = FESpace::new(m.clone(), FieldSpec::pinned(SpaceKind::P1Continuous)).unwrap();
        let p1d = FESpace::new(m, FieldSpec::natural(SpaceKind::P1Discontinuous)).unwrap();
        assert_eq!(p0.n_dofs(), 5);
        assert_eq!(p1.n_dofs(), 6);
        assert_eq!(p1p.n_dofs(), 4);
        assert_eq!(p1d.n_dofs(), 10);
    }

    #[test]
    fn pins_only_on_continuous_spaces() {
        assert!(FESpace::new(mesh(2), FieldSpec::pinned(SpaceKind::P0)).is_err());
        assert!(FESpace::new(mesh(1), FieldSpec::pinned(SpaceKind::P1Continuous)).is_err());
    }

    #[test]
    fn eval_examples() {
        let p1 = FESpace::new(mesh(1), FieldSpec::natural(SpaceKind::P1Continuous)).unwrap();
        assert_eq!(eval_fe(&p1, &[0.0, 1.0], 0.5).unwrap(), (0.5, 1.0));

        let p0 = FESpace::new(mesh(2), FieldSpec::natural(SpaceKind::P0)).unwrap();
        assert_eq!(eval_fe(&p0, &[3.0, 7.0], 0.25).unwrap(), (3.0, 0.0));

        let p1d = FESpace::new(mesh(2), FieldSpec::natural(SpaceKind::P1Discontinuous)).unwrap();
        assert_eq!(eval_fe(&p1d, &[0.0, 1.0, 2.0, 0.0], 0.75).unwrap(), (1.0, -4.0));
        // left element owns the shared node
        assert_eq!(eval_fe(&p1d, &[0.0, 1.0, 2.0, 0.0], 0.5).unwrap(), (1.0, 2.0));
    }

    #[test]
    fn eval_errors() {
        let p1 = FESpace::new(mesh(1), FieldSpec::natural(SpaceKind::P1Continuous)).unwrap();
        assert!(eval_fe(&p1, &[0.0, 1.0], 1.5).is_err());
        assert!(eval_fe(&p1, &[0.0], 0.5).is_err());
    }

    #[test]
    fn partition_of_unity() {
        for kind in [SpaceKind::P1Continuous, SpaceKind::P1Discontinuous] {
            let sp = FESpace::new(mesh(3), FieldSpec::natural(kind)).unwrap();
            for e in 0..3 {
                for s in [0.1, 0.5, 0.77] {
                    let b = sp.local_basis(e, s);
                    let (v, g) = b.iter().fold((0.0, 0.0), |(v, g), (_, p, d)| (v + p, g + d));
                    assert!((v - 1.0).abs() < 1e-15);
                    assert!(g.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pinned_interpolant_vanishes_at_ends() {
        let sp = FESpace::new(mesh(4), FieldSpec::pinned(SpaceKind::P1Continuous)).unwrap();
        let c = sp.interpolate(|x| 1.0 + x);
        assert_eq!(c, vec![1.25, 1.5, 1.75]);
        assert_eq!(eval_fe(&sp, &c, 0.0).unwrap().0, 0.0);
        assert_eq!(eval_fe(&sp, &c, 1.0).unwrap().0, 0.0);
    }

    #[test]
    fn prolongation_preserves_values() {
        for spec in [
            FieldSpec::natural(SpaceKind::P0),
            FieldSpec::natural(SpaceKind::P1Continuous),
            FieldSpec::pinned(SpaceKind::P1Continuous),
            FieldSpec::natural(SpaceKind::P1Discontinuous),
        ] {
            let coarse = FESpace::new(mesh(3), spec).unwrap();
            let fine = FESpace::new(mesh(3).refined(), spec).unwrap();
            let c: Vec<f64> = (0..coarse.n_dofs()).map(|i| (i as f64 * 1.3).sin()).collect();
            let f = prolongate(&coarse, &fine, &c).unwrap();
            assert_eq!(f.len(), fine.n_dofs());
            for k in 1..60 {
                let x = k as f64 / 60.0;
                let a = eval_fe(&coarse, &c, x).unwrap().0;
                let b = eval_fe(&fine, &f, x).unwrap().0;
                assert!((a - b).abs() < 1e-14, "{spec:?} at {x}: {a} vs {b}");
            }
        }
    }
}
