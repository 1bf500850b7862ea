use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fem1d::ProductSpace;
use crate::model::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Heat,
    PorousMedium,
    FokkerPlanck,
    CrossDiffusion,
    Maxwell,
    Gas,
    Gradient,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 7] = [
        ProblemKind::Heat,
        ProblemKind::PorousMedium,
        ProblemKind::FokkerPlanck,
        ProblemKind::CrossDiffusion,
        ProblemKind::Maxwell,
        ProblemKind::Gas,
        ProblemKind::Gradient,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ProblemKind::Heat => "heat",
            ProblemKind::PorousMedium => "pme",
            ProblemKind::FokkerPlanck => "fokker_planck",
            ProblemKind::CrossDiffusion => "cross_diffusion",
            ProblemKind::Maxwell => "maxwell1d",
            ProblemKind::Gas => "gas",
            ProblemKind::Gradient => "gradient",
        }
    }

    /// Coefficient ranges, per field, from which random admissible states
    /// are drawn.
    fn sample_ranges(self) -> &'static [(f64, f64)] {
        match self {
            ProblemKind::Heat | ProblemKind::PorousMedium => &[(0.5, 1.5)],
            ProblemKind::FokkerPlanck => &[(-1.0, 2.0)],
            ProblemKind::CrossDiffusion => &[(-1.0, 0.5), (-1.0, 0.5)],
            ProblemKind::Maxwell => &[(-1.0, 1.0), (-1.0, 1.0)],
            ProblemKind::Gas => &[(0.6, 1.4), (-0.5, 0.5)],
            ProblemKind::Gradient => &[(-1.5, 1.5)],
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::argument(format!("unknown problem '{s}'")))
    }
}

/// Random admissible state with coefficients drawn uniformly from a
/// problem-specific box. Positivity of nodal values carries over to the
/// piecewise linear fields.
pub fn random_state(kind: ProblemKind, space: &ProductSpace, rng: &mut impl Rng) -> State {
    let ranges = kind.sample_ranges();
    let mut c = Vec::with_capacity(space.n_dofs());
    for f in 0..space.n_fields() {
        let (lo, hi) = ranges[f.min(ranges.len() - 1)];
        c.extend(space.field_range(f).map(|_| rng.random_range(lo..hi)));
    }
    State::new(c, 0.0)
}

/// Direction with coefficients uniform in `[-1, 1]`.
pub fn random_direction(space: &ProductSpace, rng: &mut impl Rng) -> State {
    State::new((0..space.n_dofs()).map(|_| rng.random_range(-1.0..1.0)).collect(), 0.0)
}
