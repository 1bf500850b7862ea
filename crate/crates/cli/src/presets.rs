//! Problem construction and named initial conditions.

use std::f64::consts::PI;
use std::sync::Arc;

use dissipative_core::fem1d::{Mesh1D, ProductSpace};
use dissipative_core::problems::{
    make_cross_diffusion, make_fokker_planck, make_gas_pipe, make_heat_log, make_maxwell1d,
    make_porous_medium, random_state, u_of_w, FokkerPlanck, GradientSystem, Maxwell1d, Potential,
    ProblemKind,
};
use dissipative_core::timestep::{NewtonOptions, TimeGrid};
use dissipative_core::{space_for, EnergyModel, Error, State};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{GradientPreset, PotentialKind, RunConfig};
use crate::CliError;

/// Everything needed to march a configured problem.
pub struct Setup {
    pub model: Box<dyn EnergyModel>,
    pub space: ProductSpace,
    pub initial: State,
    pub grid: TimeGrid,
    pub dg_order: usize,
    pub newton: NewtonOptions,
    pub tau: f64,
}

pub fn default_tau(kind: ProblemKind) -> f64 {
    match kind {
        ProblemKind::Heat | ProblemKind::PorousMedium | ProblemKind::CrossDiffusion | ProblemKind::Gas => 0.005,
        ProblemKind::FokkerPlanck => 1e-3,
        ProblemKind::Maxwell => 0.01,
        ProblemKind::Gradient => 0.1,
    }
}

/// Initial conditions understood for each problem; the first is the default.
pub fn initial_conditions(kind: ProblemKind) -> &'static [&'static str] {
    match kind {
        ProblemKind::Heat => &["shifted_cosine", "constant", "random"],
        ProblemKind::FokkerPlanck => &["cosine", "constant", "random"],
        ProblemKind::Gradient => &["unit", "constant", "random"],
        _ => &["bump", "constant", "random"],
    }
}

pub fn potential(config: &RunConfig) -> Potential {
    let (a, l) = (config.potential_strength, config.length);
    match config.potential {
        PotentialKind::Zero => Arc::new(|_| 0.0),
        PotentialKind::Linear => Arc::new(move |x| a * x / l),
        PotentialKind::Quadratic => Arc::new(move |x| a * (x / l - 0.5).powi(2)),
        PotentialKind::Cosine => Arc::new(move |x| a * (2.0 * PI * x / l).cos()),
    }
}

pub fn fokker_planck(config: &RunConfig, mesh: &Mesh1D) -> Result<FokkerPlanck, Error> {
    make_fokker_planck(potential(config), config.mass, mesh)
}

pub fn maxwell(config: &RunConfig) -> Result<Maxwell1d, Error> {
    let (s0, s2) = (config.sigma0, config.sigma2);
    make_maxwell1d(
        config.eps0,
        config.mu0,
        config.chi1,
        config.chi3,
        Arc::new(move |e| s0 + s2 * e * e),
    )
}

pub fn gradient_system(config: &RunConfig) -> Result<GradientSystem, Error> {
    match config.gradient {
        GradientPreset::Decay => GradientSystem::quadratic(1, config.damping.unwrap_or(1.0)),
        GradientPreset::Oscillator => GradientSystem::anharmonic_oscillator(config.damping.unwrap_or(0.1)),
    }
}

pub fn mesh(config: &RunConfig) -> Result<Mesh1D, Error> {
    if config.problem == ProblemKind::Gradient {
        return Ok(GradientSystem::mesh());
    }
    Mesh1D::uniform(config.length, config.nx)
}

pub fn build_model(config: &RunConfig, mesh: &Mesh1D) -> Result<Box<dyn EnergyModel>, Error> {
    let missing = |k: &str| Error::Argument(format!("{k} required"));
    Ok(match config.problem {
        ProblemKind::Heat => Box::new(make_heat_log()),
        ProblemKind::PorousMedium => Box::new(make_porous_medium(config.m.ok_or_else(|| missing("m"))?)?),
        ProblemKind::FokkerPlanck => Box::new(fokker_planck(config, mesh)?),
        ProblemKind::CrossDiffusion => Box::new(make_cross_diffusion()),
        ProblemKind::Maxwell => Box::new(maxwell(config)?),
        ProblemKind::Gas => Box::new(make_gas_pipe(config.gamma.ok_or_else(|| missing("gamma"))?)?),
        ProblemKind::Gradient => Box::new(gradient_system(config)?),
    })
}

/// Interpolates the named initial condition; each field is given as a
/// function of the normalized coordinate `ξ = x / L`.
pub fn initial_state(config: &RunConfig, space: &ProductSpace) -> Result<State, Error> {
    let kind = config.problem;
    let ic = config.ic.as_deref().unwrap_or(initial_conditions(kind)[0]);
    if !initial_conditions(kind).contains(&ic) {
        return Err(Error::Argument(format!(
            "unknown initial condition '{ic}' for {kind} (expected one of {})",
            initial_conditions(kind).join(", ")
        )));
    }
    if ic == "random" {
        return Ok(random_state(kind, space, &mut ChaCha8Rng::seed_from_u64(config.seed)));
    }
    if kind == ProblemKind::Gradient {
        let g = gradient_system(config)?;
        let mut x = vec![0.0; g.dim()];
        if ic == "unit" {
            x[0] = 1.0;
        }
        return Ok(State::new(g.u_of_x(&x), 0.0));
    }

    let constant = ic == "constant";
    let fields: Vec<Box<dyn Fn(f64) -> f64>> = match kind {
        ProblemKind::Heat if constant => vec![Box::new(|_| 1.0)],
        ProblemKind::Heat => vec![Box::new(|s| 2.0 + (PI * s).cos())],
        ProblemKind::PorousMedium if constant => vec![Box::new(|_| 1.0)],
        ProblemKind::PorousMedium => vec![Box::new(|s| 1.0 + 0.5 * (PI * s).sin())],
        ProblemKind::FokkerPlanck if constant => vec![Box::new(|_| 1.0)],
        ProblemKind::FokkerPlanck => vec![Box::new(|s| 1.0 + 0.1 * (PI * s).cos())],
        ProblemKind::CrossDiffusion => {
            let amp = if constant { 0.0 } else { 0.1 };
            let w0 = if constant { 1.0 / 3.0 } else { 0.3 };
            let u = move |s: f64| u_of_w([w0 + amp * (PI * s).cos(), w0 - amp * (PI * s).cos()]);
            vec![Box::new(move |s| u(s)[0]), Box::new(move |s| u(s)[1])]
        }
        ProblemKind::Maxwell if constant => vec![Box::new(|_| 0.0), Box::new(|_| 0.5)],
        ProblemKind::Maxwell => vec![Box::new(|s| 0.5 * (PI * s).sin()), Box::new(|_| 0.0)],
        ProblemKind::Gas if constant => vec![Box::new(|_| 1.0), Box::new(|_| 0.0)],
        ProblemKind::Gas => vec![Box::new(|_| 1.0), Box::new(|s| 0.1 * (PI * s).sin())],
        ProblemKind::Gradient => unreachable!("handled above"),
    };
    let l = config.length;
    let parts: Vec<Vec<f64>> = fields
        .iter()
        .enumerate()
        .map(|(f, g)| space.field(f).interpolate(|x| g(x / l)))
        .collect();
    Ok(State::new(space.join(&parts)?, 0.0))
}

pub fn newton_options(config: &RunConfig) -> NewtonOptions {
    let mut o = NewtonOptions::default();
    if let Some(t) = config.newton_tol {
        o.tol = t;
    }
    if let Some(m) = config.newton_maxit {
        o.max_iter = m;
    }
    o
}

pub fn setup(config: &RunConfig) -> Result<Setup, CliError> {
    let mesh = mesh(config)?;
    let model = build_model(config, &mesh)?;
    let space = space_for(model.as_ref(), &mesh)?;
    let initial = initial_state(config, &space)?;
    let tau = config.tau.unwrap_or_else(|| default_tau(config.problem));
    Ok(Setup {
        grid: TimeGrid::uniform(tau, config.n_steps)?,
        model,
        space,
        initial,
        dg_order: config.dg_order,
        newton: newton_options(config),
        tau,
    })
}
