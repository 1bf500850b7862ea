use std::fmt;

use super::newton::{newton_solve, NewtonOptions};
use crate::diagnostics::{EnergyLedger, LedgerRow};
use crate::error::{Error, Result};
use crate::fem1d::{assemble_forms, ProductSpace, Quadrature};
use crate::model::{check_admissible, check_compatible, dissipation, energy, EnergyModel, State};

/// Slab boundaries `t⁰ < t¹ < … < tᴺ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::argument("time grid needs at least one point"));
        }
        if points.iter().any(|t| !t.is_finite()) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::argument("time points must be finite and strictly increasing"));
        }
        Ok(Self { points })
    }

    /// `n_steps` slabs of width `tau` starting at zero.
    pub fn uniform(tau: f64, n_steps: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::argument(format!("time step must be positive, got {tau}")));
        }
        Self::new((0..=n_steps).map(|n| n as f64 * tau).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n_slabs(&self) -> usize {
        self.points.len() - 1
    }

    pub fn slab(&self, n: usize) -> (f64, f64) {
        (self.points[n - 1], self.points[n])
    }
}

/// `u(t) = Σⱼ aⱼ ((t - t_start) / τ)ʲ` on one slab.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabSolution {
    pub t_start: f64,
    pub t_end: f64,
    /// Monomial coefficients `a₀ … a_k`.
    pub coeffs: Vec<Vec<f64>>,
    pub newton_iterations: usize,
    pub residual_norm: f64,
}

impl SlabSolution {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tau(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// State at normalized slab coordinate `s ∈ [0, 1]`.
    pub fn at(&self, s: f64) -> State {
        let n = self.coeffs[0].len();
        let mut c = vec![0.0; n];
        let mut p = 1.0;
        for a in &self.coeffs {
            for (ci, ai) in c.iter_mut().zip(a) {
                *ci += p * ai;
            }
            p *= s;
        }
        State::new(c, self.t_start + s * self.tau())
    }

    /// Right-sided limit at `t_start`.
    pub fn start(&self) -> State {
        State::new(self.coeffs[0].clone(), self.t_start)
    }

    /// Left-sided limit at `t_end`.
    pub fn end(&self) -> State {
        let mut s = self.at(1.0);
        s.t = self.t_end;
        s
    }
}

fn check_degree(k: usize) -> Result<()> {
    if k > 1 {
        return Err(Error::argument(format!("dG degree {k} unsupported (use 0 or 1)")));
    }
    Ok(())
}

/// Residual of the dG(k) slab equations divided by `τ`.
///
/// Unknowns are `[a₀; …; a_k]`. Block `j` tests with `φᵢ sʲ`:
/// `Σ_q w_q s_qʲ (⟨Q(u_q)* ∂ₜu, φᵢ⟩ - ⟨A(u_q), φᵢ⟩) + δ_{j0} τ⁻¹ ⟨Q(a₀)*(a₀ - b), φᵢ⟩`.
pub fn slab_residual(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    tau: f64,
    prev_end: &[f64],
    k: usize,
    unknowns: &[f64],
) -> Result<Vec<f64>> {
    check_degree(k)?;
    let n = space.n_dofs();
    if unknowns.len() != (k + 1) * n {
        return Err(Error::argument("slab unknown vector has wrong length"));
    }
    let mut out = vec![0.0; (k + 1) * n];
    let a0 = &unknowns[..n];
    let jump: Vec<f64> = a0.iter().zip(prev_end).map(|(a, b)| a - b).collect();
    assemble_forms(model, space, a0, Some(&jump), 1.0 / tau, 0.0, &mut out[..n])?;

    if k == 0 {
        assemble_forms(model, space, a0, None, 0.0, 1.0, &mut out[..n])?;
        return Ok(out);
    }

    let a1 = &unknowns[n..];
    // linear in time: admissible at both ends implies admissible throughout
    let end: Vec<f64> = a0.iter().zip(a1).map(|(a, b)| a + b).collect();
    check_admissible(model, space, &end)?;
    let rate: Vec<f64> = a1.iter().map(|v| v / tau).collect();
    let tq = Quadrature::gauss(k + 1)?;
    let mut uq = vec![0.0; n];
    for (s, w) in tq.iter() {
        for ((u, a), b) in uq.iter_mut().zip(a0).zip(a1) {
            *u = a + s * b;
        }
        let mut sj = 1.0;
        for j in 0..=k {
            let block = &mut out[j * n..(j + 1) * n];
            assemble_forms(model, space, &uq, Some(&rate), w * sj, w * sj, block)?;
            sj *= s;
        }
    }
    Ok(out)
}

/// Solves one slab of the discontinuous Galerkin scheme. For `k = 0` this is
/// one implicit Euler step.
pub fn dg_step(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    slab: (f64, f64),
    prev_end: &State,
    k: usize,
    opts: &NewtonOptions,
) -> Result<SlabSolution> {
    check_degree(k)?;
    check_compatible(model, space)?;
    space.check_len(&prev_end.coeffs)?;
    let (t0, t1) = slab;
    let tau = t1 - t0;
    if !(tau > 0.0) {
        return Err(Error::argument(format!("empty time slab [{t0}, {t1}]")));
    }
    check_admissible(model, space, &prev_end.coeffs)?;
    let n = space.n_dofs();
    let mut guess = vec![0.0; (k + 1) * n];
    guess[..n].copy_from_slice(&prev_end.coeffs);

    let out = newton_solve(
        |x| slab_residual(model, space, tau, &prev_end.coeffs, k, x),
        &guess,
        opts,
    )?;
    let coeffs = out.x.chunks(n).map(<[f64]>::to_vec).collect();
    Ok(SlabSolution {
        t_start: t0,
        t_end: t1,
        coeffs,
        newton_iterations: out.iterations,
        residual_norm: out.residual_norm,
    })
}

/// `∫ D(u(t)) dt` over a slab with the `(k+1)`-point Gauss rule.
pub fn slab_dissipation(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    slab: &SlabSolution,
) -> Result<f64> {
    let tq = Quadrature::gauss(slab.degree() + 1)?;
    let mut total = 0.0;
    for (s, w) in tq.iter() {
        total += w * dissipation(model, space, &slab.at(s))?;
    }
    Ok(slab.tau() * total)
}

/// Trajectory and energy ledger of a transient run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transient {
    pub slabs: Vec<SlabSolution>,
    pub ledger: EnergyLedger,
}

impl Transient {
    /// Initial state followed by the end state of every slab.
    pub fn states(&self, initial: &State) -> Vec<State> {
        std::iter::once(initial.clone())
            .chain(self.slabs.iter().map(SlabSolution::end))
            .collect()
    }
}

/// A run that stopped at a failing slab.
#[derive(Debug, Clone)]
pub struct RunFailure {
    /// 1-based index of the slab that could not be solved (0: initial state).
    pub slab: usize,
    pub partial: Transient,
    pub error: Error,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "slab {}: {}", self.slab, self.error)
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Marches dG(k) over every slab of `grid`, recording energy, slab
/// dissipation and the slack of the discrete dissipation inequality.
pub fn run_transient(
    model: &dyn EnergyModel,
    space: &ProductSpace,
    grid: &TimeGrid,
    u0: &State,
    k: usize,
    opts: &NewtonOptions,
) -> std::result::Result<Transient, RunFailure> {
    let mut run = Transient {
        slabs: Vec::with_capacity(grid.n_slabs()),
        ledger: EnergyLedger::default(),
    };
    let fail = |slab, run: Transient, error| RunFailure {
        slab,
        partial: run,
        error,
    };
    let t0 = grid.points()[0];
    let e0 = match check_degree(k).and_then(|_| energy(model, space, u0)) {
        Ok(e) => e,
        Err(e) => return Err(fail(0, run, e)),
    };
    run.ledger.push(LedgerRow::initial(t0, e0));

    let mut prev = State::new(u0.coeffs.clone(), t0);
    let mut e_prev = e0;
    for n in 1..=grid.n_slabs() {
        let step = dg_step(model, space, grid.slab(n), &prev, k, opts).and_then(|slab| {
            let end = slab.end();
            let e = energy(model, space, &end)?;
            let d = slab_dissipation(model, space, &slab)?;
            Ok((slab, end, e, d))
        });
        let (slab, end, e, d) = match step {
            Ok(v) => v,
            Err(err) => return Err(fail(n, run, err)),
        };
        run.ledger.push(LedgerRow {
            step: n,
            t: slab.t_end,
            energy: e,
            dissipation_integral: d,
            slack: e_prev - e - d,
            newton_iters: slab.newton_iterations,
            residual_norm: slab.residual_norm,
        });
        run.slabs.push(slab);
        prev = end;
        e_prev = e;
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::Mesh1D;
    use crate::model::space_for;
    use crate::problems::{make_heat_log, GradientSystem};

    fn decay() -> (GradientSystem, ProductSpace) {
        let g = GradientSystem::quadratic(1, 1.0).unwrap();
        let space = space_for(&g, &GradientSystem::mesh()).unwrap();
        (g, space)
    }

    #[test]
    fn implicit_euler_for_linear_decay() {
        let (g, space) = decay();
        let u0 = State::new(vec![1.0], 0.0);
        // residual tolerance 1e-10 with slope 1/τ + 1 = 11 bounds the error by 1e-11
        let slab = dg_step(&g, &space, (0.0, 0.1), &u0, 0, &NewtonOptions::default()).unwrap();
        assert!((slab.end().coeffs[0] - 1.0 / 1.1).abs() < 1e-11);

        let tight = NewtonOptions {
            tol: 1e-14,
            ..Default::default()
        };
        let grid = TimeGrid::uniform(0.1, 10).unwrap();
        let run = run_transient(&g, &space, &grid, &u0, 0, &tight).unwrap();
        let x = run.slabs.last().unwrap().end().coeffs[0];
        assert!((x - 1.1f64.powi(-10)).abs() < 1e-12);
        assert_eq!(run.ledger.len(), 11);
    }

    #[test]
    fn dg1_is_subdiagonal_pade() {
        // end value of dG(1) for u' = λu: (1 + z/3) / (1 - 2z/3 + z²/6), z = λτ
        let (g, space) = decay();
        let u0 = State::new(vec![1.0], 0.0);
        let tight = NewtonOptions {
            tol: 1e-14,
            ..Default::default()
        };
        let slab = dg_step(&g, &space, (0.0, 0.1), &u0, 1, &tight).unwrap();
        let z: f64 = -0.1;
        let r = (1.0 + z / 3.0) / (1.0 - 2.0 * z / 3.0 + z * z / 6.0);
        assert!((slab.end().coeffs[0] - r).abs() < 1e-12);
        assert_eq!(slab.degree(), 1);
    }

    #[test]
    fn steady_state_is_fixed() {
        let m = make_heat_log();
        let space = space_for(&m, &Mesh1D::uniform(1.0, 8).unwrap()).unwrap();
        let u0 = State::new(vec![1.7; space.n_dofs()], 0.0);
        for k in [0, 1] {
            let slab = dg_step(&m, &space, (0.0, 0.5), &u0, k, &NewtonOptions::default()).unwrap();
            assert_eq!(slab.newton_iterations, 0);
            assert_eq!(slab.end().coeffs, u0.coeffs);
        }
    }

    #[test]
    fn unsupported_degree_and_bad_slabs() {
        let (g, space) = decay();
        let u0 = State::new(vec![1.0], 0.0);
        let opts = NewtonOptions::default();
        assert!(dg_step(&g, &space, (0.0, 0.1), &u0, 2, &opts).is_err());
        assert!(dg_step(&g, &space, (0.1, 0.1), &u0, 0, &opts).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.2, 0.1]).is_err());
        assert!(TimeGrid::uniform(-1.0, 3).is_err());
    }

    #[test]
    fn ledger_slack_is_consistent() {
        let (g, space) = decay();
        let grid = TimeGrid::uniform(0.05, 5).unwrap();
        let run = run_transient(&g, &space, &grid, &State::new(vec![2.0], 0.0), 1, &NewtonOptions::default())
            .unwrap();
        let rows = run.ledger.rows();
        for w in rows.windows(2) {
            assert_eq!(w[1].slack, w[0].energy - w[1].energy - w[1].dissipation_integral);
            assert!(w[1].slack >= -1e-12);
        }
    }

    #[test]
    fn failing_slab_returns_partial_run() {
        // Newton capped at one iteration cannot solve a nonlinear slab
        let m = make_heat_log();
        let space = space_for(&m, &Mesh1D::uniform(1.0, 4).unwrap()).unwrap();
        let u0 = State::new(space.field(0).interpolate(|x| 2.0 + (std::f64::consts::PI * x).cos()), 0.0);
        let opts = NewtonOptions {
            max_iter: 1,
            tol: 1e-14,
            ..Default::default()
        };
        let grid = TimeGrid::uniform(0.01, 3).unwrap();
        let fail = run_transient(&m, &space, &grid, &u0, 0, &opts).unwrap_err();
        assert_eq!(fail.slab, 1);
        assert_eq!(fail.partial.ledger.len(), 1);
        assert!(matches!(fail.error, Error::NewtonDivergence { .. }));
    }
}
