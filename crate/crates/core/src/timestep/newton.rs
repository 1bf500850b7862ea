use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Absolute tolerance on the residual 2-norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative perturbation for the central-difference Jacobian.
    pub fd_eps: f64,
    /// Maximum number of step halvings in the line search.
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 50,
            fd_eps: 1e-7,
            max_halvings: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_norm: f64,
    /// Residual norm of every accepted iterate, starting with the guess.
    pub trace: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Central-difference Jacobian, column `j` perturbed by `eps (1 + |x_j|)`.
pub fn fd_jacobian<F>(residual: &mut F, x: &[f64], eps: f64) -> Result<DMatrix<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let n = x.len();
    let mut jac: Option<DMatrix<f64>> = None;
    let mut xp = x.to_vec();
    for j in 0..n {
        let step = eps * (1.0 + x[j].abs());
        let (up, down) = (x[j] + step, x[j] - step);
        xp[j] = up;
        let rp = residual(&xp)?;
        xp[j] = down;
        let rm = residual(&xp)?;
        xp[j] = x[j];
        // actual spacing of the representable perturbed points
        let width = up - down;
        let m = jac.get_or_insert_with(|| DMatrix::zeros(rp.len(), n));
        for (i, (a, b)) in rp.iter().zip(&rm).enumerate() {
            m[(i, j)] = (a - b) / width;
        }
    }
    Ok(jac.unwrap_or_else(|| DMatrix::zeros(0, 0)))
}

/// Damped Newton iteration with finite-difference Jacobian.
///
/// Each step is halved until the Armijo condition
/// `‖r(x + α δ)‖ ≤ (1 - 10⁻⁴ α) ‖r(x)‖` holds. Evaluation points where the
/// residual reports an admissibility violation count as rejected trials.
pub fn newton_solve<F>(mut residual: F, guess: &[f64], opts: &NewtonOptions) -> Result<NewtonOutcome>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let mut x = guess.to_vec();
    let mut r = residual(&x)?;
    let mut rnorm = norm(&r);
    let mut trace = vec![rnorm];
    let diverged = |iterations, residual_norm, reason: String, trace: &Vec<f64>| {
        Error::NewtonDivergence {
            iterations,
            residual_norm,
            reason,
            trace: trace.clone(),
        }
    };

    for it in 0..opts.max_iter {
        if rnorm <= opts.tol {
            return Ok(NewtonOutcome {
                x,
                iterations: it,
                residual_norm: rnorm,
                trace,
            });
        }
        if !rnorm.is_finite() {
            return Err(diverged(it, rnorm, "non-finite residual".into(), &trace));
        }
        let jac = fd_jacobian(&mut residual, &x, opts.fd_eps)?;
        let rhs = DVector::from_iterator(r.len(), r.iter().map(|v| -v));
        let delta = jac
            .lu()
            .solve(&rhs)
            .filter(|d| d.iter().all(|v| v.is_finite()))
            .ok_or_else(|| diverged(it, rnorm, "singular Jacobian".into(), &trace))?;

        let mut alpha = 1.0;
        let mut accepted = None;
        let mut last_err = None;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + alpha * d).collect();
            match residual(&trial) {
                Ok(rt) => {
                    let nt = norm(&rt);
                    if nt <= (1.0 - 1e-4 * alpha) * rnorm {
                        accepted = Some((trial, rt, nt));
                        break;
                    }
                    last_err = None;
                }
                Err(e) if e.is_admissibility() => last_err = Some(e),
                Err(e) => return Err(e),
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((xt, rt, nt)) => {
                x = xt;
                r = rt;
                rnorm = nt;
                trace.push(rnorm);
            }
            None => {
                return Err(last_err.unwrap_or_else(|| {
                    diverged(it + 1, rnorm, "line search failed".into(), &trace)
                }))
            }
        }
    }
    if rnorm <= opts.tol {
        return Ok(NewtonOutcome {
            x,
            iterations: opts.max_iter,
            residual_norm: rnorm,
            trace,
        });
    }
    Err(diverged(
        opts.max_iter,
        rnorm,
        "maximum number of iterations reached".into(),
        &trace,
    ))
}
