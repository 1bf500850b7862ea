//! Comparisons against independently coded reference computations.

use std::f64::consts::PI;

use dissipative_core::fem1d::{
    assemble_residual, l2_project, FESpace, FieldSpec, Mesh1D, Quadrature, SpaceKind,
};
use dissipative_core::problems::{make_heat_log, make_porous_medium};
use dissipative_core::timestep::{dg_step, fd_jacobian, slab_residual, NewtonOptions};
use dissipative_core::{dissipation, space_for, State};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gauss-Legendre rule on [0, 1] from the eigen-decomposition of the Jacobi
/// matrix.
fn golub_welsch(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k - 1, k)] = b;
        j[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (eig.eigenvalues[i] + 1.0), v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// ∫₀ᴸ f over `n` uniform cells with the 50-point oracle rule.
fn dense_integral(length: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let (pts, wts) = golub_welsch(50);
    let h = length / n as f64;
    let mut total = 0.0;
    for e in 0..n {
        for (s, w) in pts.iter().zip(&wts) {
            total += w * h * f((e as f64 + s) * h);
        }
    }
    total
}

/// Value and slope of the P1 interpolant of nodal values at `x`.
fn p1_eval(nodal: &[f64], h: f64, x: f64) -> (f64, f64) {
    let n = nodal.len() - 1;
    let e = ((x / h).ceil() as usize).clamp(1, n) - 1;
    let s = x / h - e as f64;
    let slope = (nodal[e + 1] - nodal[e]) / h;
    (nodal[e] + s * (nodal[e + 1] - nodal[e]), slope)
}

#[test]
fn gauss_rule_matches_eigenvalue_construction() {
    for n in [1, 2, 3, 5, 8, 20, 50] {
        let (pts, wts) = golub_welsch(n);
        let q = Quadrature::gauss(n).unwrap();
        for i in 0..n {
            assert!((q.points()[i] - pts[i]).abs() < 1e-13, "n={n} point {i}");
            assert!((q.weights()[i] - wts[i]).abs() < 1e-13, "n={n} weight {i}");
        }
    }
}

#[test]
fn porous_medium_dissipation_matches_dense_quadrature() {
    for m in [2.0, 3.0] {
        let model = make_porous_medium(m).unwrap();
        let nx = 8;
        let mesh = Mesh1D::uniform(1.0, nx).unwrap();
        let space = space_for(&model, &mesh).unwrap();
        let nodal: Vec<f64> = (0..=nx)
            .map(|i| 1.0 + 0.25 * (2.0 * PI * i as f64 / nx as f64).sin())
            .collect();
        let got = dissipation(&model, &space, &State::new(nodal.clone(), 0.0)).unwrap();
        let c = m / (m - 1.0);
        let h = 1.0 / nx as f64;
        let oracle = dense_integral(1.0, nx, |x| {
            let (rho, d) = p1_eval(&nodal, h, x);
            let flux = c * (m - 1.0) * rho.powf(m - 2.0) * d;
            rho * flux * flux
        });
        assert!((got - oracle).abs() < 1e-12 * (1.0 + oracle), "m={m}: {got} vs {oracle}");
    }
}

#[test]
fn heat_residual_matches_hand_assembly() {
    let model = make_heat_log();
    let nx = 6;
    let mesh = Mesh1D::uniform(1.0, nx).unwrap();
    let space = space_for(&model, &mesh).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u: Vec<f64> = (0..=nx).map(|_| rng.random_range(0.5..2.0)).collect();
    let udot: Vec<f64> = (0..=nx).map(|_| rng.random_range(-1.0..1.0)).collect();
    let got = assemble_residual(
        &model,
        &space,
        &State::new(u.clone(), 0.0),
        &State::new(udot.clone(), 0.0),
    )
    .unwrap();

    // same three-point rule, coded from its closed form
    let r = 15f64.sqrt() / 10.0;
    let rule = [(0.5 - r, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + r, 5.0 / 18.0)];
    let h = 1.0 / nx as f64;
    let mut oracle = vec![0.0; nx + 1];
    for e in 0..nx {
        for (s, w) in rule {
            let uv = u[e] * (1.0 - s) + u[e + 1] * s;
            let du = (u[e + 1] - u[e]) / h;
            let rv = udot[e] * (1.0 - s) + udot[e + 1] * s;
            for (local, (phi, dphi)) in [(1.0 - s, -1.0 / h), (s, 1.0 / h)].into_iter().enumerate() {
                let q = -rv * phi / (uv * uv);
                let a = -2.0 * du * du * phi / uv.powi(3) + du * dphi / (uv * uv);
                oracle[e + local] += w * h * (q - a);
            }
        }
    }
    for (g, o) in got.iter().zip(&oracle) {
        assert!((g - o).abs() < 1e-12, "{g} vs {o}");
    }
}

#[test]
fn l2_projection_solves_normal_equations() {
    let nx = 4;
    let mesh = Mesh1D::uniform(1.0, nx).unwrap();
    let space = FESpace::new(mesh, FieldSpec::natural(SpaceKind::P1Continuous)).unwrap();
    let got = l2_project(&space, |x| x * x, &Quadrature::default_spatial()).unwrap();

    let h = 1.0 / nx as f64;
    let mut mass = DMatrix::<f64>::zeros(nx + 1, nx + 1);
    for e in 0..nx {
        mass[(e, e)] += h / 3.0;
        mass[(e + 1, e + 1)] += h / 3.0;
        mass[(e, e + 1)] += h / 6.0;
        mass[(e + 1, e)] += h / 6.0;
    }
    let rhs = DVector::from_iterator(
        nx + 1,
        (0..=nx).map(|i| {
            let xi = i as f64 * h;
            dense_integral(1.0, nx, |x| x * x * (1.0 - (x - xi).abs() / h).max(0.0))
        }),
    );
    let oracle = mass.lu().solve(&rhs).unwrap();
    for (g, o) in got.iter().zip(oracle.iter()) {
        assert!((g - o).abs() < 1e-12, "{g} vs {o}");
    }
}

#[test]
fn slab_jacobian_matches_forward_differences() {
    let model = make_heat_log();
    let nx = 5;
    let space = space_for(&model, &Mesh1D::uniform(1.0, nx).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let prev: Vec<f64> = (0..=nx).map(|_| rng.random_range(0.8..1.5)).collect();
    for k in [0, 1] {
        let n = space.n_dofs();
        let mut x: Vec<f64> = prev.iter().map(|v| v + rng.random_range(-0.1..0.1)).collect();
        if k == 1 {
            x.extend((0..n).map(|_| rng.random_range(-0.05..0.05)));
        }
        let mut res = |y: &[f64]| slab_residual(&model, &space, 0.01, &prev, k, y);
        let jac = fd_jacobian(&mut res, &x, 1e-7).unwrap();
        let r0 = res(&x).unwrap();
        let h = 1e-7;
        for j in 0..x.len() {
            let mut xp = x.clone();
            xp[j] += h;
            let rp = res(&xp).unwrap();
            for i in 0..r0.len() {
                let fwd = (rp[i] - r0[i]) / h;
                assert!(
                    (jac[(i, j)] - fwd).abs() < 1e-5 * (1.0 + fwd.abs()),
                    "k={k} ({i},{j}): {} vs {fwd}",
                    jac[(i, j)]
                );
            }
        }
    }
}

/// Backward Euler for ρₜ = (ρ²)ₓₓ with P1 elements, written out by hand:
/// `∫ 2 (ρ - ρ⁰)/τ φᵢ + 4 ρ ρ' φᵢ' = 0`.
fn pme_backward_euler(prev: &[f64], tau: f64) -> Vec<f64> {
    let nx = prev.len() - 1;
    let h = 1.0 / nx as f64;
    let (pts, wts) = golub_welsch(3);
    let residual = |rho: &[f64]| -> DVector<f64> {
        let mut r = DVector::zeros(nx + 1);
        for e in 0..nx {
            let d = (rho[e + 1] - rho[e]) / h;
            for (s, w) in pts.iter().zip(&wts) {
                let v = rho[e] * (1.0 - s) + rho[e + 1] * s;
                let v0 = prev[e] * (1.0 - s) + prev[e + 1] * s;
                for (local, (phi, dphi)) in [(1.0 - s, -1.0 / h), (*s, 1.0 / h)].into_iter().enumerate() {
                    r[e + local] += w * h * (2.0 * (v - v0) / tau * phi + 4.0 * v * d * dphi);
                }
            }
        }
        r
    };
    let mut rho = prev.to_vec();
    for _ in 0..30 {
        let r = residual(&rho);
        if r.amax() < 1e-15 {
            break;
        }
        let mut jac = DMatrix::zeros(nx + 1, nx + 1);
        for j in 0..=nx {
            let step = 1e-6;
            let mut p = rho.clone();
            p[j] += step;
            let mut m = rho.clone();
            m[j] -= step;
            jac.set_column(j, &((residual(&p) - residual(&m)) / (2.0 * step)));
        }
        let delta = jac.lu().solve(&r).unwrap();
        for (x, d) in rho.iter_mut().zip(delta.iter()) {
            *x -= d;
        }
    }
    rho
}

#[test]
fn porous_medium_step_matches_hand_coded_backward_euler() {
    let model = make_porous_medium(2.0).unwrap();
    let nx = 8;
    let space = space_for(&model, &Mesh1D::uniform(1.0, nx).unwrap()).unwrap();
    let u0: Vec<f64> = (0..=nx)
        .map(|i| 1.0 + 0.5 * (PI * i as f64 / nx as f64).sin())
        .collect();
    let slab = dg_step(
        &model,
        &space,
        (0.0, 0.01),
        &State::new(u0.clone(), 0.0),
        0,
        &NewtonOptions::default(),
    )
    .unwrap();
    let oracle = pme_backward_euler(&u0, 0.01);
    let got = slab.end().coeffs;
    let err = got.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "max deviation {err}");
}
