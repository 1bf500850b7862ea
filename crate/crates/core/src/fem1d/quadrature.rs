use crate::error::{Error, Result};

/// Gauss-Legendre rule on the reference element `[0, 1]`.
///
/// An `n`-point rule integrates polynomials of degree `2n - 1` exactly and its
/// weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Quadrature {
    pub fn gauss(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("quadrature needs at least one point"));
        }
        let (nodes, weights) = gauss_legendre(n);
        // map [-1, 1] -> [0, 1]
        let points = nodes.iter().map(|&z| 0.5 * (z + 1.0)).collect();
        let weights = weights.iter().map(|&w| 0.5 * w).collect();
        Ok(Self { points, weights })
    }

    /// Three-point rule used for spatial integrals unless overridden.
    pub fn default_spatial() -> Self {
        Self::gauss(3).expect("three points")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn order(&self) -> usize {
        2 * self.points.len() - 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Nodes (ascending) and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, z);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one() {
        for n in 1..=50 {
            let q = Quadrature::gauss(n).unwrap();
            let s: f64 = q.weights().iter().sum();
            assert!((s - 1.0).abs() < 1e-14, "n = {n}: {s}");
            assert!(q.points().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        for n in 1..=8 {
            let q = Quadrature::gauss(n).unwrap();
            for deg in 0..=q.order() {
                let approx: f64 = q.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = 1.0 / (deg as f64 + 1.0);
                assert!((approx - exact).abs() < 1e-14, "n={n} deg={deg}");
            }
            // one degree beyond is not exact
            let deg = q.order() + 1;
            let approx: f64 = q.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((approx - 1.0 / (deg as f64 + 1.0)).abs() > 1e-12);
        }
    }

    #[test]
    fn known_two_point_rule() {
        let q = Quadrature::gauss(2).unwrap();
        let d = 0.5 / 3f64.sqrt();
        assert!((q.points()[0] - (0.5 - d)).abs() < 1e-15);
        assert!((q.points()[1] - (0.5 + d)).abs() < 1e-15);
        assert!(q.weights().iter().all(|w| (w - 0.5).abs() < 1e-15));
    }

    #[test]
    fn zero_points_rejected() {
        assert!(matches!(Quadrature::gauss(0), Err(Error::Argument(_))));
    }
}
