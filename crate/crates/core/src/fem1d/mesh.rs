use crate::error::{Error, Result};

/// Uniform partition of `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    length: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn uniform(length: f64, n_elements: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::argument(format!(
                "domain length must be positive, got {length}"
            )));
        }
        if n_elements == 0 {
            return Err(Error::argument("mesh needs at least one element"));
        }
        let h = length / n_elements as f64;
        let mut nodes: Vec<f64> = (0..=n_elements).map(|i| i as f64 * h).collect();
        nodes[n_elements] = length;
        Ok(Self { length, nodes })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Element width.
    pub fn h(&self) -> f64 {
        self.length / self.n_elements() as f64
    }

    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    /// Maps reference coordinate `s` in `[0, 1]` of element `e` to physical space.
    pub fn map_point(&self, e: usize, s: f64) -> f64 {
        let (a, b) = self.element_bounds(e);
        a + s * (b - a)
    }

    /// Element containing `x`. A shared node belongs to the element on its left.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if !(0.0..=self.length).contains(&x) {
            return Err(Error::argument(format!(
                "point {x} outside the domain [0, {}]",
                self.length
            )));
        }
        let n = self.n_elements();
        let e = ((x / self.h()).ceil() as usize).saturating_sub(1).min(n - 1);
        let (a, b) = self.element_bounds(e);
        Ok((e, (x - a) / (b - a)))
    }

    /// Every element split in two.
    pub fn refined(&self) -> Self {
        Self::uniform(self.length, 2 * self.n_elements()).expect("refining a valid mesh")
    }
}

pub fn build_uniform_mesh(length: f64, n_elements: usize) -> Result<Mesh1D> {
    Mesh1D::uniform(length, n_elements)
}
