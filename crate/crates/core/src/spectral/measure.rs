//! The cone-type measure `dV = (1/n) h s(h[j-1], 1[n-j]) dH`.

use rayon::prelude::*;

use crate::bodies::{min_eigenvalue, Body};
use crate::curvature::curvature_value;
use crate::error::{Error, Result};
use crate::sphere::{Jet, SmoothField, SphereGrid};

#[derive(Clone, Debug)]
pub struct ConeMeasure {
    pub order: usize,
    /// Density per node (without quadrature weight).
    pub density: Vec<f64>,
    pub mass: f64,
}

impl ConeMeasure {
    /// Density times quadrature weight.
    pub fn weighted(&self, grid: &SphereGrid) -> Vec<f64> {
        self.density.iter().zip(grid.weights()).map(|(d, w)| d * w).collect()
    }
}

/// Jets of a smooth body on the grid, rejecting bodies whose `A h` is not
/// positive definite at some node.
pub fn positive_jets(body: &Body, grid: &SphereGrid) -> Result<Vec<Jet>> {
    if !body.is_smooth() {
        return Err(Error::NotSmooth("spectral quantities need a smooth body".into()));
    }
    if body.n() != grid.n() {
        return Err(Error::SizeMismatch("body and grid dimensions differ".into()));
    }
    let d = grid.tangent_dim();
    let jets = (0..grid.len())
        .into_par_iter()
        .map(|i| body.jet_at(&grid.node(i), grid.frame(i), d))
        .collect::<Result<Vec<Jet>>>()?;
    for (i, j) in jets.iter().enumerate() {
        let m = min_eigenvalue(j);
        if m <= 0.0 || j.value <= 0.0 {
            return Err(Error::InvalidBody(format!("A h is not positive definite at node {i} (eigenvalue {m:.3e})")));
        }
    }
    Ok(jets)
}

pub fn cone_measure_from_jets(jets: &[Jet], order: usize, n: usize, grid: &SphereGrid) -> ConeMeasure {
    let density: Vec<f64> = jets.iter().map(|j| j.value * curvature_value(j, order - 1) / n as f64).collect();
    let mass = grid.integrate(&density);
    ConeMeasure { order, density, mass }
}

pub fn cone_measure(body: &Body, order: usize, grid: &SphereGrid) -> Result<ConeMeasure> {
    let n = grid.n();
    if order == 0 || order > n {
        return Err(Error::InvalidParameter(format!("order {order} must lie in 1..={n}")));
    }
    let jets = positive_jets(body, grid)?;
    Ok(cone_measure_from_jets(&jets, order, n, grid))
}
