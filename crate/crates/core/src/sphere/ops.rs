//! Tangential differential operators on grid-sampled smooth fields.

use nalgebra::{DMatrix, Matrix2, Vector3};

use super::grid::SphereGrid;
use super::harmonics::{HarmonicBasis, HarmonicExpansion};
use super::jet::Jet;
use crate::error::{Error, Result};

/// A field on the sphere whose 1-homogeneous extension has analytic second
/// derivatives.
pub trait SmoothField {
    fn dimension(&self) -> usize;

    /// Jet at the unit vector `u` in the tangent frame `frame`.
    fn jet_at(&self, u: &Vector3<f64>, frame: &[Vector3<f64>; 2], d: usize) -> Result<Jet>;
}

impl SmoothField for HarmonicExpansion {
    fn dimension(&self) -> usize {
        self.n()
    }

    fn jet_at(&self, u: &Vector3<f64>, frame: &[Vector3<f64>; 2], d: usize) -> Result<Jet> {
        Ok(self.jet(u, frame, d))
    }
}

fn check_dims(f: &dyn SmoothField, grid: &SphereGrid) -> Result<()> {
    if f.dimension() != grid.n() {
        return Err(Error::SizeMismatch(format!("field in R^{} on a grid in R^{}", f.dimension(), grid.n())));
    }
    Ok(())
}

/// Jets of `f` at every node.
pub fn sample_jets(f: &dyn SmoothField, grid: &SphereGrid) -> Result<Vec<Jet>> {
    check_dims(f, grid)?;
    let d = grid.tangent_dim();
    (0..grid.len()).map(|i| f.jet_at(&grid.node(i), grid.frame(i), d)).collect()
}

/// Spherical gradient as ambient tangent vectors.
pub fn spherical_gradient(f: &dyn SmoothField, grid: &SphereGrid) -> Result<Vec<Vector3<f64>>> {
    let jets = sample_jets(f, grid)?;
    Ok(jets
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let fr = grid.frame(i);
            let mut v = fr[0] * j.grad[0];
            if j.d == 2 {
                v += fr[1] * j.grad[1];
            }
            v
        })
        .collect())
}

/// `A f = Hess f + f I` in each node's frame (upper-left `(n-1) x (n-1)` block).
pub fn hessian_operator(f: &dyn SmoothField, grid: &SphereGrid) -> Result<Vec<Matrix2<f64>>> {
    Ok(sample_jets(f, grid)?.into_iter().map(|j| j.hess).collect())
}

/// Eigenvalues of `-Laplacian` on harmonics up to `max_degree`, assembled
/// by Galerkin from the traces of `A f`, ascending.
pub fn laplacian_spectrum(grid: &SphereGrid, max_degree: usize, even_only: bool) -> Result<Vec<f64>> {
    let basis = HarmonicBasis::new(grid.n(), max_degree, even_only)?;
    let jets = basis.sample_jets(grid);
    let k = basis.len();
    let nm1 = grid.tangent_dim() as f64;
    let mut stiff = DMatrix::zeros(k, k);
    let mut mass = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let s = grid.integrate_fn(|i| {
                let lap_b = jets[b][i].hess.trace() - nm1 * jets[b][i].value;
                -jets[a][i].value * lap_b
            });
            let m = grid.integrate_fn(|i| jets[a][i].value * jets[b][i].value);
            stiff[(a, b)] = s;
            stiff[(b, a)] = s;
            mass[(a, b)] = m;
            mass[(b, a)] = m;
        }
    }
    crate::linalg::generalized_symmetric_eigenvalues(&stiff, &mass)
}
