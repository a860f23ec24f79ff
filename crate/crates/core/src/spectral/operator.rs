//! Galerkin discretization of `T z = z - s(zh, h[j-2], 1[n-j]) / s(h[j-1], 1[n-j])`
//! on even harmonics, in the inner product of the cone measure.

use nalgebra::{DMatrix, Vector2};
use rayon::prelude::*;

use super::measure::{cone_measure_from_jets, positive_jets, ConeMeasure};
use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, generalized_symmetric_eigen};
use crate::sphere::{HarmonicBasis, SphereGrid};

/// Mass matrices with a larger condition estimate are rejected.
pub const MAX_MASS_CONDITION: f64 = 1e12;

#[derive(Clone, Debug)]
pub struct SpectralProblem {
    pub n: usize,
    pub order: usize,
    pub max_degree: usize,
    pub basis: HarmonicBasis,
    pub measure: ConeMeasure,
    /// `<Y_a, T Y_b>` in the symmetric (integrated by parts) form.
    pub stiffness: DMatrix<f64>,
    /// `<Y_a, Y_b>` in the cone measure.
    pub mass: DMatrix<f64>,
    /// `max_b |<1, T Y_b>|`, relative to the largest stiffness entry.
    pub constant_residual: f64,
    /// Asymmetry of the form assembled without integration by parts.
    pub asymmetry: f64,
}

/// Assemble the operator for `j = 2` on even harmonics of degree at most
/// `max_degree`.
pub fn assemble_operator(body: &Body, order: usize, grid: &SphereGrid, max_degree: usize) -> Result<SpectralProblem> {
    let n = grid.n();
    if n != 3 || order != 2 {
        return Err(Error::InvalidParameter(format!(
            "the operator is implemented for n = 3, j = 2 (got n = {n}, j = {order})"
        )));
    }
    if max_degree < 4 || max_degree % 2 == 1 {
        return Err(Error::InvalidParameter(format!("basis degree {max_degree} must be even and >= 4")));
    }
    let hjets = positive_jets(body, grid)?;
    let measure = cone_measure_from_jets(&hjets, order, n, grid);
    let basis = HarmonicBasis::new(n, max_degree, true)?;
    let yjets = basis.sample_jets(grid);
    let k = basis.len();
    let w = grid.weights();
    let rho = measure.weighted(grid);
    // Values and gradients of Y_a h; full jets for the direct form.
    let prod: Vec<Vec<(f64, Vector2<f64>, f64)>> = yjets
        .par_iter()
        .map(|ya| {
            ya.iter()
                .zip(&hjets)
                .map(|(y, h)| {
                    let m = y.mul(h);
                    (m.value, m.grad, m.hess.trace())
                })
                .collect()
        })
        .collect();
    let nf = n as f64;
    let nm1 = (n - 1) as f64;
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut mrow = vec![0.0; k];
            let mut srow = vec![0.0; k];
            let mut drow = vec![0.0; k];
            for b in 0..k {
                let mut m = 0.0;
                let mut dir = 0.0;
                let mut mixed = 0.0;
                for i in 0..grid.len() {
                    let (fa, ga, _) = prod[a][i];
                    let (fb, gb, tb) = prod[b][i];
                    m += rho[i] * yjets[a][i].value * yjets[b][i].value;
                    dir += w[i] * (nm1 * fa * fb - ga.dot(&gb));
                    mixed += w[i] * fa * tb;
                }
                mrow[b] = m;
                srow[b] = m - dir / (nf * nm1);
                drow[b] = m - mixed / (nf * nm1);
            }
            (mrow, srow, drow)
        })
        .collect();
    let mut mass = DMatrix::zeros(k, k);
    let mut stiffness = DMatrix::zeros(k, k);
    let mut direct = DMatrix::zeros(k, k);
    for (a, (m, s, d)) in rows.into_iter().enumerate() {
        for b in 0..k {
            mass[(a, b)] = m[b];
            stiffness[(a, b)] = s[b];
            direct[(a, b)] = d[b];
        }
    }
    stiffness = (&stiffness + stiffness.transpose()) * 0.5;
    let scale = stiffness.abs().max().max(f64::MIN_POSITIVE);
    let c0 = constant_index(&basis)?;
    let constant_residual = stiffness.row(c0).abs().max() / scale;
    let asymmetry = (&direct - direct.transpose()).abs().max() / scale;
    Ok(SpectralProblem { n, order, max_degree, basis, measure, stiffness, mass, constant_residual, asymmetry })
}

fn constant_index(basis: &HarmonicBasis) -> Result<usize> {
    basis
        .indices()
        .iter()
        .position(|&(l, _)| l == 0)
        .ok_or_else(|| Error::InvalidParameter("basis lacks the constant".into()))
}

/// Generalized eigenpairs on the even, mean-zero subspace.
#[derive(Clone, Debug)]
pub struct EvenSpectrum {
    pub values: Vec<f64>,
    /// Eigenvectors in the deflated basis (constant removed), columns.
    pub vectors: DMatrix<f64>,
    pub mass_condition: f64,
}

impl SpectralProblem {
    /// Deflate the constant: `Y_a - <Y_a, 1> / <1, 1>` for the
    /// nonconstant basis functions.
    pub fn deflated(&self) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        let c0 = constant_index(&self.basis)?;
        let keep: Vec<usize> = (0..self.basis.len()).filter(|&a| a != c0).collect();
        let m00 = self.mass[(c0, c0)];
        let r = keep.len();
        let mut a = DMatrix::zeros(r, r);
        let mut b = DMatrix::zeros(r, r);
        let coef: Vec<f64> = keep.iter().map(|&x| self.mass[(x, c0)] / m00).collect();
        for (p, &x) in keep.iter().enumerate() {
            for (q, &y) in keep.iter().enumerate() {
                b[(p, q)] = self.mass[(x, y)] - self.mass[(x, c0)] * self.mass[(c0, y)] / m00;
                a[(p, q)] = self.stiffness[(x, y)] - coef[p] * self.stiffness[(c0, y)] - coef[q] * self.stiffness[(x, c0)]
                    + coef[p] * coef[q] * self.stiffness[(c0, c0)];
            }
        }
        Ok((a, b))
    }

    pub fn even_spectrum(&self) -> Result<EvenSpectrum> {
        let (a, b) = self.deflated()?;
        let (_, cond) = cholesky(&b)?;
        if cond > MAX_MASS_CONDITION {
            return Err(Error::IllConditionedMass(cond));
        }
        let (values, vectors) = generalized_symmetric_eigen(&a, &b)?;
        Ok(EvenSpectrum { values, vectors, mass_condition: cond })
    }
}

/// Smallest eigenvalue on even fields orthogonal to the constants.
pub fn lambda_1e(problem: &SpectralProblem) -> Result<f64> {
    Ok(problem.even_spectrum()?.values[0])
}
