//! Dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Cholesky factor of a symmetric positive definite matrix, with an
/// estimate of its condition number from the diagonal of the factor.
pub fn cholesky(mass: &DMatrix<f64>) -> Result<(nalgebra::Cholesky<f64, nalgebra::Dyn>, f64)> {
    let chol = mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::EigenFailure("matrix is not positive definite".into()))?;
    let diag = chol.l_dirty().diagonal();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in diag.iter() {
        lo = lo.min(v.abs());
        hi = hi.max(v.abs());
    }
    Ok((chol, (hi / lo).powi(2)))
}

/// Eigenpairs of `A x = mu B x` for symmetric `A` and SPD `B`, eigenvalues
/// ascending; eigenvectors are `B`-orthonormal columns.
pub fn generalized_symmetric_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::SizeMismatch("generalized eigenproblem shapes".into()));
    }
    let (chol, _) = cholesky(b)?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::EigenFailure("singular Cholesky factor".into()))?;
    let mut c = &linv * a * linv.transpose();
    c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure("non-finite eigenvalue".into()));
    }
    let lt_inv = linv.transpose();
    let mut vectors = DMatrix::zeros(a.nrows(), order.len());
    for (col, &i) in order.iter().enumerate() {
        let v: DVector<f64> = &lt_inv * eig.eigenvectors.column(i);
        vectors.set_column(col, &v);
    }
    Ok((values, vectors))
}

pub fn generalized_symmetric_eigenvalues(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Vec<f64>> {
    Ok(generalized_symmetric_eigen(a, b)?.0)
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let hi = sv.iter().cloned().fold(0.0, f64::max);
    let lo = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_eigen_of_scaled_identity() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 6.0]);
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
        let (v, x) = generalized_symmetric_eigen(&a, &b).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-15 && (v[1] - 3.0).abs() < 1e-15);
        let g = x.transpose() * &b * &x;
        assert!((g - DMatrix::identity(2, 2)).norm() < 1e-14);
    }
}
