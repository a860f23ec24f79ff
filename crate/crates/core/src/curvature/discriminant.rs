//! Mixed discriminants of symmetric matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest size handled by the polarization sum.
pub const MAX_POLARIZATION_SIZE: usize = 6;

fn check(mats: &[DMatrix<f64>], size: usize) -> Result<()> {
    for (k, m) in mats.iter().enumerate() {
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::SizeMismatch(format!(
                "argument {k} is {}x{}, expected {size}x{size}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(())
}

fn minor(m: &DMatrix<f64>, i: usize, k: usize) -> DMatrix<f64> {
    m.clone().remove_row(i).remove_column(k)
}

/// `D_N(A^1, ..., A^N)`, normalized so that `D_N(A, ..., A) = det A`.
/// Uses the cofactor recursion up to size 3 and polarization above.
pub fn mixed_discriminant(mats: &[DMatrix<f64>]) -> Result<f64> {
    if mats.len() <= 3 {
        mixed_discriminant_cofactor(mats)
    } else {
        mixed_discriminant_polarization(mats)
    }
}

/// Cofactor recursion `D_N = sum_{i,k} A^1_{ik} Q^{ik}(A^2, ..., A^N)`.
pub fn mixed_discriminant_cofactor(mats: &[DMatrix<f64>]) -> Result<f64> {
    let n = mats.len();
    if n == 0 {
        return Err(Error::SizeMismatch("mixed discriminant needs at least one matrix".into()));
    }
    check(mats, n)?;
    if n == 1 {
        return Ok(mats[0][(0, 0)]);
    }
    let q = cofactor_operator(&mats[1..])?;
    Ok(mats[0].component_mul(&q).sum())
}

/// `Q^{ik}(A^2, ..., A^N) = (-1)^{i+k} / N * D_{N-1}(minors at (i, k))` for
/// `N - 1` matrices of size `N`.
pub fn cofactor_operator(mats: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let n = mats.len() + 1;
    if mats.is_empty() {
        return Err(Error::SizeMismatch("cofactor operator needs at least one matrix".into()));
    }
    check(mats, n)?;
    let mut q = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            let minors: Vec<DMatrix<f64>> = mats.iter().map(|m| minor(m, i, k)).collect();
            let sign = if (i + k) % 2 == 0 { 1.0 } else { -1.0 };
            q[(i, k)] = sign / n as f64 * mixed_discriminant_cofactor(&minors)?;
        }
    }
    Ok(q)
}

/// Polarization `D_N = (1/N!) sum_{S} (-1)^{N-|S|} det(sum_{k in S} A^k)`.
pub fn mixed_discriminant_polarization(mats: &[DMatrix<f64>]) -> Result<f64> {
    let n = mats.len();
    if n == 0 || n > MAX_POLARIZATION_SIZE {
        return Err(Error::SizeMismatch(format!(
            "polarization handles 1..={MAX_POLARIZATION_SIZE} matrices, got {n}"
        )));
    }
    check(mats, n)?;
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut sum = DMatrix::zeros(n, n);
        for (k, m) in mats.iter().enumerate() {
            if mask & (1 << k) != 0 {
                sum += m;
            }
        }
        let sign = if (n as u32 - mask.count_ones()) % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * sum.determinant();
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    Ok(total / factorial)
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Normalized elementary symmetric polynomial `e_j(x) / C(len, j)`.
pub fn normalized_elementary(x: &[f64], j: usize) -> f64 {
    let mut e = vec![0.0; j + 1];
    e[0] = 1.0;
    for &v in x {
        for k in (1..=j.min(x.len())).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e[j] / binomial(x.len(), j)
}
