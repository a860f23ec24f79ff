//! Second variation of `V_j(h (1 + t z)^{1/p})^{p/j}` against its
//! spectral form.

use nalgebra::DVector;

use super::measure::{cone_measure_from_jets, positive_jets};
use super::operator::SpectralProblem;
use crate::bodies::Body;
use crate::curvature::curvature_value;
use crate::error::{Error, Result};
use crate::sphere::{HarmonicExpansion, Jet, SphereGrid};

/// Default finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-2;
const MIN_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondDerivativeCheck {
    /// Central second difference, Richardson-extrapolated twice.
    pub finite_difference: f64,
    /// Closed form from the operator and the cone measure.
    pub spectral: f64,
    /// `|fd - spectral| / max(|fd|, |spectral|)`, zero when both vanish
    /// below `1e-8`.
    pub discrepancy: f64,
}

/// `V_j(f) / d_{n,j}` for the field with jets `f`.
fn normalized_volume(jets: &[Jet], order: usize, n: usize, grid: &SphereGrid) -> f64 {
    grid.integrate_fn(|i| jets[i].value * curvature_value(&jets[i], order - 1)) / n as f64
}

fn perturbed(h: &[Jet], z: &[Jet], t: f64, p: f64) -> Result<Vec<Jet>> {
    h.iter()
        .zip(z)
        .map(|(hj, zj)| {
            let mut w = zj.scale(t);
            w.value += 1.0;
            w.hess += crate::sphere::eye(w.d);
            if w.value <= 0.0 {
                return Err(Error::InvalidParameter(format!("1 + t z vanishes at step {t}")));
            }
            let e = 1.0 / p;
            let phi = w.value.powf(e);
            let dphi = e * w.value.powf(e - 1.0);
            let ddphi = e * (e - 1.0) * w.value.powf(e - 2.0);
            Ok(hj.mul(&w.compose(phi, dphi, ddphi)))
        })
        .collect()
}

/// Compare the finite-difference second derivative in `t` of
/// `(V_j(h (1 + t z)^{1/p}) / d_{n,j})^{p/j}` with
/// `W^{(p-j)/j} / p * ((j - p) |z0|^2 - (j - 1) <z0, T z0>)`, where
/// `W = V_j / d_{n,j}` and `z0` is `z` minus its cone-measure mean.
pub fn second_derivative_identity_check(
    body: &Body,
    order: usize,
    p: f64,
    z: &HarmonicExpansion,
    problem: &SpectralProblem,
    grid: &SphereGrid,
    step: f64,
) -> Result<SecondDerivativeCheck> {
    if p == 0.0 {
        return Err(Error::InvalidParameter("the identity needs p != 0".into()));
    }
    if step < MIN_STEP {
        return Err(Error::StepUnderflow(step));
    }
    if z.max_degree() > problem.max_degree {
        return Err(Error::InvalidParameter("z has degree above the operator basis".into()));
    }
    let n = grid.n();
    let jf = order as f64;
    let hjets = positive_jets(body, grid)?;
    let d = grid.tangent_dim();
    let zjets: Vec<Jet> = (0..grid.len()).map(|i| z.jet(&grid.node(i), grid.frame(i), d)).collect();
    let g = |t: f64| -> Result<f64> {
        let f = perturbed(&hjets, &zjets, t, p)?;
        Ok(normalized_volume(&f, order, n, grid).powf(p / jf))
    };
    let g0 = g(0.0)?;
    let second = |t: f64| -> Result<f64> { Ok((g(t)? - 2.0 * g0 + g(-t)?) / (t * t)) };
    // Two Richardson levels over steps t, t/2, t/4.
    let fd = (64.0 * second(step / 4.0)? - 20.0 * second(step / 2.0)? + second(step)?) / 45.0;

    // Spectral side in the harmonic basis.
    let coeffs = DVector::from_iterator(
        problem.basis.len(),
        problem.basis.indices().iter().map(|&(l, m)| z.coefficient(l, m)),
    );
    let measure = cone_measure_from_jets(&hjets, order, n, grid);
    let w = measure.mass;
    let c0 = problem.basis.indices().iter().position(|&(l, _)| l == 0).unwrap();
    // Projection onto the constants in the cone-measure inner product.
    let mut z0 = coeffs;
    z0[c0] -= (problem.mass.row(c0) * &z0)[0] / problem.mass[(c0, c0)];
    let quad = (z0.transpose() * &problem.mass * &z0)[0];
    let form = (z0.transpose() * &problem.stiffness * &z0)[0];
    let spectral = w.powf((p - jf) / jf) / p * ((jf - p) * quad - (jf - 1.0) * form);
    let scale = fd.abs().max(spectral.abs());
    let discrepancy = if scale < 1e-8 { 0.0 } else { (fd - spectral).abs() / scale };
    Ok(SecondDerivativeCheck { finite_difference: fd, spectral, discrepancy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::assemble_operator;
    use crate::sphere::HarmonicTerm;

    #[test]
    fn ball_with_quadrupole() {
        let grid = SphereGrid::new(3, 16).unwrap();
        let ball = Body::ball(3, 1.0).unwrap();
        let prob = assemble_operator(&ball, 2, &grid, 6).unwrap();
        let z = HarmonicExpansion::new(3, &[HarmonicTerm { degree: 2, order: 1, value: 0.7 }]).unwrap();
        for p in [0.5, -0.5] {
            let c = second_derivative_identity_check(&ball, 2, p, &z, &prob, &grid, DEFAULT_STEP).unwrap();
            assert!(c.discrepancy < 1e-5, "p={p}: {c:?}");
        }
        let one = HarmonicExpansion::constant(3, 2.0).unwrap();
        let c = second_derivative_identity_check(&ball, 2, 0.5, &one, &prob, &grid, DEFAULT_STEP).unwrap();
        assert!(c.finite_difference.abs() < 1e-8 && c.spectral.abs() < 1e-8, "{c:?}");
        assert!(matches!(
            second_derivative_identity_check(&ball, 2, 0.5, &z, &prob, &grid, 1e-9),
            Err(Error::StepUnderflow(_))
        ));
    }
}
