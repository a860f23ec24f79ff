//! Real spherical harmonics as homogeneous harmonic polynomials.
//!
//! On S^2 the harmonic of degree `l`, order `m` (`|m| <= l`) uses the usual
//! real convention: `m > 0` cosine type, `m < 0` sine type. On S^1 degree
//! `k > 0` has orders `+k` (cos k t) and `-k` (sin k t). All are orthonormal
//! in L^2 of the sphere.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::grid::SphereGrid;
use super::jet::{eye, Jet};
use super::poly::Poly;
use crate::error::{Error, Result};

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Real part (`sine = false`) or imaginary part of `(x + i y)^m`.
fn planar_part(m: usize, sine: bool) -> Poly {
    let mut map = BTreeMap::new();
    for p in 0..=m {
        let q = m - p;
        let c = match (q % 4, sine) {
            (0, false) => 1.0,
            (2, false) => -1.0,
            (1, true) => 1.0,
            (3, true) => -1.0,
            _ => 0.0,
        };
        if c != 0.0 {
            map.insert([p as u8, q as u8, 0], c * binom(m, p));
        }
    }
    Poly::from_map(m, map)
}

/// Checks that `(l, m)` names a harmonic on the sphere of R^n.
pub fn validate_index(n: usize, l: usize, m: i32) -> Result<()> {
    let ok = match n {
        2 => (l == 0 && m == 0) || (l > 0 && m.unsigned_abs() as usize == l),
        3 => m.unsigned_abs() as usize <= l,
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("no harmonic of degree {l} and order {m} in dimension {n}")))
    }
}

/// Orthonormal real harmonic of degree `l` and order `m` as a polynomial.
pub fn real_harmonic(n: usize, l: usize, m: i32) -> Result<Poly> {
    validate_index(n, l, m)?;
    if n == 2 {
        if l == 0 {
            return Ok(Poly::monomial([0, 0, 0], 1.0 / (2.0 * PI).sqrt()));
        }
        return Ok(planar_part(l, m < 0).scale(1.0 / PI.sqrt()));
    }
    let am = m.unsigned_abs() as usize;
    // Pi_l^m(z, r^2) * A_m or B_m.
    let mut pi = Poly::zero(l - am);
    for k in 0..=((l - am) / 2) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * 0.5f64.powi(l as i32) * binom(l, k) * binom(2 * l - 2 * k, l) * falling(l - 2 * k, am);
        let zpow = (l - 2 * k - am) as u8;
        let term = Poly::radius_power(k, false).mul(&Poly::monomial([0, 0, zpow], c));
        pi = pi.add(&term);
    }
    let ratio = (1..=(2 * am)).fold(1.0, |acc, i| acc / ((l - am + i) as f64));
    let norm = if am == 0 {
        ((2 * l + 1) as f64 / (4.0 * PI)).sqrt()
    } else {
        ((2 * l + 1) as f64 / (2.0 * PI)).sqrt()
    };
    let planar = planar_part(am, m < 0);
    Ok(pi.mul(&planar).scale(norm * ratio.sqrt()))
}

/// All `(l, m)` up to `max_degree`, optionally even degrees only.
pub fn harmonic_indices(n: usize, max_degree: usize, even_only: bool) -> Result<Vec<(usize, i32)>> {
    let mut out = Vec::new();
    for l in 0..=max_degree {
        if even_only && l % 2 == 1 {
            continue;
        }
        match n {
            2 => {
                if l == 0 {
                    out.push((0, 0));
                } else {
                    out.push((l, l as i32));
                    out.push((l, -(l as i32)));
                }
            }
            3 => {
                for m in -(l as i32)..=(l as i32) {
                    out.push((l, m));
                }
            }
            _ => return Err(Error::UnsupportedDimension(n)),
        }
    }
    Ok(out)
}

/// Jet at a unit node of the 1-homogeneous extension `|x|^(1-l) P(x)`.
pub fn poly_jet(p: &Poly, u: &Vector3<f64>, frame: &[Vector3<f64>; 2], d: usize) -> Jet {
    let (v, g, h) = p.eval_derivatives(u);
    let a = 1.0 - p.degree() as f64;
    let mut jet = Jet::from_ambient(d, frame, v, &g, &h);
    jet.hess += eye(d) * (a * v);
    jet
}

/// Ambient value, gradient and Hessian at a unit vector.
pub fn poly_ambient(p: &Poly, u: &Vector3<f64>) -> (f64, Vector3<f64>, Matrix3<f64>) {
    let (v, g, h) = p.eval_derivatives(u);
    let a = 1.0 - p.degree() as f64;
    let grad = u * (a * v) + g;
    let hess = (Matrix3::identity() * a + u * u.transpose() * (a * (a - 2.0))) * v
        + (u * g.transpose() + g * u.transpose()) * a
        + h;
    (v, grad, hess)
}

/// Even spherical-harmonic expansion, used both as a support function and as
/// a scalar field.
#[derive(Clone, Debug)]
pub struct HarmonicExpansion {
    n: usize,
    coeffs: BTreeMap<(usize, i32), f64>,
    by_degree: Vec<Poly>,
}

/// Serialized `(degree, order, value)` triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub degree: usize,
    pub order: i32,
    pub value: f64,
}

impl PartialEq for HarmonicExpansion {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.coeffs == o.coeffs
    }
}

impl HarmonicExpansion {
    pub fn new(n: usize, terms: &[HarmonicTerm]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for t in terms {
            if t.degree % 2 == 1 {
                return Err(Error::OddHarmonic(t.degree));
            }
            validate_index(n, t.degree, t.order)?;
            if !t.value.is_finite() {
                return Err(Error::InvalidParameter("non-finite harmonic coefficient".into()));
            }
            *coeffs.entry((t.degree, t.order)).or_insert(0.0) += t.value;
        }
        let mut by_degree = Vec::new();
        let mut current: Option<Poly> = None;
        let mut current_degree = usize::MAX;
        for (&(l, m), &c) in &coeffs {
            if l != current_degree {
                if let Some(p) = current.take() {
                    by_degree.push(p);
                }
                current_degree = l;
                current = Some(Poly::zero(l));
            }
            let y = real_harmonic(n, l, m)?.scale(c);
            current = Some(current.unwrap().add(&y));
        }
        if let Some(p) = current {
            by_degree.push(p);
        }
        Ok(HarmonicExpansion { n, coeffs, by_degree })
    }

    /// `c` times the constant function 1.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        let y0 = if n == 2 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / (4.0 * PI).sqrt() };
        Self::new(n, &[HarmonicTerm { degree: 0, order: 0, value: c / y0 }])
    }

    pub fn from_coefficients(n: usize, indices: &[(usize, i32)], values: &[f64]) -> Result<Self> {
        if indices.len() != values.len() {
            return Err(Error::SizeMismatch(format!("{} indices, {} values", indices.len(), values.len())));
        }
        let terms: Vec<HarmonicTerm> = indices
            .iter()
            .zip(values)
            .map(|(&(degree, order), &value)| HarmonicTerm { degree, order, value })
            .collect();
        Self::new(n, &terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> Vec<HarmonicTerm> {
        self.coeffs.iter().map(|(&(degree, order), &value)| HarmonicTerm { degree, order, value }).collect()
    }

    pub fn coefficient(&self, l: usize, m: i32) -> f64 {
        self.coeffs.get(&(l, m)).copied().unwrap_or(0.0)
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let terms: Vec<_> = self.terms().into_iter().map(|t| HarmonicTerm { value: t.value * s, ..t }).collect();
        Self::new(self.n, &terms).expect("scaling keeps validity")
    }

    pub fn plus(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::SizeMismatch("expansions live in different dimensions".into()));
        }
        let mut terms = self.terms();
        terms.extend(o.terms());
        Self::new(self.n, &terms)
    }

    /// Value of the 1-homogeneous extension at any nonzero point.
    pub fn eval(&self, x: &Vector3<f64>) -> f64 {
        let r = x.norm();
        let u = x / r;
        r * self.value_unit(&u)
    }

    pub fn value_unit(&self, u: &Vector3<f64>) -> f64 {
        let mut s = 0.0;
        for p in &self.by_degree {
            s += p.eval(u);
        }
        s
    }

    pub fn jet(&self, u: &Vector3<f64>, frame: &[Vector3<f64>; 2], d: usize) -> Jet {
        let mut acc = Jet::zero(d);
        for p in &self.by_degree {
            let j = poly_jet(p, u, frame, d);
            acc.axpy(1.0, &j);
        }
        acc
    }

    pub fn ambient(&self, u: &Vector3<f64>) -> (f64, Vector3<f64>, Matrix3<f64>) {
        let mut v = 0.0;
        let mut g = Vector3::zeros();
        let mut h = Matrix3::zeros();
        for p in &self.by_degree {
            let (a, b, c) = poly_ambient(p, u);
            v += a;
            g += b;
            h += c;
        }
        (v, g, h)
    }

    pub fn sample_jets(&self, grid: &SphereGrid) -> Vec<Jet> {
        (0..grid.len()).map(|i| self.jet(&grid.node(i), grid.frame(i), grid.tangent_dim())).collect()
    }

    pub fn sample_values(&self, grid: &SphereGrid) -> Vec<f64> {
        (0..grid.len()).map(|i| self.value_unit(&grid.node(i))).collect()
    }
}

/// A fixed list of orthonormal harmonics used as a Galerkin basis.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    n: usize,
    indices: Vec<(usize, i32)>,
    polys: Vec<Poly>,
}

impl HarmonicBasis {
    pub fn new(n: usize, max_degree: usize, even_only: bool) -> Result<Self> {
        let indices = harmonic_indices(n, max_degree, even_only)?;
        let polys = indices.iter().map(|&(l, m)| real_harmonic(n, l, m)).collect::<Result<Vec<_>>>()?;
        Ok(HarmonicBasis { n, indices, polys })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[(usize, i32)] {
        &self.indices
    }

    pub fn degree(&self, a: usize) -> usize {
        self.indices[a].0
    }

    /// `jets[a][i]`: basis function `a` at node `i`.
    pub fn sample_jets(&self, grid: &SphereGrid) -> Vec<Vec<Jet>> {
        let d = grid.tangent_dim();
        self.polys
            .iter()
            .map(|p| (0..grid.len()).map(|i| poly_jet(p, &grid.node(i), grid.frame(i), d)).collect())
            .collect()
    }

    pub fn expansion(&self, coefficients: &[f64]) -> Result<HarmonicExpansion> {
        HarmonicExpansion::from_coefficients(self.n, &self.indices, coefficients)
    }
}

/// Even expansion with independent standard Gaussian coefficients on the
/// harmonics of degrees `min_degree..=max_degree`.
pub fn random_even_expansion<R: rand::Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    min_degree: usize,
    max_degree: usize,
) -> Result<HarmonicExpansion> {
    use rand_distr::{Distribution, StandardNormal};
    let indices: Vec<(usize, i32)> =
        harmonic_indices(n, max_degree, true)?.into_iter().filter(|&(l, _)| l >= min_degree).collect();
    let values: Vec<f64> = indices.iter().map(|_| StandardNormal.sample(rng)).collect();
    HarmonicExpansion::from_coefficients(n, &indices, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthonormal_on_s2() {
        let grid = SphereGrid::new(3, 12).unwrap();
        let basis = HarmonicBasis::new(3, 6, false).unwrap();
        let jets = basis.sample_jets(&grid);
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let s = grid.integrate_fn(|i| jets[a][i].value * jets[b][i].value);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-12, "{:?} {:?} {s}", basis.indices()[a], basis.indices()[b]);
            }
        }
    }

    #[test]
    fn orthonormal_on_s1() {
        let grid = SphereGrid::new(2, 16).unwrap();
        let basis = HarmonicBasis::new(2, 6, false).unwrap();
        let jets = basis.sample_jets(&grid);
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let s = grid.integrate_fn(|i| jets[a][i].value * jets[b][i].value);
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonics_are_harmonic() {
        // Trace of the spherical Hessian is the Laplace-Beltrami operator.
        let grid = SphereGrid::new(3, 8).unwrap();
        let basis = HarmonicBasis::new(3, 5, false).unwrap();
        let jets = basis.sample_jets(&grid);
        for (a, &(l, _)) in basis.indices().iter().enumerate() {
            for i in (0..grid.len()).step_by(7) {
                let j = &jets[a][i];
                let lap = j.spherical_hessian().trace();
                assert!((lap + (l * (l + 1)) as f64 * j.value).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn odd_degree_is_rejected() {
        let e = HarmonicExpansion::new(3, &[HarmonicTerm { degree: 3, order: 1, value: 0.1 }]);
        assert_eq!(e.unwrap_err(), Error::OddHarmonic(3));
    }

    #[test]
    fn expansion_is_even_exactly() {
        let e = HarmonicExpansion::new(
            3,
            &[
                HarmonicTerm { degree: 0, order: 0, value: 3.0 },
                HarmonicTerm { degree: 2, order: -1, value: 0.2 },
                HarmonicTerm { degree: 4, order: 3, value: -0.07 },
            ],
        )
        .unwrap();
        let grid = SphereGrid::new(3, 7).unwrap();
        for i in 0..grid.len() {
            let j = grid.antipode(i);
            let a = e.jet(&grid.node(i), grid.frame(i), 2);
            let b = e.jet(&grid.node(j), grid.frame(j), 2);
            assert_eq!(a.value, b.value);
            assert_eq!(a.hess, b.hess);
            assert_eq!(a.grad, -b.grad);
        }
    }

    #[test]
    fn constant_expansion() {
        let e = HarmonicExpansion::constant(3, 2.5).unwrap();
        let u = Vector3::new(0.0, 0.6, 0.8);
        assert!((e.value_unit(&u) - 2.5).abs() < 1e-15);
    }
}
