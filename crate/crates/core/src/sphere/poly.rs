//! Homogeneous polynomials in up to three variables.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    degree: usize,
    terms: Vec<([u8; 3], f64)>,
}

impl Poly {
    pub fn from_map(degree: usize, map: BTreeMap<[u8; 3], f64>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| *c != 0.0).collect();
        Poly { degree, terms }
    }

    pub fn monomial(e: [u8; 3], c: f64) -> Self {
        let degree = e.iter().map(|&k| k as usize).sum();
        Poly { degree, terms: vec![(e, c)] }
    }

    pub fn zero(degree: usize) -> Self {
        Poly { degree, terms: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[([u8; 3], f64)] {
        &self.terms
    }

    fn to_map(&self) -> BTreeMap<[u8; 3], f64> {
        self.terms.iter().cloned().collect()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert!(self.terms.is_empty() || o.terms.is_empty() || self.degree == o.degree);
        let degree = if self.terms.is_empty() { o.degree } else { self.degree };
        let mut m = self.to_map();
        for (e, c) in &o.terms {
            *m.entry(*e).or_insert(0.0) += c;
        }
        Poly::from_map(degree, m)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly { degree: self.degree, terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut m = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                *m.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        Poly::from_map(self.degree + o.degree, m)
    }

    /// `(x^2 + y^2 + z^2)^k` or its planar version.
    pub fn radius_power(k: usize, planar: bool) -> Poly {
        let mut r2 = Poly::monomial([2, 0, 0], 1.0).add(&Poly::monomial([0, 2, 0], 1.0));
        if !planar {
            r2 = r2.add(&Poly::monomial([0, 0, 2], 1.0));
        }
        let mut out = Poly::monomial([0, 0, 0], 1.0);
        for _ in 0..k {
            out = out.mul(&r2);
        }
        out
    }

    pub fn eval(&self, x: &Vector3<f64>) -> f64 {
        let pw = powers(x, self.degree);
        let mut s = 0.0;
        for (e, c) in &self.terms {
            s += c * pw[0][e[0] as usize] * pw[1][e[1] as usize] * pw[2][e[2] as usize];
        }
        s
    }

    /// Value, gradient and Hessian.
    pub fn eval_derivatives(&self, x: &Vector3<f64>) -> (f64, Vector3<f64>, Matrix3<f64>) {
        let pw = powers(x, self.degree);
        let p = |axis: usize, k: i32| -> f64 {
            if k < 0 {
                0.0
            } else {
                pw[axis][k as usize]
            }
        };
        let mut v = 0.0;
        let mut g = Vector3::zeros();
        let mut h = Matrix3::zeros();
        for (e, c) in &self.terms {
            let k = [e[0] as i32, e[1] as i32, e[2] as i32];
            let base = [p(0, k[0]), p(1, k[1]), p(2, k[2])];
            let d1 = [
                k[0] as f64 * p(0, k[0] - 1),
                k[1] as f64 * p(1, k[1] - 1),
                k[2] as f64 * p(2, k[2] - 1),
            ];
            let d2 = [
                (k[0] * (k[0] - 1)) as f64 * p(0, k[0] - 2),
                (k[1] * (k[1] - 1)) as f64 * p(1, k[1] - 2),
                (k[2] * (k[2] - 1)) as f64 * p(2, k[2] - 2),
            ];
            v += c * base[0] * base[1] * base[2];
            g[0] += c * d1[0] * base[1] * base[2];
            g[1] += c * base[0] * d1[1] * base[2];
            g[2] += c * base[0] * base[1] * d1[2];
            h[(0, 0)] += c * d2[0] * base[1] * base[2];
            h[(1, 1)] += c * base[0] * d2[1] * base[2];
            h[(2, 2)] += c * base[0] * base[1] * d2[2];
            h[(0, 1)] += c * d1[0] * d1[1] * base[2];
            h[(0, 2)] += c * d1[0] * base[1] * d1[2];
            h[(1, 2)] += c * base[0] * d1[1] * d1[2];
        }
        h[(1, 0)] = h[(0, 1)];
        h[(2, 0)] = h[(0, 2)];
        h[(2, 1)] = h[(1, 2)];
        (v, g, h)
    }
}

fn powers(x: &Vector3<f64>, degree: usize) -> [Vec<f64>; 3] {
    let mk = |t: f64| {
        let mut v = Vec::with_capacity(degree + 1);
        let mut acc = 1.0;
        for _ in 0..=degree {
            v.push(acc);
            acc *= t;
        }
        v
    };
    [mk(x.x), mk(x.y), mk(x.z)]
}
