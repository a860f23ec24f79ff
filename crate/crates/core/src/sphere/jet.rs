//! Second-order jets of functions on the sphere.
//!
//! A jet at a node stores the value `f`, the tangential gradient and the
//! matrix `A f = Hess_S f + f I` in the node's tangent frame. For a
//! 1-homogeneous extension `F` of `f`, `A f` is the restriction of the
//! ambient Hessian `D^2 F` to the tangent plane.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub d: usize,
    pub value: f64,
    pub grad: Vector2<f64>,
    pub hess: Matrix2<f64>,
}

/// Identity on the first `d` tangent coordinates.
pub fn eye(d: usize) -> Matrix2<f64> {
    if d == 1 {
        Matrix2::new(1.0, 0.0, 0.0, 0.0)
    } else {
        Matrix2::identity()
    }
}

impl Jet {
    pub fn constant(d: usize, c: f64) -> Self {
        Jet { d, value: c, grad: Vector2::zeros(), hess: eye(d) * c }
    }

    pub fn zero(d: usize) -> Self {
        Jet { d, value: 0.0, grad: Vector2::zeros(), hess: Matrix2::zeros() }
    }

    /// Builds the jet from ambient derivatives of a 1-homogeneous function.
    pub fn from_ambient(
        d: usize,
        frame: &[Vector3<f64>; 2],
        value: f64,
        grad: &Vector3<f64>,
        hess: &Matrix3<f64>,
    ) -> Self {
        let mut g = Vector2::zeros();
        let mut h = Matrix2::zeros();
        for a in 0..d {
            g[a] = frame[a].dot(grad);
            let ha = hess * frame[a];
            for b in 0..d {
                h[(a, b)] = frame[b].dot(&ha);
            }
        }
        if d == 2 {
            let off = 0.5 * (h[(0, 1)] + h[(1, 0)]);
            h[(0, 1)] = off;
            h[(1, 0)] = off;
        }
        Jet { d, value, grad: g, hess: h }
    }

    pub fn scale(&self, c: f64) -> Self {
        Jet { d: self.d, value: c * self.value, grad: self.grad * c, hess: self.hess * c }
    }

    pub fn add(&self, o: &Jet) -> Self {
        Jet { d: self.d, value: self.value + o.value, grad: self.grad + o.grad, hess: self.hess + o.hess }
    }

    pub fn axpy(&mut self, c: f64, o: &Jet) {
        self.value += c * o.value;
        self.grad += o.grad * c;
        self.hess += o.hess * c;
    }

    /// Spherical Hessian `A f - f I`.
    pub fn spherical_hessian(&self) -> Matrix2<f64> {
        self.hess - eye(self.d) * self.value
    }

    /// Jet of the pointwise product.
    pub fn mul(&self, o: &Jet) -> Self {
        let (f, g) = (self.value, o.value);
        let cross = self.grad * o.grad.transpose() + o.grad * self.grad.transpose();
        Jet {
            d: self.d,
            value: f * g,
            grad: o.grad * f + self.grad * g,
            hess: o.hess * f + self.hess * g - eye(self.d) * (f * g) + cross,
        }
    }

    /// Jet of `phi(f)` given `phi(f), phi'(f), phi''(f)`.
    pub fn compose(&self, phi: f64, dphi: f64, ddphi: f64) -> Self {
        let outer = self.grad * self.grad.transpose();
        Jet {
            d: self.d,
            value: phi,
            grad: self.grad * dphi,
            hess: outer * ddphi + self.spherical_hessian() * dphi + eye(self.d) * phi,
        }
    }

    /// Jet of a 1-homogeneous combination `Phi(a, b)` given its partials.
    #[allow(clippy::too_many_arguments)]
    pub fn combine_homogeneous(
        a: &Jet,
        b: &Jet,
        phi: f64,
        pa: f64,
        pb: f64,
        paa: f64,
        pab: f64,
        pbb: f64,
    ) -> Self {
        let ga = a.grad * a.grad.transpose();
        let gb = b.grad * b.grad.transpose();
        let gab = a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
        Jet {
            d: a.d,
            value: phi,
            grad: a.grad * pa + b.grad * pb,
            hess: a.hess * pa + b.hess * pb + ga * paa + gab * pab + gb * pbb,
        }
    }

    /// Squared norm of the tangential gradient.
    pub fn grad_norm2(&self) -> f64 {
        self.grad.norm_squared()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_scaled_identity() {
        let j = Jet::constant(2, 3.0);
        assert_eq!(j.hess, Matrix2::identity() * 3.0);
        assert_eq!(j.spherical_hessian(), Matrix2::zeros());
        let k = Jet::constant(1, 2.0);
        assert_eq!(k.hess[(1, 1)], 0.0);
    }

    #[test]
    fn product_with_constant_is_scaling() {
        let f = Jet {
            d: 2,
            value: 1.3,
            grad: Vector2::new(0.2, -0.1),
            hess: Matrix2::new(1.1, 0.3, 0.3, 0.9),
        };
        let c = Jet::constant(2, 2.0);
        let p = f.mul(&c);
        let s = f.scale(2.0);
        assert!((p.hess - s.hess).norm() < 1e-15);
        assert!((p.grad - s.grad).norm() < 1e-15);
    }
}
