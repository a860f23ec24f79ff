//! Gauss-Legendre nodes on [-1, 1].

/// Returns `(nodes, weights)` for the `m`-point rule, nodes ascending.
///
/// Nodes are placed so that `nodes[m - 1 - i] == -nodes[i]` exactly.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess for the i-th largest root, refined by Newton.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(m, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        if m % 2 == 1 && i == half - 1 {
            z = 0.0;
        }
        x[m - 1 - i] = z;
        x[i] = -z;
        w[m - 1 - i] = weight;
        w[i] = weight;
    }
    (x, w)
}

/// `(P_m(z), P_m'(z))` via the three-term recurrence.
pub fn legendre_with_derivative(m: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_monomials_exactly() {
        for m in 1..12 {
            let (x, w) = gauss_legendre(m);
            for k in 0..(2 * m) {
                let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "m={m} k={k} got={got}");
            }
        }
    }

    #[test]
    fn nodes_are_symmetric() {
        let (x, w) = gauss_legendre(17);
        for i in 0..17 {
            assert_eq!(x[i], -x[16 - i]);
            assert_eq!(w[i], w[16 - i]);
        }
        assert_eq!(x[8], 0.0);
    }
}
