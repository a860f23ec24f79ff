use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::sphere::{HarmonicBasis, HarmonicExpansion, Jet, SphereGrid};

/// Exponent of the Hölder seminorm used to measure `g - 1`.
pub const HOLDER_EXPONENT: f64 = 0.5;

/// Derivative of `h -> h^(1-p) s_j(h)` at `h = 1`, diagonal on harmonics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearizedOperator {
    pub n: usize,
    pub order: usize,
    pub p: f64,
}

impl LinearizedOperator {
    /// Multiplier on harmonics of degree `k`.
    pub fn factor(&self, k: usize) -> f64 {
        let (n, j) = (self.n as f64, self.order as f64);
        let k = k as f64;
        -k * (k + n - 2.0) * j / (n - 1.0) + (j - self.p + 1.0)
    }

    pub fn apply(&self, f: &HarmonicExpansion) -> HarmonicExpansion {
        let terms: Vec<_> = f
            .terms()
            .into_iter()
            .map(|mut t| {
                t.value *= self.factor(t.degree);
                t
            })
            .collect();
        HarmonicExpansion::new(f.n(), &terms).expect("same index set")
    }

    /// Fails if some even degree up to `max_degree` has a vanishing multiplier.
    pub fn check_even_invertible(&self, max_degree: usize) -> Result<()> {
        for k in (0..=max_degree).step_by(2) {
            let f = self.factor(k);
            if f.abs() < 1e-12 {
                return Err(Error::SingularOperator { degree: k, factor: f });
            }
        }
        Ok(())
    }
}

pub fn linearized_operator(p: f64, order: usize, n: usize) -> Result<LinearizedOperator> {
    check_parameters(n, order, p)?;
    Ok(LinearizedOperator { n, order, p })
}

fn check_parameters(n: usize, order: usize, p: f64) -> Result<()> {
    if n != 3 {
        return Err(Error::UnsupportedDimension(n));
    }
    if order == 0 || order > n - 2 {
        return Err(Error::OrderOutOfRange { got: order, n });
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} must lie in [0, 1)")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemOptions {
    pub resolution: usize,
    pub max_degree: usize,
    pub allow_excluded_regime: bool,
}

impl Default for ProblemOptions {
    fn default() -> Self {
        ProblemOptions { resolution: 32, max_degree: 20, allow_excluded_regime: false }
    }
}

/// `h^(1-p) s_j(h) = g` for even `g > 0`, discretized in even harmonics.
#[derive(Clone, Debug)]
pub struct CMProblem {
    pub n: usize,
    pub order: usize,
    pub p: f64,
    pub data: HarmonicExpansion,
    pub grid: SphereGrid,
    pub max_degree: usize,
    /// `sup|g - 1| + [g]_(1/2)` on the grid.
    pub holder_distance: f64,
    pub(crate) basis: HarmonicBasis,
    pub(crate) basis_jets: Vec<Vec<Jet>>,
    /// Row `a`: weights times basis function `a` at each node.
    pub(crate) projector: DMatrix<f64>,
    pub(crate) data_values: Vec<f64>,
}

impl CMProblem {
    pub fn new(order: usize, p: f64, data: HarmonicExpansion, options: ProblemOptions) -> Result<Self> {
        let n = data.n();
        check_parameters(n, order, p)?;
        if p == 0.0 && order == 1 && !options.allow_excluded_regime {
            return Err(Error::ExcludedRegime);
        }
        if let Some(t) = data.terms().iter().find(|t| t.degree % 2 == 1 && t.value != 0.0) {
            return Err(Error::OddHarmonic(t.degree));
        }
        if options.max_degree < 2 || options.max_degree % 2 == 1 {
            return Err(Error::InvalidParameter(format!(
                "basis degree {} must be even and at least 2",
                options.max_degree
            )));
        }
        let grid = SphereGrid::new(n, options.resolution)?;
        if 2 * options.max_degree > 2 * options.resolution + 1 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution {} cannot integrate products of degree-{} harmonics",
                options.resolution, options.max_degree
            )));
        }
        let data_values = data.sample_values(&grid);
        if let Some(v) = data_values.iter().copied().find(|v| !(*v > 0.0)) {
            return Err(Error::InvalidParameter(format!("data must be positive, found {v:e}")));
        }
        linearized_operator(p, order, n)?.check_even_invertible(options.max_degree)?;
        let basis = HarmonicBasis::new(n, options.max_degree, true)?;
        let basis_jets = basis.sample_jets(&grid);
        let w = grid.weights();
        let projector = DMatrix::from_fn(basis.len(), grid.len(), |a, i| w[i] * basis_jets[a][i].value);
        let holder_distance = holder_distance(&grid, &data_values, HOLDER_EXPONENT);
        Ok(CMProblem {
            n,
            order,
            p,
            data,
            grid,
            max_degree: options.max_degree,
            holder_distance,
            basis,
            basis_jets,
            projector,
            data_values,
        })
    }

    pub fn basis_indices(&self) -> &[(usize, i32)] {
        self.basis.indices()
    }

    pub fn linearized(&self) -> LinearizedOperator {
        LinearizedOperator { n: self.n, order: self.order, p: self.p }
    }

    /// Coefficients of `f` on the solver basis; terms beyond it are dropped.
    pub fn coefficients_of(&self, f: &HarmonicExpansion) -> Vec<f64> {
        self.basis.indices().iter().map(|&(l, m)| f.coefficient(l, m)).collect()
    }

    pub fn expansion(&self, coefficients: &[f64]) -> Result<HarmonicExpansion> {
        self.basis.expansion(coefficients)
    }

    /// `sup|log g|` on the grid.
    pub fn log_data_sup(&self) -> f64 {
        self.data_values.iter().map(|v| v.ln().abs()).fold(0.0, f64::max)
    }
}

/// `sup|f - 1| + max |f(u) - f(v)| / |u - v|^alpha` over node pairs.
pub fn holder_distance(grid: &SphereGrid, values: &[f64], alpha: f64) -> f64 {
    let sup = values.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let nodes = grid.nodes();
    let mut quotient: f64 = 0.0;
    for i in 0..nodes.len() {
        for k in (i + 1)..nodes.len() {
            let d = (nodes[i] - nodes[k]).norm();
            if d > 1e-12 {
                quotient = quotient.max((values[i] - values[k]).abs() / d.powf(alpha));
            }
        }
    }
    sup + quotient
}
