//! Intrinsic volumes by surface integrals, exact planar formulas and the
//! segment-product rule.

use std::fmt;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::{mixed_volume_factor, segment_factor};
use crate::bodies::{Body, CombinationMode, WulffShape};
use crate::curvature::curvature_value;
use crate::error::{Error, Result};
use crate::sphere::{SmoothField, SphereGrid};

/// Default grid resolution for surface integrals in R^3.
pub const DEFAULT_RESOLUTION: usize = 32;
/// Grid resolution for smooth planar bodies.
pub const PLANAR_RESOLUTION: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    SurfaceIntegral,
    Exact2d,
    ProductFormula,
    MonteCarloOracle,
}

impl fmt::Display for VolumeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VolumeMethod::SurfaceIntegral => "surface-integral",
            VolumeMethod::Exact2d => "exact-2D",
            VolumeMethod::ProductFormula => "product-formula",
            VolumeMethod::MonteCarloOracle => "monte-carlo-oracle",
        })
    }
}

impl std::str::FromStr for VolumeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "surface-integral" => Ok(VolumeMethod::SurfaceIntegral),
            "exact-2D" | "exact-2d" => Ok(VolumeMethod::Exact2d),
            "product-formula" => Ok(VolumeMethod::ProductFormula),
            "monte-carlo-oracle" => Ok(VolumeMethod::MonteCarloOracle),
            _ => Err(Error::InvalidParameter(format!("unknown volume method '{s}'"))),
        }
    }
}

/// One intrinsic volume with its provenance and error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEntry {
    pub j: usize,
    pub value: f64,
    pub method: VolumeMethod,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub body: String,
    pub entries: Vec<VolumeEntry>,
}

impl VolumeReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("body,j,value,method,error\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{:.15e},{},{:.3e}", self.body, e.j, e.value, e.method, e.error);
        }
        out
    }

    pub fn value(&self, j: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.j == j).map(|e| e.value)
    }
}

fn check_j(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::InvalidParameter(format!("intrinsic volume index {j} must lie in 1..={n}")));
    }
    Ok(())
}

/// `V_j = d_{n,j} / n * int h s_{j-1}(h)` on the grid. The second value is
/// the discrepancy with `d_{n,j} / n * int s_j(h)` (for `j < n`), or with
/// the same integral on a coarser grid (for `j = n`).
pub fn intrinsic_volume_of_field(f: &(dyn SmoothField + Sync), j: usize, grid: &SphereGrid) -> Result<(f64, f64)> {
    let n = grid.n();
    check_j(n, j)?;
    if f.dimension() != n {
        return Err(Error::SizeMismatch(format!("body in R^{} on a grid in R^{n}", f.dimension())));
    }
    let d = grid.tangent_dim();
    let jets = (0..grid.len())
        .into_par_iter()
        .map(|i| f.jet_at(&grid.node(i), grid.frame(i), d))
        .collect::<Result<Vec<_>>>()?;
    let factor = mixed_volume_factor(n, j) / n as f64;
    let value = factor * grid.integrate_fn(|i| jets[i].value * curvature_value(&jets[i], j - 1));
    let error = if j < n {
        (value - factor * grid.integrate_fn(|i| curvature_value(&jets[i], j))).abs()
    } else {
        let coarse_res = (grid.resolution() * 3 / 4).max(crate::sphere::MIN_RESOLUTION);
        if coarse_res == grid.resolution() {
            0.0
        } else {
            let coarse = SphereGrid::new(n, coarse_res)?;
            let (v, _) = intrinsic_volume_of_field_single(f, j, &coarse)?;
            (v - value).abs()
        }
    };
    Ok((value, error))
}

fn intrinsic_volume_of_field_single(f: &(dyn SmoothField + Sync), j: usize, grid: &SphereGrid) -> Result<(f64, f64)> {
    let n = grid.n();
    let d = grid.tangent_dim();
    let mut total = 0.0;
    for i in 0..grid.len() {
        let jet = f.jet_at(&grid.node(i), grid.frame(i), d)?;
        total += grid.weights()[i] * jet.value * curvature_value(&jet, j - 1);
    }
    Ok((mixed_volume_factor(n, j) / n as f64 * total, 0.0))
}

/// Surface-integral path for smooth bodies.
pub fn intrinsic_volume_smooth(body: &Body, j: usize, grid: &SphereGrid) -> Result<(f64, f64)> {
    if !body.is_smooth() {
        return Err(Error::NotSmooth("surface integral needs a smooth body".into()));
    }
    intrinsic_volume_of_field(body, j, grid)
}

/// `V_1` (half perimeter) and `V_2` (area) of a planar body.
pub fn intrinsic_volume_2d(body: &Body, j: usize) -> Result<(f64, f64)> {
    if body.n() != 2 {
        return Err(Error::UnsupportedDimension(body.n()));
    }
    check_j(2, j)?;
    let pi = std::f64::consts::PI;
    match body {
        Body::Ball { radius, .. } => Ok((if j == 1 { pi * radius } else { pi * radius * radius }, 0.0)),
        Body::Polygon(p) => Ok((if j == 1 { 0.5 * p.perimeter() } else { p.area() }, 0.0)),
        Body::PMean(m) => match &m.mode {
            CombinationMode::Wulff(WulffShape::Planar(p)) => {
                Ok((if j == 1 { 0.5 * p.perimeter() } else { p.area() }, 0.0))
            }
            CombinationMode::Verbatim => planar_quadrature(body, j),
            CombinationMode::Wulff(WulffShape::Spatial(_)) => Err(Error::InvalidBody("spatial Wulff shape in R^2".into())),
        },
        _ if body.is_smooth() => planar_quadrature(body, j),
        _ => Err(Error::NoVolumeMethod("planar body without a volume formula".into())),
    }
}

fn planar_quadrature(body: &Body, j: usize) -> Result<(f64, f64)> {
    let fine = SphereGrid::new(2, PLANAR_RESOLUTION)?;
    let coarse = SphereGrid::new(2, PLANAR_RESOLUTION / 2)?;
    let (v, _) = intrinsic_volume_of_field(body, j, &fine)?;
    let (w, _) = intrinsic_volume_of_field(body, j, &coarse)?;
    Ok((v, (v - w).abs()))
}

/// `V_j(A + [-s theta, s theta]) = V_j(A) + s e_{n,j} V_{j-1}(A)` for a
/// body `A` of dimension `n - 1` (with `V_0 = 1` and `V_n(A) = 0`).
pub fn intrinsic_volume_product(base: &Body, half_length: f64, j: usize) -> Result<(f64, f64)> {
    let n = base.n() + 1;
    if j == 0 {
        return Err(Error::InvalidParameter("product formula needs j >= 1".into()));
    }
    check_j(n, j)?;
    if base.n() != 2 {
        return Err(Error::UnsupportedDimension(base.n()));
    }
    let (vj, ej) = if j < n { intrinsic_volume_2d(base, j)? } else { (0.0, 0.0) };
    let (vj1, ej1) = if j == 1 { (1.0, 0.0) } else { intrinsic_volume_2d(base, j - 1)? };
    let e = segment_factor(n, j);
    Ok((vj + half_length * e * vj1, ej + half_length * e * ej1))
}

/// Options for [`intrinsic_volume`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeOptions {
    pub resolution: usize,
    pub method: Option<VolumeMethod>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        VolumeOptions { resolution: DEFAULT_RESOLUTION, method: None, samples: 4000, seed: super::kubota::DEFAULT_SEED }
    }
}

fn default_method(body: &Body) -> Result<VolumeMethod> {
    if body.n() == 2 {
        return Ok(VolumeMethod::Exact2d);
    }
    match body {
        Body::SegmentProduct(_) => Ok(VolumeMethod::ProductFormula),
        _ if body.is_smooth() => Ok(VolumeMethod::SurfaceIntegral),
        _ => Err(Error::NoVolumeMethod("no deterministic volume formula for this body; use the Monte Carlo oracle".into())),
    }
}

/// `V_j(body)` by the requested or default method.
pub fn intrinsic_volume(body: &Body, j: usize, options: &VolumeOptions) -> Result<VolumeEntry> {
    let method = match options.method {
        Some(m) => m,
        None => default_method(body)?,
    };
    let (value, error) = match method {
        VolumeMethod::Exact2d => intrinsic_volume_2d(body, j)?,
        VolumeMethod::SurfaceIntegral => {
            let grid = SphereGrid::new(body.n(), options.resolution)?;
            intrinsic_volume_smooth(body, j, &grid)?
        }
        VolumeMethod::ProductFormula => match body {
            Body::SegmentProduct(sp) => intrinsic_volume_product(&sp.base, sp.half_length, j)?,
            _ => return Err(Error::NoVolumeMethod("product formula needs a segment product".into())),
        },
        VolumeMethod::MonteCarloOracle => {
            if j == body.n() {
                return Err(Error::NoVolumeMethod("the projection oracle covers j < n".into()));
            }
            let est = super::kubota::kubota_oracle(body, j, options.samples, options.seed)?;
            (est.mean, est.stderr)
        }
    };
    Ok(VolumeEntry { j, value, method, error })
}

/// `V_1, ..., V_n` of a body.
pub fn volume_report(body: &Body, id: &str, options: &VolumeOptions) -> Result<VolumeReport> {
    let n = body.n();
    let last = if options.method == Some(VolumeMethod::MonteCarloOracle) { n - 1 } else { n };
    let entries = (1..=last).map(|j| intrinsic_volume(body, j, options)).collect::<Result<Vec<_>>>()?;
    Ok(VolumeReport { body: id.to_string(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_ball() {
        let grid = SphereGrid::new(3, 12).unwrap();
        let b = Body::ball(3, 1.0).unwrap();
        let want = [4.0, 2.0 * PI, 4.0 * PI / 3.0];
        for j in 1..=3 {
            let (v, _) = intrinsic_volume_smooth(&b, j, &grid).unwrap();
            assert!((v - want[j - 1]).abs() < 1e-12, "j={j}: {v}");
        }
    }

    #[test]
    fn planar_examples() {
        let sq = Body::square(1.0).unwrap();
        assert_eq!(intrinsic_volume_2d(&sq, 1).unwrap().0, 4.0);
        assert_eq!(intrinsic_volume_2d(&sq, 2).unwrap().0, 4.0);
        let disk = Body::ball(2, 4.0 / PI).unwrap();
        assert!((intrinsic_volume_2d(&disk, 1).unwrap().0 - 4.0).abs() < 1e-15);
        assert!((intrinsic_volume_2d(&disk, 2).unwrap().0 - 16.0 / PI).abs() < 1e-14);
        let ell = Body::ellipsoid_axes(&[1.0, 4.0 / PI]).unwrap();
        let (area, err) = intrinsic_volume_2d(&ell, 2).unwrap();
        assert!((area - 4.0).abs() < 1e-12 && err < 1e-12);
    }

    #[test]
    fn product_examples() {
        let sq = Body::square(1.0).unwrap();
        assert!((intrinsic_volume_product(&sq, 5.0, 2).unwrap().0 - 44.0).abs() < 1e-13);
        let disk = Body::ball(2, 4.0 / PI).unwrap();
        assert!((intrinsic_volume_product(&disk, 5.0, 2).unwrap().0 - (16.0 / PI + 40.0)).abs() < 1e-12);
        assert_eq!(intrinsic_volume_product(&sq, 0.0, 2).unwrap().0, 4.0);
        assert!(intrinsic_volume_product(&sq, 1.0, 0).is_err());
        let cube = Body::cube(1.0).unwrap();
        let r = volume_report(&cube, "cube", &VolumeOptions::default()).unwrap();
        assert_eq!(r.entries.iter().map(|e| e.value).collect::<Vec<_>>(), vec![6.0, 12.0, 8.0]);
    }

    #[test]
    fn method_names_round_trip() {
        for m in [VolumeMethod::SurfaceIntegral, VolumeMethod::Exact2d, VolumeMethod::ProductFormula, VolumeMethod::MonteCarloOracle] {
            assert_eq!(m.to_string().parse::<VolumeMethod>().unwrap(), m);
        }
    }
}
