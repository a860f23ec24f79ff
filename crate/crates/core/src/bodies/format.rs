//! JSON body files.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::body::{lp_combination_with, Body, CombinationOptions};
use crate::error::{Error, Result};
use crate::sphere::{HarmonicExpansion, HarmonicTerm};

fn default_resolution() -> usize {
    CombinationOptions::default().resolution
}

fn default_directions() -> usize {
    CombinationOptions::default().directions
}

/// Serialized form of a [`Body`]. Harmonic coefficients are
/// `[degree, order, value]` triples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        n: usize,
        radius: f64,
    },
    Ellipsoid {
        matrix: Vec<Vec<f64>>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Harmonic {
        n: usize,
        coefficients: Vec<(usize, i32, f64)>,
    },
    SegmentProduct {
        base: Box<BodySpec>,
        half_length: f64,
        axis: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frame: Option<[[f64; 3]; 2]>,
    },
    PMean {
        p: f64,
        lambda: f64,
        left: Box<BodySpec>,
        right: Box<BodySpec>,
        #[serde(default = "default_resolution")]
        resolution: usize,
        #[serde(default = "default_directions")]
        directions: usize,
        #[serde(default = "default_product_rule")]
        product_rule: bool,
    },
}

fn default_product_rule() -> bool {
    true
}

fn arr(v: &Vector3<f64>) -> [f64; 3] {
    [v.x, v.y, v.z]
}

impl BodySpec {
    pub fn from_body(body: &Body) -> Self {
        match body {
            Body::Ball { n, radius } => BodySpec::Ball { n: *n, radius: *radius },
            Body::Ellipsoid(e) => BodySpec::Ellipsoid { matrix: e.matrix() },
            Body::Polygon(p) => BodySpec::Polygon { vertices: p.vertices().to_vec() },
            Body::Harmonic(e) => BodySpec::Harmonic {
                n: e.n(),
                coefficients: e.terms().iter().map(|t| (t.degree, t.order, t.value)).collect(),
            },
            Body::SegmentProduct(sp) => BodySpec::SegmentProduct {
                base: Box::new(BodySpec::from_body(&sp.base)),
                half_length: sp.half_length,
                axis: arr(&sp.axis),
                frame: Some([arr(&sp.frame[0]), arr(&sp.frame[1])]),
            },
            Body::PMean(m) => BodySpec::PMean {
                p: m.params.p,
                lambda: m.params.lambda,
                left: Box::new(BodySpec::from_body(&m.left)),
                right: Box::new(BodySpec::from_body(&m.right)),
                resolution: m.options.resolution,
                directions: m.options.directions,
                product_rule: m.options.product_rule,
            },
        }
    }

    pub fn build(&self) -> Result<Body> {
        match self {
            BodySpec::Ball { n, radius } => Body::ball(*n, *radius),
            BodySpec::Ellipsoid { matrix } => Body::ellipsoid(matrix.len(), matrix),
            BodySpec::Polygon { vertices } => Body::polygon(vertices),
            BodySpec::Harmonic { n, coefficients } => {
                let terms: Vec<HarmonicTerm> = coefficients
                    .iter()
                    .map(|&(degree, order, value)| HarmonicTerm { degree, order, value })
                    .collect();
                Body::harmonic(HarmonicExpansion::new(*n, &terms)?)
            }
            BodySpec::SegmentProduct { base, half_length, axis, frame } => Body::segment_product(
                base.build()?,
                *half_length,
                Vector3::from(*axis),
                frame.map(|f| [Vector3::from(f[0]), Vector3::from(f[1])]),
            ),
            BodySpec::PMean { p, lambda, left, right, resolution, directions, product_rule } => {
                let options =
                    CombinationOptions { resolution: *resolution, directions: *directions, product_rule: *product_rule };
                lp_combination_with(&left.build()?, &right.build()?, *p, *lambda, options)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string_pretty(self).expect("body spec serializes")
    }
}

impl Body {
    pub fn from_json(text: &str) -> Result<Body> {
        BodySpec::parse(text)?.build()
    }

    pub fn to_json(&self) -> String {
        BodySpec::from_body(self).to_text()
    }

    pub fn load(path: &std::path::Path) -> Result<Body> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Body::from_json(&text)
    }
}
