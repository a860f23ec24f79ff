//! Static SVG line plots.

use plotters::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const PALETTE: [RGBColor; 5] = [BLUE, RED, GREEN, MAGENTA, BLACK];

fn plot_error<E: std::fmt::Display>(e: E) -> Error {
    Error::Io(format!("plot: {e}"))
}

fn range(values: impl Iterator<Item = f64>, log: bool) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return if log { (1e-16, 1.0) } else { (0.0, 1.0) };
    }
    if log {
        if hi <= lo {
            return (lo / 10.0, hi * 10.0);
        }
        return (lo, hi);
    }
    if hi <= lo {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

impl LinePlot {
    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        {
            let root = SVGBackend::with_string(&mut out, (720, 450)).into_drawing_area();
            root.fill(&WHITE).map_err(plot_error)?;
            let xs = range(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), self.log_x);
            let ys = range(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)), self.log_y);
            let mut builder = ChartBuilder::on(&root);
            builder.caption(&self.title, ("sans-serif", 20)).margin(15).x_label_area_size(40).y_label_area_size(70);
            macro_rules! draw {
                ($chart:expr) => {{
                    let mut chart = $chart;
                    chart
                        .configure_mesh()
                        .x_desc(self.x_label.as_str())
                        .y_desc(self.y_label.as_str())
                        .draw()
                        .map_err(plot_error)?;
                    for (k, s) in self.series.iter().enumerate() {
                        let color = PALETTE[k % PALETTE.len()];
                        let pts = s.points.iter().copied().filter(|(x, y)| {
                            x.is_finite() && y.is_finite() && (!self.log_x || *x > 0.0) && (!self.log_y || *y > 0.0)
                        });
                        chart
                            .draw_series(LineSeries::new(pts, &color))
                            .map_err(plot_error)?
                            .label(s.label.as_str())
                            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color));
                    }
                    if self.series.len() > 1 {
                        chart
                            .configure_series_labels()
                            .background_style(WHITE.mix(0.8))
                            .border_style(BLACK)
                            .draw()
                            .map_err(plot_error)?;
                    }
                }};
            }
            match (self.log_x, self.log_y) {
                (false, false) => draw!(builder.build_cartesian_2d(xs.0..xs.1, ys.0..ys.1).map_err(plot_error)?),
                (true, false) => {
                    draw!(builder.build_cartesian_2d((xs.0..xs.1).log_scale(), ys.0..ys.1).map_err(plot_error)?)
                }
                (false, true) => {
                    draw!(builder.build_cartesian_2d(xs.0..xs.1, (ys.0..ys.1).log_scale()).map_err(plot_error)?)
                }
                (true, true) => draw!(builder
                    .build_cartesian_2d((xs.0..xs.1).log_scale(), (ys.0..ys.1).log_scale())
                    .map_err(plot_error)?),
            }
            root.present().map_err(plot_error)?;
        }
        Ok(out)
    }
}
