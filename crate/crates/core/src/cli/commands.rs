use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::plot::{LinePlot, Series};
use super::schema::{self, Schema};
use super::{Command, VolumeArgs};
use crate::bodies::{lp_combination_with, power_mean, Body, BodySpec, CombinationMode, CombinationOptions};
use crate::cmsolver::{
    bound_monitor, newton_solve_from, uniqueness_probe, CMProblem, ProblemOptions, SolverConfig,
};
use crate::error::{Error, Result};
use crate::lpbm::{check_lpbm, construct_counterexample, SearchOptions};
use crate::spectral::{assemble_operator, ivaki_milman_check, second_derivative_identity_check};
use crate::sphere::{random_even_expansion, HarmonicExpansion, HarmonicTerm, SphereGrid};
use crate::volumes::{steiner_rows, volume_report, VolumeOptions};

/// Everything a subcommand produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub schema: Schema,
    pub table: Option<String>,
    pub report: String,
    pub plot: Option<String>,
    /// Additional named files.
    pub extra: Vec<(String, String)>,
}

fn report_head(schema: Schema) -> String {
    format!("schema: {}\n", schema.tag())
}

fn failure(schema: Schema, e: Error) -> (Error, Artifacts) {
    let report = format!("{}status: failed\nerror: {e}\n", report_head(schema));
    (e, Artifacts { schema, table: None, report, plot: None, extra: Vec::new() })
}

fn table(schema: Schema, rows: &[String]) -> String {
    let mut out = format!("{}\n", schema.header);
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

fn body_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "body".into())
}

fn volume_options(v: &VolumeArgs) -> VolumeOptions {
    VolumeOptions { resolution: v.resolution, method: v.method, samples: v.samples, seed: v.seed }
}

fn describe(body: &Body) -> &'static str {
    match body {
        Body::Ball { .. } => "ball",
        Body::Ellipsoid(_) => "ellipsoid",
        Body::Polygon(_) => "polygon",
        Body::Harmonic(_) => "harmonic",
        Body::SegmentProduct(_) => "segment-product",
        Body::PMean(pm) => match pm.mode {
            CombinationMode::Verbatim => "pointwise-mean",
            CombinationMode::Wulff(_) => "wulff-shape",
        },
    }
}

pub fn execute(command: &Command) -> std::result::Result<Artifacts, (Error, Artifacts)> {
    let schema = match command {
        Command::Volumes { .. } => schema::VOLUMES,
        Command::LpSum { .. } => schema::LP_SUM,
        Command::CheckLpbm { .. } => schema::CHECK_LPBM,
        Command::Counterexample { .. } => schema::COUNTEREXAMPLE,
        Command::Spectrum { .. } => schema::SPECTRUM,
        Command::SecondDerivative { .. } => schema::SECOND_DERIVATIVE,
        Command::SolveCm { .. } => schema::SOLVE_CM,
        Command::IvakiMilman { .. } => schema::IVAKI_MILMAN,
        Command::SteinerCheck { .. } => schema::STEINER_CHECK,
    };
    if let Command::SolveCm { .. } = command {
        return solve_cm(command, schema);
    }
    let result = match command {
        Command::Volumes { body, volume } => volumes(schema, body, volume),
        Command::LpSum { .. } => lp_sum(schema, command),
        Command::CheckLpbm { left, right, j, p, lambda, volume } => {
            check(schema, left, right, *j, *p, lambda, volume)
        }
        Command::Counterexample { n, j, p, lambda, target_margin, s_cap } => {
            counterexample(schema, *n, *j, *p, *lambda, *target_margin, *s_cap)
        }
        Command::Spectrum { body, j, p, degree, resolution, count } => {
            spectrum(schema, body, *j, *p, *degree, *resolution, *count)
        }
        Command::SecondDerivative { .. } => second_derivative(schema, command),
        Command::IvakiMilman { body, j, p, c, resolution } => ivaki_milman(schema, body, *j, p, c, *resolution),
        Command::SteinerCheck { body, rho, resolution } => steiner(schema, body, rho, *resolution),
        Command::SolveCm { .. } => unreachable!(),
    };
    result.map_err(|e| failure(schema, e))
}

fn volumes(schema: Schema, path: &Path, v: &VolumeArgs) -> Result<Artifacts> {
    let body = Body::load(path)?;
    let rep = volume_report(&body, &body_id(path), &volume_options(v))?;
    let mut report = report_head(schema);
    let _ = writeln!(report, "body: {}", rep.body);
    let _ = writeln!(report, "kind: {}", describe(&body));
    let _ = writeln!(report, "n: {}", body.n());
    for e in &rep.entries {
        let _ = writeln!(report, "V_{}: {:.15e} ({}, error {:.3e})", e.j, e.value, e.method, e.error);
    }
    Ok(Artifacts { schema, table: Some(rep.to_csv()), report, plot: None, extra: Vec::new() })
}

fn lp_sum(schema: Schema, command: &Command) -> Result<Artifacts> {
    let Command::LpSum { left, right, p, lambda, resolution, directions, no_product_rule, sample_resolution } =
        command
    else {
        unreachable!()
    };
    let k = Body::load(left)?;
    let l = Body::load(right)?;
    let options =
        CombinationOptions { resolution: *resolution, directions: *directions, product_rule: !no_product_rule };
    let m = lp_combination_with(&k, &l, *p, *lambda, options)?;
    let grid = SphereGrid::new(k.n(), *sample_resolution)?;
    let mut rows = Vec::with_capacity(grid.len());
    for u in grid.nodes() {
        let (hk, hl, hm) = (k.support(u)?, l.support(u)?, m.support(u)?);
        rows.push(format!(
            "{:.15e},{:.15e},{:.15e},{hk:.15e},{hl:.15e},{:.15e},{hm:.15e}",
            u.x,
            u.y,
            u.z,
            power_mean(hk, hl, *p, *lambda)
        ));
    }
    let mut report = report_head(schema);
    let _ = writeln!(report, "p: {p}\nlambda: {lambda}\nn: {}", k.n());
    let _ = writeln!(report, "result: {}", describe(&m));
    Ok(Artifacts {
        schema,
        table: Some(table(schema, &rows)),
        report,
        plot: None,
        extra: vec![("combination.json".into(), BodySpec::from_body(&m).to_text())],
    })
}

fn check(
    schema: Schema,
    left: &Path,
    right: &Path,
    j: usize,
    p: f64,
    lambdas: &[f64],
    v: &VolumeArgs,
) -> Result<Artifacts> {
    let k = Body::load(left)?;
    let l = Body::load(right)?;
    let opts = volume_options(v);
    let verdicts = lambdas.iter().map(|&lam| check_lpbm(&k, &l, p, lam, j, &opts)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<String> = verdicts.iter().map(|v| format!("{},{}", v.csv_row(), v.strict_violation())).collect();
    let mut report = report_head(schema);
    let _ = writeln!(report, "left: {}\nright: {}\nj: {j}\np: {p}", body_id(left), body_id(right));
    let violations = verdicts.iter().filter(|v| v.strict_violation()).count();
    let _ = writeln!(report, "strict_violations: {violations} of {}", verdicts.len());
    let _ = writeln!(report, "lp_inequality_holds: {}", verdicts.iter().all(|v| v.holds(1e-10)));
    let plot = if verdicts.len() > 1 {
        Some(
            LinePlot {
                title: format!("relative margins, j = {j}, p = {p}"),
                x_label: "lambda".into(),
                y_label: "margin".into(),
                log_x: false,
                log_y: false,
                series: vec![
                    Series { label: "geometric".into(), points: verdicts.iter().map(|v| (v.lambda, v.margin_geo)).collect() },
                    Series { label: "p-mean".into(), points: verdicts.iter().map(|v| (v.lambda, v.margin_p)).collect() },
                ],
            }
            .render()?,
        )
    } else {
        None
    };
    Ok(Artifacts { schema, table: Some(table(schema, &rows)), report, plot, extra: Vec::new() })
}

fn counterexample(
    schema: Schema,
    n: usize,
    j: usize,
    p: f64,
    lambda: f64,
    target_margin: f64,
    s_cap: f64,
) -> Result<Artifacts> {
    let opts = SearchOptions { target_margin, s_cap, ..SearchOptions::default() };
    let ce = construct_counterexample(n, j, p, lambda, &opts)?;
    let rows: Vec<String> = ce
        .scan
        .iter()
        .map(|r| format!("{:.15e},{:.15e},{:.15e},{:.6e},{}", r.s, r.lhs, r.rhs, r.margin, r.margin > 0.0))
        .collect();
    let mut report = report_head(schema);
    let _ = writeln!(report, "n: {n}\nj: {j}\np: {p}\nlambda: {lambda}");
    let _ = writeln!(report, "base_pair: {}", ce.base);
    let hl: Vec<String> = ce.half_lengths.iter().map(|s| format!("{s:.15e}")).collect();
    let _ = writeln!(report, "half_lengths: [{}]", hl.join(", "));
    let _ = writeln!(report, "crossover: {:.15e}", ce.crossover);
    let _ = writeln!(report, "lhs: {:.15e}", ce.verdict.lhs);
    let _ = writeln!(report, "rhs_geo: {:.15e}", ce.verdict.rhs_geo);
    let _ = writeln!(report, "rhs_p: {:.15e}", ce.verdict.rhs_p);
    let _ = writeln!(report, "margin_geo: {:.6e}", ce.verdict.margin_geo);
    let _ = writeln!(report, "margin_p: {:.6e}", ce.verdict.margin_p);
    let _ = writeln!(report, "strict_violation: {}", ce.verdict.strict_violation());
    let _ = writeln!(report, "geometric_below_p_mean: {}", ce.verdict.rhs_geo <= ce.verdict.rhs_p);
    let _ = writeln!(report, "lp_inequality_holds: {}", ce.verdict.holds(1e-10));
    let plot = LinePlot {
        title: format!("margin against segment length, p = {p}, lambda = {lambda}"),
        x_label: "s".into(),
        y_label: "(rhs - lhs) / rhs".into(),
        log_x: true,
        log_y: false,
        series: vec![Series { label: "margin".into(), points: ce.scan.iter().map(|r| (r.s, r.margin)).collect() }],
    }
    .render()?;
    let mut extra = Vec::new();
    if let Some((k, l)) = &ce.bodies {
        extra.push(("left.json".into(), BodySpec::from_body(k).to_text()));
        extra.push(("right.json".into(), BodySpec::from_body(l).to_text()));
    }
    Ok(Artifacts { schema, table: Some(table(schema, &rows)), report, plot: Some(plot), extra })
}

fn spectrum(
    schema: Schema,
    path: &Path,
    j: usize,
    p: f64,
    degree: usize,
    resolution: usize,
    count: usize,
) -> Result<Artifacts> {
    if j < 2 {
        return Err(Error::InvalidParameter("the spectral threshold (j - p)/(j - 1) needs j >= 2".into()));
    }
    let body = Body::load(path)?;
    let grid = SphereGrid::new(body.n(), resolution)?;
    let problem = assemble_operator(&body, j, &grid, degree)?;
    let spec = problem.even_spectrum()?;
    let gap = spec.values[0];
    let threshold = (j as f64 - p) / (j as f64 - 1.0);
    let mut rows: Vec<String> =
        spec.values.iter().take(count).enumerate().map(|(i, v)| format!("eigenvalue,{i},{v:.15e}")).collect();
    rows.push(format!("lambda_1e,,{gap:.15e}"));
    rows.push(format!("threshold,,{threshold:.15e}"));
    let mut report = report_head(schema);
    let _ = writeln!(report, "body: {}\nj: {j}\np: {p}\ndegree: {degree}\nresolution: {resolution}", body_id(path));
    let _ = writeln!(report, "lambda_1e: {gap:.15e}");
    let _ = writeln!(report, "threshold: {threshold:.15e}");
    let _ = writeln!(report, "gap_exceeds_threshold: {}", gap > threshold);
    let _ = writeln!(report, "mass_condition: {:.3e}", spec.mass_condition);
    let _ = writeln!(report, "constant_residual: {:.3e}", problem.constant_residual);
    let _ = writeln!(report, "asymmetry: {:.3e}", problem.asymmetry);
    Ok(Artifacts { schema, table: Some(table(schema, &rows)), report, plot: None, extra: Vec::new() })
}

fn second_derivative(schema: Schema, command: &Command) -> Result<Artifacts> {
    let Command::SecondDerivative { body, j, p, samples, z_degree, degree, resolution, step, seed } = command else {
        unreachable!()
    };
    let k = Body::load(body)?;
    let grid = SphereGrid::new(k.n(), *resolution)?;
    let problem = assemble_operator(&k, *j, &grid, *degree)?;
    let zs = (0..*samples as u64)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rng.set_stream(s);
            random_even_expansion(&mut rng, k.n(), 0, *z_degree)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut series = Vec::new();
    for &pv in p {
        let mut pts = Vec::new();
        for (s, z) in zs.iter().enumerate() {
            let c = second_derivative_identity_check(&k, *j, pv, z, &problem, &grid, *step)?;
            worst = worst.max(c.discrepancy);
            pts.push((s as f64, c.discrepancy));
            rows.push(format!(
                "{pv},{s},{:.15e},{:.15e},{:.6e}",
                c.finite_difference, c.spectral, c.discrepancy
            ));
        }
        series.push(Series { label: format!("p = {pv}"), points: pts });
    }
    let mut report = report_head(schema);
    let _ = writeln!(report, "body: {}\nj: {j}\nsamples: {samples}\nstep: {step:e}", body_id(body));
    let _ = writeln!(report, "max_discrepancy: {worst:.6e}");
    Ok(Artifacts { schema, table: Some(table(schema, &rows)), report, plot: None, extra: Vec::new() })
        .map(|mut a| {
            a.plot = LinePlot {
                title: "relative discrepancy per sample".into(),
                x_label: "sample".into(),
                y_label: "discrepancy".into(),
                log_x: false,
                log_y: true,
                series,
            }
            .render()
            .ok();
            a
        })
}

fn quadrupole(n: usize, eps: f64) -> Result<HarmonicExpansion> {
    HarmonicExpansion::constant(n, 1.0)?.plus(&HarmonicExpansion::new(
        n,
        &[HarmonicTerm { degree: 2, order: 0, value: eps }],
    )?)
}

/// `one`, `constant:C`, `quadrupole:EPS` or a harmonic body file.
pub fn parse_data(text: &str, n: usize) -> Result<HarmonicExpansion> {
    let number = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")));
    if text == "one" {
        return HarmonicExpansion::constant(n, 1.0);
    }
    if let Some(c) = text.strip_prefix("constant:") {
        return HarmonicExpansion::constant(n, number(c)?);
    }
    if let Some(e) = text.strip_prefix("quadrupole:") {
        return quadrupole(n, number(e)?);
    }
    let path = Path::new(text);
    if !path.is_file() {
        return Err(Error::Parse(format!("'{text}' is neither a data tag nor a file")));
    }
    match BodySpec::parse(&std::fs::read_to_string(path)?)? {
        BodySpec::Harmonic { n: m, coefficients } => {
            if m != n {
                return Err(Error::SizeMismatch(format!("data lives in dimension {m}, expected {n}")));
            }
            let terms: Vec<HarmonicTerm> =
                coefficients.iter().map(|&(degree, order, value)| HarmonicTerm { degree, order, value }).collect();
            HarmonicExpansion::new(n, &terms)
        }
        _ => Err(Error::Parse("data file must describe a harmonic expansion".into())),
    }
}

fn solve_cm(command: &Command, schema: Schema) -> std::result::Result<Artifacts, (Error, Artifacts)> {
    let Command::SolveCm {
        n,
        j,
        p,
        data,
        resolution,
        degree,
        tolerance,
        probes,
        spread,
        seed,
        allow_excluded_regime,
    } = command
    else {
        unreachable!()
    };
    let fail = |e| failure(schema, e);
    let g = parse_data(data, *n).map_err(fail)?;
    let options =
        ProblemOptions { resolution: *resolution, max_degree: *degree, allow_excluded_regime: *allow_excluded_regime };
    let problem = CMProblem::new(*j, *p, g.clone(), options).map_err(fail)?;
    let config = SolverConfig { tolerance: *tolerance, ..SolverConfig::default() };
    let solved = newton_solve_from(&problem, None, &config);
    let plot = LinePlot {
        title: format!("Newton residuals, j = {j}, p = {p}"),
        x_label: "iteration".into(),
        y_label: "sup residual".into(),
        log_x: false,
        log_y: true,
        series: vec![Series {
            label: "residual".into(),
            points: solved.residuals.iter().enumerate().map(|(k, r)| (k as f64, *r)).collect(),
        }],
    }
    .render()
    .ok();
    let mut report = report_head(schema);
    let _ = writeln!(report, "data: {data}");
    for line in solved.to_text().lines().filter(|l| !l.starts_with("schema:")) {
        report.push_str(line);
        report.push('\n');
    }
    let mut artifacts =
        Artifacts { schema, table: Some(solved.history_csv()), report, plot, extra: Vec::new() };
    if let Some(e) = &solved.failure {
        return Err((e.clone(), artifacts));
    }
    let extend = |a: &mut Artifacts| -> Result<()> {
        let bounds = bound_monitor(&solved, &g, 2 * resolution)?;
        let r = &mut a.report;
        let _ = writeln!(r, "dense_min_h: {:.15}", bounds.min_h);
        let _ = writeln!(r, "dense_max_h: {:.15}", bounds.max_h);
        let _ = writeln!(r, "lipschitz: {:.15}", bounds.lipschitz);
        let _ = writeln!(r, "lipschitz_within_circumradius: {}", bounds.lipschitz_within_bound(1e-10));
        if *probes > 0 {
            let u = uniqueness_probe(&problem, &solved, *probes, *spread, *seed, &config)?;
            let _ = writeln!(r, "uniqueness_probe: {:?}", u.verdict);
            let worst = u.deviations.iter().flatten().fold(0.0f64, |m, d| m.max(*d));
            let _ = writeln!(r, "uniqueness_max_deviation: {worst:.3e}");
            let _ = writeln!(r, "uniqueness_aborted_runs: {}", u.failures.len());
        }
        let coefficients: Vec<(usize, i32, f64)> =
            solved.solution.terms().iter().map(|t| (t.degree, t.order, t.value)).collect();
        let spec = BodySpec::Harmonic { n: *n, coefficients };
        a.extra.push(("solution.json".into(), spec.to_text()));
        Ok(())
    };
    match extend(&mut artifacts) {
        Ok(()) => Ok(artifacts),
        Err(e) => Err((e, artifacts)),
    }
}

fn ivaki_milman(schema: Schema, path: &Path, j: usize, ps: &[f64], cs: &[f64], resolution: usize) -> Result<Artifacts> {
    let body = Body::load(path)?;
    let grid = SphereGrid::new(body.n(), resolution)?;
    let mut rows = Vec::new();
    let mut series = Vec::new();
    let mut all = true;
    for &p in ps {
        let mut pts = Vec::new();
        for &c in cs {
            let r = ivaki_milman_check(&body, j, p, c, &grid)?;
            all &= r.holds;
            pts.push((c, r.rhs - r.lhs));
            rows.push(format!("{p},{c},{:.15e},{:.15e},{}", r.lhs, r.rhs, r.holds));
        }
        series.push(Series { label: format!("p = {p}"), points: pts });
    }
    let mut report = report_head(schema);
    let _ = writeln!(report, "body: {}\nj: {j}\nresolution: {resolution}", body_id(path));
    let _ = writeln!(report, "holds_everywhere: {all}");
    let plot = if cs.len() > 1 {
        Some(
            LinePlot {
                title: "rhs - lhs".into(),
                x_label: "c".into(),
                y_label: "rhs - lhs".into(),
                log_x: true,
                log_y: false,
                series,
            }
            .render()?,
        )
    } else {
        None
    };
    Ok(Artifacts { schema, table: Some(table(schema, &rows)), report, plot, extra: Vec::new() })
}

fn steiner(schema: Schema, path: &Path, rhos: &[f64], resolution: usize) -> Result<Artifacts> {
    let body = Body::load(path)?;
    let grid = SphereGrid::new(body.n(), resolution)?;
    let out = steiner_rows(&body, &grid, rhos)?;
    let rows: Vec<String> = out
        .iter()
        .map(|r| format!("{},{:.15e},{:.15e},{:.6e}", r.rho, r.direct, r.polynomial, r.relative_gap))
        .collect();
    let worst = out.iter().map(|r| r.relative_gap).fold(0.0, f64::max);
    let mut report = report_head(schema);
    let _ = writeln!(report, "body: {}\nkind: {}\nresolution: {resolution}", body_id(path), describe(&body));
    let _ = writeln!(report, "max_relative_gap: {worst:.6e}");
    let plot = if rhos.len() > 1 {
        Some(
            LinePlot {
                title: "parallel volume against the Steiner polynomial".into(),
                x_label: "rho".into(),
                y_label: "relative gap".into(),
                log_x: true,
                log_y: false,
                series: vec![Series { label: "gap".into(), points: out.iter().map(|r| (r.rho, r.relative_gap)).collect() }],
            }
            .render()?,
        )
    } else {
        None
    };
    Ok(Artifacts { schema, table: Some(table(schema, &rows)), report, plot, extra: Vec::new() })
}
