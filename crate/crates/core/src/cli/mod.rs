//! Command-line front end: body files in, tables, plots and reports out.

mod commands;
pub mod plot;
pub mod schema;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::volumes::{VolumeMethod, DEFAULT_SEED};

pub use commands::Artifacts;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lpbm", version, about = "Intrinsic volumes, L_p combinations and curvature equations for symmetric convex bodies")]
pub struct Cli {
    /// Directory for results.csv, report.txt and plot.svg.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn existing_file(s: &str) -> Result<PathBuf, String> {
    let p = PathBuf::from(s);
    if p.is_file() {
        Ok(p)
    } else {
        Err(format!("no such file: {s}"))
    }
}

fn volume_method(s: &str) -> Result<VolumeMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct VolumeArgs {
    /// Grid resolution for surface integrals.
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
    /// surface-integral, exact-2D, product-formula or monte-carlo-oracle.
    #[arg(long, value_parser = volume_method)]
    pub method: Option<VolumeMethod>,
    /// Projections drawn by the Monte Carlo oracle.
    #[arg(long, default_value_t = 4000)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intrinsic volumes V_1..V_n of a body.
    Volumes {
        #[arg(long, value_parser = existing_file)]
        body: PathBuf,
        #[command(flatten)]
        volume: VolumeArgs,
    },
    /// L_p combination of two bodies, sampled on a grid.
    LpSum {
        #[arg(long, value_parser = existing_file)]
        left: PathBuf,
        #[arg(long, value_parser = existing_file)]
        right: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        #[arg(long, value_parser = unit_interval)]
        lambda: f64,
        /// Resolution of the Wulff direction grid (spatial bodies).
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        /// Number of directions for planar Wulff shapes.
        #[arg(long, default_value_t = 4096)]
        directions: usize,
        /// Do not simplify products with a common segment.
        #[arg(long)]
        no_product_rule: bool,
        /// Resolution of the grid the result is sampled on.
        #[arg(long, default_value_t = 8)]
        sample_resolution: usize,
    },
    /// Compare V_j of an L_p combination with the geometric and p-mean bounds.
    CheckLpbm {
        #[arg(long, value_parser = existing_file)]
        left: PathBuf,
        #[arg(long, value_parser = existing_file)]
        right: PathBuf,
        #[arg(long)]
        j: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: f64,
        /// One or more weights, comma separated.
        #[arg(long, value_delimiter = ',', required = true, value_parser = unit_interval)]
        lambda: Vec<f64>,
        #[command(flatten)]
        volume: VolumeArgs,
    },
    /// Search for a violation of the logarithmic inequality with segment products.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        j: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, value_parser = unit_interval)]
        lambda: f64,
        #[arg(long, default_value_t = 1e-4)]
        target_margin: f64,
        #[arg(long, default_value_t = 1e6)]
        s_cap: f64,
    },
    /// Lowest even eigenvalues of the second-order operator of a body.
    Spectrum {
        #[arg(long, value_parser = existing_file)]
        body: PathBuf,
        #[arg(long, default_value_t = 2)]
        j: usize,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        p: f64,
        /// Largest harmonic degree of the basis.
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Second variation of V_j along L_p perturbations against the operator form.
    SecondDerivative {
        #[arg(long, value_parser = existing_file)]
        body: PathBuf,
        #[arg(long, default_value_t = 2)]
        j: usize,
        /// One or more nonzero p, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Largest degree of the random perturbations.
        #[arg(long, default_value_t = 4)]
        z_degree: usize,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 16)]
        resolution: usize,
        #[arg(long, default_value_t = crate::spectral::DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Newton solver for h^(1-p) s_j(h) = g on even functions.
    SolveCm {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long)]
        p: f64,
        /// `one`, `constant:C`, `quadrupole:EPS` or a harmonic body file.
        #[arg(long, default_value = "one")]
        data: String,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
        #[arg(long, default_value_t = 20)]
        degree: usize,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Random restarts for the uniqueness probe (0 disables it).
        #[arg(long, default_value_t = 5)]
        probes: usize,
        #[arg(long, default_value_t = 0.1)]
        spread: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run the (p, j) = (0, 1) case, which the uniqueness theory excludes.
        #[arg(long)]
        allow_excluded_regime: bool,
    },
    /// Both sides of the curvature integral inequality for a smooth body.
    IvakiMilman {
        #[arg(long, value_parser = existing_file)]
        body: PathBuf,
        #[arg(long, default_value_t = 1)]
        j: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5")]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        c: Vec<f64>,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
    },
    /// Parallel volumes against the Steiner polynomial.
    SteinerCheck {
        #[arg(long, value_parser = existing_file)]
        body: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2")]
        rho: Vec<f64>,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
    },
}

fn write_artifacts(dir: &Path, a: &Artifacts) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    if let Some(t) = &a.table {
        std::fs::write(dir.join("results.csv"), t)?;
    }
    std::fs::write(dir.join("report.txt"), &a.report)?;
    if let Some(p) = &a.plot {
        std::fs::write(dir.join("plot.svg"), p)?;
    }
    for (name, text) in &a.extra {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (status, artifacts) = match commands::execute(&cli.command) {
        Ok(a) => (EXIT_OK, a),
        Err((e, partial)) => {
            eprintln!("error: {e}");
            let status = if e.is_numerical() {
                EXIT_NUMERICAL
            } else if matches!(e, Error::Io(_)) {
                EXIT_IO
            } else {
                EXIT_USAGE
            };
            (status, partial)
        }
    };
    if let Some(t) = &artifacts.table {
        print!("{t}");
    } else {
        print!("{}", artifacts.report);
    }
    if let Some(dir) = &cli.out {
        if let Err(e) = write_artifacts(dir, &artifacts) {
            eprintln!("error: cannot write to {}: {e}", dir.display());
            return EXIT_IO;
        }
    }
    status
}
