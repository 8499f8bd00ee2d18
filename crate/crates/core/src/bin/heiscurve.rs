//! Command-line front end: analyze, classify, reduce, synthesize, test
//! congruence, and generate geodesics, over flat JSON/CSV files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;

use heiscurve::classify::{curve_order, reduce_degenerate};
use heiscurve::curve::SampledCurve;
use heiscurve::error::Error;
use heiscurve::frames::invariants_along;
use heiscurve::geodesics::{geodesic_curve, GeodesicSpec};
use heiscurve::io;
use heiscurve::numerics::linspace;
use heiscurve::synth::{congruence_test, synthesize_curve, CongruenceOutcome};

const EXIT_DEGENERATE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_MISCLASSIFIED: u8 = 66;
const EXIT_RESOLUTION: u8 = 67;
const EXIT_NUMERIC: u8 = 70;
const EXIT_IO: u8 = 74;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. } => EXIT_USAGE,
        Error::NotHorizontallyRegular { .. } | Error::Degenerate { .. } => EXIT_DATA,
        Error::Misclassification { .. } => EXIT_MISCLASSIFIED,
        Error::Resolution(_) | Error::StepSize { .. } => EXIT_RESOLUTION,
        Error::Conditioning(_) | Error::NumericalInconsistency(_) => EXIT_NUMERIC,
        Error::Io(_) => EXIT_IO,
    }
}

#[derive(Parser)]
#[command(name = "heiscurve", about = "Invariants and classification of curves in the Heisenberg groups", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tolerances {
    /// relative singular-value threshold for rank decisions
    #[arg(long, default_value_t = 1e-8)]
    tol_rank: f64,
    /// sup-norm tolerance for invariant comparison
    #[arg(long, default_value_t = 1e-6)]
    tol_congruence: f64,
    /// number of arc-length samples used when reparametrizing
    #[arg(long, default_value_t = 1001)]
    samples: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Reparametrize, classify, and compute the invariant profile of a curve
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out_profile: PathBuf,
        #[arg(long)]
        out_report: PathBuf,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Print the order report of a curve
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Move a degenerate curve into the subgroup H_k x {0} by a rigid motion
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        out_symmetry: PathBuf,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Reconstruct the canonical curve with the invariants of a profile CSV
    Synthesize {
        #[arg(long)]
        profile: PathBuf,
        /// expected Heisenberg dimension (checked against the CSV header)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide congruence of two curves and recover the rigid motion
    Congruence {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// Generate a horizontal geodesic
    Geodesic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        /// initial x-velocity components, comma-separated
        #[arg(long, value_name = "A1,..,An", allow_hyphen_values = true)]
        a: String,
        /// initial y-velocity components, comma-separated
        #[arg(long, value_name = "B1,..,Bn", allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_name = "X1,..,Xn", allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, value_name = "Y1,..,Yn", allow_hyphen_values = true)]
        y0: Option<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0)]
        s_max: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_vec(n: usize, text: &str, what: &str) -> Result<DVector<f64>, Error> {
    let vals = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad {what} entry: {s}"))))
        .collect::<Result<Vec<f64>, Error>>()?;
    if vals.len() != n {
        return Err(Error::Parse(format!("{what} needs {n} entries, got {}", vals.len())));
    }
    Ok(DVector::from_vec(vals))
}

/// Reparametrize by horizontal arc length unless the input already is.
fn ensure_arclength(c: SampledCurve, samples: usize) -> Result<SampledCurve, Error> {
    if c.is_arclength() {
        Ok(c)
    } else {
        c.arclength_reparametrize(samples)
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Analyze { input, out_profile, out_report, tol } => {
            let curve = ensure_arclength(io::read_curve(&input)?, tol.samples)?;
            let report = curve_order(&curve, tol.tol_rank)?;
            let profile = invariants_along(&curve, report.order)?;
            io::write_profile(&out_profile, &profile)?;
            io::write_report(&out_report, &report)?;
            println!(
                "order {} of n = {} ({}); profile -> {}, report -> {}",
                report.order,
                curve.n(),
                if report.nondegenerate { "non-degenerate" } else { "degenerate: consider `reduce`" },
                out_profile.display(),
                out_report.display()
            );
            Ok(if report.nondegenerate { 0 } else { EXIT_DEGENERATE })
        }
        Command::Classify { input, out, tol } => {
            let curve = io::read_curve(&input)?;
            let report = curve_order(&curve, tol.tol_rank)?;
            let text = serde_json::to_string_pretty(&report).expect("report");
            println!("{text}");
            if let Some(path) = out {
                io::write_report(&path, &report)?;
            }
            Ok(0)
        }
        Command::Reduce { input, out, out_symmetry, tol } => {
            let curve = io::read_curve(&input)?;
            let report = curve_order(&curve, tol.tol_rank)?;
            if report.order >= curve.n() {
                return Err(Error::InvalidArgument(format!(
                    "curve has top order {}; nothing to reduce",
                    report.order
                )));
            }
            let red = reduce_degenerate(&curve, report.order, tol.tol_rank)?;
            io::write_curve(&out, &red.curve)?;
            io::write_symmetry(&out_symmetry, &red.symmetry)?;
            println!(
                "reduced to order {} with residual {:.3e}; curve -> {}, symmetry -> {}",
                report.order,
                red.residual,
                out.display(),
                out_symmetry.display()
            );
            Ok(0)
        }
        Command::Synthesize { profile, n, out } => {
            let profile = io::read_profile(&profile)?;
            if let Some(n) = n {
                if n != profile.n {
                    return Err(Error::Parse(format!(
                        "profile has {} p-curvature columns but --n {n} was requested",
                        profile.n
                    )));
                }
            }
            let curve = synthesize_curve(&profile)?;
            io::write_curve(&out, &curve)?;
            println!("synthesized n = {} curve with {} samples -> {}", profile.n, curve.len(), out.display());
            Ok(0)
        }
        Command::Congruence { a, b, tol } => {
            let ca = ensure_arclength(io::read_curve(&a)?, tol.samples)?;
            let cb = ensure_arclength(io::read_curve(&b)?, tol.samples)?;
            let len_a = *ca.params().last().unwrap();
            let len_b = *cb.params().last().unwrap();
            if ca.len() != cb.len() || (len_a - len_b).abs() > 1e-6 {
                println!(
                    "{}",
                    serde_json::json!({
                        "congruent": false,
                        "reason": "horizontal arc lengths differ",
                        "arc_length_a": len_a,
                        "arc_length_b": len_b,
                    })
                );
                return Ok(1);
            }
            match congruence_test(&ca, &cb, tol.tol_congruence)? {
                CongruenceOutcome::Congruent { symmetry, alignment_residual } => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "congruent": true,
                            "alignment_residual": alignment_residual,
                            "symmetry": io::SymmetryJson::from_symmetry(&symmetry),
                        })
                    );
                    Ok(0)
                }
                CongruenceOutcome::Mismatch(report) => {
                    println!(
                        "{}",
                        serde_json::json!({
                            "congruent": false,
                            "order_a": report.order_a,
                            "order_b": report.order_b,
                            "kappa_sup_diffs": report.kappa_diffs,
                            "tau_sup_diff": if report.tau_diff.is_nan() { None } else { Some(report.tau_diff) },
                        })
                    );
                    Ok(1)
                }
            }
        }
        Command::Geodesic { n, lambda, a, b, x0, y0, t0, s_max, samples, out } => {
            let a = parse_vec(n, &a, "--A")?;
            let b = parse_vec(n, &b, "--B")?;
            let x0 = match x0 {
                Some(t) => parse_vec(n, &t, "--x0")?,
                None => DVector::zeros(n),
            };
            let y0 = match y0 {
                Some(t) => parse_vec(n, &t, "--y0")?,
                None => DVector::zeros(n),
            };
            let spec = GeodesicSpec::new(n, lambda, x0, y0, t0, a, b)?;
            if samples < 9 || s_max <= 0.0 {
                return Err(Error::InvalidArgument("need --samples >= 9 and --s-max > 0".into()));
            }
            let grid = linspace(0.0, s_max, samples);
            let curve = geodesic_curve(&spec, &grid)?;
            io::write_curve(&out, &curve)?;
            println!("geodesic (n = {n}, lambda = {lambda}) with {samples} samples -> {}", out.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
