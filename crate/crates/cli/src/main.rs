use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use wittenloc_cli::commands::{self, LatticeSpec};
use wittenloc_cli::complex::parse_complex;
use wittenloc_cli::report::Report;

const EXIT_VALIDATION: u8 = 1;
const EXIT_TOLERANCE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "wittenloc",
    version,
    about = "Lattice functions, equivariant localization and the Witten genus"
)]
struct Cli {
    /// Emit a JSON record instead of the text table.
    #[arg(long, global = true)]
    json: bool,

    /// Include wall-clock timings (output is then no longer reproducible).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy, Debug)]
struct LatticeArgs {
    /// τ = ω₂/ω₁ with ω₁ = 1; default i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with_all = ["omega1", "omega2"])]
    tau: Option<Complex64>,

    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "omega2")]
    omega1: Option<Complex64>,

    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "omega1")]
    omega2: Option<Complex64>,
}

impl From<LatticeArgs> for LatticeSpec {
    fn from(a: LatticeArgs) -> Self {
        LatticeSpec {
            tau: a.tau,
            omega1: a.omega1,
            omega2: a.omega2,
        }
    }
}

fn parse_two_k(s: &str) -> Result<u32, String> {
    let v: u32 = s
        .parse()
        .map_err(|_| format!("{s:?} is not a non-negative integer"))?;
    if v < 2 || !v.is_multiple_of(2) {
        return Err(format!("2k must be an even integer >= 2, got {v}"));
    }
    Ok(v)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("expected a positive number, got {s}"));
    }
    Ok(v)
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(-std::f64::consts::PI..std::f64::consts::PI).contains(&v) {
        return Err(format!("base angle must lie in [-pi, pi), got {s}"));
    }
    Ok(v)
}

#[derive(Subcommand)]
enum Command {
    /// Eisenstein series G_2k of a lattice; 2k = 2 gives the regularized G2 with its η cross-check.
    Eisenstein {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long = "two-k", value_parser = parse_two_k)]
        two_k: u32,
        /// Starting radius of the radius-doubling lattice sum.
        #[arg(long, env = "WITLOC_RADIUS", value_parser = parse_positive)]
        radius: Option<f64>,
        /// Relative tolerance of the radius-doubling check.
        #[arg(long, env = "WITLOC_TOL", default_value_t = 1e-8, value_parser = parse_positive)]
        tol: f64,
        /// Base angle of the argument choice (2k = 2 only).
        #[arg(long = "arg-base", value_parser = parse_angle, allow_hyphen_values = true)]
        arg_base: Option<f64>,
    },
    /// Dedekind η, its logarithmic derivative and the G2 cross-check.
    Eta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "i")]
        tau: Complex64,
        /// Number of product factors; chosen from Im τ when omitted.
        #[arg(long)]
        order: Option<u32>,
    },
    /// Taylor coefficients of σ and point evaluations against the direct product.
    Sigma {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 12)]
        order: usize,
        /// Evaluation point (repeatable); 20 points of |z| <= 0.4 by default.
        #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
        points: Vec<Complex64>,
        /// Disc radius of the direct Weierstrass product.
        #[arg(long = "product-radius", default_value_t = 100.0, value_parser = parse_positive)]
        product_radius: f64,
        #[arg(long, env = "WITLOC_RADIUS", value_parser = parse_positive)]
        radius: Option<f64>,
        #[arg(long, env = "WITLOC_TOL", default_value_t = 1e-8, value_parser = parse_positive)]
        tol: f64,
    },
    /// Witten class components and Witten genus of a manifest.
    Witten {
        /// Path of the JSON manifest.
        manifest: String,
        /// Coefficients as polynomials in G2, G4, … (G2 is the regularized ζ(2)).
        #[arg(long)]
        symbolic: bool,
        /// The real Witten class.
        #[arg(long)]
        real: bool,
        #[arg(long = "arg-base", value_parser = parse_angle, allow_hyphen_values = true)]
        arg_base: Option<f64>,
        /// Highest Wit_j printed.
        #[arg(long)]
        order: Option<u32>,
        /// Print the validated manifest in canonical form and stop.
        #[arg(long = "emit-manifest")]
        emit_manifest: bool,
        #[arg(long, env = "WITLOC_RADIUS", value_parser = parse_positive)]
        radius: Option<f64>,
        #[arg(long, env = "WITLOC_TOL", value_parser = parse_positive)]
        tol: Option<f64>,
    },
    /// Both sides of the localization formula on S², plus the closedness residual.
    #[command(name = "localize-s2")]
    LocalizeS2 {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// The weight λ, a nonzero lattice point.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
        lambda: Complex64,
        #[arg(long = "arg-base", value_parser = parse_angle, allow_hyphen_values = true)]
        arg_base: Option<f64>,
        /// Number of closedness sample points.
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-5, value_parser = parse_positive)]
        step: f64,
        #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
        tol: f64,
        /// Reverse the orientation of S².
        #[arg(long = "flip-orientation")]
        flip_orientation: bool,
    },
    /// Run the built-in consistency checks.
    Selfcheck,
}

fn run(cli: &Cli) -> anyhow::Result<Option<Report>> {
    let timings = cli.timings;
    let report = match &cli.command {
        Command::Eisenstein {
            lattice,
            two_k,
            radius,
            tol,
            arg_base,
        } => commands::eisenstein(&commands::EisensteinArgs {
            lattice: (*lattice).into(),
            two_k: *two_k,
            radius: *radius,
            tol: *tol,
            arg_base: *arg_base,
            timings,
        })?,
        Command::Eta { tau, order } => commands::eta(&commands::EtaArgs {
            tau: *tau,
            order: *order,
            timings,
        })?,
        Command::Sigma {
            lattice,
            order,
            points,
            product_radius,
            radius,
            tol,
        } => commands::sigma(&commands::SigmaArgs {
            lattice: (*lattice).into(),
            order: *order,
            points: points.clone(),
            product_radius: *product_radius,
            radius: *radius,
            tol: *tol,
            timings,
        })?,
        Command::Witten {
            manifest,
            symbolic,
            real,
            arg_base,
            order,
            emit_manifest,
            radius,
            tol,
        } => {
            if *emit_manifest {
                let m = commands::load_manifest(manifest)?;
                println!("{}", serde_json::to_string_pretty(&m.to_json())?);
                return Ok(None);
            }
            commands::witten(&commands::WittenArgs {
                manifest: manifest.clone(),
                symbolic: *symbolic,
                real: *real,
                arg_base: *arg_base,
                order: *order,
                radius: *radius,
                tol: *tol,
                timings,
            })?
        }
        Command::LocalizeS2 {
            lattice,
            lambda,
            arg_base,
            points,
            step,
            tol,
            flip_orientation,
        } => commands::localize_s2(&commands::LocalizeArgs {
            lattice: (*lattice).into(),
            lambda: *lambda,
            arg_base: *arg_base,
            points: *points,
            step: *step,
            tol: *tol,
            flip_orientation: *flip_orientation,
            timings,
        })?,
        Command::Selfcheck => commands::selfcheck(timings)?,
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("serializable")
                );
            } else {
                print!("{}", report.to_text());
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_TOLERANCE)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
