//! `psidiff`: evaluate divided-difference functionals of psi and run
//! the verification suites.
//!
//! Exit codes: 0 when every checked claim passes, 1 when any claim
//! fails, 2 on usage, configuration, or I/O errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use psidiff_core::apps;
use psidiff_core::divdiff::{self, AnchoredPair, ShiftPair};
use psidiff_core::real::PrecisionMode;
use psidiff_core::report::{self, SuiteConfig, SuiteKind};
use psidiff_core::special;

/// Environment variable supplying the default precision.
const PRECISION_ENV: &str = "PSIDIFF_PRECISION";

#[derive(Parser)]
#[command(name = "psidiff", version, about = "Divided-difference functionals of psi: evaluator and inequality verifier", long_about = None)]
struct Cli {
    /// Working precision: 'double' or 'extended:<digits>' (>= 30).
    /// Falls back to $PSIDIFF_PRECISION, then to 'double'.
    #[arg(long, global = true)]
    precision: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one functional at a point.
    Eval {
        /// Functional to evaluate.
        #[arg(value_enum)]
        functional: Functional,

        /// Abscissa x.
        #[arg(short = 'x', long = "at", allow_hyphen_values = true)]
        at: f64,

        /// First shift of the pair (functionals parameterised by (s,t)).
        #[arg(short, long, default_value_t = 0.0, allow_hyphen_values = true)]
        s: f64,

        /// Second shift of the pair.
        #[arg(short, long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,

        /// Derivative order (theta, delta, polygamma).
        #[arg(short = 'k', long, default_value_t = 0)]
        order: u32,

        /// Anchor point c of the (g, f) family; required by g and f.
        #[arg(short = 'c', long, allow_hyphen_values = true)]
        anchor: Option<f64>,
    },

    /// Run verification suites and report every checked claim.
    Verify {
        /// Suites to run: any of cm, wallis, erf, ball, kershaw,
        /// gamma-psi, aux, identities, conjecture, or 'all'.
        #[arg(default_value = "all")]
        suites: Vec<String>,

        /// Upper index for the sequence suites (wallis, erf, ball).
        #[arg(long, default_value_t = 200)]
        n_max: u64,

        /// Highest certified derivative order.
        #[arg(long, default_value_t = 6)]
        k_max: u32,

        /// Points per scan grid.
        #[arg(long, default_value_t = 64)]
        grid: usize,

        /// Write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,

        /// Write the report as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,

        /// Seed for the deterministic sampling.
        #[arg(long, default_value_t = 20259)]
        seed: u64,

        /// Attach wall-clock timings to report entries.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Functional {
    /// z_{s,t}(x): gamma-ratio power minus x.
    Z,
    /// First derivative of z.
    ZPrime,
    /// Second derivative of z.
    ZSecond,
    /// Theta^(k), the scaled curvature functional.
    Theta,
    /// Delta^(k), the curvature density.
    Delta,
    /// Step defect Lambda.
    Lambda,
    /// Product Phi = dd1 * (z + x).
    Phi,
    /// Wallis remainder theta1(x) = z_{1/2,1}(x).
    Theta1,
    /// Wallis remainder theta2(x) = z_{1,3/2}(x).
    Theta2,
    /// Anchored primitive g(x) with g'(c) = 0 (needs --anchor).
    G,
    /// Anchored ratio f(x) = g/w (needs --anchor).
    F,
    /// Digamma psi(x).
    Digamma,
    /// Polygamma psi^(k)(x).
    Polygamma,
    /// ln Gamma(x).
    LnGamma,
    /// Anchored ratio Q(x) = [lnGamma(x) - lnGamma(x0)] / E(x).
    QRatio,
}

fn resolve_precision(flag: Option<&str>) -> Result<PrecisionMode> {
    let spec = match flag {
        Some(s) => s.to_string(),
        None => match std::env::var(PRECISION_ENV) {
            Ok(s) if !s.is_empty() => s,
            _ => return Ok(PrecisionMode::Double),
        },
    };
    Ok(spec.parse::<PrecisionMode>()?)
}

fn eval(
    functional: Functional,
    at: f64,
    s: f64,
    t: f64,
    order: u32,
    anchor: Option<f64>,
    mode: PrecisionMode,
) -> Result<String> {
    let pair = ShiftPair::new(s, t);
    let x = mode.real(at);
    let anchored = || -> Result<AnchoredPair> {
        let c = anchor.context("this functional needs --anchor <C>")?;
        anyhow::ensure!(
            c.is_finite() && c > -pair.alpha(),
            "anchor {c} outside domain x > {}",
            -pair.alpha()
        );
        Ok(AnchoredPair::new(pair, c))
    };
    let value = match functional {
        Functional::Z => divdiff::z_eval(&pair, &x)?,
        Functional::ZPrime => divdiff::z_prime(&pair, &x)?,
        Functional::ZSecond => divdiff::z_second(&pair, &x)?,
        Functional::Theta => divdiff::theta_derivative(order, &pair, &x)?,
        Functional::Delta => divdiff::delta_derivative(order, &pair, &x)?,
        Functional::Lambda => divdiff::lambda_fn(&pair, &x)?,
        Functional::Phi => divdiff::phi(&pair, &x)?,
        Functional::Theta1 => apps::theta_sequences(&x)?.0,
        Functional::Theta2 => apps::theta_sequences(&x)?.1,
        Functional::G => divdiff::g_f_eval(&anchored()?, &x)?.g,
        Functional::F => divdiff::g_f_eval(&anchored()?, &x)?.f,
        Functional::Digamma => special::digamma(&x)?,
        Functional::Polygamma => special::polygamma(order, &x)?,
        Functional::LnGamma => special::ln_gamma(&x)?,
        Functional::QRatio => divdiff::q_ratio(&x)?,
    };
    Ok(value.to_string())
}

fn parse_suites(names: &[String]) -> Result<BTreeSet<SuiteKind>> {
    let mut suites = BTreeSet::new();
    for name in names {
        if name == "all" {
            suites.extend(SuiteKind::ALL);
        } else {
            suites.insert(name.parse::<SuiteKind>()?);
        }
    }
    Ok(suites)
}

fn verify(
    suites: &[String],
    n_max: u64,
    k_max: u32,
    grid: usize,
    json: Option<&PathBuf>,
    csv: Option<&PathBuf>,
    seed: u64,
    timings: bool,
    precision: PrecisionMode,
) -> Result<i32> {
    let config = SuiteConfig {
        suites: parse_suites(suites)?,
        n_max,
        k_max,
        grid_points: grid,
        precision,
        seed,
        timings,
    };
    let report = report::run_suite(config)?;
    if let Some(path) = json {
        std::fs::write(path, report::to_json(&report)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = csv {
        std::fs::write(path, report::to_csv(&report)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    print!("{}", report::to_text(&report));
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32> {
    let mode = resolve_precision(cli.precision.as_deref())?;
    match cli.command {
        Command::Eval {
            functional,
            at,
            s,
            t,
            order,
            anchor,
        } => {
            println!("{}", eval(functional, at, s, t, order, anchor, mode)?);
            Ok(0)
        }
        Command::Verify {
            suites,
            n_max,
            k_max,
            grid,
            json,
            csv,
            seed,
            timings,
        } => verify(
            &suites,
            n_max,
            k_max,
            grid,
            json.as_ref(),
            csv.as_ref(),
            seed,
            timings,
            mode,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
