//! `hpoly`: build stable polytopes of monic Hurwitz polynomials, classify
//! single polynomials, verify edge/interior structure, and search for
//! non-convexity witnesses.
//!
//! Coefficients are ascending (`a_1` first, the constant term); the leading
//! 1 is implicit. Exit codes: 0 success/stable, 1 verification failure or
//! witness not found, 2 invalid input, 3 boundary, 4 unstable.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use hurwitz_polytopes::rational::{parse_rational, parse_rational_list};
use hurwitz_polytopes::verify::{nonconvexity_search, VerifyOptions};
use hurwitz_polytopes::{
    classify, run_verification, Error, MonicPolynomial, PolytopeSpec, StabilityClass,
    StablePolytope,
};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BOUNDARY: u8 = 3;
const EXIT_UNSTABLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hpoly",
    version,
    about = "Stable polytopes in Hurwitz-polynomial coefficient space",
    after_help = "Coefficients are ascending: `--coeffs 6,12,11,5` means \
                  s^4 + 5s^3 + 11s^2 + 12s + 6. Rationals accept `p/q` or \
                  decimal strings."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON/CSV payload to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format. CSV is available for `verify` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for the verification sweeps. Output bytes do not
    /// depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build the (n+1)-vertex polytope for a parameter set and print it.
    Build {
        /// Polynomial degree (>= 2).
        #[arg(long)]
        n: usize,
        /// Comma-separated block parameters, each > 1, pairwise distinct:
        /// n/2 values for even n, (n+1)/2 for odd n.
        #[arg(long)]
        alphas: String,
    },
    /// Classify one polynomial: exit 0 stable, 3 boundary, 4 unstable.
    Classify {
        /// Comma-separated coefficients a_1,...,a_n (ascending).
        #[arg(long)]
        coeffs: String,
    },
    /// Sweep every edge and sample the interior; exit 0 only on a clean run.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alphas: String,
        /// Lambda grid points per edge (>= 3).
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Interior Monte Carlo sample count.
        #[arg(long, default_value_t = 10_000)]
        interior: usize,
        /// Barycentric weight floor, in (0, 1/(n+1)).
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        /// RNG seed; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
        /// Check only the uniform-weight barycenter instead of sampling.
        #[arg(long)]
        centroid: bool,
    },
    /// Search for two stable polynomials with an unstable midpoint.
    Counterexample {
        /// Polynomial degree (>= 3; degrees 1 and 2 are convex).
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// RNG seed; required so runs are reproducible.
        #[arg(long)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be >= 1");
            return ExitCode::from(EXIT_INVALID);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("error: cannot size worker pool: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

enum CliError {
    /// Bad input: exit 2.
    Invalid(String),
    /// The machinery itself failed (I/O, internal inconsistency): exit 1.
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => CliError::Invalid(m),
            Error::Inconsistency(m) => CliError::Failed(format!("internal inconsistency: {m}")),
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Build { ref n, ref alphas } => {
            reject_csv(cli.format, "build")?;
            let spec = parse_spec(*n, alphas)?;
            let poly = StablePolytope::build(spec);
            let json = serde_json::to_string_pretty(&poly.to_json())
                .expect("polytope serializes");
            emit(&cli.out, &json)?;
            for (i, class) in poly.vertex_class().iter().enumerate() {
                eprintln!("vertex {i}: {}", serde_json::to_string(class).unwrap());
            }
            Ok(EXIT_OK)
        }
        Command::Classify { ref coeffs } => {
            reject_csv(cli.format, "classify")?;
            let coeffs = parse_rational_list(coeffs).map_err(CliError::from)?;
            let p = MonicPolynomial::from_coeffs(coeffs).map_err(CliError::from)?;
            let verdict = classify(&p).map_err(CliError::from)?;
            let json = serde_json::to_string_pretty(&verdict.to_json())
                .expect("verdict serializes");
            emit(&cli.out, &json)?;
            Ok(match verdict.class {
                StabilityClass::Stable => EXIT_OK,
                StabilityClass::Boundary => EXIT_BOUNDARY,
                StabilityClass::Unstable => EXIT_UNSTABLE,
            })
        }
        Command::Verify {
            ref n,
            ref alphas,
            grid,
            interior,
            ref epsilon,
            seed,
            centroid,
        } => {
            let spec = parse_spec(*n, alphas)?;
            let epsilon = parse_rational(epsilon).map_err(CliError::from)?;
            let opts = VerifyOptions {
                grid_size: grid,
                interior_count: interior,
                epsilon,
                seed,
                centroid_only: centroid,
            };
            let started = Instant::now();
            let report = run_verification(&spec, &opts).map_err(CliError::from)?;
            let elapsed = started.elapsed();
            let payload = match cli.format {
                Format::Json => report.to_json_string(),
                Format::Csv => report.edges_csv(),
            };
            emit(&cli.out, &payload)?;
            eprintln!(
                "verified degree {} in {:.1?}: {} violations, certificates {}",
                report.n,
                elapsed,
                report.total_violations(),
                if report.all_certificates_match() {
                    "match"
                } else {
                    "MISMATCH"
                }
            );
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Counterexample { n, trials, seed } => {
            reject_csv(cli.format, "counterexample")?;
            match nonconvexity_search(n, trials, seed).map_err(CliError::from)? {
                Some(witness) => {
                    let json = serde_json::to_string_pretty(&witness.to_json(n, seed))
                        .expect("witness serializes");
                    emit(&cli.out, &json)?;
                    eprintln!("p        = {}", witness.p);
                    eprintln!("q        = {}", witness.q);
                    eprintln!("midpoint = {}", witness.midpoint);
                    Ok(EXIT_OK)
                }
                None => Err(CliError::Failed(format!(
                    "no witness within {trials} trials; retry with more trials or another seed"
                ))),
            }
        }
    }
}

fn parse_spec(n: usize, alphas: &str) -> Result<PolytopeSpec, CliError> {
    let alphas = parse_rational_list(alphas).map_err(CliError::from)?;
    PolytopeSpec::new(n, alphas).map_err(CliError::from)
}

fn reject_csv(format: Format, command: &str) -> Result<(), CliError> {
    if format == Format::Csv {
        return Err(CliError::Invalid(format!(
            "csv output is only available for verify, not {command}"
        )));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, payload: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, payload.as_bytes())
            .map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}
