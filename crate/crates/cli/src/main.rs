use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitgap::config::{BackendName, Caps, ExperimentConfig, JobSpec};
use orbitgap::fuzz::{fuzz_suites, FuzzSizes};
use orbitgap::report;
use orbitgap::runner::{self, Outcome};
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_COMPUTATION: u8 = 2;
const EXIT_FUZZ: u8 = 3;

#[derive(Parser)]
#[command(name = "orbitgap", version, about = "Exact heights, orbit scans and height-inequality checks for rational maps over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan an orbit against the canonical-height threshold.
    Scan {
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        #[command(flatten)]
        common: Common,
    },
    /// Scan an orbit against the naive-height threshold.
    ScanNaive {
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        common: Common,
    },
    /// List the S-integral points among phi^n(P), 1 <= n <= nmax.
    Census {
        #[arg(long)]
        map: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value = "inf")]
        places: String,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Enclose log_d^+((h(phi) + h^(A)) / h^(P)).
    Bound {
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        point: String,
        #[arg(long, default_value_t = 20)]
        tol_bits: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Compare modular scans of z^d + z^(d-1) with the closed-form count.
    RemarkGrid {
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        degrees: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,1/2,1/10,1/100")]
        epsilons: Vec<String>,
        #[arg(long, default_value_t = 16)]
        nmax: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Both sides of the inverse-image distance estimate.
    Invfun {
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        places: String,
        #[command(flatten)]
        common: Common,
    },
    /// Maximal ramification of phi^m over Q.
    Ramgrowth {
        #[arg(long)]
        map: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 5)]
        m_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run the randomized height-inequality suites.
    Verify {
        /// Cases per suite; the default sizes when omitted.
        #[arg(long)]
        sizes: Option<usize>,
        /// Run against a deliberately weakened bound; succeeds when the
        /// suite catches it.
        #[arg(long)]
        self_test: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run every job in a JSON config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    map: String,
    #[arg(long)]
    target: String,
    #[arg(long)]
    point: String,
    #[arg(long)]
    places: String,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    nmax: usize,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    precision_cap_bits: Option<u64>,
    #[arg(long)]
    height_budget_bits: Option<u64>,
    /// Fuzz seed; overrides the config's seed for `run`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Modular,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Common {
    fn caps(&self) -> Caps {
        Caps {
            precision_cap_bits: self.precision_cap_bits,
            height_budget_bits: self.height_budget_bits,
            ..Caps::default()
        }
    }

    fn emit(&self, text: &str) -> Result<(), u8> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run_config(config: ExperimentConfig, common: &Common) -> Result<(), u8> {
    let out = runner::run_experiment(&config).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    for (i, t) in out.timings.iter().enumerate() {
        eprintln!("job {i} ({}): {:.3} s", config.jobs[i].kind(), t.as_secs_f64());
    }
    for job in out.report["jobs"].as_array().into_iter().flatten() {
        if let Some(err) = job.get("error") {
            eprintln!("job {} failed: {}", job["index"], err["message"].as_str().unwrap_or_default());
        }
    }
    let text = match common.format {
        Format::Json => runner::render(&out.report),
        Format::Csv => report::report_csv(&out.report),
    };
    common.emit(&text)?;
    match out.outcome {
        Outcome::Ok => Ok(()),
        Outcome::ComputationError => Err(EXIT_COMPUTATION),
        Outcome::FuzzFailure => Err(EXIT_FUZZ),
    }
}

fn single(job: JobSpec, common: &Common) -> Result<(), u8> {
    run_config(ExperimentConfig { seed: common.seed.unwrap_or(0), caps: common.caps(), jobs: vec![job] }, common)
}

fn verify(sizes: Option<usize>, self_test: bool, common: &Common) -> Result<(), u8> {
    let sizes = sizes.map_or_else(FuzzSizes::default, FuzzSizes::uniform);
    let only: &[&str] = if self_test { &["product_height"] } else { &[] };
    let summary = fuzz_suites(common.seed.unwrap_or(0), &sizes, self_test, only);
    for s in summary.suites.iter().filter(|s| s.failures > 0) {
        eprintln!("{}: {} of {} cases failed", s.name, s.failures, s.exercised);
    }
    let doc = json!({ "tool": runner::TOOL, "version": env!("CARGO_PKG_VERSION"), "summary": summary });
    let text = match common.format {
        Format::Json => runner::render(&doc),
        Format::Csv => report::fuzz_csv(&summary),
    };
    common.emit(&text)?;
    // In self-test mode the harness is healthy exactly when it reports failures.
    if summary.passed != self_test {
        Ok(())
    } else {
        Err(EXIT_FUZZ)
    }
}

fn dispatch(command: Command) -> Result<(), u8> {
    match command {
        Command::Scan { scan: s, backend, common } => {
            let backend = match backend {
                BackendArg::Exact => BackendName::Exact,
                BackendArg::Modular => BackendName::Modular,
            };
            let job = JobSpec::GammaScan {
                map: s.map,
                target: s.target,
                point: s.point,
                places: s.places,
                eps: s.eps,
                nmax: s.nmax,
                backend,
            };
            single(job, &common)
        }
        Command::ScanNaive { scan: s, common } => {
            let job = JobSpec::GammaScanNaive {
                map: s.map,
                target: s.target,
                point: s.point,
                places: s.places,
                eps: s.eps,
                nmax: s.nmax,
            };
            single(job, &common)
        }
        Command::Census { map, point, places, nmax, common } => {
            single(JobSpec::Census { map, point, places, nmax }, &common)
        }
        Command::Bound { map, target, point, tol_bits, common } => {
            single(JobSpec::BoundTerm { map, target, point, tol_bits }, &common)
        }
        Command::RemarkGrid { degrees, primes, epsilons, nmax, common } => {
            single(JobSpec::RemarkGrid { degrees, primes, epsilons, nmax }, &common)
        }
        Command::Invfun { map, target, point, places, common } => {
            single(JobSpec::InvFunReport { map, target, point, places }, &common)
        }
        Command::Ramgrowth { map, target, m_max, common } => {
            single(JobSpec::RamGrowth { map, target, m_max }, &common)
        }
        Command::Verify { sizes, self_test, common } => verify(sizes, self_test, &common),
        Command::Run { config, common } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                eprintln!("error: cannot read {}: {e}", config.display());
                EXIT_USAGE
            })?;
            let mut parsed = ExperimentConfig::from_json(&text).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            if let Some(seed) = common.seed {
                parsed.seed = seed;
            }
            if let Some(b) = common.height_budget_bits {
                parsed.caps.height_budget_bits = Some(b);
            }
            if let Some(b) = common.precision_cap_bits {
                parsed.caps.precision_cap_bits = Some(b);
            }
            run_config(parsed, &common)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
