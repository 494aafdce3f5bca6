//! Batch execution of experiment configs.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use orbitgap_core::scanner::{self, Backend, RemarkCount, ScanCaps};
use orbitgap_core::{Dyadic, Place, PlaceSet, ProjPoint, RatPoly, RationalMap};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ConfigError, ExperimentConfig, Job};
use crate::fuzz::{self, PRNG};
use crate::report;

pub const TOOL: &str = "orbitgap";

/// How a finished job went, for the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Ok,
    ComputationError,
    FuzzFailure,
}

pub struct JobResult {
    pub value: Result<Value, orbitgap_core::Error>,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

pub struct RunOutput {
    /// The report document. Contains no timings, so it is a pure function
    /// of the config.
    pub report: Value,
    pub timings: Vec<Duration>,
    pub outcome: Outcome,
}

/// `z^d + z^(d-1)`.
pub fn remark_map(d: u64) -> RationalMap {
    let z = RatPoly::x();
    let f = &z.pow(d as u32) + &z.pow(d as u32 - 1);
    RationalMap::normalize(&f, &RatPoly::constant(BigRational::one())).expect("degree >= 2")
}

fn remark_grid(
    degrees: &[u64],
    primes: &[u64],
    epsilons: &[BigRational],
    nmax: usize,
    caps: &ScanCaps,
) -> orbitgap_core::Result<Value> {
    let cells: Vec<(u64, u64, &BigRational)> = degrees
        .iter()
        .flat_map(|&d| primes.iter().flat_map(move |&p| epsilons.iter().map(move |e| (d, p, e))))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(d, p, eps)| remark_row(d, p, eps, nmax, caps))
        .collect::<orbitgap_core::Result<Vec<_>>>()?;
    let all_match = rows.iter().all(|r| r["match"] == json!(true));
    Ok(json!({ "rows": rows, "all_match": all_match }))
}

fn remark_row(d: u64, p: u64, eps: &BigRational, nmax: usize, caps: &ScanCaps) -> orbitgap_core::Result<Value> {
    let phi = remark_map(d);
    let places = PlaceSet::new(vec![Place::finite(p)?])?;
    let start = ProjPoint::from_int(p);
    let r = scanner::gamma_scan(&phi, &ProjPoint::from_int(0), &start, &places, eps, nmax, Backend::FinitePlaceModular, caps)?;
    let hhat = r.hhat.clone().expect("canonical scan carries h^");
    let expected = scanner::remark_count(d, p, eps, &hhat)?;
    let matched = matches!(expected, RemarkCount::Count(c) if c == r.count_in as u64 && r.count_unresolved == 0);
    Ok(json!({
        "d": d,
        "p": p,
        "eps": eps.to_string(),
        "hhat": report::interval(&hhat),
        "remark_count": report::remark_count(expected),
        "count_in": r.count_in,
        "unresolved": r.count_unresolved,
        "match": matched,
    }))
}

/// Runs one validated job.
pub fn run_job(job: &Job, seed: u64, caps: &ScanCaps) -> JobResult {
    let t = Instant::now();
    let mut outcome = Outcome::Ok;
    let value = match job {
        Job::GammaScan { map, target, point, places, eps, nmax, backend } => {
            scanner::gamma_scan(map, target, point, places, eps, *nmax, *backend, caps).map(|r| report::scan(&r))
        }
        Job::GammaScanNaive { map, target, point, places, eps, nmax } => {
            scanner::gamma_scan_naive(map, target, point, places, eps, *nmax, caps).map(|r| report::scan(&r))
        }
        Job::Census { map, point, places, nmax } => {
            scanner::integral_census(map, point, places, *nmax, caps.height_budget_bits).map(|r| report::census(&r))
        }
        Job::BoundTerm { map, target, point, tol_bits } => {
            let tol = Dyadic::pow2(-(*tol_bits as i64));
            scanner::bound_log_term(map, target, point, &tol).map(|r| report::interval(&r))
        }
        Job::RemarkGrid { degrees, primes, epsilons, nmax } => remark_grid(degrees, primes, epsilons, *nmax, caps),
        Job::InvFunReport { map, target, point, places } => {
            scanner::inv_fun_report(map, target, point, places).map(|r| report::inv_fun(&r))
        }
        Job::RamGrowth { map, target, m_max } => {
            scanner::ramification_growth(map, target, *m_max, caps.degree_budget).map(|r| report::growth(&r))
        }
        Job::FuzzSuite { sizes } => {
            let s = fuzz::fuzz_suites(seed, sizes, false, &[]);
            if !s.passed {
                outcome = Outcome::FuzzFailure;
            }
            Ok(serde_json::to_value(&s).expect("summary serializes"))
        }
    };
    if value.is_err() {
        outcome = Outcome::ComputationError;
    }
    JobResult { value, outcome, elapsed: t.elapsed() }
}

/// The variant name of a core error.
pub fn error_kind(err: &orbitgap_core::Error) -> String {
    let dbg = format!("{err:?}");
    dbg.split([' ', '(', '{']).next().unwrap_or_default().to_string()
}

fn caps_json(c: &ScanCaps) -> Value {
    json!({
        "precision_cap_bits": c.precision_cap_bits,
        "height_budget_bits": c.height_budget_bits,
        "hhat_bits": c.hhat_bits,
        "hhat_refine_cap_bits": c.hhat_refine_cap_bits,
        "modulus_cap_bits": c.modulus_cap_bits,
        "degree_budget": c.degree_budget,
    })
}

/// Validates every job, then runs them in parallel and assembles the report
/// in job order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutput, ConfigError> {
    let jobs = config.validate()?;
    let caps = config.caps.resolve();
    let results: Vec<JobResult> = jobs.par_iter().map(|j| run_job(j, config.seed, &caps)).collect();
    let entries: Vec<Value> = config
        .jobs
        .iter()
        .zip(&results)
        .enumerate()
        .map(|(i, (spec, r))| {
            let mut e = json!({
                "index": i,
                "kind": spec.kind(),
                "input": serde_json::to_value(spec).expect("spec serializes"),
            });
            match &r.value {
                Ok(v) => {
                    e["status"] = json!("ok");
                    e["result"] = v.clone();
                }
                Err(err) => {
                    e["status"] = json!("error");
                    e["error"] = json!({ "kind": error_kind(err), "message": err.to_string() });
                }
            }
            e
        })
        .collect();
    let report = json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": config.seed,
        "prng": PRNG,
        "caps": caps_json(&caps),
        "jobs": entries,
    });
    Ok(RunOutput {
        report,
        timings: results.iter().map(|r| r.elapsed).collect(),
        outcome: results.iter().map(|r| r.outcome).max().unwrap_or(Outcome::Ok),
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
