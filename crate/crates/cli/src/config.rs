//! Experiment configuration documents and their validation.

use num_rational::BigRational;
use orbitgap_core::scanner::{Backend, ScanCaps};
use orbitgap_core::{PlaceSet, ProjPoint, RationalMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{parse_map_expr, parse_places, parse_point, parse_rational, ParseError};
use crate::fuzz::FuzzSizes;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config is not valid JSON for the schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("job {job}: field `{field}`: {source}")]
    Field {
        job: usize,
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("job {job}: {msg}")]
    Job { job: usize, msg: String },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendName {
    #[default]
    Exact,
    Modular,
}

impl From<BackendName> for Backend {
    fn from(b: BackendName) -> Backend {
        match b {
            BackendName::Exact => Backend::ExactOrbit,
            BackendName::Modular => Backend::FinitePlaceModular,
        }
    }
}

/// Optional overrides for [`ScanCaps`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub precision_cap_bits: Option<u64>,
    pub height_budget_bits: Option<u64>,
    pub hhat_bits: Option<u64>,
    pub hhat_refine_cap_bits: Option<u64>,
    pub modulus_cap_bits: Option<u64>,
    pub degree_budget: Option<u64>,
}

impl Caps {
    pub fn resolve(&self) -> ScanCaps {
        let d = ScanCaps::default();
        ScanCaps {
            precision_cap_bits: self.precision_cap_bits.unwrap_or(d.precision_cap_bits),
            height_budget_bits: self.height_budget_bits.unwrap_or(d.height_budget_bits),
            hhat_bits: self.hhat_bits.unwrap_or(d.hhat_bits),
            hhat_refine_cap_bits: self.hhat_refine_cap_bits.unwrap_or(d.hhat_refine_cap_bits),
            modulus_cap_bits: self.modulus_cap_bits.unwrap_or(d.modulus_cap_bits),
            degree_budget: self.degree_budget.unwrap_or(d.degree_budget),
        }
    }
}

fn default_tol_bits() -> u64 {
    20
}

/// One job as written in the config file. Maps, points, place lists and
/// rationals are strings in the command-line syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum JobSpec {
    GammaScan {
        map: String,
        target: String,
        point: String,
        places: String,
        eps: String,
        nmax: usize,
        #[serde(default)]
        backend: BackendName,
    },
    GammaScanNaive {
        map: String,
        target: String,
        point: String,
        places: String,
        eps: String,
        nmax: usize,
    },
    Census {
        map: String,
        point: String,
        places: String,
        nmax: usize,
    },
    BoundTerm {
        map: String,
        target: String,
        point: String,
        #[serde(default = "default_tol_bits")]
        tol_bits: u64,
    },
    /// The growth Remark family `z^d + z^(d-1)`, `A = 0`, `P = p`, `S = {p}`.
    RemarkGrid {
        degrees: Vec<u64>,
        primes: Vec<u64>,
        epsilons: Vec<String>,
        nmax: usize,
    },
    InvFunReport {
        map: String,
        target: String,
        point: String,
        places: String,
    },
    RamGrowth {
        map: String,
        target: String,
        m_max: u32,
    },
    FuzzSuite {
        #[serde(default)]
        sizes: FuzzSizes,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub caps: Caps,
    pub jobs: Vec<JobSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// A job whose inputs have all been parsed.
#[derive(Clone, Debug)]
pub enum Job {
    GammaScan { map: RationalMap, target: ProjPoint, point: ProjPoint, places: PlaceSet, eps: BigRational, nmax: usize, backend: Backend },
    GammaScanNaive { map: RationalMap, target: ProjPoint, point: ProjPoint, places: PlaceSet, eps: BigRational, nmax: usize },
    Census { map: RationalMap, point: ProjPoint, places: PlaceSet, nmax: usize },
    BoundTerm { map: RationalMap, target: ProjPoint, point: ProjPoint, tol_bits: u64 },
    RemarkGrid { degrees: Vec<u64>, primes: Vec<u64>, epsilons: Vec<BigRational>, nmax: usize },
    InvFunReport { map: RationalMap, target: ProjPoint, point: ProjPoint, places: PlaceSet },
    RamGrowth { map: RationalMap, target: ProjPoint, m_max: u32 },
    FuzzSuite { sizes: FuzzSizes },
}

impl JobSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            JobSpec::GammaScan { .. } => "GammaScan",
            JobSpec::GammaScanNaive { .. } => "GammaScanNaive",
            JobSpec::Census { .. } => "Census",
            JobSpec::BoundTerm { .. } => "BoundTerm",
            JobSpec::RemarkGrid { .. } => "RemarkGrid",
            JobSpec::InvFunReport { .. } => "InvFunReport",
            JobSpec::RamGrowth { .. } => "RamGrowth",
            JobSpec::FuzzSuite { .. } => "FuzzSuite",
        }
    }

    pub fn validate(&self, job: usize) -> Result<Job, ConfigError> {
        let field = |field: &'static str| move |source| ConfigError::Field { job, field, source };
        let map = |s: &str| parse_map_expr(s).map_err(field("map"));
        let target = |s: &str| parse_point(s).map_err(field("target"));
        let point = |s: &str| parse_point(s).map_err(field("point"));
        let places = |s: &str| parse_places(s).map_err(field("places"));
        let eps = |s: &str| parse_rational(s).map_err(field("eps"));
        Ok(match self {
            JobSpec::GammaScan { map: m, target: a, point: p, places: s, eps: e, nmax, backend } => Job::GammaScan {
                map: map(m)?,
                target: target(a)?,
                point: point(p)?,
                places: places(s)?,
                eps: eps(e)?,
                nmax: *nmax,
                backend: (*backend).into(),
            },
            JobSpec::GammaScanNaive { map: m, target: a, point: p, places: s, eps: e, nmax } => Job::GammaScanNaive {
                map: map(m)?,
                target: target(a)?,
                point: point(p)?,
                places: places(s)?,
                eps: eps(e)?,
                nmax: *nmax,
            },
            JobSpec::Census { map: m, point: p, places: s, nmax } => {
                let places = places(s)?;
                if !places.has_archimedean() {
                    return Err(ConfigError::Job { job, msg: "census needs inf among the places".into() });
                }
                Job::Census { map: map(m)?, point: point(p)?, places, nmax: *nmax }
            }
            JobSpec::BoundTerm { map: m, target: a, point: p, tol_bits } => {
                Job::BoundTerm { map: map(m)?, target: target(a)?, point: point(p)?, tol_bits: *tol_bits }
            }
            JobSpec::RemarkGrid { degrees, primes, epsilons, nmax } => {
                if degrees.iter().any(|&d| !(2..=16).contains(&d)) {
                    return Err(ConfigError::Job { job, msg: "degrees must lie in 2..=16".into() });
                }
                if let Some(p) = primes.iter().find(|&&p| !orbitgap_core::arith::is_prime(p)) {
                    return Err(ConfigError::Job { job, msg: format!("{p} is not prime") });
                }
                let epsilons = epsilons.iter().map(|e| eps(e)).collect::<Result<_, _>>()?;
                Job::RemarkGrid { degrees: degrees.clone(), primes: primes.clone(), epsilons, nmax: *nmax }
            }
            JobSpec::InvFunReport { map: m, target: a, point: p, places: s } => {
                Job::InvFunReport { map: map(m)?, target: target(a)?, point: point(p)?, places: places(s)? }
            }
            JobSpec::RamGrowth { map: m, target: a, m_max } => {
                Job::RamGrowth { map: map(m)?, target: target(a)?, m_max: *m_max }
            }
            JobSpec::FuzzSuite { sizes } => Job::FuzzSuite { sizes: sizes.clone() },
        })
    }
}

impl ExperimentConfig {
    /// Every job is checked before any runs.
    pub fn validate(&self) -> Result<Vec<Job>, ConfigError> {
        self.jobs.iter().enumerate().map(|(i, j)| j.validate(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_kind_is_rejected() {
        let e = ExperimentConfig::from_json(r#"{"jobs": [{"kind": "Nope"}]}"#);
        assert!(matches!(e, Err(ConfigError::Schema(_))));
        let e = ExperimentConfig::from_json(r#"{"jobs": [], "extra": 1}"#);
        assert!(matches!(e, Err(ConfigError::Schema(_))));
    }

    #[test]
    fn fields_are_validated_up_front() {
        let c = ExperimentConfig::from_json(
            r#"{"jobs": [
                {"kind": "Census", "map": "1/(z^2+1)", "point": "1", "places": "inf", "nmax": 3},
                {"kind": "BoundTerm", "map": "z^2 +", "target": "0", "point": "3"}
            ]}"#,
        )
        .unwrap();
        match c.validate() {
            Err(ConfigError::Field { job: 1, field: "map", .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_json(
            r#"{"seed": 7, "jobs": [{"kind": "GammaScan", "map": "z^2+z", "target": "0", "point": "3",
                "places": "3", "eps": "1/100", "nmax": 4}]}"#,
        )
        .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.caps.resolve(), ScanCaps::default());
        assert!(matches!(c.validate().unwrap()[0], Job::GammaScan { backend: Backend::ExactOrbit, .. }));
    }
}
