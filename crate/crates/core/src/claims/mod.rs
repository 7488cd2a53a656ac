//! Checks of standalone statements: covering radii, the quaternionic
//! Barnes–Wall lattice, the spinor norm, null quotients, reflection
//! classification, cone angles and the property suites behind the
//! reduction lemmas.

pub mod cone;
pub mod covering;
pub mod quotient;
pub mod reflections;
pub mod spinor;
pub mod suites;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::lattices::LatticeError;
use crate::lorentz::LorentzError;
use crate::reduce::ReduceError;

pub const FORMAT: u32 = 1;

#[derive(Debug, Error)]
pub enum ClaimError {
    #[error("unknown claim id {0:?}")]
    UnknownClaim(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Lorentz(#[from] LorentzError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Output of one claim check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: u32,
    pub claim: String,
    pub status: Status,
    pub evidence: Value,
    pub citations: Vec<String>,
}

impl Report {
    pub fn new(claim: &str, ok: bool, evidence: Value, citations: &[&str]) -> Report {
        Report {
            format: FORMAT,
            claim: claim.to_string(),
            status: Status::from_bool(ok),
            evidence,
            citations: citations.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Seed and size controls for randomized checks.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub seed: u64,
    /// overrides the default sample count of a claim
    pub budget: Option<usize>,
}

impl RunConfig {
    pub fn budget_or(&self, default: usize) -> usize {
        self.budget.unwrap_or(default)
    }
}

/// Every claim id accepted by [`verify`].
pub fn claim_ids() -> Vec<String> {
    let mut v: Vec<String> = [
        "d3theta-roots",
        "bw-thm31",
        "heisenberg",
        "lemma52",
        "lemma53",
        "braid",
        "spinor",
        "quotient",
        "reflections",
        "even-sublattices",
        "cone-angles",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    v.extend(covering::COVERING_CLAIMS.iter().map(|c| format!("covering-{}", c.name)));
    v
}

pub fn verify(id: &str, cfg: &RunConfig) -> Result<Report, ClaimError> {
    match id {
        "d3theta-roots" => covering::d3theta_report(),
        "bw-thm31" => covering::barneswall_report(cfg),
        "heisenberg" => suites::heisenberg_report(cfg),
        "lemma52" => suites::lemma52_report(cfg),
        "lemma53" => suites::lemma53_report(cfg),
        "braid" => suites::braid_report(cfg),
        "spinor" => spinor::spinor_report(cfg),
        "quotient" => quotient::quotient_report(cfg),
        "reflections" => reflections::reflections_report(cfg),
        "even-sublattices" => quotient::even_report(),
        "cone-angles" => cone::cone_report(),
        _ => match id.strip_prefix("covering-") {
            Some(name) => covering::covering_report(name, cfg),
            None => Err(ClaimError::UnknownClaim(id.into())),
        },
    }
}
