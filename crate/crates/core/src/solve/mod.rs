//! Rainbow-matching search.
//!
//! `exact` is the ground-truth backtracking oracle, `greedy` seeds heuristic
//! runs, `switch` augments through bounded switching search, `guided` follows
//! the colour-reduction recursion and records a proof trace, `pipeline` ties
//! them together, `falsify` hunts for counterexample instances, and
//! `enumerate`/`vsearch` drive the exhaustive minimal-kernel computation.

pub mod enumerate;
pub mod exact;
pub mod falsify;
pub mod greedy;
pub mod guided;
pub mod pipeline;
pub mod switch;
pub mod vsearch;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::delta::Delta;
use crate::error::{Error, Result};
use crate::matching::Matching;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    GreedySwitch,
    ProofGuided,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy_switch" => Ok(Method::GreedySwitch),
            "proof_guided" => Ok(Method::ProofGuided),
            other => Err(Error::Parameter(format!(
                "unknown method {other:?}; expected exact, greedy_switch or proof_guided"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverParams {
    pub delta: Delta,
    pub max_switch_len: usize,
    pub node_budget: u64,
    pub seed: u64,
    pub method: Method,
}

impl SolverParams {
    pub fn new(method: Method) -> Self {
        SolverParams {
            delta: Delta::one(),
            max_switch_len: 4,
            node_budget: 1_000_000,
            seed: 0,
            method,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.node_budget == 0 {
            return Err(Error::Parameter("node budget must be at least 1".into()));
        }
        Ok(())
    }

    /// Colour count above which the guided recursion is self-sustaining for
    /// this slack; below it pigeonhole witnesses may be missing and the
    /// solver is allowed to fall back. Diagnostic only.
    pub fn n_zero(&self) -> u64 {
        self.delta.n_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Found,
    Absence,
    BudgetExhausted,
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    Found,
    ExhaustiveProofOfAbsence,
    BudgetExhausted,
}

/// Search statistics. Wall time is excluded from serialization so that
/// identical runs print identical outcomes.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub switchings: u64,
    pub depth: usize,
    pub best_size: usize,
    #[serde(skip)]
    pub wall_millis: u128,
}

impl SolveStats {
    pub fn absorb(&mut self, other: &SolveStats) {
        self.nodes += other.nodes;
        self.switchings += other.switchings;
        self.depth = self.depth.max(other.depth);
        self.best_size = self.best_size.max(other.best_size);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<Matching>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn found(matching: Matching, stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::Found,
            certificate: Certificate::Found,
            matching: Some(matching),
            stats,
        }
    }

    pub fn absence(stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::Absence,
            certificate: Certificate::ExhaustiveProofOfAbsence,
            matching: None,
            stats,
        }
    }

    pub fn exhausted(stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::BudgetExhausted,
            certificate: Certificate::BudgetExhausted,
            matching: None,
            stats,
        }
    }

    pub fn timeout(stats: SolveStats) -> Self {
        SolveOutcome {
            status: SolveStatus::Timeout,
            certificate: Certificate::BudgetExhausted,
            matching: None,
            stats,
        }
    }

    pub fn is_found(&self) -> bool {
        self.status == SolveStatus::Found
    }

    pub fn is_exhaustive_absence(&self) -> bool {
        self.status == SolveStatus::Absence
            && self.certificate == Certificate::ExhaustiveProofOfAbsence
    }
}
