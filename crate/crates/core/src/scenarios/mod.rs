//! The verification scenarios run by `metacirc verify-paper`. Each scenario
//! rebuilds its instances from scratch, runs the library operations on them
//! and records one [`Check`] per compared quantity.

mod corpus;
mod graphs;
mod groups;
mod claims;

use crate::analysis::{ClassifyOptions, SearchOptions};
use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt::Display;
use std::time::{Duration, Instant};

pub use corpus::{crossval_corpus, flagship_cayley, mp_cayley_graph, order27_corpus, random_cayley_corpus, spotcheck_instances, CorpusGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A value asserted by the mathematics being checked.
    Claim,
    /// A value recomputed by an independent method.
    Oracle,
    /// A value forced by a definition or by construction.
    Definition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub source: Source,
    pub passed: bool,
    /// The check could not run to completion within the budgets.
    pub inconclusive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioResult {
    pub id: &'static str,
    pub status: Status,
    pub evidence: Vec<Check>,
    /// Left out of the JSON so that repeated runs print identical bytes.
    #[serde(skip)]
    pub wall: Duration,
}

impl ScenarioResult {
    pub fn passed_checks(&self) -> usize {
        self.evidence.iter().filter(|c| c.passed).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scenario result serializes")
    }
}

/// Budgets shared by every scenario.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub max_group_order: u128,
    pub max_aut_degree: usize,
    pub search_nodes: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let s = SearchOptions::default();
        VerifyOptions {
            max_group_order: s.max_group_order,
            max_aut_degree: crate::aut::DEFAULT_AUT_BOUND,
            search_nodes: s.search_nodes,
            seed: 0,
        }
    }
}

impl VerifyOptions {
    pub fn search(&self) -> SearchOptions {
        SearchOptions {
            max_group_order: self.max_group_order,
            search_nodes: self.search_nodes,
            seed: self.seed,
            ..SearchOptions::default()
        }
    }

    pub fn classify(&self) -> ClassifyOptions {
        ClassifyOptions { search: self.search(), max_aut_degree: self.max_aut_degree, sylow_seed: None }
    }

    /// Element cap for `FiniteGroup` constructions, clamped to `usize`.
    pub fn group_cap(&self) -> usize {
        self.max_group_order.min(usize::MAX as u128) as usize
    }
}

type Runner = fn(&VerifyOptions, &mut Recorder) -> Result<()>;

const SCENARIOS: &[(&str, Runner)] = &[
    ("xu-zhang-invariants", groups::xu_zhang_invariants),
    ("omega1-structure", groups::omega1_structure),
    ("pk-abelian", groups::pk_abelian),
    ("complement-existence", groups::complement_existence),
    ("coset-lemma", graphs::coset_clauses),
    ("mp-petersen-equivalence", graphs::mp_petersen_equivalence),
    ("mp-blocks", graphs::mp_blocks),
    ("mp-distance-claim", graphs::mp_distance_claim),
    ("mp-cayley-iso", graphs::mp_cayley_iso),
    ("theorem-6-1-flagship", claims::flagship),
    ("theorem-1-1-crossval", claims::crossval),
    ("lemma-4-1-bounds", claims::valency_bounds),
    ("theorem-1-3-spotcheck", claims::trichotomy_spotcheck),
];

pub fn scenario_ids() -> Vec<&'static str> {
    SCENARIOS.iter().map(|(id, _)| *id).collect()
}

pub fn run_scenario(id: &str, opts: &VerifyOptions) -> Result<ScenarioResult> {
    let (id, run) = SCENARIOS
        .iter()
        .find(|(s, _)| *s == id)
        .ok_or_else(|| Error::InvalidParameters(format!("unknown scenario `{id}`; valid: {}", scenario_ids().join(", "))))?;
    let start = Instant::now();
    let mut rec = Recorder::default();
    if let Err(e) = run(opts, &mut rec) {
        rec.error("scenario", &e);
    }
    Ok(rec.finish(id, start.elapsed()))
}

/// Collects checks while a scenario runs.
#[derive(Default)]
pub struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    pub fn eq<T: Display + PartialEq>(&mut self, name: impl Into<String>, source: Source, expected: T, observed: T) -> bool {
        let passed = expected == observed;
        self.checks.push(Check {
            name: name.into(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            source,
            passed,
            inconclusive: false,
        });
        passed
    }

    pub fn holds(&mut self, name: impl Into<String>, source: Source, observed: bool) -> bool {
        self.eq(name, source, true, observed)
    }

    /// Records a failed operation: budget overruns as inconclusive, anything
    /// else as a failure.
    pub fn error(&mut self, name: impl Into<String>, e: &Error) {
        let inconclusive = matches!(e, Error::SearchBudgetExceeded { .. } | Error::CapExceeded { .. });
        self.checks.push(Check {
            name: name.into(),
            expected: "completed".into(),
            observed: e.to_string(),
            source: Source::Definition,
            passed: false,
            inconclusive,
        });
    }

    /// Records an undecided flag or search as inconclusive.
    pub fn undecided(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            expected: "decided".into(),
            observed: detail.into(),
            source: Source::Definition,
            passed: false,
            inconclusive: true,
        });
    }

    /// `Some(value)` on success; otherwise the error is recorded.
    pub fn attempt<T>(&mut self, name: impl Into<String>, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(name, &e);
                None
            }
        }
    }

    fn finish(self, id: &'static str, wall: Duration) -> ScenarioResult {
        let status = if self.checks.iter().any(|c| !c.passed && !c.inconclusive) || self.checks.is_empty() {
            Status::Fail
        } else if self.checks.iter().any(|c| c.inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        ScenarioResult { id, status, evidence: self.checks, wall }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_rules() {
        let mut r = Recorder::default();
        r.eq("a", Source::Claim, 1, 1);
        assert_eq!(r.finish("x", Duration::ZERO).status, Status::Pass);
        let mut r = Recorder::default();
        r.eq("a", Source::Claim, 1, 1);
        r.undecided("b", "budget");
        assert_eq!(r.finish("x", Duration::ZERO).status, Status::Inconclusive);
        let mut r = Recorder::default();
        r.undecided("b", "budget");
        r.eq("a", Source::Claim, 1, 2);
        assert_eq!(r.finish("x", Duration::ZERO).status, Status::Fail);
        assert_eq!(Recorder::default().finish("x", Duration::ZERO).status, Status::Fail);
    }

    #[test]
    fn unknown_id() {
        let e = run_scenario("nonsense", &VerifyOptions::default()).unwrap_err();
        assert!(e.to_string().contains("mp-blocks"));
    }

    #[test]
    fn quick_scenarios_pass() {
        let opts = VerifyOptions::default();
        for id in ["mp-petersen-equivalence", "mp-distance-claim", "complement-existence"] {
            let r = run_scenario(id, &opts).unwrap();
            assert_eq!(r.status, Status::Pass, "{id}: {:?}", r.evidence.iter().find(|c| !c.passed));
        }
    }
}
