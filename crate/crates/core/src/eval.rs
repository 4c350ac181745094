//! Coverage and accuracy of both strategies over a corpus of scenarios with
//! known developer resolutions.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::java::token_equal;
use crate::pipeline::{run_dirs, PipelineError};
use crate::resolution::Resolution;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("scenario {0} has no expected/ directory")]
    MissingGolden(String),
    #[error("scenario {id}: {source}")]
    Scenario {
        id: String,
        #[source]
        source: PipelineError,
    },
    #[error("cannot read corpus {0}: {1}")]
    Io(String, String),
    #[error("bad golden key: {0}")]
    Key(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    None,
    Correct,
    Incorrect,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::None => "none",
            Outcome::Correct => "correct",
            Outcome::Incorrect => "incorrect",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConflictOutcome {
    #[serde(rename = "type")]
    pub ty: String,
    pub subject: String,
    pub example: Outcome,
    pub rule: Outcome,
    #[serde(rename = "examplePartial")]
    pub example_partial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOutcome {
    pub id: String,
    pub conflicts: Vec<ConflictOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Rates {
    pub covered: usize,
    pub generated: usize,
    pub correct: usize,
    pub coverage: f64,
    pub accuracy: f64,
}

impl Rates {
    fn finish(mut self, conflicts: usize) -> Self {
        self.coverage = ratio(self.covered, conflicts);
        self.accuracy = ratio(self.correct, self.generated);
        self
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TypeCell {
    pub detected: usize,
    pub resolved: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalSummary {
    pub scenarios: usize,
    pub conflicts: usize,
    pub coverage: f64,
    pub accuracy: f64,
    pub overall: Rates,
    #[serde(rename = "perStrategy")]
    pub per_strategy: BTreeMap<String, Rates>,
    #[serde(rename = "perType")]
    pub per_type: BTreeMap<String, TypeCell>,
    pub outcomes: Vec<ScenarioOutcome>,
}

fn judge(expected: &Path, r: Option<&Resolution>) -> Outcome {
    let Some(r) = r else { return Outcome::None };
    let want = std::fs::read_to_string(expected.join(&r.target_file)).unwrap_or_default();
    if token_equal(&r.resolved_text, &want) {
        Outcome::Correct
    } else {
        Outcome::Incorrect
    }
}

/// Runs one scenario directory and judges its resolutions against
/// `expected/`.
pub fn evaluate_scenario(dir: &Path) -> Result<ScenarioOutcome, EvalError> {
    let id = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let expected = dir.join("expected");
    if !expected.is_dir() {
        return Err(EvalError::MissingGolden(id));
    }
    let a = run_dirs(&dir.join("base"), &dir.join("left"), &dir.join("right"), true)
        .map_err(|source| EvalError::Scenario { id: id.clone(), source })?;
    let conflicts = a
        .conflicts
        .iter()
        .zip(&a.resolutions)
        .map(|(c, rs)| ConflictOutcome {
            ty: c.ty.to_string(),
            subject: c.subject.clone(),
            example: judge(&expected, rs.example.as_ref()),
            rule: judge(&expected, rs.rule.as_ref()),
            example_partial: rs.example.as_ref().is_some_and(|r| r.partial),
        })
        .collect();
    Ok(ScenarioOutcome { id, conflicts })
}

/// Scenario directories of a corpus: those with a `base/` child, sorted.
pub fn scenario_dirs(corpus: &Path) -> Result<Vec<PathBuf>, EvalError> {
    let io = |e: std::io::Error| EvalError::Io(corpus.display().to_string(), e.to_string());
    let mut out = Vec::new();
    for entry in std::fs::read_dir(corpus).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.join("base").is_dir() {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// Aggregates scenario outcomes. Coverage counts conflicts with at least
/// one resolution; accuracy counts correct among generated resolutions.
pub fn summarize(outcomes: Vec<ScenarioOutcome>) -> EvalSummary {
    let mut overall = Rates::default();
    let mut ex = Rates::default();
    let mut rule = Rates::default();
    let mut per_type: BTreeMap<String, TypeCell> = BTreeMap::new();
    let mut conflicts = 0;
    for c in outcomes.iter().flat_map(|s| &s.conflicts) {
        conflicts += 1;
        let cell = per_type.entry(c.ty.clone()).or_default();
        cell.detected += 1;
        for (o, rates) in [(c.example, &mut ex), (c.rule, &mut rule)] {
            if o != Outcome::None {
                rates.covered += 1;
                rates.generated += 1;
                overall.generated += 1;
                cell.resolved += 1;
            }
            if o == Outcome::Correct {
                rates.correct += 1;
                overall.correct += 1;
                cell.correct += 1;
            }
        }
        if c.example != Outcome::None || c.rule != Outcome::None {
            overall.covered += 1;
        }
    }
    let overall = overall.finish(conflicts);
    EvalSummary {
        scenarios: outcomes.len(),
        conflicts,
        coverage: overall.coverage,
        accuracy: overall.accuracy,
        overall,
        per_strategy: BTreeMap::from([
            ("example".to_string(), ex.finish(conflicts)),
            ("rule".to_string(), rule.finish(conflicts)),
        ]),
        per_type,
        outcomes,
    }
}

/// Evaluates every scenario of a corpus in parallel.
pub fn evaluate_corpus(corpus: &Path) -> Result<EvalSummary, EvalError> {
    let dirs = scenario_dirs(corpus)?;
    let outcomes = dirs
        .par_iter()
        .map(|d| evaluate_scenario(d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(summarize(outcomes))
}

/// Hand-scored expectations for a corpus.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct GoldenKey {
    #[serde(default)]
    pub scenario: Vec<GoldenScenario>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenScenario {
    pub id: String,
    #[serde(default)]
    pub conflicts: Vec<GoldenConflict>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenConflict {
    #[serde(rename = "type")]
    pub ty: String,
    pub example: Outcome,
    pub rule: Outcome,
    #[serde(default)]
    pub partial: bool,
}

impl FromStr for GoldenKey {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        toml::from_str(s).map_err(|e| EvalError::Key(e.to_string()))
    }
}

impl GoldenKey {
    pub fn load(path: &Path) -> Result<Self, EvalError> {
        std::fs::read_to_string(path)
            .map_err(|e| EvalError::Io(path.display().to_string(), e.to_string()))?
            .parse()
    }

    /// Differences between the key and observed outcomes, one line each.
    pub fn mismatches(&self, summary: &EvalSummary) -> Vec<String> {
        let mut out = Vec::new();
        let observed: BTreeMap<&str, &ScenarioOutcome> =
            summary.outcomes.iter().map(|s| (s.id.as_str(), s)).collect();
        for g in &self.scenario {
            let Some(o) = observed.get(g.id.as_str()) else {
                out.push(format!("{}: missing from corpus", g.id));
                continue;
            };
            let want: Vec<String> = g
                .conflicts
                .iter()
                .map(|c| format!("{} example={} rule={} partial={}", c.ty, c.example, c.rule, c.partial))
                .collect();
            let got: Vec<String> = o
                .conflicts
                .iter()
                .map(|c| format!("{} example={} rule={} partial={}", c.ty, c.example, c.rule, c.example_partial))
                .collect();
            if want != got {
                out.push(format!("{}: expected {want:?}, got {got:?}", g.id));
            }
        }
        for id in observed.keys() {
            if !self.scenario.iter().any(|g| g.id == *id) {
                out.push(format!("{id}: not in golden key"));
            }
        }
        out
    }
}
