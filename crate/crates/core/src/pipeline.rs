//! Scenario orchestration: merge, graph construction, detection and both
//! resolution strategies.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::detect::{detect_conflicts, Conflict};
use crate::example::resolve_by_example;
use crate::graph_diff::{build_fourway, FourWayGraph};
use crate::java::{parse_unit, SourceFile, SyntaxError};
use crate::merge::{merge_scenario, MergeError, MergeScenario, Version};
use crate::peg::{build_peg, EntityGraph, PegError, VersionTag};
use crate::resolution::{Rank, Resolution, Strategy};
use crate::rules::resolve_by_rule;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Merge(#[from] MergeError),
    #[error(transparent)]
    Peg(#[from] PegError),
    #[error("{0}")]
    Io(String),
}

pub fn parse_version(v: &Version) -> Result<Vec<SourceFile>, SyntaxError> {
    v.par_iter().map(|(p, t)| parse_unit(p, t)).collect()
}

pub fn graph_of(v: &Version, tag: VersionTag) -> Result<EntityGraph, PipelineError> {
    Ok(build_peg(parse_version(v)?, tag)?)
}

/// Builds the four entity graphs of a merged scenario and links them.
pub fn fourway(s: &MergeScenario) -> Result<FourWayGraph, PipelineError> {
    fourway_with(s, &s.am_version())
}

/// Like [`fourway`] but with a replacement merged version.
pub fn fourway_with(s: &MergeScenario, am: &Version) -> Result<FourWayGraph, PipelineError> {
    let inputs = [
        (&s.base, VersionTag::Base),
        (&s.left, VersionTag::Left),
        (&s.right, VersionTag::Right),
        (am, VersionTag::Merged),
    ];
    let mut graphs: Vec<EntityGraph> = inputs
        .par_iter()
        .map(|(v, tag)| graph_of(v, *tag))
        .collect::<Result<_, _>>()?;
    let merged = graphs.pop().unwrap();
    let right = graphs.pop().unwrap();
    let left = graphs.pop().unwrap();
    let base = graphs.pop().unwrap();
    let mut fw = build_fourway(base, left, right, merged);
    for (path, f) in &s.am {
        if am.get(path) == Some(&f.text) {
            fw.origins.insert(path.clone(), f.origins.clone());
        }
    }
    Ok(fw)
}

/// Resolutions proposed for one conflict; either strategy may be missing.
#[derive(Debug, Clone, Default)]
pub struct ConflictResolutions {
    pub example: Option<Resolution>,
    pub rule: Option<Resolution>,
}

impl ConflictResolutions {
    pub fn iter(&self) -> impl Iterator<Item = &Resolution> {
        self.example.iter().chain(self.rule.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.example.is_none() && self.rule.is_none()
    }
}

/// Everything computed for one scenario.
pub struct Analysis {
    pub scenario: MergeScenario,
    pub fw: FourWayGraph,
    pub conflicts: Vec<Conflict>,
    /// Parallel to `conflicts`.
    pub resolutions: Vec<ConflictResolutions>,
    pub timing: BTreeMap<String, u64>,
}

fn timed<T>(timing: &mut BTreeMap<String, u64>, phase: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    timing.insert(phase.to_string(), t.elapsed().as_millis() as u64);
    out
}

pub fn resolve_conflict(c: &Conflict, fw: &FourWayGraph) -> ConflictResolutions {
    let (example, rule) = rayon::join(|| resolve_by_example(c, fw), || resolve_by_rule(c, fw).ok());
    ConflictResolutions { example, rule }
}

/// Detection only.
pub fn detect_scenario(scenario: MergeScenario) -> Result<Analysis, PipelineError> {
    analyze_with(scenario, false)
}

/// Detection followed by both resolution strategies.
pub fn analyze(scenario: MergeScenario) -> Result<Analysis, PipelineError> {
    analyze_with(scenario, true)
}

fn analyze_with(scenario: MergeScenario, resolve: bool) -> Result<Analysis, PipelineError> {
    let mut timing = BTreeMap::new();
    let fw = timed(&mut timing, "graphs", || fourway(&scenario))?;
    let conflicts = timed(&mut timing, "detect", || detect_conflicts(&fw));
    let resolutions = if resolve {
        timed(&mut timing, "resolve", || {
            conflicts.par_iter().map(|c| resolve_conflict(c, &fw)).collect()
        })
    } else {
        vec![ConflictResolutions::default(); conflicts.len()]
    };
    Ok(Analysis {
        scenario,
        fw,
        conflicts,
        resolutions,
        timing,
    })
}

/// Merges three directories and analyzes the result.
pub fn run_dirs(base: &Path, left: &Path, right: &Path, resolve: bool) -> Result<Analysis, PipelineError> {
    let mut timing = BTreeMap::new();
    let scenario = timed(&mut timing, "merge", || merge_scenario(base, left, right))?;
    let mut a = analyze_with(scenario, resolve)?;
    a.timing.extend(timing);
    Ok(a)
}

impl Analysis {
    /// The merged version with one resolution applied.
    pub fn apply(&self, r: &Resolution) -> Version {
        let mut v = self.scenario.am_version();
        v.insert(r.target_file.clone(), r.resolved_text.clone());
        v
    }

    pub fn report(&self, id: &str, timing: bool) -> Report {
        let mut resolutions = Vec::new();
        for (i, rs) in self.resolutions.iter().enumerate() {
            for r in rs.iter() {
                resolutions.push(ReportResolution {
                    conflict: i,
                    strategy: r.strategy,
                    target_file: r.target_file.clone(),
                    partial: r.partial,
                    rank: r.rank,
                    source: r.source.clone(),
                    diff: diff_name(i, &self.conflicts[i], r),
                });
            }
        }
        Report {
            scenario: id.to_string(),
            conflicts: self.conflicts.clone(),
            resolutions,
            timing_ms: timing.then(|| self.timing.clone()),
        }
    }
}

/// Relative path of a resolution's diff inside the output directory.
pub fn diff_name(index: usize, c: &Conflict, r: &Resolution) -> String {
    let dir = match r.strategy {
        Strategy::Example => "example",
        Strategy::Rule => "rule",
    };
    format!("{dir}/{:02}-{}.diff", index + 1, c.ty)
}

/// Unified diff between the merged file and its resolved form.
pub fn unified_diff(path: &str, old: &str, new: &str) -> String {
    similar::TextDiff::from_lines(old, new)
        .unified_diff()
        .header(&format!("a/{path}"), &format!("b/{path}"))
        .to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportResolution {
    /// Index into the report's conflicts.
    pub conflict: usize,
    pub strategy: Strategy,
    #[serde(rename = "targetFile")]
    pub target_file: String,
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<Rank>,
    pub source: String,
    pub diff: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub scenario: String,
    pub conflicts: Vec<Conflict>,
    pub resolutions: Vec<ReportResolution>,
    #[serde(rename = "timingMs", skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u64>>,
}
