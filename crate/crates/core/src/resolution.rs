//! Resolutions proposed for detected conflicts.

use serde::Serialize;

use crate::java::{parse_unit, print_unit, SyntaxNode};
use crate::tree_diff::{diff_trees_with, DiffOptions, EditOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Example,
    Rule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rank {
    #[serde(rename = "sigmaM")]
    pub sigma_m: f64,
    #[serde(rename = "cM")]
    pub c_m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePair {
    pub sp: String,
    pub sm: String,
    pub score: f64,
}

/// How a pattern was matched against the target member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchTrace {
    pub pattern: String,
    pub pairs: Vec<TracePair>,
    #[serde(rename = "sigmaM")]
    pub sigma_m: f64,
    #[serde(rename = "cM")]
    pub c_m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Resolution {
    pub strategy: Strategy,
    #[serde(rename = "targetFile")]
    pub target_file: String,
    #[serde(skip)]
    pub ops: Vec<EditOp>,
    #[serde(skip)]
    pub resolved_text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<Rank>,
    pub partial: bool,
    /// Host of the replayed example, or the rule code.
    pub source: String,
    #[serde(skip)]
    pub trace: Option<MatchTrace>,
}

impl Resolution {
    /// A rule resolution from a rewritten file tree. `None` when the rewrite
    /// changed nothing or does not print to parsable source.
    pub(crate) fn from_rewrite(
        code: &str,
        file: &str,
        before: &SyntaxNode,
        after: &SyntaxNode,
    ) -> Option<Resolution> {
        let script = diff_trees_with(
            before,
            after,
            DiffOptions {
                include_imports: true,
            },
        );
        if script.is_empty() {
            return None;
        }
        let text = print_unit(after).ok()?;
        parse_unit(file, &text).ok()?;
        Some(Resolution {
            strategy: Strategy::Rule,
            target_file: file.to_string(),
            ops: script.ops,
            resolved_text: text,
            rank: None,
            partial: false,
            source: code.to_string(),
            trace: None,
        })
    }
}
