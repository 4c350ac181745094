//! Example-based resolution: adaptive edits mined from the branch that made
//! the definition change are generalised into patterns and replayed on the
//! conflicting use sites.

mod apply;
mod infer;
mod mine;

pub use apply::{
    apply_pattern, match_context, rank_candidates, resolve_by_example, score_statement_match,
    Applied, Candidate, MatchPair, MatchSet, NoAnchor, ANCHOR_THRESHOLD,
};
pub use infer::{
    refine_context, refine_edits, statement_dependences, DepKind, Dependence, NoRelevantEdit,
    Refined, TransformationPattern,
};
pub use mine::mine_examples;

use std::collections::HashMap;

use crate::peg::type_names;
use crate::java::{NodeId, NodeKind, SyntaxNode};
use crate::peg::EntityKind;
use crate::tree_diff::EditScript;

/// The changed entity as seen from syntax: its kind and the simple names it
/// had before and after the change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subject {
    pub kind: EntityKind,
    pub fqn: String,
    pub names: Vec<String>,
}

impl Subject {
    fn is_type(&self) -> bool {
        self.kind.is_type()
    }

    fn named(&self, s: &str) -> bool {
        self.names.iter().any(|n| n == s)
    }

    fn mentions_type(&self, type_text: &str) -> bool {
        type_names(type_text)
            .iter()
            .any(|t| self.named(t.rsplit('.').next().unwrap_or(t)))
    }

    /// Names of variables, parameters and fields declared with the subject
    /// class as their type.
    fn typed_variables(&self, tree: &SyntaxNode) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_type() {
            return out;
        }
        tree.walk(&mut |n| {
            if matches!(
                n.kind,
                NodeKind::LocalVarDecl | NodeKind::Parameter | NodeKind::FieldDecl
            ) && n.declared_type().is_some_and(|t| self.mentions_type(t.value_str()))
            {
                out.push(n.value_str().to_string());
            }
        });
        out
    }

    /// Whether `n` itself is a use of the subject. `vars` are the variables
    /// instantiated from a class subject.
    fn used_by(&self, n: &SyntaxNode, vars: &[String]) -> bool {
        let v = n.value_str();
        match self.kind {
            EntityKind::Class | EntityKind::Interface | EntityKind::Enum => match n.kind {
                NodeKind::TypeRef => self.mentions_type(v),
                NodeKind::Name => self.named(v) || vars.iter().any(|x| x == v),
                NodeKind::LocalVarDecl | NodeKind::Parameter | NodeKind::FieldDecl => {
                    n.declared_type().is_some_and(|t| self.mentions_type(t.value_str()))
                }
                NodeKind::ObjectCreation => n
                    .child_of_kind(NodeKind::TypeRef)
                    .is_some_and(|t| self.mentions_type(t.value_str())),
                _ => false,
            },
            EntityKind::Field | EntityKind::EnumConstant => {
                matches!(n.kind, NodeKind::Name | NodeKind::FieldAccess) && self.named(v)
            }
            EntityKind::Method => n.kind == NodeKind::MethodInvocation && self.named(v),
            EntityKind::Constructor => {
                n.kind == NodeKind::ObjectCreation
                    && n.child_of_kind(NodeKind::TypeRef)
                        .is_some_and(|t| self.mentions_type(t.value_str()))
            }
            _ => false,
        }
    }
}

/// One adaptive edit found in the defining branch: a member before and after
/// the branch changed it.
#[derive(Debug, Clone)]
pub struct EditExample {
    pub subject: Subject,
    /// Fqn of the adapted member in the defining branch.
    pub host: String,
    pub file: String,
    /// The member in the base version, renumbered from zero.
    pub before: SyntaxNode,
    /// The member in the defining branch, renumbered from zero.
    pub after: SyntaxNode,
    pub script: EditScript,
}

/// Statement-level units: statements proper, plus field declarations whose
/// initializers stand in for a body.
pub(crate) fn is_unit(kind: NodeKind) -> bool {
    kind.is_statement() || kind == NodeKind::FieldDecl
}

/// Parent links and pre-order positions of one tree.
pub(crate) struct TreeIndex<'a> {
    nodes: HashMap<NodeId, &'a SyntaxNode>,
    parent: HashMap<NodeId, NodeId>,
    order: HashMap<NodeId, usize>,
}

impl<'a> TreeIndex<'a> {
    pub fn new(root: &'a SyntaxNode) -> Self {
        let mut ix = TreeIndex {
            nodes: HashMap::new(),
            parent: HashMap::new(),
            order: HashMap::new(),
        };
        ix.visit(root);
        ix
    }

    fn visit(&mut self, n: &'a SyntaxNode) {
        self.order.insert(n.id, self.order.len());
        self.nodes.insert(n.id, n);
        for c in &n.children {
            self.parent.insert(c.id, n.id);
            self.visit(c);
        }
    }

    pub fn get(&self, id: NodeId) -> Option<&'a SyntaxNode> {
        self.nodes.get(&id).copied()
    }

    pub fn parent(&self, id: NodeId) -> Option<&'a SyntaxNode> {
        self.parent.get(&id).and_then(|p| self.get(*p))
    }

    pub fn position(&self, id: NodeId) -> Option<usize> {
        self.order.get(&id).copied()
    }

    /// `id` followed by its ancestors, innermost first.
    pub fn up(&self, id: NodeId) -> impl Iterator<Item = &'a SyntaxNode> + '_ {
        std::iter::successors(self.get(id), move |n| self.parent(n.id))
    }

    /// Innermost statement-level unit containing `id`, the node included.
    pub fn unit_of(&self, id: NodeId) -> Option<&'a SyntaxNode> {
        self.up(id).find(|n| is_unit(n.kind))
    }

    pub fn is_within(&self, id: NodeId, anc: NodeId) -> bool {
        self.up(id).any(|n| n.id == anc)
    }
}
