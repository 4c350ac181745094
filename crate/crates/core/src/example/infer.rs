use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::java::{NodeId, NodeKind, SyntaxNode};
use crate::tree_diff::{apply_script, EditOp};

use super::{is_unit, EditExample, TreeIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DepKind {
    Control,
    Data,
}

/// `from` depends on `on`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Dependence {
    pub from: NodeId,
    pub on: NodeId,
    pub kind: DepKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("the example does not edit any use of the changed entity")]
pub struct NoRelevantEdit;

struct UnitInfo {
    id: NodeId,
    enclosing: Vec<NodeId>,
    defs: BTreeSet<String>,
    uses: BTreeSet<String>,
}

/// Nodes of a unit that are not inside a nested unit or block.
fn own_nodes<'a>(n: &'a SyntaxNode, out: &mut Vec<&'a SyntaxNode>) {
    for c in &n.children {
        if is_unit(c.kind) || c.kind == NodeKind::Block {
            continue;
        }
        out.push(c);
        own_nodes(c, out);
    }
}

fn unit_info(n: &SyntaxNode, enclosing: Vec<NodeId>) -> UnitInfo {
    let mut own = Vec::new();
    own_nodes(n, &mut own);
    let mut defs = BTreeSet::new();
    let mut uses = BTreeSet::new();
    let mut lhs = HashSet::new();
    match n.kind {
        NodeKind::LocalVarDecl | NodeKind::FieldDecl => {
            defs.insert(n.value_str().to_string());
        }
        NodeKind::ForEachStmt => {
            if let Some(p) = n.child_of_kind(NodeKind::Parameter) {
                defs.insert(p.value_str().to_string());
            }
        }
        _ => {}
    }
    for x in &own {
        match x.kind {
            NodeKind::Assignment => {
                if let Some(t) = x.children.first().filter(|t| t.kind == NodeKind::Name) {
                    defs.insert(t.value_str().to_string());
                    if x.value_str() == "=" {
                        lhs.insert(t.id);
                    }
                }
            }
            NodeKind::UnaryExpr | NodeKind::PostfixExpr
                if matches!(x.value_str(), "++" | "--") =>
            {
                if let Some(t) = x.children.first().filter(|t| t.kind == NodeKind::Name) {
                    defs.insert(t.value_str().to_string());
                }
            }
            _ => {}
        }
    }
    for x in &own {
        if x.kind == NodeKind::Name && !lhs.contains(&x.id) {
            uses.insert(x.value_str().to_string());
        }
    }
    UnitInfo {
        id: n.id,
        enclosing,
        defs,
        uses,
    }
}

fn collect_units(n: &SyntaxNode, stack: &mut Vec<(NodeId, bool)>, out: &mut Vec<UnitInfo>) {
    let unit = is_unit(n.kind);
    if unit {
        let enclosing = stack.iter().filter(|(_, c)| *c).map(|(id, _)| *id).collect();
        out.push(unit_info(n, enclosing));
        stack.push((n.id, n.kind.is_compound()));
    }
    for c in &n.children {
        collect_units(c, stack, out);
    }
    if unit {
        stack.pop();
    }
}

/// Intra-procedural statement dependences of one member. Control
/// dependence is structural: a statement depends on every enclosing
/// if/loop. Data dependence links a statement to every earlier statement
/// defining a variable it reads; calls define nothing.
pub fn statement_dependences(tree: &SyntaxNode) -> Vec<Dependence> {
    let mut units = Vec::new();
    collect_units(tree, &mut Vec::new(), &mut units);
    let mut out = Vec::new();
    for (i, x) in units.iter().enumerate() {
        for &on in &x.enclosing {
            out.push(Dependence {
                from: x.id,
                on,
                kind: DepKind::Control,
            });
        }
        for y in &units[..i] {
            if !x.uses.is_disjoint(&y.defs) {
                out.push(Dependence {
                    from: x.id,
                    on: y.id,
                    kind: DepKind::Data,
                });
            }
        }
    }
    out
}

/// The stages of edit refinement, as indices into the example's script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refined {
    pub e0: Vec<usize>,
    pub e1: Vec<usize>,
    pub ops: Vec<usize>,
    /// Per script op, the statement-level unit it edits: in the before-tree
    /// for deletions, in the edited tree otherwise.
    pub units: Vec<Option<NodeId>>,
    /// Every dependence between edited units.
    pub edited_deps: Vec<Dependence>,
}

/// Keeps the ops that adapt uses of the subject, the other ops in the same
/// statements, and the ops on edited statements those depend on.
pub fn refine_edits(ex: &EditExample) -> Result<Refined, NoRelevantEdit> {
    let ops = &ex.script.ops;
    let edited = apply_script(&ex.before, ops).map_err(|_| NoRelevantEdit)?;
    let b = TreeIndex::new(&ex.before);
    let r = TreeIndex::new(&edited);
    let mut vars = ex.subject.typed_variables(&ex.before);
    vars.extend(ex.subject.typed_variables(&edited));

    let is_use_in = |t: &TreeIndex, id: NodeId| -> bool {
        let Some(n) = t.get(id) else {
            return false;
        };
        if ex.subject.used_by(n, &vars) {
            return true;
        }
        match t.parent(id) {
            Some(p)
                if matches!(
                    p.kind,
                    NodeKind::MethodInvocation | NodeKind::ObjectCreation | NodeKind::FieldAccess
                ) =>
            {
                ex.subject.used_by(p, &vars)
            }
            Some(p) if p.kind == NodeKind::ArgumentList => {
                t.parent(p.id).is_some_and(|g| ex.subject.used_by(g, &vars))
            }
            _ => false,
        }
    };

    let mut units = Vec::with_capacity(ops.len());
    let mut e0 = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        let id = op.node();
        let t = if matches!(op, EditOp::Delete { .. }) { &b } else { &r };
        units.push(t.unit_of(id).map(|u| u.id));
        if is_use_in(&b, id) || is_use_in(&r, id) {
            e0.push(i);
        }
    }
    if e0.is_empty() {
        return Err(NoRelevantEdit);
    }

    let e0_units: HashSet<NodeId> = e0.iter().filter_map(|&i| units[i]).collect();
    let e1: Vec<usize> = (0..ops.len())
        .filter(|&i| e0.contains(&i) || units[i].is_some_and(|u| e0_units.contains(&u)))
        .collect();

    let edited_units: HashSet<NodeId> = units.iter().flatten().copied().collect();
    let mut edited_deps: Vec<Dependence> = statement_dependences(&ex.before)
        .into_iter()
        .chain(statement_dependences(&edited))
        .filter(|d| edited_units.contains(&d.from) && edited_units.contains(&d.on))
        .collect();
    edited_deps.sort();
    edited_deps.dedup();

    let mut closed: HashSet<NodeId> = e1.iter().filter_map(|&i| units[i]).collect();
    let mut work: Vec<NodeId> = closed.iter().copied().collect();
    while let Some(u) = work.pop() {
        for d in edited_deps.iter().filter(|d| d.from == u) {
            if closed.insert(d.on) {
                work.push(d.on);
            }
        }
    }
    let refined = (0..ops.len())
        .filter(|&i| e1.contains(&i) || units[i].is_some_and(|u| closed.contains(&u)))
        .collect();
    Ok(Refined {
        e0,
        e1,
        ops: refined,
        units,
        edited_deps,
    })
}

/// A refined example: the ops to replay, the statements of the example they
/// belong to, and the trimmed context they were taken from.
#[derive(Debug, Clone)]
pub struct TransformationPattern {
    pub example: EditExample,
    /// Indices of the refined ops in the example's script.
    pub ops: Vec<usize>,
    /// Per script op, the before-tree unit that hosts it.
    pub hosts: Vec<Option<NodeId>>,
    /// Pattern statements in the before-tree, in pre-order.
    pub statements: Vec<NodeId>,
    /// Edited nodes that use the subject.
    pub critical: Vec<NodeId>,
    /// The statement holding the last use of the subject.
    pub anchor: Option<NodeId>,
    pub context: SyntaxNode,
    pub after_context: SyntaxNode,
}

impl TransformationPattern {
    pub fn refined_ops(&self) -> impl Iterator<Item = &EditOp> {
        self.ops.iter().map(|&i| &self.example.script.ops[i])
    }
}

fn prune(n: &mut SyntaxNode, keep: &dyn Fn(&SyntaxNode) -> bool) {
    if n.kind == NodeKind::Block {
        n.children.retain(|c| !is_unit(c.kind) || keep(c));
    }
    for c in &mut n.children {
        prune(c, keep);
    }
}

fn contains_any(n: &SyntaxNode, ids: &HashSet<NodeId>) -> bool {
    ids.contains(&n.id) || n.children.iter().any(|c| contains_any(c, ids))
}

/// Trims the example to the smallest subtree covering the refined ops and
/// drops the statements in it that no refined op touches.
pub fn refine_context(ex: &EditExample, refined: &Refined) -> TransformationPattern {
    let ops = &ex.script.ops;
    let edited = apply_script(&ex.before, ops).unwrap_or_else(|_| ex.before.clone());
    let b = TreeIndex::new(&ex.before);
    let r = TreeIndex::new(&edited);
    let base_max = ex.before.max_id();

    // Nearest before-tree node at or above each op's node.
    let anchor_node = |op: &EditOp| -> Option<NodeId> {
        let t = if matches!(op, EditOp::Delete { .. }) { &b } else { &r };
        t.up(op.node()).find(|n| n.id.0 <= base_max).map(|n| n.id)
    };
    let hosts: Vec<Option<NodeId>> = ops
        .iter()
        .map(|op| {
            let t = if matches!(op, EditOp::Delete { .. }) { &b } else { &r };
            t.up(op.node())
                .find(|n| n.id.0 <= base_max && is_unit(n.kind))
                .map(|n| n.id)
        })
        .collect();

    let covered: Vec<NodeId> = refined.ops.iter().filter_map(|&i| anchor_node(&ops[i])).collect();
    let lca = covered
        .iter()
        .map(|&id| b.up(id).map(|n| n.id).collect::<Vec<_>>())
        .reduce(|acc, path| acc.into_iter().filter(|id| path.contains(id)).collect())
        .and_then(|p| p.first().copied())
        .unwrap_or(ex.before.id);

    let mut statements: BTreeSet<(usize, NodeId)> = BTreeSet::new();
    for &i in &refined.ops {
        let Some(h) = hosts[i] else { continue };
        for n in b.up(h) {
            if is_unit(n.kind) {
                statements.insert((b.position(n.id).unwrap_or(0), n.id));
            }
            if n.id == lca {
                break;
            }
        }
    }
    let statements: Vec<NodeId> = statements.into_iter().map(|(_, id)| id).collect();
    let keep: HashSet<NodeId> = statements.iter().copied().collect();

    let mut context = b.get(lca).cloned().unwrap_or_else(|| ex.before.clone());
    prune(&mut context, &|c| keep.contains(&c.id));

    let mut after_keep = keep.clone();
    for &i in &refined.ops {
        after_keep.insert(ops[i].node());
    }
    let mut after_context = r.get(lca).cloned().unwrap_or_else(|| edited.clone());
    prune(&mut after_context, &|c| {
        c.id.0 > base_max || contains_any(c, &after_keep)
    });

    let critical: Vec<NodeId> = refined.e0.iter().map(|&i| ops[i].node()).collect();
    let anchor = refined
        .e0
        .iter()
        .filter_map(|&i| {
            let h = hosts[i]?;
            let node = ops[i].node();
            let pos = if node.0 <= base_max {
                b.position(node)
            } else {
                b.position(h)
            };
            Some((pos?, h))
        })
        .max()
        .map(|(_, h)| h);

    TransformationPattern {
        example: ex.clone(),
        ops: refined.ops.clone(),
        hosts,
        statements,
        critical,
        anchor,
        context,
        after_context,
    }
}
