use std::collections::BTreeSet;

use crate::detect::Conflict;
use crate::graph_diff::FourWayGraph;
use crate::peg::{EntityId, EntityKind, RelKind};
use crate::tree_diff::diff_trees;

use super::{EditExample, Subject};

fn is_adaptation_use(k: RelKind) -> bool {
    k.is_use() && !matches!(k, RelKind::Imports | RelKind::Extends | RelKind::Implements)
}

fn is_host(kind: EntityKind) -> bool {
    matches!(
        kind,
        EntityKind::Method | EntityKind::Constructor | EntityKind::Field
    )
}

/// Collects the adaptive edits the defining branch made to members that used
/// the changed entity in the base version.
pub fn mine_examples(conflict: &Conflict, fw: &FourWayGraph) -> Vec<EditExample> {
    let Some(eb) = conflict.subject_base else {
        return Vec::new();
    };
    let x = conflict.def_branch;
    let gb = &fw.base;
    let gx = fw.branch(x);
    let delta = fw.delta(x);
    let ex: Option<EntityId> = delta.matches.get(eb);

    let base_e = gb.entity(eb);
    let mut names = vec![base_e.name.clone()];
    if let Some(ex) = ex {
        let n = &gx.entity(ex).name;
        if !names.contains(n) {
            names.push(n.clone());
        }
    }
    let subject = Subject {
        kind: base_e.kind,
        fqn: base_e.fqn.clone(),
        names,
    };

    let users: BTreeSet<EntityId> = gb
        .incoming(eb)
        .filter(|r| is_adaptation_use(r.kind))
        .map(|r| r.src)
        .filter(|&u| u != eb && is_host(gb.entity(u).kind))
        .collect();

    let mut out = Vec::new();
    for ub in users {
        let Some(ux) = delta.matches.get(ub) else {
            continue;
        };
        let still_uses = match ex {
            Some(ex) => gx.outgoing(ux).any(|r| r.dst == ex && is_adaptation_use(r.kind)),
            None => true,
        };
        if !still_uses {
            continue;
        }
        let (Some(before), Some(after), Some(file)) =
            (gb.decl_node(ub), gx.decl_node(ux), gx.decl_file(ux))
        else {
            continue;
        };
        let mut before = before.clone();
        let mut after = after.clone();
        before.renumber(0);
        after.renumber(0);
        let script = diff_trees(&before, &after);
        if script.is_empty() {
            continue;
        }
        out.push(EditExample {
            subject: subject.clone(),
            host: gx.entity(ux).fqn.clone(),
            file: file.to_string(),
            before,
            after,
            script,
        });
    }
    out
}
