use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::detect::Conflict;
use crate::graph_diff::FourWayGraph;
use crate::java::{header_text, parse_unit, print_node, print_unit, NodeId, SyntaxNode};
use crate::resolution::{MatchTrace, Rank, Resolution, Strategy, TracePair};
use crate::similarity::{trigram_similarity, SIM_THRESHOLD};
use crate::tree_diff::{Arena, EditOp};

use super::{is_unit, mine_examples, refine_context, refine_edits, TransformationPattern, TreeIndex};

/// Statements must score above this to be matched.
pub const ANCHOR_THRESHOLD: f64 = 1.618;

/// One point for equal kinds plus the trigram similarity of the comparison
/// strings when it exceeds the similarity threshold.
pub fn score_statement_match(a: &SyntaxNode, b: &SyntaxNode) -> f64 {
    let kind = if a.kind == b.kind { 1.0 } else { 0.0 };
    let sim = trigram_similarity(&header_text(a), &header_text(b));
    kind + if sim > SIM_THRESHOLD { sim } else { 0.0 }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchPair {
    pub sp: NodeId,
    pub sm: NodeId,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchSet {
    pub pairs: Vec<MatchPair>,
    pub anchor: (NodeId, NodeId),
    pub sigma_m: f64,
    pub c_m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no statement of the target matches the pattern's anchor")]
pub struct NoAnchor;

/// Matches the pattern's statements against the member `m`: the anchor
/// first, then its siblings outward, then enclosing statements one level at
/// a time.
pub fn match_context(p: &TransformationPattern, m: &SyntaxNode) -> Result<MatchSet, NoAnchor> {
    match_within(p, m, &HashSet::new())
}

/// Best candidate above the threshold; ties go to the first one iterated.
fn best<'a>(
    sp: &SyntaxNode,
    cands: impl Iterator<Item = (usize, &'a SyntaxNode)>,
) -> Option<(usize, &'a SyntaxNode, f64)> {
    let mut out: Option<(usize, &SyntaxNode, f64)> = None;
    for (i, c) in cands {
        let s = score_statement_match(sp, c);
        if s > ANCHOR_THRESHOLD && out.is_none_or(|(_, _, b)| s > b) {
            out = Some((i, c, s));
        }
    }
    out
}

/// Context matching restricted to statements of `m` not in `used`.
pub(crate) fn match_within(
    p: &TransformationPattern,
    m: &SyntaxNode,
    used: &HashSet<NodeId>,
) -> Result<MatchSet, NoAnchor> {
    let b = TreeIndex::new(&p.example.before);
    let mi = TreeIndex::new(m);
    let pattern: HashSet<NodeId> = p.statements.iter().copied().collect();
    let sp0 = p.anchor.and_then(|a| b.get(a)).ok_or(NoAnchor)?;

    let mut units = Vec::new();
    m.walk(&mut |n| {
        if is_unit(n.kind) && !used.contains(&n.id) {
            units.push(n);
        }
    });
    let (_, sm0, score0) = best(sp0, units.into_iter().enumerate()).ok_or(NoAnchor)?;

    let mut taken: HashSet<NodeId> = used.clone();
    taken.insert(sm0.id);
    let mut pairs = vec![MatchPair {
        sp: sp0.id,
        sm: sm0.id,
        score: score0,
    }];
    let (mut cp, mut cm) = (sp0, sm0);
    loop {
        // pattern siblings share the parent node in the before-tree
        let pparent = b.parent(cp.id).map(|n| n.id);
        let psibs: Vec<&SyntaxNode> = p
            .statements
            .iter()
            .filter_map(|&id| b.get(id))
            .filter(|n| b.parent(n.id).map(|x| x.id) == pparent)
            .collect();
        let msibs: Vec<&SyntaxNode> = mi
            .parent(cm.id)
            .map(|par| {
                par.children
                    .iter()
                    .filter(|c| is_unit(c.kind) && (c.id == cm.id || !taken.contains(&c.id)))
                    .collect()
            })
            .unwrap_or_default();
        let pi = psibs.iter().position(|n| n.id == cp.id).unwrap_or(0);
        let mj = msibs.iter().position(|n| n.id == cm.id).unwrap_or(0);

        let mut limit = mj;
        for sp in psibs[..pi].iter().rev() {
            let cands = msibs[..limit].iter().copied().enumerate().rev();
            if let Some((j, sm, s)) = best(sp, cands) {
                taken.insert(sm.id);
                pairs.push(MatchPair {
                    sp: sp.id,
                    sm: sm.id,
                    score: s,
                });
                limit = j;
            }
        }
        let mut start = mj + 1;
        for sp in &psibs[pi + 1..] {
            let cands = msibs
                .iter()
                .copied()
                .enumerate()
                .skip(start.min(msibs.len()));
            if let Some((j, sm, s)) = best(sp, cands) {
                taken.insert(sm.id);
                pairs.push(MatchPair {
                    sp: sp.id,
                    sm: sm.id,
                    score: s,
                });
                start = j + 1;
            }
        }

        let pp = b.up(cp.id).skip(1).find(|n| is_unit(n.kind));
        let pm = mi.up(cm.id).skip(1).find(|n| is_unit(n.kind));
        match (pp, pm) {
            (Some(pp), Some(pm)) if pattern.contains(&pp.id) && !taken.contains(&pm.id) => {
                let s = score_statement_match(pp, pm);
                if s <= ANCHOR_THRESHOLD {
                    break;
                }
                taken.insert(pm.id);
                pairs.push(MatchPair {
                    sp: pp.id,
                    sm: pm.id,
                    score: s,
                });
                cp = pp;
                cm = pm;
            }
            _ => break,
        }
    }
    let sigma_m = pairs.iter().map(|x| x.score).sum();
    let c_m = pairs.iter().filter(|x| x.score == 2.0).count();
    Ok(MatchSet {
        pairs,
        anchor: (sp0.id, sm0.id),
        sigma_m,
        c_m,
    })
}

/// A pattern together with its match against the target member.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub pattern: TransformationPattern,
    pub matches: MatchSet,
}

fn rank_cmp(a: &Candidate, b: &Candidate) -> Ordering {
    a.matches
        .sigma_m
        .total_cmp(&b.matches.sigma_m)
        .then(a.matches.c_m.cmp(&b.matches.c_m))
        .then_with(|| b.pattern.example.host.cmp(&a.pattern.example.host))
}

/// Index of the best candidate by (Σm, Cm), ties going to the smallest host
/// fqn.
pub fn rank_candidates(cands: &[Candidate]) -> Option<usize> {
    (0..cands.len()).max_by(|&i, &j| rank_cmp(&cands[i], &cands[j]).then(j.cmp(&i)))
}

/// Outcome of replaying a pattern on a file.
#[derive(Debug, Clone)]
pub struct Applied {
    pub tree: SyntaxNode,
    pub ops: Vec<EditOp>,
    /// Refined ops that could not be replayed.
    pub skipped: Vec<usize>,
}

struct Rewriter {
    arena: Arena,
    next: u32,
    applied: Vec<EditOp>,
}

/// First node under `m` (outside nested statements) with the kind and value
/// of `p`.
fn same_node<'a>(m: &'a SyntaxNode, p: &SyntaxNode) -> Option<&'a SyntaxNode> {
    if m.kind == p.kind && m.value == p.value {
        return Some(m);
    }
    m.children
        .iter()
        .filter(|c| !is_unit(c.kind))
        .find_map(|c| same_node(c, p))
}

/// Child nodes correspond when they sit at the same position with the same
/// kind, unless a node with the same value sits deeper in the target; nested
/// statements are left to their own pairs.
fn zip_nodes(p: &SyntaxNode, m: &SyntaxNode, map: &mut HashMap<NodeId, NodeId>) {
    let m = if p.value.is_some() && p.value != m.value {
        same_node(m, p).unwrap_or(m)
    } else {
        m
    };
    map.insert(p.id, m.id);
    for (cp, cm) in p.children.iter().zip(&m.children) {
        if cp.kind == cm.kind && !is_unit(cp.kind) {
            zip_nodes(cp, cm, map);
        }
    }
}

impl Rewriter {
    fn new(file: &SyntaxNode) -> Self {
        Rewriter {
            arena: Arena::from_tree(file),
            next: file.max_id() + 1,
            applied: Vec::new(),
        }
    }

    fn index(
        &self,
        pa: &Arena,
        map: &HashMap<NodeId, NodeId>,
        (pp, mp): (NodeId, NodeId),
        index: usize,
        moving: Option<(NodeId, NodeId)>,
    ) -> Option<usize> {
        let mut pk = pa.children_of(pp)?;
        let mut mk = self.arena.children_of(mp)?;
        if let Some((pn, mn)) = moving {
            pk.retain(|&c| c != pn);
            mk.retain(|&c| c != mn);
        }
        let at = |id: &NodeId| map.get(id).and_then(|m| mk.iter().position(|c| c == m));
        if index == 0 {
            return Some(0);
        }
        if let Some(j) = pk.get(index - 1).and_then(at) {
            return Some(j + 1);
        }
        if let Some(j) = pk.get(index).and_then(at) {
            return Some(j);
        }
        if index == pk.len() {
            return Some(mk.len());
        }
        (index <= mk.len()).then_some(index)
    }

    fn translate(&mut self, op: &EditOp, pa: &Arena, map: &mut HashMap<NodeId, NodeId>) -> Option<EditOp> {
        Some(match op {
            EditOp::Update { node, value, .. } => {
                let m = *map.get(node)?;
                EditOp::Update {
                    node: m,
                    old: self.arena.value_of(m)?,
                    value: value.clone(),
                }
            }
            EditOp::Delete { node } => EditOp::Delete {
                node: *map.get(node)?,
            },
            EditOp::Add {
                node,
                parent,
                index,
                kind,
                value,
            } => {
                let mp = *map.get(parent)?;
                let index = self.index(pa, map, (*parent, mp), *index, None)?;
                let id = NodeId(self.next);
                self.next += 1;
                map.insert(*node, id);
                EditOp::Add {
                    node: id,
                    parent: mp,
                    index,
                    kind: *kind,
                    value: value.clone(),
                }
            }
            EditOp::Move {
                node,
                parent,
                index,
            } => {
                let m = *map.get(node)?;
                let mp = *map.get(parent)?;
                let index = self.index(pa, map, (*parent, mp), *index, Some((*node, m)))?;
                EditOp::Move {
                    node: m,
                    parent: mp,
                    index,
                }
            }
        })
    }

    /// Replays the pattern's refined ops through the matched statement pairs.
    /// Returns the refined ops that were skipped.
    fn replay(&mut self, p: &TransformationPattern, file: &SyntaxNode, ms: &MatchSet) -> Vec<usize> {
        let b = TreeIndex::new(&p.example.before);
        let fi = TreeIndex::new(file);
        let mut map = HashMap::new();
        let mut owned = HashSet::new();
        for pair in &ms.pairs {
            if let (Some(sp), Some(sm)) = (b.get(pair.sp), fi.get(pair.sm)) {
                zip_nodes(sp, sm, &mut map);
                owned.insert(pair.sp);
            }
        }
        let refined: HashSet<usize> = p.ops.iter().copied().collect();
        let mut pa = Arena::from_tree(&p.example.before);
        let mut skipped = Vec::new();
        for (i, op) in p.example.script.ops.iter().enumerate() {
            if refined.contains(&i) {
                let hosted = p.hosts[i].is_some_and(|h| owned.contains(&h));
                let done = hosted
                    && match self.translate(op, &pa, &mut map) {
                        Some(mop) => match self.arena.apply(&mop) {
                            Ok(()) => {
                                self.applied.push(mop);
                                true
                            }
                            Err(_) => false,
                        },
                        None => false,
                    };
                if !done {
                    skipped.push(i);
                }
            }
            let _ = pa.apply(op);
        }
        skipped
    }
}

/// Replays a matched pattern on the file containing the target member.
/// `None` when no op could be replayed.
pub fn apply_pattern(p: &TransformationPattern, file: &SyntaxNode, ms: &MatchSet) -> Option<Applied> {
    let mut rw = Rewriter::new(file);
    let skipped = rw.replay(p, file, ms);
    if rw.applied.is_empty() {
        return None;
    }
    Some(Applied {
        tree: rw.arena.to_tree()?,
        ops: rw.applied,
        skipped,
    })
}

fn touches(fi: &TreeIndex, op: &EditOp, site: NodeId) -> bool {
    let t = match op {
        EditOp::Add { parent, .. } => *parent,
        other => other.node(),
    };
    fi.is_within(t, site) || fi.is_within(site, t)
}

fn trace(p: &TransformationPattern, m: &SyntaxNode, ms: &MatchSet) -> MatchTrace {
    let b = TreeIndex::new(&p.example.before);
    let mi = TreeIndex::new(m);
    let text = |n: Option<&SyntaxNode>| n.map(header_text).unwrap_or_default();
    MatchTrace {
        pattern: print_node(&p.context).unwrap_or_default(),
        pairs: ms
            .pairs
            .iter()
            .map(|x| TracePair {
                sp: text(b.get(x.sp)),
                sm: text(mi.get(x.sm)),
                score: x.score,
            })
            .collect(),
        sigma_m: ms.sigma_m,
        c_m: ms.c_m,
    }
}

/// Mines, refines, ranks and replays examples for one conflict.
pub fn resolve_by_example(conflict: &Conflict, fw: &FourWayGraph) -> Option<Resolution> {
    let am = &fw.merged;
    let m = am.decl_node(conflict.user_am)?;
    let path = am.decl_file(conflict.user_am)?;
    let file = &am.files.get(path)?.tree;
    let fi = TreeIndex::new(file);
    let sites: Vec<NodeId> = conflict
        .sites
        .iter()
        .filter(|s| s.file == path && fi.is_within(s.node, m.id))
        .map(|s| s.node)
        .collect();

    let mut cands: Vec<Candidate> = mine_examples(conflict, fw)
        .into_iter()
        .filter_map(|ex| {
            let refined = refine_edits(&ex).ok()?;
            let pattern = refine_context(&ex, &refined);
            let matches = match_context(&pattern, m).ok()?;
            Some(Candidate { pattern, matches })
        })
        .collect();
    let best = rank_candidates(&cands)?;
    let Candidate { pattern, matches } = cands.swap_remove(best);

    let mut rw = Rewriter::new(file);
    let skipped = rw.replay(&pattern, file, &matches);
    let mut used: HashSet<NodeId> = matches.pairs.iter().map(|x| x.sm).collect();
    let mut partial = !skipped.is_empty();
    for &site in &sites {
        if rw.applied.iter().any(|op| touches(&fi, op, site)) {
            continue;
        }
        let more = match_within(&pattern, m, &used)
            .ok()
            .filter(|ms| ms.pairs.iter().any(|x| fi.is_within(site, x.sm)));
        let covered = more.is_some_and(|ms| {
            used.extend(ms.pairs.iter().map(|x| x.sm));
            let before = rw.applied.len();
            rw.replay(&pattern, file, &ms);
            rw.applied[before..].iter().any(|op| touches(&fi, op, site))
        });
        partial |= !covered;
    }
    if rw.applied.is_empty() {
        return None;
    }
    let tree = rw.arena.to_tree()?;
    let text = print_unit(&tree).ok()?;
    parse_unit(path, &text).ok()?;
    Some(Resolution {
        strategy: Strategy::Example,
        target_file: path.to_string(),
        ops: rw.applied,
        resolved_text: text,
        rank: Some(Rank {
            sigma_m: matches.sigma_m,
            c_m: matches.c_m,
        }),
        partial,
        source: pattern.example.host.clone(),
        trace: Some(trace(&pattern, m, &matches)),
    })
}
