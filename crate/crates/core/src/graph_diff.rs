//! Matching and differencing of entity graphs, and the four-way graph that
//! links base, both branches and the merged version.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::merge::Origin;
use crate::peg::{EntityGraph, EntityId, EntityKind, RelKind, Relation};
use crate::similarity::{trigram_similarity, SIM_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Branch {
    #[serde(rename = "l")]
    Left,
    #[serde(rename = "r")]
    Right,
}

impl Branch {
    pub fn other(self) -> Branch {
        match self {
            Branch::Left => Branch::Right,
            Branch::Right => Branch::Left,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Left => "l",
            Branch::Right => "r",
        })
    }
}

/// Injective entity correspondence between two graphs.
#[derive(Debug, Clone, Default)]
pub struct Matching {
    fwd: HashMap<EntityId, EntityId>,
    back: HashMap<EntityId, EntityId>,
}

impl Matching {
    fn insert(&mut self, a: EntityId, b: EntityId) {
        self.fwd.insert(a, b);
        self.back.insert(b, a);
    }

    pub fn get(&self, a: EntityId) -> Option<EntityId> {
        self.fwd.get(&a).copied()
    }

    pub fn rev(&self, b: EntityId) -> Option<EntityId> {
        self.back.get(&b).copied()
    }

    pub fn len(&self) -> usize {
        self.fwd.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fwd.is_empty()
    }

    /// Pairs sorted by the first id.
    pub fn pairs(&self) -> Vec<(EntityId, EntityId)> {
        let mut v: Vec<_> = self.fwd.iter().map(|(&a, &b)| (a, b)).collect();
        v.sort();
        v
    }
}

/// Blend of declaration-text and neighborhood similarity.
pub fn entity_similarity(ga: &EntityGraph, a: EntityId, gb: &EntityGraph, b: EntityId) -> f64 {
    let body = trigram_similarity(&ga.entity(a).body, &gb.entity(b).body);
    let ctx = trigram_similarity(&ga.context_string(a), &gb.context_string(b));
    0.5 * body + 0.5 * ctx
}

/// Matches entities exactly by kind and fqn, then pairs leftovers of the same
/// kind greedily by descending similarity.
pub fn match_graphs(ga: &EntityGraph, gb: &EntityGraph) -> Matching {
    let mut m = Matching::default();
    for e in &ga.entities {
        if let Some(b) = gb.get(e.kind, &e.fqn) {
            m.insert(e.id, b);
        }
    }
    let left: Vec<EntityId> = ga
        .entities
        .iter()
        .filter(|e| !e.external && m.get(e.id).is_none())
        .map(|e| e.id)
        .collect();
    let right: Vec<EntityId> = gb
        .entities
        .iter()
        .filter(|e| !e.external && m.rev(e.id).is_none())
        .map(|e| e.id)
        .collect();
    let mut cands = Vec::new();
    for &a in &left {
        let ka = ga.entity(a).kind;
        for &b in &right {
            if gb.entity(b).kind != ka {
                continue;
            }
            let s = entity_similarity(ga, a, gb, b);
            if s >= SIM_THRESHOLD {
                cands.push((s, a, b));
            }
        }
    }
    cands.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then_with(|| ga.entity(x.1).fqn.cmp(&ga.entity(y.1).fqn))
            .then_with(|| gb.entity(x.2).fqn.cmp(&gb.entity(y.2).fqn))
    });
    for (_, a, b) in cands {
        if m.get(a).is_none() && m.rev(b).is_none() {
            m.insert(a, b);
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum EntityEditOp {
    AddEntity,
    DeleteEntity,
    UpdateEntity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UpdateDetail {
    Rename { old: String, new: String },
    SignatureChange { old: String, new: String },
    /// Field type or method return type changed.
    TypeChange { old: String, new: String },
    BodyChange,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntityEdit {
    pub op: EntityEditOp,
    pub kind: EntityKind,
    /// Base fqn, or the branch fqn for additions.
    pub fqn: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_fqn: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<UpdateDetail>,
    pub branch: Branch,
    #[serde(skip)]
    pub base_id: Option<EntityId>,
    #[serde(skip)]
    pub branch_id: Option<EntityId>,
}

impl EntityEdit {
    pub fn renamed(&self) -> Option<(&str, &str)> {
        self.details.iter().find_map(|d| match d {
            UpdateDetail::Rename { old, new } => Some((old.as_str(), new.as_str())),
            _ => None,
        })
    }

    pub fn signature_change(&self) -> Option<(&str, &str)> {
        self.details.iter().find_map(|d| match d {
            UpdateDetail::SignatureChange { old, new } => Some((old.as_str(), new.as_str())),
            _ => None,
        })
    }

    pub fn type_change(&self) -> Option<(&str, &str)> {
        self.details.iter().find_map(|d| match d {
            UpdateDetail::TypeChange { old, new } => Some((old.as_str(), new.as_str())),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RelationEditOp {
    AddRelation,
    DeleteRelation,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationEdit {
    pub op: RelationEditOp,
    pub src: String,
    pub dst: String,
    pub kind: RelKind,
    pub branch: Branch,
    /// Endpoints in the base graph for deletions, in the branch graph for
    /// additions.
    #[serde(skip)]
    pub rel: Relation,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphDelta {
    pub branch: Branch,
    pub entity_edits: Vec<EntityEdit>,
    pub relation_edits: Vec<RelationEdit>,
    #[serde(skip)]
    pub matches: Matching,
}

impl GraphDelta {
    pub fn is_empty(&self) -> bool {
        self.entity_edits.is_empty() && self.relation_edits.is_empty()
    }

    pub fn added_relations(&self) -> impl Iterator<Item = &RelationEdit> {
        self.relation_edits
            .iter()
            .filter(|r| r.op == RelationEditOp::AddRelation)
    }

    pub fn deleted_relations(&self) -> impl Iterator<Item = &RelationEdit> {
        self.relation_edits
            .iter()
            .filter(|r| r.op == RelationEditOp::DeleteRelation)
    }

    pub fn edits(&self, op: EntityEditOp) -> impl Iterator<Item = &EntityEdit> {
        self.entity_edits.iter().filter(move |e| e.op == op)
    }
}

fn strip_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn update_details(gb: &EntityGraph, b: EntityId, gx: &EntityGraph, x: EntityId) -> Vec<UpdateDetail> {
    let (eb, ex) = (gb.entity(b), gx.entity(x));
    let mut out = Vec::new();
    if eb.name != ex.name {
        out.push(UpdateDetail::Rename {
            old: eb.name.clone(),
            new: ex.name.clone(),
        });
    }
    if eb.kind.is_callable() && eb.params != ex.params {
        out.push(UpdateDetail::SignatureChange {
            old: eb.signature(),
            new: ex.signature(),
        });
    }
    if let (Some(tb), Some(tx)) = (&eb.ty, &ex.ty) {
        if strip_ws(tb) != strip_ws(tx) {
            out.push(UpdateDetail::TypeChange {
                old: tb.clone(),
                new: tx.clone(),
            });
        }
    }
    if eb.body != ex.body {
        out.push(UpdateDetail::BodyChange);
    }
    out
}

/// Entity and relation edits turning the base graph into a branch graph.
pub fn diff_graphs(gb: &EntityGraph, gx: &EntityGraph, branch: Branch) -> GraphDelta {
    let m = match_graphs(gb, gx);
    diff_with(gb, gx, branch, m)
}

fn diff_with(gb: &EntityGraph, gx: &EntityGraph, branch: Branch, m: Matching) -> GraphDelta {
    let mut entity_edits = Vec::new();
    for e in &gb.entities {
        match m.get(e.id) {
            None => entity_edits.push(EntityEdit {
                op: EntityEditOp::DeleteEntity,
                kind: e.kind,
                fqn: e.fqn.clone(),
                new_fqn: None,
                details: Vec::new(),
                branch,
                base_id: Some(e.id),
                branch_id: None,
            }),
            Some(x) => {
                let details = update_details(gb, e.id, gx, x);
                let new_fqn = &gx.entity(x).fqn;
                if !details.is_empty() || *new_fqn != e.fqn {
                    entity_edits.push(EntityEdit {
                        op: EntityEditOp::UpdateEntity,
                        kind: e.kind,
                        fqn: e.fqn.clone(),
                        new_fqn: (*new_fqn != e.fqn).then(|| new_fqn.clone()),
                        details,
                        branch,
                        base_id: Some(e.id),
                        branch_id: Some(x),
                    });
                }
            }
        }
    }
    for e in &gx.entities {
        if m.rev(e.id).is_none() {
            entity_edits.push(EntityEdit {
                op: EntityEditOp::AddEntity,
                kind: e.kind,
                fqn: e.fqn.clone(),
                new_fqn: None,
                details: Vec::new(),
                branch,
                base_id: None,
                branch_id: Some(e.id),
            });
        }
    }
    entity_edits.sort_by(|a, b| (a.op, &a.fqn, a.kind).cmp(&(b.op, &b.fqn, b.kind)));

    let mapped: HashSet<Relation> = gb
        .relations
        .iter()
        .filter_map(|r| {
            Some(Relation {
                src: m.get(r.src)?,
                dst: m.get(r.dst)?,
                kind: r.kind,
            })
        })
        .collect();
    let present: HashSet<&Relation> = gx.relations.iter().collect();
    let mut relation_edits = Vec::new();
    for r in &gb.relations {
        let kept = match (m.get(r.src), m.get(r.dst)) {
            (Some(src), Some(dst)) => present.contains(&Relation { src, dst, kind: r.kind }),
            _ => false,
        };
        if !kept {
            relation_edits.push(RelationEdit {
                op: RelationEditOp::DeleteRelation,
                src: gb.entity(r.src).fqn.clone(),
                dst: gb.entity(r.dst).fqn.clone(),
                kind: r.kind,
                branch,
                rel: *r,
            });
        }
    }
    for r in &gx.relations {
        if !mapped.contains(r) {
            relation_edits.push(RelationEdit {
                op: RelationEditOp::AddRelation,
                src: gx.entity(r.src).fqn.clone(),
                dst: gx.entity(r.dst).fqn.clone(),
                kind: r.kind,
                branch,
                rel: *r,
            });
        }
    }
    relation_edits.sort_by(|a, b| (a.op, &a.src, &a.dst, a.kind).cmp(&(b.op, &b.src, &b.dst, b.kind)));
    GraphDelta {
        branch,
        entity_edits,
        relation_edits,
        matches: m,
    }
}

/// The (kind, fqn) set obtained by replaying entity edits on a base graph.
pub fn replay_entity_edits(gb: &EntityGraph, delta: &GraphDelta) -> BTreeSet<(EntityKind, String)> {
    let mut set: BTreeSet<(EntityKind, String)> = gb.entities.iter().map(|e| (e.kind, e.fqn.clone())).collect();
    for e in &delta.entity_edits {
        match e.op {
            EntityEditOp::DeleteEntity => {
                set.remove(&(e.kind, e.fqn.clone()));
            }
            EntityEditOp::AddEntity => {
                set.insert((e.kind, e.fqn.clone()));
            }
            EntityEditOp::UpdateEntity => {
                if let Some(n) = &e.new_fqn {
                    set.remove(&(e.kind, e.fqn.clone()));
                    set.insert((e.kind, n.clone()));
                }
            }
        }
    }
    set
}

pub struct FourWayGraph {
    pub base: EntityGraph,
    pub left: EntityGraph,
    pub right: EntityGraph,
    pub merged: EntityGraph,
    pub delta_l: GraphDelta,
    pub delta_r: GraphDelta,
    /// Merged → left.
    pub cap_l: Matching,
    /// Merged → right.
    pub cap_r: Matching,
    /// Per merged file, which input each line came from; empty when the
    /// merged version was not produced by the textual merge.
    pub origins: BTreeMap<String, Vec<Origin>>,
}

impl FourWayGraph {
    pub fn branch(&self, b: Branch) -> &EntityGraph {
        match b {
            Branch::Left => &self.left,
            Branch::Right => &self.right,
        }
    }

    pub fn delta(&self, b: Branch) -> &GraphDelta {
        match b {
            Branch::Left => &self.delta_l,
            Branch::Right => &self.delta_r,
        }
    }

    pub fn cap(&self, b: Branch) -> &Matching {
        match b {
            Branch::Left => &self.cap_l,
            Branch::Right => &self.cap_r,
        }
    }

    /// The merged-version entity corresponding to a branch entity.
    pub fn merged_of(&self, b: Branch, id: EntityId) -> Option<EntityId> {
        self.cap(b).rev(id)
    }
}

pub fn build_fourway(base: EntityGraph, left: EntityGraph, right: EntityGraph, merged: EntityGraph) -> FourWayGraph {
    let ((delta_l, delta_r), (cap_l, cap_r)) = rayon::join(
        || {
            rayon::join(
                || diff_graphs(&base, &left, Branch::Left),
                || diff_graphs(&base, &right, Branch::Right),
            )
        },
        || rayon::join(|| match_graphs(&merged, &left), || match_graphs(&merged, &right)),
    );
    FourWayGraph {
        base,
        left,
        right,
        merged,
        delta_l,
        delta_r,
        cap_l,
        cap_r,
        origins: BTreeMap::new(),
    }
}
