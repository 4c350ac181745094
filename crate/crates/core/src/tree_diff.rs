//! Syntax tree differencing and edit script application.
//!
//! Matching runs in two passes followed by a recovery sweep: isomorphic
//! subtrees are paired top-down by hash, then remaining inner nodes are
//! paired bottom-up by the share of matched descendants, and finally the
//! unmatched children of every matched pair are aligned by kind. The script
//! is then derived by the classic breadth-first insert/update/move walk with
//! child alignment, followed by post-order deletes.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::java::{NodeId, NodeKind, Span, SyntaxNode};

/// Id of the implicit node above the compilation unit; lets a script replace
/// the root itself.
pub const VIRTUAL_ROOT: NodeId = NodeId(u32::MAX);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum EditOp {
    Update {
        node: NodeId,
        old: Option<String>,
        value: Option<String>,
    },
    Add {
        node: NodeId,
        parent: NodeId,
        index: usize,
        kind: NodeKind,
        value: Option<String>,
    },
    Delete {
        node: NodeId,
    },
    Move {
        node: NodeId,
        parent: NodeId,
        index: usize,
    },
}

impl EditOp {
    pub fn node(&self) -> NodeId {
        match self {
            EditOp::Update { node, .. }
            | EditOp::Add { node, .. }
            | EditOp::Delete { node }
            | EditOp::Move { node, .. } => *node,
        }
    }

    pub fn parent(&self) -> Option<NodeId> {
        match self {
            EditOp::Add { parent, .. } | EditOp::Move { parent, .. } => Some(*parent),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EditOp::Update { .. } => "update",
            EditOp::Add { .. } => "add",
            EditOp::Delete { .. } => "delete",
            EditOp::Move { .. } => "move",
        }
    }
}

impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditOp::Update { node, old, value } => write!(
                f,
                "update {node} {:?} -> {:?}",
                old.as_deref().unwrap_or(""),
                value.as_deref().unwrap_or("")
            ),
            EditOp::Add {
                node,
                parent,
                index,
                kind,
                value,
            } => write!(
                f,
                "add {node} {kind:?} {:?} under {parent} at {index}",
                value.as_deref().unwrap_or("")
            ),
            EditOp::Delete { node } => write!(f, "delete {node}"),
            EditOp::Move {
                node,
                parent,
                index,
            } => write!(f, "move {node} under {parent} at {index}"),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EditScript {
    pub ops: Vec<EditOp>,
    /// For every node of the edited tree, its id there paired with the id of
    /// the corresponding node of the after-tree.
    pub mapping: Vec<(NodeId, NodeId)>,
}

impl EditScript {
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The after-tree id corresponding to an id of the edited tree.
    pub fn after_id(&self, id: NodeId) -> Option<NodeId> {
        self.mapping.iter().find(|(a, _)| *a == id).map(|(_, b)| *b)
    }

    /// The edited-tree id corresponding to an after-tree id.
    pub fn before_id(&self, after: NodeId) -> Option<NodeId> {
        self.mapping.iter().find(|(_, b)| *b == after).map(|(a, _)| *a)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot apply `{op}`: {reason}")]
pub struct DanglingOp {
    pub op: EditOp,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DiffOptions {
    /// Keep edits of package and import declarations in the script.
    pub include_imports: bool,
}

// ---- arena ---------------------------------------------------------------

#[derive(Debug, Clone)]
struct ANode {
    id: NodeId,
    kind: NodeKind,
    value: Option<String>,
    span: Span,
    children: Vec<usize>,
    parent: Option<usize>,
}

/// Mutable tree used to simulate and replay scripts. Index 0 is the virtual
/// root.
#[derive(Debug, Clone)]
pub(crate) struct Arena {
    nodes: Vec<ANode>,
    index: HashMap<NodeId, usize>,
}

impl Arena {
    pub(crate) fn from_tree(tree: &SyntaxNode) -> Self {
        let mut a = Arena {
            nodes: vec![ANode {
                id: VIRTUAL_ROOT,
                kind: NodeKind::CompilationUnit,
                value: None,
                span: Span::default(),
                children: Vec::new(),
                parent: None,
            }],
            index: HashMap::from([(VIRTUAL_ROOT, 0)]),
        };
        let r = a.push(tree, Some(0));
        a.nodes[0].children.push(r);
        a
    }

    fn push(&mut self, n: &SyntaxNode, parent: Option<usize>) -> usize {
        let idx = self.nodes.len();
        self.nodes.push(ANode {
            id: n.id,
            kind: n.kind,
            value: n.value.clone(),
            span: n.span,
            children: Vec::new(),
            parent,
        });
        self.index.entry(n.id).or_insert(idx);
        let kids: Vec<usize> = n.children.iter().map(|c| self.push(c, Some(idx))).collect();
        self.nodes[idx].children = kids;
        idx
    }

    fn build(&self, i: usize) -> SyntaxNode {
        let n = &self.nodes[i];
        SyntaxNode {
            id: n.id,
            kind: n.kind,
            value: n.value.clone(),
            children: n.children.iter().map(|&c| self.build(c)).collect(),
            span: n.span,
        }
    }

    pub(crate) fn to_tree(&self) -> Option<SyntaxNode> {
        match self.nodes[0].children.as_slice() {
            [r] => Some(self.build(*r)),
            _ => None,
        }
    }

    fn detach(&mut self, i: usize) {
        if let Some(p) = self.nodes[i].parent.take() {
            self.nodes[p].children.retain(|&c| c != i);
        }
    }

    fn insert(&mut self, parent: usize, index: usize, i: usize) {
        self.nodes[parent].children.insert(index, i);
        self.nodes[i].parent = Some(parent);
    }

    fn position(&self, i: usize) -> usize {
        let p = self.nodes[i].parent.expect("attached node");
        self.nodes[p].children.iter().position(|&c| c == i).unwrap()
    }

    fn is_ancestor_or_self(&self, anc: usize, mut i: usize) -> bool {
        loop {
            if i == anc {
                return true;
            }
            match self.nodes[i].parent {
                Some(p) => i = p,
                None => return false,
            }
        }
    }

    fn live(&self, id: NodeId) -> Option<usize> {
        let &i = self.index.get(&id)?;
        // attached to the virtual root through parents
        let mut j = i;
        while let Some(p) = self.nodes[j].parent {
            j = p;
        }
        (j == 0).then_some(i)
    }

    pub(crate) fn children_of(&self, id: NodeId) -> Option<Vec<NodeId>> {
        let i = self.live(id)?;
        Some(self.nodes[i].children.iter().map(|&c| self.nodes[c].id).collect())
    }

    pub(crate) fn value_of(&self, id: NodeId) -> Option<Option<String>> {
        self.live(id).map(|i| self.nodes[i].value.clone())
    }

    /// Applies one op, leaving the arena untouched on failure.
    pub(crate) fn apply(&mut self, op: &EditOp) -> Result<(), DanglingOp> {
        let fail = |reason: &str| DanglingOp {
            op: op.clone(),
            reason: reason.to_string(),
        };
        match op {
            EditOp::Update { node, value, .. } => {
                let i = self.live(*node).ok_or_else(|| fail("node not found"))?;
                self.nodes[i].value = value.clone();
            }
            EditOp::Add {
                node,
                parent,
                index,
                kind,
                value,
            } => {
                let p = self.live(*parent).ok_or_else(|| fail("parent not found"))?;
                if *index > self.nodes[p].children.len() {
                    return Err(fail("index out of range"));
                }
                if self.live(*node).is_some() {
                    return Err(fail("node id already present"));
                }
                let i = self.nodes.len();
                self.nodes.push(ANode {
                    id: *node,
                    kind: *kind,
                    value: value.clone(),
                    span: Span::default(),
                    children: Vec::new(),
                    parent: None,
                });
                self.index.insert(*node, i);
                self.insert(p, *index, i);
            }
            EditOp::Delete { node } => {
                let i = self.live(*node).ok_or_else(|| fail("node not found"))?;
                if i == 0 {
                    return Err(fail("cannot delete the virtual root"));
                }
                self.detach(i);
            }
            EditOp::Move {
                node,
                parent,
                index,
            } => {
                let i = self.live(*node).ok_or_else(|| fail("node not found"))?;
                let p = self.live(*parent).ok_or_else(|| fail("parent not found"))?;
                if i == 0 || self.is_ancestor_or_self(i, p) {
                    return Err(fail("move into own subtree"));
                }
                let len_after_detach = self.nodes[p].children.len()
                    - usize::from(self.nodes[i].parent == Some(p));
                if *index > len_after_detach {
                    return Err(fail("index out of range"));
                }
                self.detach(i);
                self.insert(p, *index, i);
            }
        }
        Ok(())
    }
}

/// Applies a whole script; fails on the first op that cannot be applied.
pub fn apply_script(tree: &SyntaxNode, ops: &[EditOp]) -> Result<SyntaxNode, DanglingOp> {
    let mut a = Arena::from_tree(tree);
    for op in ops {
        a.apply(op)?;
    }
    a.to_tree().ok_or_else(|| DanglingOp {
        op: ops.last().cloned().unwrap_or(EditOp::Delete { node: VIRTUAL_ROOT }),
        reason: "script does not leave a single root".into(),
    })
}

/// Applies the ops that can be applied and skips the rest. Returns the tree
/// and the indices of the skipped ops.
pub fn apply_lenient(tree: &SyntaxNode, ops: &[EditOp]) -> (SyntaxNode, Vec<usize>) {
    let mut a = Arena::from_tree(tree);
    let mut skipped = Vec::new();
    for (k, op) in ops.iter().enumerate() {
        let before = a.clone();
        if a.apply(op).is_err() || a.to_tree().is_none() {
            a = before;
            skipped.push(k);
        }
    }
    (a.to_tree().unwrap_or_else(|| tree.clone()), skipped)
}

// ---- matching -----------------------------------------------------------

struct Side<'a> {
    a: &'a Arena,
    hash: Vec<u64>,
    height: Vec<usize>,
    pre: Vec<usize>,
    /// pre-order rank and subtree size, for descendant tests
    rank: Vec<usize>,
    size: Vec<usize>,
}

impl<'a> Side<'a> {
    fn new(a: &'a Arena) -> Self {
        let n = a.nodes.len();
        let mut s = Side {
            a,
            hash: vec![0; n],
            height: vec![0; n],
            pre: Vec::with_capacity(n),
            rank: vec![0; n],
            size: vec![0; n],
        };
        s.visit(0);
        s
    }

    fn visit(&mut self, i: usize) {
        self.rank[i] = self.pre.len();
        self.pre.push(i);
        let node = &self.a.nodes[i];
        let mut h = DefaultHasher::new();
        node.kind.hash(&mut h);
        node.value.hash(&mut h);
        let mut height = 0;
        let mut size = 1;
        for &c in &node.children {
            self.visit(c);
            self.hash[c].hash(&mut h);
            height = height.max(self.height[c]);
            size += self.size[c];
        }
        self.hash[i] = h.finish();
        self.height[i] = height + 1;
        self.size[i] = size;
    }

    fn is_desc(&self, anc: usize, d: usize) -> bool {
        d != anc && self.rank[d] > self.rank[anc] && self.rank[d] < self.rank[anc] + self.size[anc]
    }

    fn descendants(&self, i: usize) -> &[usize] {
        &self.pre[self.rank[i] + 1..self.rank[i] + self.size[i]]
    }

    fn rel_pos(&self, i: usize) -> f64 {
        self.rank[i] as f64 / self.pre.len().max(1) as f64
    }
}

struct Matcher<'a> {
    l: Side<'a>,
    r: Side<'a>,
    ml: Vec<Option<usize>>,
    mr: Vec<Option<usize>>,
}

/// Longest common subsequence of two index lists; returns matched pairs.
fn lcs<T: Copy>(xs: &[T], ys: &[T], eq: impl Fn(T, T) -> bool) -> Vec<(T, T)> {
    let (n, m) = (xs.len(), ys.len());
    let mut dp = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            dp[i][j] = if eq(xs[i], ys[j]) {
                dp[i + 1][j + 1] + 1
            } else {
                dp[i + 1][j].max(dp[i][j + 1])
            };
        }
    }
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < n && j < m {
        if eq(xs[i], ys[j]) {
            out.push((xs[i], ys[j]));
            i += 1;
            j += 1;
        } else if dp[i + 1][j] >= dp[i][j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

impl<'a> Matcher<'a> {
    fn link(&mut self, a: usize, b: usize) {
        self.ml[a] = Some(b);
        self.mr[b] = Some(a);
    }

    fn subtree_free(&self, a: usize, b: usize) -> bool {
        self.ml[a].is_none()
            && self.mr[b].is_none()
            && self.l.descendants(a).iter().all(|&d| self.ml[d].is_none())
            && self.r.descendants(b).iter().all(|&d| self.mr[d].is_none())
    }

    fn link_subtree(&mut self, a: usize, b: usize) {
        self.link(a, b);
        let (ca, cb) = (self.l.a.nodes[a].children.clone(), self.r.a.nodes[b].children.clone());
        for (x, y) in ca.into_iter().zip(cb) {
            self.link_subtree(x, y);
        }
    }

    fn top_down(&mut self) {
        let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::new();
        for &i in &self.l.pre[1..] {
            by_hash.entry(self.l.hash[i]).or_default().push(i);
        }
        let order = self.r.pre[1..].to_vec();
        for b in order {
            if self.mr[b].is_some() || self.r.height[b] < 2 {
                continue;
            }
            let Some(cands) = by_hash.get(&self.r.hash[b]) else {
                continue;
            };
            let pb = self.r.a.nodes[b].parent;
            let best = cands
                .iter()
                .copied()
                .filter(|&a| self.subtree_free(a, b))
                .min_by(|&x, &y| {
                    let key = |a: usize| {
                        let parent_ok = self.l.a.nodes[a].parent.and_then(|p| self.ml[p]) == pb;
                        (!parent_ok, (self.l.rel_pos(a) - self.r.rel_pos(b)).abs())
                    };
                    let (kx, ky) = (key(x), key(y));
                    kx.0.cmp(&ky.0).then(kx.1.total_cmp(&ky.1)).then(x.cmp(&y))
                });
            if let Some(a) = best {
                self.link_subtree(a, b);
            }
        }
    }

    fn dice(&self, a: usize, b: usize) -> f64 {
        let da = self.l.descendants(a);
        let db = self.r.descendants(b);
        if da.is_empty() && db.is_empty() {
            return 0.0;
        }
        let common = da
            .iter()
            .filter(|&&d| self.ml[d].is_some_and(|m| self.r.is_desc(b, m)))
            .count();
        2.0 * common as f64 / (da.len() + db.len()) as f64
    }

    fn bottom_up(&mut self) {
        let post: Vec<usize> = {
            let mut v = Vec::new();
            fn walk(a: &Arena, i: usize, out: &mut Vec<usize>) {
                for &c in &a.nodes[i].children {
                    walk(a, c, out);
                }
                out.push(i);
            }
            walk(self.l.a, 0, &mut v);
            v
        };
        for a in post {
            if a == 0 || self.ml[a].is_some() || self.l.a.nodes[a].children.is_empty() {
                continue;
            }
            let kind = self.l.a.nodes[a].kind;
            let mut cands = Vec::new();
            for &d in self.l.descendants(a) {
                let Some(m) = self.ml[d] else { continue };
                let mut p = self.r.a.nodes[m].parent;
                while let Some(q) = p {
                    if q != 0 && self.mr[q].is_none() && self.r.a.nodes[q].kind == kind && !cands.contains(&q) {
                        cands.push(q);
                    }
                    p = self.r.a.nodes[q].parent;
                }
            }
            let best = cands
                .into_iter()
                .map(|b| (b, self.dice(a, b)))
                .filter(|&(_, d)| d > 0.5)
                .min_by(|x, y| {
                    y.1.total_cmp(&x.1)
                        .then((self.l.rel_pos(a) - self.r.rel_pos(x.0)).abs().total_cmp(
                            &(self.l.rel_pos(a) - self.r.rel_pos(y.0)).abs(),
                        ))
                        .then(x.0.cmp(&y.0))
                });
            if let Some((b, _)) = best {
                self.link(a, b);
            }
        }
    }

    fn recover(&mut self, a: usize, b: usize) {
        let unmatched_l = |m: &Self| -> Vec<usize> {
            m.l.a.nodes[a].children.iter().copied().filter(|&c| m.ml[c].is_none()).collect()
        };
        let unmatched_r = |m: &Self| -> Vec<usize> {
            m.r.a.nodes[b].children.iter().copied().filter(|&c| m.mr[c].is_none()).collect()
        };
        let (ua, ub) = (unmatched_l(self), unmatched_r(self));
        for (x, y) in lcs(&ua, &ub, |x, y| self.l.hash[x] == self.r.hash[y]) {
            if self.subtree_free(x, y) {
                self.link_subtree(x, y);
            }
        }
        let (ua, ub) = (unmatched_l(self), unmatched_r(self));
        let (ln, rn) = (&self.l.a.nodes, &self.r.a.nodes);
        for (x, y) in lcs(&ua, &ub, |x, y| ln[x].kind == rn[y].kind && ln[x].value == rn[y].value) {
            self.link(x, y);
        }
        let (ua, ub) = (unmatched_l(self), unmatched_r(self));
        let (ln, rn) = (&self.l.a.nodes, &self.r.a.nodes);
        for (x, y) in lcs(&ua, &ub, |x, y| ln[x].kind == rn[y].kind) {
            self.link(x, y);
        }
        let kids = self.l.a.nodes[a].children.clone();
        for c in kids {
            if let Some(m) = self.ml[c] {
                if self.r.a.nodes[m].parent == Some(b) {
                    self.recover(c, m);
                }
            }
        }
    }
}

impl Matcher<'_> {
    /// Pairs leaves that moved inside one statement: an unmatched leaf goes
    /// to the first unmatched leaf with its kind and value under the partner
    /// of its enclosing statement.
    fn moved_leaves(&mut self) {
        let (ln, rn) = (&self.l.a.nodes, &self.r.a.nodes);
        let mut links = Vec::new();
        for &a in &self.l.pre[1..] {
            if self.ml[a].is_some() || !ln[a].children.is_empty() || ln[a].value.is_none() {
                continue;
            }
            let mut p = ln[a].parent;
            while let Some(q) = p.filter(|&q| q != 0 && !ln[q].kind.is_statement()) {
                p = ln[q].parent;
            }
            let Some(sb) = p.filter(|&q| q != 0).and_then(|q| self.ml[q]) else {
                continue;
            };
            let b = self.r.descendants(sb).iter().copied().find(|&b| {
                self.mr[b].is_none()
                    && !links.iter().any(|&(_, y)| y == b)
                    && rn[b].children.is_empty()
                    && rn[b].kind == ln[a].kind
                    && rn[b].value == ln[a].value
            });
            if let Some(b) = b {
                links.push((a, b));
            }
        }
        for (a, b) in links {
            self.link(a, b);
        }
    }
}

fn strip_for_imports(before: &SyntaxNode, after: &SyntaxNode) -> SyntaxNode {
    let is_header = |n: &SyntaxNode| matches!(n.kind, NodeKind::PackageDecl | NodeKind::ImportDecl);
    if before.kind != NodeKind::CompilationUnit || after.kind != NodeKind::CompilationUnit {
        return after.clone();
    }
    let mut out = after.clone();
    out.children.retain(|c| !is_header(c));
    let headers: Vec<SyntaxNode> = before.children.iter().filter(|c| is_header(c)).cloned().collect();
    out.children.splice(0..0, headers);
    out
}

pub fn diff_trees(before: &SyntaxNode, after: &SyntaxNode) -> EditScript {
    diff_trees_with(before, after, DiffOptions::default())
}

pub fn diff_trees_with(before: &SyntaxNode, after: &SyntaxNode, opts: DiffOptions) -> EditScript {
    let stripped;
    let after = if opts.include_imports {
        after
    } else {
        stripped = strip_for_imports(before, after);
        &stripped
    };
    let la = Arena::from_tree(before);
    let ra = Arena::from_tree(after);
    let (ml, mr) = {
        let mut m = Matcher {
            l: Side::new(&la),
            r: Side::new(&ra),
            ml: vec![None; la.nodes.len()],
            mr: vec![None; ra.nodes.len()],
        };
        m.link(0, 0);
        m.top_down();
        m.bottom_up();
        m.recover(0, 0);
        m.moved_leaves();
        (m.ml, m.mr)
    };
    generate(la, &ra, ml, mr, before.max_id())
}

// ---- script generation ---------------------------------------------------

struct Gen<'a> {
    w: Arena,
    t2: &'a Arena,
    mw: Vec<Option<usize>>,
    m2: Vec<Option<usize>>,
    in_w: Vec<bool>,
    in_2: Vec<bool>,
    ops: Vec<EditOp>,
}

impl Gen<'_> {
    fn find_pos(&self, x: usize) -> usize {
        let y = self.t2.nodes[x].parent.unwrap();
        let sibs = &self.t2.nodes[y].children;
        let k = sibs.iter().position(|&s| s == x).unwrap();
        match sibs[..k].iter().rev().find(|&&v| self.in_2[v]) {
            None => 0,
            Some(&v) => self.w.position(self.m2[v].unwrap()) + 1,
        }
    }

    fn align(&mut self, w: usize, x: usize) {
        for &c in &self.w.nodes[w].children {
            self.in_w[c] = false;
        }
        for &c in &self.t2.nodes[x].children {
            self.in_2[c] = false;
        }
        let s1: Vec<usize> = self.w.nodes[w]
            .children
            .iter()
            .copied()
            .filter(|&c| self.mw[c].is_some_and(|p| self.t2.nodes[p].parent == Some(x)))
            .collect();
        let s2: Vec<usize> = self.t2.nodes[x]
            .children
            .iter()
            .copied()
            .filter(|&c| self.m2[c].is_some_and(|p| self.w.nodes[p].parent == Some(w)))
            .collect();
        let common = lcs(&s1, &s2, |a, b| self.mw[a] == Some(b));
        for &(a, b) in &common {
            self.in_w[a] = true;
            self.in_2[b] = true;
        }
        for b in s2 {
            if self.in_2[b] {
                continue;
            }
            let a = self.m2[b].unwrap();
            self.w.detach(a);
            let k = self.find_pos(b);
            self.w.insert(w, k, a);
            self.ops.push(EditOp::Move {
                node: self.w.nodes[a].id,
                parent: self.w.nodes[w].id,
                index: k,
            });
            self.in_w[a] = true;
            self.in_2[b] = true;
        }
    }
}

fn generate(
    w: Arena,
    t2: &Arena,
    mut mw: Vec<Option<usize>>,
    mut m2: Vec<Option<usize>>,
    max_id: u32,
) -> EditScript {
    let cap = w.nodes.len() + t2.nodes.len();
    mw.resize(cap, None);
    m2.resize(t2.nodes.len(), None);
    let mut g = Gen {
        w,
        t2,
        mw,
        m2,
        in_w: vec![false; cap],
        in_2: vec![false; t2.nodes.len()],
        ops: Vec::new(),
    };
    let mut next_id = max_id + 1;
    g.align(0, 0);
    let mut queue = std::collections::VecDeque::from(t2.nodes[0].children.clone());
    while let Some(x) = queue.pop_front() {
        queue.extend(t2.nodes[x].children.iter().copied());
        let y = t2.nodes[x].parent.unwrap();
        let z = g.m2[y].expect("parent handled first");
        let xn = &t2.nodes[x];
        let w = match g.m2[x] {
            None => {
                let k = g.find_pos(x);
                let id = NodeId(next_id);
                next_id += 1;
                let i = g.w.nodes.len();
                g.w.nodes.push(ANode {
                    id,
                    kind: xn.kind,
                    value: xn.value.clone(),
                    span: Span::default(),
                    children: Vec::new(),
                    parent: None,
                });
                g.w.index.insert(id, i);
                g.w.insert(z, k, i);
                g.ops.push(EditOp::Add {
                    node: id,
                    parent: g.w.nodes[z].id,
                    index: k,
                    kind: xn.kind,
                    value: xn.value.clone(),
                });
                g.mw[i] = Some(x);
                g.m2[x] = Some(i);
                i
            }
            Some(w) => {
                if g.w.nodes[w].value != xn.value {
                    g.ops.push(EditOp::Update {
                        node: g.w.nodes[w].id,
                        old: g.w.nodes[w].value.clone(),
                        value: xn.value.clone(),
                    });
                    g.w.nodes[w].value = xn.value.clone();
                }
                if g.w.nodes[w].parent != Some(z) {
                    g.w.detach(w);
                    let k = g.find_pos(x);
                    g.w.insert(z, k, w);
                    g.ops.push(EditOp::Move {
                        node: g.w.nodes[w].id,
                        parent: g.w.nodes[z].id,
                        index: k,
                    });
                }
                w
            }
        };
        g.in_w[w] = true;
        g.in_2[x] = true;
        g.align(w, x);
    }
    // post-order deletes
    fn post(a: &Arena, i: usize, out: &mut Vec<usize>) {
        for &c in &a.nodes[i].children {
            post(a, c, out);
        }
        out.push(i);
    }
    let mut order = Vec::new();
    post(&g.w, 0, &mut order);
    for i in order {
        if i != 0 && g.mw[i].is_none() {
            g.ops.push(EditOp::Delete { node: g.w.nodes[i].id });
            g.w.detach(i);
        }
    }
    let mut mapping = Vec::new();
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        if i != 0 {
            if let Some(x) = g.mw[i] {
                mapping.push((g.w.nodes[i].id, t2.nodes[x].id));
            }
        }
        stack.extend(g.w.nodes[i].children.iter().rev());
    }
    mapping.sort();
    EditScript {
        ops: g.ops,
        mapping,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::java::parse_unit;

    fn tree(src: &str) -> SyntaxNode {
        parse_unit("T.java", src).unwrap().tree
    }

    #[test]
    fn identical_trees_give_empty_script() {
        let t = tree("class A { int f; void m() { f = 1; g(f); } }");
        assert!(diff_trees(&t, &t.clone()).is_empty());
    }

    #[test]
    fn rename_is_updates_only() {
        let a = tree("class A { void m() { Foo foo = new Foo(); foo.run(); } }");
        let b = tree("class A { void m() { Bar foo = new Bar(); foo.run(); } }");
        let s = diff_trees(&a, &b);
        assert_eq!(s.ops.len(), 2, "{:?}", s.ops);
        assert!(s.ops.iter().all(|o| matches!(o, EditOp::Update { .. })));
        assert!(apply_script(&a, &s.ops).unwrap().same_structure(&b));
    }

    #[test]
    fn insert_delete_and_reorder() {
        let a = tree("class A { void m() { a(); b(); c(); } void n() { x(1); } }");
        let b = tree("class A { void n() { x(1); y(); } void m() { c(); a(); } }");
        let s = diff_trees(&a, &b);
        assert!(apply_script(&a, &s.ops).unwrap().same_structure(&b), "{:?}", s.ops);
    }

    #[test]
    fn imports_are_left_out_by_default() {
        let a = tree("import a.B;\nclass A { B b; }");
        let b = tree("import c.B;\nimport d.E;\nclass A { B b; E e; }");
        let s = diff_trees(&a, &b);
        let out = apply_script(&a, &s.ops).unwrap();
        assert_eq!(out.children[0].value_str(), "a.B");
        assert_eq!(out.children.len(), 2);
        let full = diff_trees_with(&a, &b, DiffOptions { include_imports: true });
        assert!(apply_script(&a, &full.ops).unwrap().same_structure(&b));
    }

    #[test]
    fn dangling_delete_is_reported() {
        let a = tree("class A {}");
        let err = apply_script(&a, &[EditOp::Delete { node: NodeId(99) }]).unwrap_err();
        assert_eq!(err.reason, "node not found");
    }

    #[test]
    fn mapping_covers_result_nodes() {
        let a = tree("class A { void m() { a(); } }");
        let b = tree("class A { void m() { a(); b(); } }");
        let s = diff_trees(&a, &b);
        let out = apply_script(&a, &s.ops).unwrap();
        assert_eq!(s.mapping.len(), out.size());
    }
}
