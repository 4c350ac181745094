//! Build-conflict detection: def-side edits of one branch matched against
//! use introductions of the other, confirmed on the merged syntax.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::graph_diff::{Branch, EntityEdit, EntityEditOp, FourWayGraph};
use crate::java::tree::type_simple_name;
use crate::java::{NodeId, NodeKind, Span, SyntaxNode};
use crate::merge::Origin;
use crate::peg::{normalize_type, type_names, EntityGraph, EntityId, EntityKind, RelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConflictType {
    C1 = 1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
    C14,
    C15,
    C16,
    C17,
    C18,
    C19,
    C20,
    C21,
    C22,
    C23,
}

impl ConflictType {
    pub const ALL: [ConflictType; 23] = [
        ConflictType::C1,
        ConflictType::C2,
        ConflictType::C3,
        ConflictType::C4,
        ConflictType::C5,
        ConflictType::C6,
        ConflictType::C7,
        ConflictType::C8,
        ConflictType::C9,
        ConflictType::C10,
        ConflictType::C11,
        ConflictType::C12,
        ConflictType::C13,
        ConflictType::C14,
        ConflictType::C15,
        ConflictType::C16,
        ConflictType::C17,
        ConflictType::C18,
        ConflictType::C19,
        ConflictType::C20,
        ConflictType::C21,
        ConflictType::C22,
        ConflictType::C23,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for ConflictType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.number())
    }
}

impl FromStr for ConflictType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('C')
            .and_then(|n| n.parse::<usize>().ok())
            .and_then(|n| n.checked_sub(1))
            .and_then(|i| ConflictType::ALL.get(i).copied())
            .ok_or_else(|| format!("unknown conflict type {s}"))
    }
}

impl Serialize for ConflictType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Kind of edit on the defining side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefChange {
    Rename(EntityKind),
    Delete(EntityKind),
    ParamsChange(EntityKind),
    TypeChange(EntityKind),
    PackageRename,
    ImportDelete,
    SuperMethodAdd,
    SuperMethodParams,
    SuperMethodType,
    InterfaceMethodAdd,
    InterfaceMethodParams,
    InterfaceMethodDelete,
    InterfaceMethodRename,
    ImplementsAdd,
    MemberAdd(EntityKind),
    BodyChange,
}

/// Kind of edit on the using side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UseIntro {
    /// A new read, write, call, instantiation or type reference.
    Use,
    Import,
    /// A new subclass method overriding a superclass method.
    Override,
    /// A new class implementing an interface.
    Implementor,
    ReturnTypeChange,
    MemberAdd(EntityKind),
}

/// The conflict type of a def/use edit pair, if it is a recognized one.
pub fn classify(def: DefChange, use_intro: UseIntro) -> Option<ConflictType> {
    use ConflictType::*;
    use DefChange as D;
    use EntityKind as K;
    use UseIntro as U;
    Some(match (def, use_intro) {
        (D::Rename(K::Class | K::Enum), U::Use) => C1,
        (D::SuperMethodAdd, U::Override) => C2,
        (D::SuperMethodParams, U::Override) => C3,
        (D::SuperMethodType, U::Override) => C4,
        (D::ImportDelete, U::Use) => C5,
        (D::PackageRename, U::Import) => C6,
        (D::Rename(K::Interface), U::Use) => C7,
        (D::InterfaceMethodAdd, U::Implementor) => C8,
        (D::InterfaceMethodParams, U::Implementor) => C9,
        (D::InterfaceMethodDelete, U::Implementor) => C10,
        (D::InterfaceMethodRename, U::Implementor) => C11,
        (D::ImplementsAdd, U::ReturnTypeChange) => C12,
        (D::Rename(K::Field | K::EnumConstant), U::Use) => C13,
        (D::MemberAdd(K::Field), U::MemberAdd(K::Field)) => C14,
        (D::Rename(K::Method), U::Use) => C15,
        (D::MemberAdd(K::Method), U::MemberAdd(K::Method)) => C16,
        (D::Delete(K::Class | K::Interface | K::Enum), U::Use) => C17,
        (D::ParamsChange(K::Constructor), U::Use) => C18,
        (D::TypeChange(K::Field), U::Use) => C19,
        (D::Delete(K::Field | K::EnumConstant), U::Use) => C20,
        (D::ParamsChange(K::Method), U::Use) => C21,
        (D::TypeChange(K::Method), U::Use) => C22,
        (D::Delete(K::Method), U::Use) => C23,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Site {
    /// Fqn of the using entity in the merged version.
    pub entity: String,
    pub file: String,
    pub span: Span,
    #[serde(skip)]
    pub node: NodeId,
}

#[derive(Debug, Clone, Serialize)]
pub struct Conflict {
    #[serde(rename = "type")]
    pub ty: ConflictType,
    /// Fqn of the changed entity (base version, or the added entity).
    pub subject: String,
    #[serde(rename = "branchOfDef")]
    pub def_branch: Branch,
    #[serde(rename = "defChange")]
    pub def_change: String,
    pub sites: Vec<Site>,
    #[serde(skip)]
    pub subject_kind: EntityKind,
    #[serde(skip)]
    pub subject_base: Option<EntityId>,
    /// The subject in the defining branch's graph.
    #[serde(skip)]
    pub subject_def: Option<EntityId>,
    /// Supertype member the use side must agree with (defining branch graph).
    #[serde(skip)]
    pub related: Option<EntityId>,
    /// Using entity in the merged graph.
    #[serde(skip)]
    pub user_am: EntityId,
}

impl Conflict {
    pub fn use_branch(&self) -> Branch {
        self.def_branch.other()
    }

    pub fn user(&self) -> &str {
        self.sites.first().map(|s| s.entity.as_str()).unwrap_or("")
    }
}

// ---- syntactic site scans -------------------------------------------------

fn walk<'a>(n: &'a SyntaxNode, f: &mut impl FnMut(&'a SyntaxNode) -> bool) {
    if f(n) {
        for c in &n.children {
            walk(c, f);
        }
    }
}

/// Parts of a declaration that belong to it as a user: the header only for
/// type declarations, everything for members.
fn scan_roots(decl: &SyntaxNode) -> Vec<&SyntaxNode> {
    if decl.kind.is_type_decl() {
        decl.children
            .iter()
            .filter(|c| matches!(c.kind, NodeKind::ExtendsList | NodeKind::ImplementsList | NodeKind::Annotation))
            .collect()
    } else {
        vec![decl]
    }
}

fn qualified(n: &SyntaxNode) -> Option<String> {
    match n.kind {
        NodeKind::Name => Some(n.value_str().to_string()),
        NodeKind::FieldAccess => Some(format!("{}.{}", qualified(n.children.first()?)?, n.value_str())),
        _ => None,
    }
}

pub(crate) fn type_sites<'a>(decl: &'a SyntaxNode, simple: &str, fqn: &str) -> Vec<&'a SyntaxNode> {
    let mut out = Vec::new();
    for root in scan_roots(decl) {
        walk(root, &mut |n| match n.kind {
            NodeKind::TypeRef => {
                if type_names(n.value_str()).iter().any(|t| *t == simple || *t == fqn) {
                    out.push(n);
                }
                false
            }
            NodeKind::Name if n.value_str() == simple => {
                out.push(n);
                false
            }
            NodeKind::FieldAccess if qualified(n).as_deref() == Some(fqn) => {
                out.push(n);
                false
            }
            _ => true,
        });
    }
    out
}

fn declared_names(decl: &SyntaxNode) -> BTreeSet<&str> {
    let mut out = BTreeSet::new();
    walk(decl, &mut |n| {
        if matches!(n.kind, NodeKind::LocalVarDecl | NodeKind::Parameter) {
            out.insert(n.value_str());
        }
        true
    });
    out
}

pub(crate) fn field_sites<'a>(decl: &'a SyntaxNode, name: &str) -> Vec<&'a SyntaxNode> {
    let shadowed = declared_names(decl).contains(name);
    let mut out = Vec::new();
    for root in scan_roots(decl) {
        walk(root, &mut |n| {
            match n.kind {
                NodeKind::Name if n.value_str() == name && !shadowed => out.push(n),
                NodeKind::FieldAccess if n.value_str() == name => {
                    out.push(n);
                    return false;
                }
                _ => {}
            }
            true
        });
    }
    out
}

pub(crate) fn call_sites<'a>(decl: &'a SyntaxNode, name: &str, arity: usize) -> Vec<&'a SyntaxNode> {
    let mut out = Vec::new();
    walk(decl, &mut |n| {
        if n.kind == NodeKind::MethodInvocation && n.value_str() == name && n.arity() == Some(arity) {
            out.push(n);
        }
        true
    });
    out
}

pub(crate) fn creation_sites<'a>(decl: &'a SyntaxNode, class: &str, arity: usize) -> Vec<&'a SyntaxNode> {
    let mut out = Vec::new();
    walk(decl, &mut |n| {
        if n.kind == NodeKind::ObjectCreation
            && n.children.first().map(|t| type_simple_name(t.value_str())) == Some(class)
            && n.arity() == Some(arity)
        {
            out.push(n);
        }
        true
    });
    out
}

fn same_type(a: &str, b: &str) -> bool {
    normalize_type(a) == normalize_type(b)
}

/// Declared type of a local or parameter named `name` inside `decl`.
fn local_type<'a>(decl: &'a SyntaxNode, name: &str) -> Option<&'a str> {
    let mut out = None;
    walk(decl, &mut |n| {
        if matches!(n.kind, NodeKind::LocalVarDecl | NodeKind::Parameter) && n.value_str() == name {
            out = n.declared_type().map(|t| t.value_str());
        }
        out.is_none()
    });
    out
}

/// Whether the value of `node` flows into a slot declared with a type other
/// than `new_ty`: a local initializer, an assignment to a typed local, or a
/// return from a method with a different return type.
fn flows_into_other_type(decl: &SyntaxNode, node: &SyntaxNode, new_ty: &str) -> bool {
    let Some(parent) = decl.parent_of(node.id) else { return false };
    match parent.kind {
        NodeKind::LocalVarDecl if parent.initializer().map(|i| i.id) == Some(node.id) => parent
            .declared_type()
            .is_some_and(|t| !same_type(t.value_str(), new_ty)),
        NodeKind::Assignment if parent.children.get(1).map(|c| c.id) == Some(node.id) => {
            let lhs = &parent.children[0];
            lhs.kind == NodeKind::Name
                && local_type(decl, lhs.value_str()).is_some_and(|t| !same_type(t, new_ty))
        }
        NodeKind::ReturnStmt => decl.kind == NodeKind::MethodDecl
            && decl.declared_type().is_some_and(|t| !same_type(t.value_str(), new_ty)),
        _ => false,
    }
}

fn param_types(m: &SyntaxNode) -> Vec<String> {
    m.params()
        .filter_map(|p| p.declared_type())
        .map(|t| normalize_type(t.value_str()))
        .collect()
}

fn has_annotation(n: &SyntaxNode, a: &str) -> bool {
    n.children_of_kind(NodeKind::Annotation).any(|c| c.value_str() == a)
}

fn methods_named<'a>(class: &'a SyntaxNode, name: &str) -> impl Iterator<Item = &'a SyntaxNode> + 'a {
    let name = name.to_string();
    class
        .children
        .iter()
        .filter(move |c| c.kind == NodeKind::MethodDecl && c.value_str() == name)
}

fn find_method<'a>(class: &'a SyntaxNode, name: &str, params: &[String]) -> Option<&'a SyntaxNode> {
    methods_named(class, name).find(|m| param_types(m) == params)
}

// ---- detector ---------------------------------------------------------------

struct Detector<'a> {
    fw: &'a FourWayGraph,
    out: Vec<Conflict>,
}

struct Def<'a> {
    ty: ConflictType,
    branch: Branch,
    change: String,
    subject: &'a str,
    kind: EntityKind,
    base: Option<EntityId>,
    def: Option<EntityId>,
    related: Option<EntityId>,
}

const DEFAULT_USES: &[RelKind] = &[
    RelKind::Reads,
    RelKind::Writes,
    RelKind::Calls,
    RelKind::Initializes,
    RelKind::References,
    RelKind::Extends,
    RelKind::Implements,
];

impl<'a> Detector<'a> {
    fn am(&self) -> &'a EntityGraph {
        &self.fw.merged
    }

    fn in_branch(&self, y: Branch, base: EntityId) -> Option<EntityId> {
        self.fw.delta(y).matches.get(base)
    }

    /// Entities of branch `y` with a newly added use of `target` (a `y`
    /// entity), sorted.
    fn added_users(&self, y: Branch, target: EntityId, kinds: &[RelKind]) -> Vec<EntityId> {
        let mut v: Vec<EntityId> = self
            .fw
            .delta(y)
            .added_relations()
            .filter(|r| r.rel.dst == target && kinds.contains(&r.kind))
            .map(|r| r.rel.src)
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Classes of `y` that newly extend or implement `sup` (a `y` entity).
    fn new_subtypes(&self, y: Branch, sup: EntityId, kind: RelKind) -> Vec<EntityId> {
        let gy = self.fw.branch(y);
        self.added_users(y, sup, &[kind])
            .into_iter()
            .filter(|&d| gy.entity(d).kind == EntityKind::Class)
            .collect()
    }

    fn am_decl(&self, am: EntityId) -> Option<(&'a str, &'a SyntaxNode)> {
        let g = self.am();
        Some((g.decl_file(am)?, g.decl_node(am)?))
    }

    fn push(&mut self, d: &Def, user_am: EntityId, nodes: Vec<&SyntaxNode>) {
        if nodes.is_empty() {
            return;
        }
        let g = self.am();
        let file = g.decl_file(user_am).unwrap_or("").to_string();
        let entity = g.entity(user_am).fqn.clone();
        let mut sites: Vec<Site> = nodes
            .into_iter()
            .map(|n| Site {
                entity: entity.clone(),
                file: file.clone(),
                span: n.span,
                node: n.id,
            })
            .collect();
        sites.sort_by_key(|s| (s.span.start, s.node));
        sites.dedup_by_key(|s| s.node);
        self.out.push(Conflict {
            ty: d.ty,
            subject: d.subject.to_string(),
            def_branch: d.branch,
            def_change: d.change.clone(),
            sites,
            subject_kind: d.kind,
            subject_base: d.base,
            subject_def: d.def,
            related: d.related,
            user_am,
        });
    }

    /// Use-introduction conflicts against one changed base entity: every new
    /// user in `y` whose merged declaration still has sites.
    fn use_conflicts(
        &mut self,
        d: &Def,
        kinds: &[RelKind],
        scan: &dyn Fn(&'a SyntaxNode) -> Vec<&'a SyntaxNode>,
    ) {
        let y = d.branch.other();
        let Some(base) = d.base else { return };
        let Some(target) = self.in_branch(y, base) else { return };
        for user in self.added_users(y, target, kinds) {
            let Some(am) = self.fw.merged_of(y, user) else { continue };
            let Some((_, decl)) = self.am_decl(am) else { continue };
            let nodes = scan(decl);
            self.push(d, am, nodes);
        }
    }

    fn run(&mut self) {
        for x in [Branch::Left, Branch::Right] {
            self.renames(x);
            self.deletions(x);
            self.signature_changes(x);
            self.type_changes(x);
            self.packages(x);
            self.imports(x);
            self.hierarchy(x);
            self.implements_added(x);
        }
        self.duplicates();
        self.out.sort_by(|a, b| {
            (a.ty, &a.subject, a.sites.first().map(|s| (&s.file, s.span.start)), a.user())
                .cmp(&(b.ty, &b.subject, b.sites.first().map(|s| (&s.file, s.span.start)), b.user()))
        });
    }

    fn edits(&self, x: Branch, op: EntityEditOp) -> Vec<&'a EntityEdit> {
        self.fw.delta(x).edits(op).collect()
    }

    fn owner_kind(&self, g: &EntityGraph, id: EntityId) -> Option<EntityKind> {
        g.entity(id).parent.map(|p| g.entity(p).kind)
    }

    fn renames(&mut self, x: Branch) {
        let gb = &self.fw.base;
        for e in self.edits(x, EntityEditOp::UpdateEntity) {
            let Some((old, new)) = e.renamed() else { continue };
            let base = e.base_id.unwrap();
            let eb = gb.entity(base);
            let Some(ty) = classify(DefChange::Rename(e.kind), UseIntro::Use) else { continue };
            let d = Def {
                ty,
                branch: x,
                change: format!("rename {old} -> {new}"),
                subject: &eb.fqn,
                kind: e.kind,
                base: Some(base),
                def: e.branch_id,
                related: None,
            };
            let (old, fqn, arity) = (old.to_string(), eb.fqn.clone(), eb.params.len());
            match e.kind {
                k if k.is_type() => self.use_conflicts(&d, DEFAULT_USES, &|decl| type_sites(decl, &old, &fqn)),
                EntityKind::Method => self.use_conflicts(&d, &[RelKind::Calls], &|decl| call_sites(decl, &old, arity)),
                _ => self.use_conflicts(&d, &[RelKind::Reads, RelKind::Writes], &|decl| field_sites(decl, &old)),
            }
        }
    }

    fn deletions(&mut self, x: Branch) {
        let gb = &self.fw.base;
        let deleted: BTreeSet<EntityId> = self
            .edits(x, EntityEditOp::DeleteEntity)
            .iter()
            .filter_map(|e| e.base_id)
            .collect();
        for e in self.edits(x, EntityEditOp::DeleteEntity) {
            let base = e.base_id.unwrap();
            let eb = gb.entity(base);
            if eb.external || eb.parent.is_some_and(|p| deleted.contains(&p) && gb.entity(p).kind.is_type()) {
                continue;
            }
            let Some(ty) = classify(DefChange::Delete(e.kind), UseIntro::Use) else { continue };
            let d = Def {
                ty,
                branch: x,
                change: format!("delete {}", eb.fqn),
                subject: &eb.fqn,
                kind: e.kind,
                base: Some(base),
                def: None,
                related: None,
            };
            let (name, fqn, arity) = (eb.name.clone(), eb.fqn.clone(), eb.params.len());
            match e.kind {
                k if k.is_type() => self.use_conflicts(&d, DEFAULT_USES, &|decl| type_sites(decl, &name, &fqn)),
                EntityKind::Method => self.use_conflicts(&d, &[RelKind::Calls], &|decl| call_sites(decl, &name, arity)),
                _ => self.use_conflicts(&d, &[RelKind::Reads, RelKind::Writes], &|decl| field_sites(decl, &name)),
            }
        }
    }

    fn signature_changes(&mut self, x: Branch) {
        let gb = &self.fw.base;
        let gx = self.fw.branch(x);
        for e in self.edits(x, EntityEditOp::UpdateEntity) {
            let Some((old, new)) = e.signature_change() else { continue };
            if e.renamed().is_some() {
                continue;
            }
            let base = e.base_id.unwrap();
            let (eb, ex) = (gb.entity(base), gx.entity(e.branch_id.unwrap()));
            let arity = eb.params.len();
            if arity == ex.params.len() {
                continue;
            }
            let Some(ty) = classify(DefChange::ParamsChange(e.kind), UseIntro::Use) else { continue };
            let d = Def {
                ty,
                branch: x,
                change: format!("change parameters {old} -> {new}"),
                subject: &eb.fqn,
                kind: e.kind,
                base: Some(base),
                def: e.branch_id,
                related: None,
            };
            let name = eb.name.clone();
            if e.kind == EntityKind::Constructor {
                self.use_conflicts(&d, &[RelKind::Calls], &|decl| creation_sites(decl, &name, arity));
            } else {
                self.use_conflicts(&d, &[RelKind::Calls], &|decl| call_sites(decl, &name, arity));
            }
        }
    }

    fn type_changes(&mut self, x: Branch) {
        let gb = &self.fw.base;
        for e in self.edits(x, EntityEditOp::UpdateEntity) {
            let Some((old, new)) = e.type_change() else { continue };
            let base = e.base_id.unwrap();
            let eb = gb.entity(base);
            let Some(ty) = classify(DefChange::TypeChange(e.kind), UseIntro::Use) else { continue };
            let d = Def {
                ty,
                branch: x,
                change: format!("change type {old} -> {new}"),
                subject: &eb.fqn,
                kind: e.kind,
                base: Some(base),
                def: e.branch_id,
                related: None,
            };
            let (name, arity, new) = (eb.name.clone(), eb.params.len(), new.to_string());
            if e.kind == EntityKind::Field {
                self.use_conflicts(&d, &[RelKind::Reads], &|decl| {
                    field_sites(decl, &name)
                        .into_iter()
                        .filter(|n| flows_into_other_type(decl, n, &new))
                        .collect()
                });
            } else {
                self.use_conflicts(&d, &[RelKind::Calls], &|decl| {
                    call_sites(decl, &name, arity)
                        .into_iter()
                        .filter(|n| flows_into_other_type(decl, n, &new))
                        .collect()
                });
            }
        }
    }

    fn packages(&mut self, x: Branch) {
        let y = x.other();
        let gy = self.fw.branch(y);
        for e in self.edits(x, EntityEditOp::UpdateEntity) {
            if e.kind != EntityKind::Package {
                continue;
            }
            let Some(new) = &e.new_fqn else { continue };
            let old = e.fqn.clone();
            let d = Def {
                ty: classify(DefChange::PackageRename, UseIntro::Import).unwrap(),
                branch: x,
                change: format!("rename package {old} -> {new}"),
                subject: &e.fqn,
                kind: EntityKind::Package,
                base: e.base_id,
                def: e.branch_id,
                related: None,
            };
            let mut users: Vec<EntityId> = self
                .fw
                .delta(y)
                .added_relations()
                .filter(|r| r.kind == RelKind::Imports && in_package(&gy.entity(r.rel.dst).fqn, &old))
                .map(|r| r.rel.src)
                .collect();
            users.sort();
            users.dedup();
            for u in users {
                let Some(am) = self.fw.merged_of(y, u) else { continue };
                let Some((_, unit)) = self.am_decl(am) else { continue };
                let nodes = unit
                    .children_of_kind(NodeKind::ImportDecl)
                    .filter(|i| in_package(i.value_str(), &old))
                    .collect();
                self.push(&d, am, nodes);
            }
        }
    }

    fn imports(&mut self, x: Branch) {
        let y = x.other();
        let gb = &self.fw.base;
        let gy = self.fw.branch(y);
        let deleted: BTreeSet<EntityId> = self
            .edits(x, EntityEditOp::DeleteEntity)
            .iter()
            .filter_map(|e| e.base_id)
            .collect();
        let removed: Vec<_> = self
            .fw
            .delta(x)
            .deleted_relations()
            .filter(|r| r.kind == RelKind::Imports)
            .map(|r| r.rel)
            .collect();
        for rel in removed {
            let (unit_b, t_b) = (rel.src, rel.dst);
            let t = gb.entity(t_b);
            if deleted.contains(&unit_b) || (deleted.contains(&t_b) && !t.external) || !t.kind.is_type() {
                continue;
            }
            let (Some(unit_y), Some(t_y)) = (self.in_branch(y, unit_b), self.in_branch(y, t_b)) else { continue };
            if !gy.has_relation(unit_y, t_y, RelKind::Imports) {
                continue;
            }
            let d = Def {
                ty: classify(DefChange::ImportDelete, UseIntro::Use).unwrap(),
                branch: x,
                change: format!("remove import {}", t.fqn),
                subject: &t.fqn,
                kind: t.kind,
                base: Some(t_b),
                def: None,
                related: None,
            };
            let (simple, fqn) = (t.name.clone(), t.fqn.clone());
            for user in self.added_users(y, t_y, DEFAULT_USES) {
                if gy.unit_of(user) != Some(unit_y) {
                    continue;
                }
                let Some(am) = self.fw.merged_of(y, user) else { continue };
                let Some((file, decl)) = self.am_decl(am) else { continue };
                if self.am().files.get(file).is_some_and(|f| imports_type(&f.tree, &fqn)) {
                    continue;
                }
                let nodes = type_sites(decl, &simple, &fqn);
                self.push(&d, am, nodes);
            }
        }
    }

    /// Superclass and interface member changes against new subtypes.
    fn hierarchy(&mut self, x: Branch) {
        let y = x.other();
        let gb = &self.fw.base;
        let gx = self.fw.branch(x);
        let am = self.am();
        let mut work: Vec<(DefChange, &EntityEdit)> = Vec::new();
        for e in &self.fw.delta(x).entity_edits {
            if e.kind != EntityKind::Method {
                continue;
            }
            let owner = match e.op {
                EntityEditOp::AddEntity => self.owner_kind(gx, e.branch_id.unwrap()),
                _ => self.owner_kind(gb, e.base_id.unwrap()),
            };
            let iface = match owner {
                Some(EntityKind::Interface) => true,
                Some(EntityKind::Class) => false,
                _ => continue,
            };
            let change = match (e.op, iface) {
                (EntityEditOp::AddEntity, false) => DefChange::SuperMethodAdd,
                (EntityEditOp::AddEntity, true) => DefChange::InterfaceMethodAdd,
                (EntityEditOp::DeleteEntity, true) => DefChange::InterfaceMethodDelete,
                (EntityEditOp::UpdateEntity, true) if e.renamed().is_some() => DefChange::InterfaceMethodRename,
                (EntityEditOp::UpdateEntity, true) if e.signature_change().is_some() => DefChange::InterfaceMethodParams,
                (EntityEditOp::UpdateEntity, false) if e.renamed().is_some() => continue,
                (EntityEditOp::UpdateEntity, false) if e.signature_change().is_some() => DefChange::SuperMethodParams,
                (EntityEditOp::UpdateEntity, false) if e.type_change().is_some() => DefChange::SuperMethodType,
                _ => continue,
            };
            work.push((change, e));
        }
        for (change, e) in work {
            let use_kind = if matches!(
                change,
                DefChange::SuperMethodAdd | DefChange::SuperMethodParams | DefChange::SuperMethodType
            ) {
                UseIntro::Override
            } else {
                UseIntro::Implementor
            };
            let ty = classify(change, use_kind).unwrap();
            // the supertype as it exists in base
            let sup_b = match e.op {
                EntityEditOp::AddEntity => {
                    let p = gx.entity(e.branch_id.unwrap()).parent.unwrap();
                    match self.fw.delta(x).matches.rev(p) {
                        Some(b) => b,
                        None => continue,
                    }
                }
                _ => gb.entity(e.base_id.unwrap()).parent.unwrap(),
            };
            let Some(sup_y) = self.in_branch(y, sup_b) else { continue };
            let rel = if use_kind == UseIntro::Override { RelKind::Extends } else { RelKind::Implements };
            let old = e.base_id.map(|b| gb.entity(b));
            let new = e.branch_id.map(|i| gx.entity(i));
            let subject = old.or(new).unwrap();
            let change_text = match change {
                DefChange::SuperMethodAdd | DefChange::InterfaceMethodAdd => format!("add {}", subject.fqn),
                DefChange::InterfaceMethodDelete => format!("delete {}", subject.fqn),
                DefChange::InterfaceMethodRename => {
                    format!("rename {} -> {}", old.unwrap().name, new.unwrap().name)
                }
                DefChange::SuperMethodType => format!(
                    "change type {} -> {}",
                    old.unwrap().ty.as_deref().unwrap_or(""),
                    new.unwrap().ty.as_deref().unwrap_or("")
                ),
                _ => format!("change parameters {} -> {}", old.unwrap().signature(), new.unwrap().signature()),
            };
            let d = Def {
                ty,
                branch: x,
                change: change_text,
                subject: &subject.fqn,
                kind: EntityKind::Method,
                base: e.base_id,
                def: e.branch_id,
                related: None,
            };
            let def_decl = e.branch_id.and_then(|i| gx.decl_node(i));
            for sub in self.new_subtypes(y, sup_y, rel) {
                let Some(sub_am) = self.fw.merged_of(y, sub) else { continue };
                let Some((_, class)) = self.am_decl(sub_am) else { continue };
                let concrete = !class.has_modifier("abstract");
                let (user, nodes): (Option<&SyntaxNode>, Vec<&SyntaxNode>) = match change {
                    DefChange::SuperMethodAdd | DefChange::InterfaceMethodAdd => {
                        let m = new.unwrap();
                        let Some(md) = def_decl else { continue };
                        let is_abstract = md.body().is_none() && !md.has_modifier("static");
                        match find_method(class, &m.name, &m.params) {
                            Some(own) => {
                                let clash = own
                                    .declared_type()
                                    .zip(md.declared_type())
                                    .is_some_and(|(a, b)| !same_type(a.value_str(), b.value_str()));
                                if clash {
                                    (Some(own), vec![own])
                                } else {
                                    continue;
                                }
                            }
                            None if is_abstract && concrete => (None, vec![class]),
                            None => continue,
                        }
                    }
                    DefChange::SuperMethodParams | DefChange::InterfaceMethodParams => {
                        let (o, n) = (old.unwrap(), new.unwrap());
                        if find_method(class, &n.name, &n.params).is_some() {
                            continue;
                        }
                        let Some(own) = find_method(class, &o.name, &o.params) else { continue };
                        let abstract_super = def_decl.is_some_and(|md| md.body().is_none());
                        if !(has_annotation(own, "Override") || abstract_super) {
                            continue;
                        }
                        (Some(own), vec![own])
                    }
                    DefChange::SuperMethodType => {
                        let n = new.unwrap();
                        let Some(own) = find_method(class, &n.name, &n.params) else { continue };
                        let new_ty = n.ty.as_deref().unwrap_or("");
                        if own.declared_type().is_some_and(|t| same_type(t.value_str(), new_ty)) {
                            continue;
                        }
                        (Some(own), vec![own])
                    }
                    DefChange::InterfaceMethodDelete => {
                        let o = old.unwrap();
                        let Some(own) = find_method(class, &o.name, &o.params) else { continue };
                        if !has_annotation(own, "Override") {
                            continue;
                        }
                        (Some(own), vec![own])
                    }
                    DefChange::InterfaceMethodRename => {
                        let (o, n) = (old.unwrap(), new.unwrap());
                        if find_method(class, &n.name, &n.params).is_some() {
                            continue;
                        }
                        let Some(own) = find_method(class, &o.name, &o.params) else { continue };
                        (Some(own), vec![own])
                    }
                    _ => continue,
                };
                let user_am = match user {
                    Some(m) => {
                        let params = param_types(m);
                        let fqn = format!("{}.{}({})", am.entity(sub_am).fqn, m.value_str(), params.join(","));
                        am.get(EntityKind::Method, &fqn).unwrap_or(sub_am)
                    }
                    None => sub_am,
                };
                self.push(&d, user_am, nodes);
            }
        }
    }

    fn implements_added(&mut self, x: Branch) {
        let y = x.other();
        let gx = self.fw.branch(x);
        let gy = self.fw.branch(y);
        let added: Vec<_> = self
            .fw
            .delta(x)
            .added_relations()
            .filter(|r| r.kind == RelKind::Implements)
            .map(|r| r.rel)
            .collect();
        for rel in added {
            let Some(class_b) = self.fw.delta(x).matches.rev(rel.src) else { continue };
            let iface = gx.entity(rel.dst);
            for e in self.edits(y, EntityEditOp::UpdateEntity) {
                let Some((_, new_ty)) = e.type_change() else { continue };
                if e.kind != EntityKind::Method || self.fw.base.entity(e.base_id.unwrap()).parent != Some(class_b) {
                    continue;
                }
                let my = gy.entity(e.branch_id.unwrap());
                let Some(im) = gx
                    .members(rel.dst)
                    .find(|m| m.kind == EntityKind::Method && m.name == my.name && m.params == my.params)
                else {
                    continue;
                };
                let want = im.ty.clone().unwrap_or_default();
                if same_type(&want, new_ty) {
                    continue;
                }
                let Some(m_am) = self.fw.merged_of(y, my.id) else { continue };
                let Some((_, decl)) = self.am_decl(m_am) else { continue };
                let nodes: Vec<&SyntaxNode> = decl
                    .declared_type()
                    .filter(|t| !same_type(t.value_str(), &want))
                    .into_iter()
                    .collect();
                let d = Def {
                    ty: classify(DefChange::ImplementsAdd, UseIntro::ReturnTypeChange).unwrap(),
                    branch: x,
                    change: format!("implement {}", iface.fqn),
                    subject: &iface.fqn,
                    kind: iface.kind,
                    base: self.fw.delta(x).matches.rev(rel.dst),
                    def: Some(rel.dst),
                    related: Some(im.id),
                };
                self.push(&d, m_am, nodes);
            }
        }
    }

    /// Members added with the same signature to the same type by both
    /// branches; the right branch's copy is the site.
    fn duplicates(&mut self) {
        let (gl, gr, am) = (&self.fw.left, &self.fw.right, self.am());
        let right_added: BTreeSet<(EntityKind, &str)> = self
            .fw
            .delta_r
            .edits(EntityEditOp::AddEntity)
            .map(|e| (e.kind, e.fqn.as_str()))
            .collect();
        for e in self.fw.delta_l.edits(EntityEditOp::AddEntity) {
            if !matches!(e.kind, EntityKind::Field | EntityKind::Method) || !right_added.contains(&(e.kind, e.fqn.as_str()))
            {
                continue;
            }
            let m = gl.entity(e.branch_id.unwrap());
            let Some(owner_l) = m.parent else { continue };
            let owner_fqn = &gl.entity(owner_l).fqn;
            if gr.type_by_fqn(owner_fqn).is_none() {
                continue;
            }
            let Some(owner_am) = am.type_by_fqn(owner_fqn) else { continue };
            let Some((file, class)) = self.am_decl(owner_am) else { continue };
            let copies: Vec<&SyntaxNode> = class
                .children
                .iter()
                .filter(|c| match e.kind {
                    EntityKind::Field => c.kind == NodeKind::FieldDecl && c.value_str() == m.name,
                    _ => c.kind == NodeKind::MethodDecl && c.value_str() == m.name && param_types(c) == m.params,
                })
                .collect();
            if copies.len() < 2 {
                continue;
            }
            let origins = self.fw.origins.get(file);
            let right_copy = copies
                .iter()
                .rev()
                .find(|c| {
                    origins.is_some_and(|o| o.get(c.span.start.line as usize - 1) == Some(&Origin::Right))
                })
                .or(copies.last())
                .copied()
                .unwrap();
            let use_kind = UseIntro::MemberAdd(e.kind);
            let d = Def {
                ty: classify(DefChange::MemberAdd(e.kind), use_kind).unwrap(),
                branch: Branch::Left,
                change: format!("add {}", e.fqn),
                subject: &e.fqn,
                kind: e.kind,
                base: None,
                def: e.branch_id,
                related: None,
            };
            self.push(&d, owner_am, vec![right_copy]);
        }
    }
}

/// Whether an import text or type fqn lies directly in package `pkg`.
fn in_package(text: &str, pkg: &str) -> bool {
    text.strip_prefix(pkg)
        .and_then(|r| r.strip_prefix('.'))
        .is_some_and(|rest| !rest.contains('.'))
}

fn imports_type(unit: &SyntaxNode, fqn: &str) -> bool {
    let pkg = fqn.rsplit_once('.').map(|(p, _)| p).unwrap_or("");
    let own = unit
        .child_of_kind(NodeKind::PackageDecl)
        .map(|p| p.value_str())
        .unwrap_or("");
    own == pkg
        || unit.children_of_kind(NodeKind::ImportDecl).any(|i| {
            let v = i.value_str();
            v == fqn || v.strip_suffix(".*") == Some(pkg)
        })
}

/// All build conflicts of a merge scenario, ordered by type, subject and site.
pub fn detect_conflicts(fw: &FourWayGraph) -> Vec<Conflict> {
    let mut d = Detector { fw, out: Vec::new() };
    d.run();
    d.out
}
