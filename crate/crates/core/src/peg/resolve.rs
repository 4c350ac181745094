//! Name resolution inside member declarations.

use std::collections::HashMap;

use super::build::{type_names, Index};
use super::{EntityGraph, EntityId, Occurrence, RelKind, Relation};
use crate::java::{NodeKind, SyntaxNode};

#[derive(Clone, Copy)]
enum Ctx {
    Named(EntityId),
    /// Anonymous class body with its resolved supertype.
    Anon(Option<EntityId>),
}

#[derive(Clone)]
struct Local {
    text: String,
    ent: Option<EntityId>,
}

/// Static type of an expression, as far as it is known.
#[derive(Clone)]
enum Ty {
    Value(String, Option<EntityId>),
    /// The expression names a type (static access).
    Static(EntityId),
    Unknown,
}

impl Ty {
    fn entity(&self) -> Option<EntityId> {
        match self {
            Ty::Value(_, e) => *e,
            Ty::Static(t) => Some(*t),
            Ty::Unknown => None,
        }
    }

    fn text(&self) -> &str {
        match self {
            Ty::Value(t, _) => t,
            _ => "",
        }
    }

    fn prim(t: &str) -> Ty {
        Ty::Value(t.into(), None)
    }
}

pub(super) struct Walker<'a> {
    g: &'a EntityGraph,
    ix: &'a Index,
    file: &'a str,
    src: EntityId,
    ctx: Vec<Ctx>,
    scopes: Vec<HashMap<String, Local>>,
    pub occs: Vec<Occurrence>,
    pub diags: Vec<String>,
}

impl<'a> Walker<'a> {
    pub fn new(g: &'a EntityGraph, ix: &'a Index, file: &'a str, src: EntityId, owner: EntityId) -> Self {
        let mut ctx: Vec<Ctx> = ix.chain(owner).into_iter().rev().map(Ctx::Named).collect();
        if ctx.is_empty() {
            ctx.push(Ctx::Named(owner));
        }
        Walker {
            g,
            ix,
            file,
            src,
            ctx,
            scopes: vec![HashMap::new()],
            occs: Vec::new(),
            diags: Vec::new(),
        }
    }

    fn emit(&mut self, dst: EntityId, kind: RelKind, node: &SyntaxNode) {
        self.occs.push(Occurrence {
            rel: Relation { src: self.src, dst, kind },
            file: self.file.to_string(),
            node: node.id,
            span: node.span,
        });
    }

    fn chain(&self) -> Vec<EntityId> {
        self.ctx
            .iter()
            .rev()
            .filter_map(|c| match c {
                Ctx::Named(t) => Some(*t),
                Ctx::Anon(_) => None,
            })
            .collect()
    }

    /// Types searched for unqualified members, innermost first.
    fn member_scopes(&self) -> Vec<EntityId> {
        self.ctx
            .iter()
            .rev()
            .filter_map(|c| match c {
                Ctx::Named(t) => Some(*t),
                Ctx::Anon(s) => *s,
            })
            .collect()
    }

    fn resolve_type(&self, text: &str) -> Option<EntityId> {
        self.ix.resolve_type(self.g, text, self.file, &self.chain())
    }

    /// Emits references for every type named in a `TypeRef` except the base
    /// when `skip_base` is set; returns the resolved base.
    fn type_ref(&mut self, n: &SyntaxNode, skip_base: bool) -> Option<EntityId> {
        let text = n.value_str().to_string();
        let mut base = None;
        for (i, name) in type_names(&text).into_iter().enumerate() {
            let t = self.resolve_type(name);
            if i == 0 {
                base = t;
                if skip_base {
                    continue;
                }
            }
            if let Some(t) = t {
                self.emit(t, RelKind::References, n);
            }
        }
        base
    }

    fn declare(&mut self, name: &str, text: &str, ent: Option<EntityId>) {
        self.scopes
            .last_mut()
            .unwrap()
            .insert(name.to_string(), Local { text: text.into(), ent });
    }

    fn local(&self, name: &str) -> Option<&Local> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn parameter(&mut self, p: &SyntaxNode) {
        if let Some(tr) = p.declared_type() {
            let t = self.type_ref(tr, false);
            self.declare(p.value_str(), tr.value_str(), t);
        }
    }

    /// Walks one member declaration.
    pub fn member(&mut self, n: &SyntaxNode) {
        match n.kind {
            NodeKind::FieldDecl => {
                if let Some(tr) = n.declared_type() {
                    self.type_ref(tr, false);
                }
                if let Some(init) = n.initializer() {
                    self.expr(init, false);
                }
            }
            NodeKind::EnumConstant => {
                if let Some(a) = n.arguments() {
                    for x in &a.children {
                        self.expr(x, false);
                    }
                }
            }
            NodeKind::MethodDecl | NodeKind::ConstructorDecl => {
                self.scopes.push(HashMap::new());
                for c in &n.children {
                    match c.kind {
                        NodeKind::TypeRef => {
                            self.type_ref(c, false);
                        }
                        NodeKind::Parameter => self.parameter(c),
                        NodeKind::ThrowsList => {
                            for t in &c.children {
                                self.type_ref(t, false);
                            }
                        }
                        NodeKind::Block => self.stmt(c),
                        _ => {}
                    }
                }
                self.scopes.pop();
            }
            _ => {}
        }
    }

    fn stmt(&mut self, n: &SyntaxNode) {
        match n.kind {
            NodeKind::Block => {
                self.scopes.push(HashMap::new());
                for s in &n.children {
                    self.stmt(s);
                }
                self.scopes.pop();
            }
            NodeKind::LocalVarDecl => {
                let tr = n.declared_type();
                let t = tr.and_then(|tr| self.type_ref(tr, false));
                if let Some(init) = n.initializer() {
                    self.expr(init, false);
                }
                let text = tr.map(|t| t.value_str()).unwrap_or("");
                self.declare(n.value_str(), text, t);
            }
            NodeKind::ForStmt | NodeKind::ForEachStmt => {
                self.scopes.push(HashMap::new());
                for c in &n.children {
                    match c.kind {
                        NodeKind::Parameter => self.parameter(c),
                        k if k.is_statement() => self.stmt(c),
                        _ => {
                            self.expr(c, false);
                        }
                    }
                }
                self.scopes.pop();
            }
            _ => {
                for c in &n.children {
                    if c.kind.is_statement() {
                        self.stmt(c);
                    } else {
                        self.expr(c, false);
                    }
                }
            }
        }
    }

    fn this_type(&self) -> Ty {
        match self.ctx.last() {
            Some(Ctx::Named(t)) => Ty::Value(self.g.entity(*t).name.clone(), Some(*t)),
            Some(Ctx::Anon(s)) => Ty::Value(String::new(), *s),
            None => Ty::Unknown,
        }
    }

    fn enclosing_named(&self) -> Option<EntityId> {
        self.ctx.iter().rev().find_map(|c| match c {
            Ctx::Named(t) => Some(*t),
            Ctx::Anon(_) => None,
        })
    }

    fn field_ty(&self, f: EntityId) -> Ty {
        let e = self.g.entity(f);
        Ty::Value(e.ty.clone().unwrap_or_default(), e.ty_entity)
    }

    fn access_field(&mut self, f: EntityId, write: bool, n: &SyntaxNode) -> Ty {
        self.emit(f, if write { RelKind::Writes } else { RelKind::Reads }, n);
        self.field_ty(f)
    }

    fn calls(&mut self, targets: &[EntityId], n: &SyntaxNode) -> Ty {
        for &t in targets {
            self.emit(t, RelKind::Calls, n);
        }
        match targets.first() {
            Some(&m) => {
                let e = self.g.entity(m);
                Ty::Value(e.ty.clone().unwrap_or_default(), e.ty_entity)
            }
            None => Ty::Unknown,
        }
    }

    /// Dotted text of a `Name`/`FieldAccess` chain.
    fn qualified(n: &SyntaxNode) -> Option<String> {
        match n.kind {
            NodeKind::Name => Some(n.value_str().to_string()),
            NodeKind::FieldAccess => Some(format!("{}.{}", Self::qualified(n.children.first()?)?, n.value_str())),
            _ => None,
        }
    }

    fn name(&mut self, n: &SyntaxNode, write: bool) -> Ty {
        let v = n.value_str();
        match v {
            "this" => return self.this_type(),
            "super" => {
                let s = self.enclosing_named().and_then(|t| self.ix.superclass(self.g, t));
                return Ty::Value(String::new(), s);
            }
            _ => {}
        }
        if let Some(l) = self.local(v) {
            return Ty::Value(l.text.clone(), l.ent);
        }
        for t in self.member_scopes() {
            if let Some(f) = self.ix.find_field(self.g, t, v) {
                return self.access_field(f, write, n);
            }
        }
        if let Some(t) = self.resolve_type(v) {
            self.emit(t, RelKind::References, n);
            return Ty::Static(t);
        }
        Ty::Unknown
    }

    fn field_access(&mut self, n: &SyntaxNode, write: bool) -> Ty {
        let Some(recv) = n.children.first() else { return Ty::Unknown };
        let name = n.value_str();
        if name == "class" {
            if let Some(t) = Self::qualified(recv).and_then(|q| self.resolve_type(&q)) {
                self.emit(t, RelKind::References, n);
            }
            return Ty::prim("Class");
        }
        let r = if recv.kind == NodeKind::Name && self.is_unbound(recv.value_str()) {
            Ty::Unknown
        } else {
            self.expr(recv, false)
        };
        match &r {
            Ty::Static(t) => {
                if let Some(f) = self.ix.find_field(self.g, *t, name) {
                    return self.access_field(f, write, n);
                }
                let nested = self
                    .ix
                    .types
                    .get(t)
                    .and_then(|m| m.nested.iter().copied().find(|&x| self.g.entity(x).name == name));
                if let Some(x) = nested {
                    self.emit(x, RelKind::References, n);
                    return Ty::Static(x);
                }
                Ty::Unknown
            }
            Ty::Value(text, ent) => {
                if let Some(t) = ent {
                    if let Some(f) = self.ix.find_field(self.g, *t, name) {
                        return self.access_field(f, write, n);
                    }
                }
                if name == "length" && text.ends_with(']') {
                    return Ty::prim("int");
                }
                Ty::Unknown
            }
            Ty::Unknown => {
                if let Some(t) = Self::qualified(n).and_then(|q| self.resolve_type(&q)) {
                    self.emit(t, RelKind::References, n);
                    return Ty::Static(t);
                }
                Ty::Unknown
            }
        }
    }

    /// A simple name that is neither a local, a field nor a type: the head
    /// of a package-qualified name.
    fn is_unbound(&self, v: &str) -> bool {
        v != "this"
            && v != "super"
            && self.local(v).is_none()
            && self
                .member_scopes()
                .into_iter()
                .all(|t| self.ix.find_field(self.g, t, v).is_none())
            && self.resolve_type(v).is_none()
    }

    fn invocation(&mut self, n: &SyntaxNode) -> Ty {
        let name = n.value_str();
        let Some(args) = n.arguments() else { return Ty::Unknown };
        for a in &args.children {
            self.expr(a, false);
        }
        let arity = args.children.len();
        match n.receiver() {
            None => match name {
                "this" => {
                    let c = self
                        .enclosing_named()
                        .map(|t| self.ix.find_ctors(self.g, t, arity))
                        .unwrap_or_default();
                    self.calls(&c, n);
                    Ty::Unknown
                }
                "super" => {
                    let c = self
                        .enclosing_named()
                        .and_then(|t| self.ix.superclass(self.g, t))
                        .map(|s| self.ix.find_ctors(self.g, s, arity))
                        .unwrap_or_default();
                    self.calls(&c, n);
                    Ty::Unknown
                }
                _ => {
                    for t in self.member_scopes() {
                        let ms = self.ix.find_methods(self.g, t, name, arity);
                        if !ms.is_empty() {
                            return self.calls(&ms, n);
                        }
                    }
                    self.diags.push(format!("{}: unresolved call {name}", self.file));
                    Ty::Unknown
                }
            },
            Some(recv) => {
                let r = self.expr(recv, false);
                match r.entity() {
                    Some(t) => {
                        let ms = self.ix.find_methods(self.g, t, name, arity);
                        self.calls(&ms, n)
                    }
                    None => Ty::Unknown,
                }
            }
        }
    }

    fn creation(&mut self, n: &SyntaxNode) -> Ty {
        let Some(tr) = n.children.first() else { return Ty::Unknown };
        let t = self.type_ref(tr, true);
        let mut arity = 0;
        if let Some(args) = n.arguments() {
            arity = args.children.len();
            for a in &args.children {
                self.expr(a, false);
            }
        }
        if let Some(t) = t {
            self.emit(t, RelKind::Initializes, n);
            let ctors = self.ix.find_ctors(self.g, t, arity);
            for c in ctors {
                self.emit(c, RelKind::Calls, n);
            }
        }
        if let Some(body) = n.child_of_kind(NodeKind::AnonymousBody) {
            self.ctx.push(Ctx::Anon(t));
            for m in &body.children {
                self.member(m);
            }
            self.ctx.pop();
        }
        Ty::Value(tr.value_str().to_string(), t)
    }

    fn literal(v: &str) -> Ty {
        if v.starts_with('"') {
            Ty::prim("String")
        } else if v.starts_with('\'') {
            Ty::prim("char")
        } else if v == "true" || v == "false" {
            Ty::prim("boolean")
        } else if v == "null" {
            Ty::Unknown
        } else if v.ends_with(['L', 'l']) {
            Ty::prim("long")
        } else if v.contains('.') || v.ends_with(['d', 'D', 'f', 'F']) {
            Ty::prim("double")
        } else {
            Ty::prim("int")
        }
    }

    fn expr(&mut self, n: &SyntaxNode, write: bool) -> Ty {
        match n.kind {
            NodeKind::Literal => Self::literal(n.value_str()),
            NodeKind::Name => self.name(n, write),
            NodeKind::FieldAccess => self.field_access(n, write),
            NodeKind::MethodInvocation => self.invocation(n),
            NodeKind::ObjectCreation => self.creation(n),
            NodeKind::CastExpr => {
                let t = n.children.first().and_then(|tr| self.type_ref(tr, false));
                if let Some(e) = n.children.get(1) {
                    self.expr(e, false);
                }
                let text = n.children.first().map(|c| c.value_str()).unwrap_or("");
                Ty::Value(text.to_string(), t)
            }
            NodeKind::BinaryExpr => {
                let op = n.value_str();
                let l = n.children.first().map(|c| self.expr(c, false)).unwrap_or(Ty::Unknown);
                if op == "instanceof" {
                    if let Some(tr) = n.children.get(1) {
                        self.type_ref(tr, false);
                    }
                    return Ty::prim("boolean");
                }
                let r = n.children.get(1).map(|c| self.expr(c, false)).unwrap_or(Ty::Unknown);
                match op {
                    "==" | "!=" | "<" | ">" | "<=" | ">=" | "&&" | "||" => Ty::prim("boolean"),
                    "+" if l.text() == "String" || r.text() == "String" => Ty::prim("String"),
                    _ => l,
                }
            }
            NodeKind::Assignment => {
                let l = n.children.first().map(|c| self.expr(c, true)).unwrap_or(Ty::Unknown);
                if let Some(r) = n.children.get(1) {
                    self.expr(r, false);
                }
                l
            }
            NodeKind::UnaryExpr | NodeKind::PostfixExpr => {
                let w = matches!(n.value_str(), "++" | "--");
                match n.children.first() {
                    Some(c) => self.expr(c, w),
                    None => Ty::Unknown,
                }
            }
            _ => {
                for c in &n.children {
                    self.expr(c, false);
                }
                Ty::Unknown
            }
        }
    }
}
