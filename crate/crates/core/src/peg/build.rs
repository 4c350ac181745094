use std::collections::{HashMap, HashSet};

use super::resolve::Walker;
use super::{DeclRef, Entity, EntityGraph, EntityId, EntityKind, Occurrence, PegError, RelKind, Relation, VersionTag};
use crate::java::tree::type_base;
use crate::java::{compact, print_unit, NodeKind, SourceFile, SyntaxNode};

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

#[derive(Debug, Default)]
pub(super) struct TypeMeta {
    pub file: String,
    pub outer: Option<EntityId>,
    pub nested: Vec<EntityId>,
    /// Fields and enum constants.
    pub fields: Vec<EntityId>,
    pub methods: Vec<EntityId>,
    pub ctors: Vec<EntityId>,
    pub supers: Vec<EntityId>,
}

#[derive(Debug, Default)]
pub(super) struct FileMeta {
    pub package: String,
    pub singles: Vec<String>,
    pub wildcards: Vec<String>,
    pub tops: Vec<EntityId>,
}

#[derive(Debug, Default)]
pub(super) struct Index {
    pub types: HashMap<EntityId, TypeMeta>,
    pub files: HashMap<String, FileMeta>,
}

/// Parameter type text with whitespace removed.
pub(crate) fn normalize_type(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Every type name mentioned in a type text, base first.
pub(crate) fn type_names(text: &str) -> Vec<&str> {
    text.split(['<', '>', ',', '[', ']', '?', ' '])
        .map(|s| s.trim_end_matches("..."))
        .filter(|s| !s.is_empty() && *s != "extends" && *s != "super" && !PRIMITIVES.contains(s))
        .collect()
}

impl Index {
    /// Resolves a type name as seen from `file` inside the given chain of
    /// enclosing types (innermost first).
    pub fn resolve_type(&self, g: &EntityGraph, text: &str, file: &str, chain: &[EntityId]) -> Option<EntityId> {
        let base = type_base(text);
        if base.is_empty() || PRIMITIVES.contains(&base) {
            return None;
        }
        if base.contains('.') {
            if let Some(t) = g.type_by_fqn(base) {
                return Some(t);
            }
            let mut segs = base.split('.');
            let mut cur = self.resolve_simple(g, segs.next()?, file, chain)?;
            for s in segs {
                cur = *self.types.get(&cur)?.nested.iter().find(|&&n| g.entity(n).name == s)?;
            }
            return Some(cur);
        }
        self.resolve_simple(g, base, file, chain)
    }

    fn resolve_simple(&self, g: &EntityGraph, name: &str, file: &str, chain: &[EntityId]) -> Option<EntityId> {
        for &t in chain {
            if g.entity(t).name == name {
                return Some(t);
            }
            if let Some(n) = self.nested_named(g, t, name, &mut HashSet::new()) {
                return Some(n);
            }
        }
        let fm = self.files.get(file)?;
        if let Some(&t) = fm.tops.iter().find(|&&t| g.entity(t).name == name) {
            return Some(t);
        }
        for imp in &fm.singles {
            if imp.rsplit('.').next() == Some(name) {
                if let Some(t) = g.type_by_fqn(imp) {
                    return Some(t);
                }
            }
        }
        let local = if fm.package.is_empty() {
            name.to_string()
        } else {
            format!("{}.{name}", fm.package)
        };
        if let Some(t) = g.type_by_fqn(&local) {
            return Some(t);
        }
        fm.wildcards
            .iter()
            .find_map(|w| g.type_by_fqn(&format!("{w}.{name}")))
    }

    fn nested_named(&self, g: &EntityGraph, t: EntityId, name: &str, seen: &mut HashSet<EntityId>) -> Option<EntityId> {
        if !seen.insert(t) {
            return None;
        }
        let meta = self.types.get(&t)?;
        if let Some(&n) = meta.nested.iter().find(|&&n| g.entity(n).name == name) {
            return Some(n);
        }
        meta.supers.iter().find_map(|&s| self.nested_named(g, s, name, seen))
    }

    /// Enclosing chain of a type, itself first.
    pub fn chain(&self, t: EntityId) -> Vec<EntityId> {
        let mut out = vec![t];
        let mut cur = t;
        while let Some(o) = self.types.get(&cur).and_then(|m| m.outer) {
            out.push(o);
            cur = o;
        }
        out
    }

    fn search<T>(
        &self,
        t: EntityId,
        seen: &mut HashSet<EntityId>,
        f: &impl Fn(&TypeMeta) -> Option<T>,
    ) -> Option<T> {
        if !seen.insert(t) {
            return None;
        }
        let meta = self.types.get(&t)?;
        if let Some(x) = f(meta) {
            return Some(x);
        }
        meta.supers.iter().find_map(|&s| self.search(s, seen, f))
    }

    pub fn find_field(&self, g: &EntityGraph, t: EntityId, name: &str) -> Option<EntityId> {
        self.search(t, &mut HashSet::new(), &|m: &TypeMeta| {
            m.fields.iter().copied().find(|&f| g.entity(f).name == name)
        })
    }

    /// Methods named `name` taking `arity` arguments, from the nearest type
    /// in the hierarchy that declares any.
    pub fn find_methods(&self, g: &EntityGraph, t: EntityId, name: &str, arity: usize) -> Vec<EntityId> {
        self.search(t, &mut HashSet::new(), &|m: &TypeMeta| {
            let v: Vec<EntityId> = m
                .methods
                .iter()
                .copied()
                .filter(|&x| g.entity(x).name == name && g.entity(x).params.len() == arity)
                .collect();
            (!v.is_empty()).then_some(v)
        })
        .unwrap_or_default()
    }

    pub fn find_ctors(&self, g: &EntityGraph, t: EntityId, arity: usize) -> Vec<EntityId> {
        self.types
            .get(&t)
            .map(|m| {
                m.ctors
                    .iter()
                    .copied()
                    .filter(|&c| g.entity(c).params.len() == arity)
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn superclass(&self, g: &EntityGraph, t: EntityId) -> Option<EntityId> {
        self.types
            .get(&t)?
            .supers
            .iter()
            .copied()
            .find(|&s| g.entity(s).kind == EntityKind::Class)
    }
}

struct Builder {
    g: EntityGraph,
    ix: Index,
    /// (member entity, declaring file, owner type)
    members: Vec<(EntityId, String, EntityId)>,
}

fn new_entity(kind: EntityKind, fqn: String, name: String) -> Entity {
    Entity {
        id: EntityId(0),
        kind,
        fqn,
        name,
        decl: None,
        parent: None,
        params: Vec::new(),
        ty: None,
        ty_entity: None,
        body: String::new(),
        external: false,
    }
}

impl Builder {
    fn rel(&mut self, src: EntityId, dst: EntityId, kind: RelKind) {
        self.g.relations.push(Relation { src, dst, kind });
    }

    fn declare_type(
        &mut self,
        node: &SyntaxNode,
        file: &str,
        prefix: &str,
        outer: Option<EntityId>,
        parent: EntityId,
    ) -> Result<EntityId, PegError> {
        let name = node.value_str().to_string();
        let fqn = if prefix.is_empty() {
            name.clone()
        } else {
            format!("{prefix}.{name}")
        };
        let kind = match node.kind {
            NodeKind::InterfaceDecl => EntityKind::Interface,
            NodeKind::EnumDecl => EntityKind::Enum,
            _ => EntityKind::Class,
        };
        let mut e = new_entity(kind, fqn.clone(), name.clone());
        e.decl = Some(DeclRef {
            file: file.to_string(),
            node: node.id,
        });
        e.parent = Some(parent);
        e.body = compact(node);
        let id = self.g.add_entity(e)?;
        self.rel(parent, id, RelKind::Declares);
        self.ix.types.insert(
            id,
            TypeMeta {
                file: file.to_string(),
                outer,
                ..Default::default()
            },
        );
        if let Some(o) = outer {
            self.ix.types.get_mut(&o).unwrap().nested.push(id);
        }
        for c in &node.children {
            let member = match c.kind {
                k if k.is_type_decl() => {
                    self.declare_type(c, file, &fqn, Some(id), id)?;
                    continue;
                }
                NodeKind::FieldDecl => {
                    let mut m = new_entity(EntityKind::Field, format!("{fqn}.{}", c.value_str()), c.value_str().into());
                    m.ty = c.declared_type().map(|t| t.value_str().to_string());
                    m
                }
                NodeKind::EnumConstant => {
                    let mut m =
                        new_entity(EntityKind::EnumConstant, format!("{fqn}.{}", c.value_str()), c.value_str().into());
                    m.ty = Some(name.clone());
                    m.ty_entity = Some(id);
                    m
                }
                NodeKind::MethodDecl | NodeKind::ConstructorDecl => {
                    let params: Vec<String> = c
                        .params()
                        .filter_map(|p| p.declared_type())
                        .map(|t| normalize_type(t.value_str()))
                        .collect();
                    let (kind, mname) = if c.kind == NodeKind::MethodDecl {
                        (EntityKind::Method, c.value_str().to_string())
                    } else {
                        (EntityKind::Constructor, name.clone())
                    };
                    let mut m = new_entity(kind, format!("{fqn}.{mname}({})", params.join(",")), mname);
                    m.params = params;
                    if kind == EntityKind::Method {
                        m.ty = c.declared_type().map(|t| t.value_str().to_string());
                    }
                    m
                }
                _ => continue,
            };
            let mkind = member.kind;
            let mut member = member;
            member.decl = Some(DeclRef {
                file: file.to_string(),
                node: c.id,
            });
            member.parent = Some(id);
            member.body = compact(c);
            let mid = match self.g.add_entity(member) {
                Ok(mid) => mid,
                Err(PegError::DuplicateEntity(f)) => {
                    self.g.diagnostics.push(format!("duplicate member {f} ignored"));
                    continue;
                }
                Err(e) => return Err(e),
            };
            self.rel(id, mid, RelKind::Declares);
            let meta = self.ix.types.get_mut(&id).unwrap();
            match mkind {
                EntityKind::Field | EntityKind::EnumConstant => meta.fields.push(mid),
                EntityKind::Method => meta.methods.push(mid),
                _ => meta.ctors.push(mid),
            }
            self.members.push((mid, file.to_string(), id));
        }
        Ok(id)
    }

    fn add_file(&mut self, file: &SourceFile) -> Result<(), PegError> {
        let tree = &file.tree;
        let package = tree
            .child_of_kind(NodeKind::PackageDecl)
            .map(|p| p.value_str().to_string())
            .unwrap_or_default();
        let pkg = match self.g.get(EntityKind::Package, &package) {
            Some(p) => p,
            None => {
                let name = package.rsplit('.').next().unwrap_or("").to_string();
                let mut e = new_entity(EntityKind::Package, package.clone(), name);
                e.parent = Some(self.g.project());
                let p = self.g.add_entity(e)?;
                self.rel(self.g.project(), p, RelKind::Contains);
                p
            }
        };
        let mut cu = new_entity(EntityKind::CompilationUnit, file.path.clone(), file.path.clone());
        cu.decl = Some(DeclRef {
            file: file.path.clone(),
            node: tree.id,
        });
        cu.parent = Some(pkg);
        cu.body = print_unit(tree).unwrap_or_default();
        let cu = self.g.add_entity(cu)?;
        self.rel(pkg, cu, RelKind::Contains);

        let mut meta = FileMeta {
            package: package.clone(),
            ..Default::default()
        };
        for imp in tree.children_of_kind(NodeKind::ImportDecl) {
            let v = imp.value_str();
            if v.starts_with("static ") {
                continue;
            }
            match v.strip_suffix(".*") {
                Some(w) => meta.wildcards.push(w.to_string()),
                None => meta.singles.push(v.to_string()),
            }
        }
        self.ix.files.insert(file.path.clone(), meta);
        let mut tops = Vec::new();
        for t in tree.children.iter().filter(|c| c.kind.is_type_decl()) {
            tops.push(self.declare_type(t, &file.path, &package, None, cu)?);
        }
        self.ix.files.get_mut(&file.path).unwrap().tops = tops;
        Ok(())
    }

    fn link_imports(&mut self) {
        let paths: Vec<String> = self.g.files.keys().cloned().collect();
        for path in paths {
            let cu = self.g.get(EntityKind::CompilationUnit, &path).unwrap();
            let imports: Vec<(String, crate::java::NodeId, crate::java::Span)> = self.g.files[&path]
                .tree
                .children_of_kind(NodeKind::ImportDecl)
                .map(|n| (n.value_str().to_string(), n.id, n.span))
                .collect();
            for (text, node, span) in imports {
                let target = if let Some(w) = text.strip_suffix(".*") {
                    self.g.get(EntityKind::Package, w)
                } else if let Some(s) = text.strip_prefix("static ") {
                    let owner = s.rsplit_once('.').map(|(o, _)| o).unwrap_or(s);
                    self.g.type_by_fqn(owner)
                } else {
                    match self.g.type_by_fqn(&text) {
                        Some(t) => Some(t),
                        None => {
                            let name = text.rsplit('.').next().unwrap_or(&text).to_string();
                            let mut e = new_entity(EntityKind::Class, text.clone(), name);
                            e.external = true;
                            self.g.add_entity(e).ok()
                        }
                    }
                };
                if let Some(t) = target {
                    self.g.occurrences.push(Occurrence {
                        rel: Relation {
                            src: cu,
                            dst: t,
                            kind: RelKind::Imports,
                        },
                        file: path.clone(),
                        node,
                        span,
                    });
                }
            }
        }
    }

    fn link_supertypes(&mut self) {
        let types: Vec<EntityId> = {
            let mut v: Vec<EntityId> = self.ix.types.keys().copied().collect();
            v.sort();
            v
        };
        for t in types {
            let file = self.ix.types[&t].file.clone();
            let outer_chain: Vec<EntityId> = self.ix.chain(t).into_iter().skip(1).collect();
            let Some(node) = self.g.decl_node(t).cloned() else { continue };
            let kind = self.g.entity(t).kind;
            for list in &node.children {
                let rk = match list.kind {
                    NodeKind::ExtendsList => RelKind::Extends,
                    NodeKind::ImplementsList => RelKind::Implements,
                    _ => continue,
                };
                for tr in &list.children {
                    match self.ix.resolve_type(&self.g, tr.value_str(), &file, &outer_chain) {
                        Some(s) => {
                            let skind = self.g.entity(s).kind;
                            let rk = if rk == RelKind::Extends && kind == EntityKind::Class && skind == EntityKind::Interface {
                                RelKind::Implements
                            } else {
                                rk
                            };
                            self.ix.types.get_mut(&t).unwrap().supers.push(s);
                            self.g.occurrences.push(Occurrence {
                                rel: Relation { src: t, dst: s, kind: rk },
                                file: file.clone(),
                                node: tr.id,
                                span: tr.span,
                            });
                        }
                        None => self
                            .g
                            .diagnostics
                            .push(format!("{file}: unresolved supertype {}", tr.value_str())),
                    }
                }
            }
        }
    }

    fn resolve_member_types(&mut self) {
        for (m, file, owner) in self.members.clone() {
            if let Some(ty) = self.g.entity(m).ty.clone() {
                let chain = self.ix.chain(owner);
                let t = self.ix.resolve_type(&self.g, &ty, &file, &chain);
                let e = &mut self.g.entities[m.0 as usize];
                if e.ty_entity.is_none() {
                    e.ty_entity = t;
                }
            }
        }
    }

    fn walk_bodies(&mut self) {
        let mut occs = Vec::new();
        let mut diags = Vec::new();
        for (m, file, owner) in &self.members {
            let Some(node) = self.g.decl_node(*m) else { continue };
            let mut w = Walker::new(&self.g, &self.ix, file, *m, *owner);
            w.member(node);
            occs.append(&mut w.occs);
            diags.append(&mut w.diags);
        }
        self.g.occurrences.append(&mut occs);
        self.g.diagnostics.append(&mut diags);
    }
}

/// Builds the entity graph of one program version.
pub fn build_peg(files: impl IntoIterator<Item = SourceFile>, tag: VersionTag) -> Result<EntityGraph, PegError> {
    let mut b = Builder {
        g: EntityGraph::empty(tag),
        ix: Index::default(),
        members: Vec::new(),
    };
    b.g.add_entity(new_entity(EntityKind::Project, String::new(), "project".into()))?;
    for f in files {
        b.g.files.insert(f.path.clone(), f);
    }
    let files: Vec<SourceFile> = b.g.files.values().cloned().collect();
    for f in &files {
        b.add_file(f)?;
    }
    b.link_imports();
    b.link_supertypes();
    b.resolve_member_types();
    b.walk_bodies();
    b.g.finish();
    Ok(b.g)
}
