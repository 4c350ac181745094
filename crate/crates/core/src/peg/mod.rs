//! Program entity graphs: declared entities of one program version and the
//! relations between them.

mod build;
mod resolve;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::java::{NodeId, SourceFile, Span, SyntaxNode};

pub use build::build_peg;
pub(crate) use build::{normalize_type, type_names};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum VersionTag {
    #[serde(rename = "b")]
    Base,
    #[serde(rename = "l")]
    Left,
    #[serde(rename = "r")]
    Right,
    #[serde(rename = "am")]
    Merged,
}

impl fmt::Display for VersionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VersionTag::Base => "b",
            VersionTag::Left => "l",
            VersionTag::Right => "r",
            VersionTag::Merged => "am",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntityKind {
    Project,
    Package,
    CompilationUnit,
    Class,
    Interface,
    Enum,
    Field,
    Method,
    Constructor,
    EnumConstant,
}

impl EntityKind {
    pub fn is_type(self) -> bool {
        matches!(self, EntityKind::Class | EntityKind::Interface | EntityKind::Enum)
    }

    pub fn is_member(self) -> bool {
        matches!(
            self,
            EntityKind::Field | EntityKind::Method | EntityKind::Constructor | EntityKind::EnumConstant
        )
    }

    pub fn is_callable(self) -> bool {
        matches!(self, EntityKind::Method | EntityKind::Constructor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelKind {
    Contains,
    Imports,
    Declares,
    Extends,
    Implements,
    Reads,
    Writes,
    Calls,
    Initializes,
    /// A type used in a signature, declaration, cast or static access.
    References,
}

impl RelKind {
    /// Relations that express a use of the target by the source.
    pub fn is_use(self) -> bool {
        !matches!(self, RelKind::Contains | RelKind::Declares)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EntityId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeclRef {
    pub file: String,
    pub node: NodeId,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub fqn: String,
    /// Simple name; the path for compilation units.
    pub name: String,
    #[serde(skip)]
    pub decl: Option<DeclRef>,
    #[serde(skip)]
    pub parent: Option<EntityId>,
    /// Normalized parameter types of methods and constructors.
    #[serde(skip)]
    pub params: Vec<String>,
    /// Field type or method return type, as written.
    #[serde(skip)]
    pub ty: Option<String>,
    /// Resolved entity of `ty`.
    #[serde(skip)]
    pub ty_entity: Option<EntityId>,
    /// Declaration text used for similarity.
    #[serde(skip)]
    pub body: String,
    /// Referenced through an import but not declared in the project.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub external: bool,
}

impl Entity {
    /// `name(T1,T2)` for callables, the simple name otherwise.
    pub fn signature(&self) -> String {
        if self.kind.is_callable() {
            format!("{}({})", self.name, self.params.join(","))
        } else {
            self.name.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Relation {
    pub src: EntityId,
    pub dst: EntityId,
    pub kind: RelKind,
}

/// One syntactic occurrence of a relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub rel: Relation,
    pub file: String,
    pub node: NodeId,
    pub span: Span,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PegError {
    #[error("entity {0} is declared more than once")]
    DuplicateEntity(String),
    #[error("unknown entity {0:?}")]
    UnknownEntity(EntityId),
}

#[derive(Debug, Clone)]
pub struct EntityGraph {
    pub tag: VersionTag,
    pub entities: Vec<Entity>,
    /// Distinct relations, sorted.
    pub relations: Vec<Relation>,
    pub occurrences: Vec<Occurrence>,
    pub files: BTreeMap<String, SourceFile>,
    /// Names that could not be resolved, for debugging.
    pub diagnostics: Vec<String>,
    index: HashMap<(EntityKind, String), EntityId>,
    out_edges: HashMap<EntityId, Vec<usize>>,
    in_edges: HashMap<EntityId, Vec<usize>>,
}

impl EntityGraph {
    pub(crate) fn empty(tag: VersionTag) -> Self {
        EntityGraph {
            tag,
            entities: Vec::new(),
            relations: Vec::new(),
            occurrences: Vec::new(),
            files: BTreeMap::new(),
            diagnostics: Vec::new(),
            index: HashMap::new(),
            out_edges: HashMap::new(),
            in_edges: HashMap::new(),
        }
    }

    pub(crate) fn add_entity(&mut self, mut e: Entity) -> Result<EntityId, PegError> {
        let key = (e.kind, e.fqn.clone());
        if self.index.contains_key(&key) {
            return Err(PegError::DuplicateEntity(e.fqn));
        }
        let id = EntityId(self.entities.len() as u32);
        e.id = id;
        self.index.insert(key, id);
        self.entities.push(e);
        Ok(id)
    }

    /// Sorts and deduplicates relations and builds adjacency.
    pub(crate) fn finish(&mut self) {
        let mut rels: Vec<Relation> = self.occurrences.iter().map(|o| o.rel).collect();
        rels.append(&mut self.relations);
        rels.sort();
        rels.dedup();
        self.relations = rels;
        self.out_edges.clear();
        self.in_edges.clear();
        for (i, r) in self.relations.iter().enumerate() {
            self.out_edges.entry(r.src).or_default().push(i);
            self.in_edges.entry(r.dst).or_default().push(i);
        }
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.0 as usize]
    }

    pub fn get(&self, kind: EntityKind, fqn: &str) -> Option<EntityId> {
        self.index.get(&(kind, fqn.to_string())).copied()
    }

    /// A type entity (class, interface or enum) by fqn.
    pub fn type_by_fqn(&self, fqn: &str) -> Option<EntityId> {
        [EntityKind::Class, EntityKind::Interface, EntityKind::Enum]
            .into_iter()
            .find_map(|k| self.get(k, fqn))
    }

    pub fn project(&self) -> EntityId {
        EntityId(0)
    }

    pub fn outgoing(&self, id: EntityId) -> impl Iterator<Item = &Relation> {
        self.out_edges
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.relations[i])
    }

    pub fn incoming(&self, id: EntityId) -> impl Iterator<Item = &Relation> {
        self.in_edges
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.relations[i])
    }

    pub fn has_relation(&self, src: EntityId, dst: EntityId, kind: RelKind) -> bool {
        self.outgoing(src).any(|r| r.dst == dst && r.kind == kind)
    }

    /// Entities declared directly inside `id`.
    pub fn members(&self, id: EntityId) -> impl Iterator<Item = &Entity> {
        self.outgoing(id)
            .filter(|r| r.kind == RelKind::Declares)
            .map(|r| self.entity(r.dst))
    }

    /// All relations targeting `target`, paired with their sources, ordered
    /// by source fqn.
    pub fn lookup_uses(&self, target: EntityId) -> Result<Vec<(&Entity, Relation)>, PegError> {
        if target.0 as usize >= self.entities.len() {
            return Err(PegError::UnknownEntity(target));
        }
        let mut out: Vec<(&Entity, Relation)> = self
            .incoming(target)
            .filter(|r| r.kind.is_use())
            .map(|r| (self.entity(r.src), *r))
            .collect();
        out.sort_by(|a, b| a.0.fqn.cmp(&b.0.fqn).then(a.1.cmp(&b.1)));
        Ok(out)
    }

    /// Signatures of all neighbors, sorted; the matching context of an
    /// entity. Simple signatures keep a renamed owner from dominating the
    /// context of every member.
    pub fn context_string(&self, id: EntityId) -> String {
        let mut v: Vec<String> = self
            .outgoing(id)
            .map(|r| self.entity(r.dst).signature())
            .chain(self.incoming(id).map(|r| self.entity(r.src).signature()))
            .collect();
        v.sort();
        v.dedup();
        v.join(" ")
    }

    pub fn decl_node(&self, id: EntityId) -> Option<&SyntaxNode> {
        let d = self.entity(id).decl.as_ref()?;
        self.files.get(&d.file)?.tree.find(d.node)
    }

    pub fn decl_file(&self, id: EntityId) -> Option<&str> {
        self.entity(id).decl.as_ref().map(|d| d.file.as_str())
    }

    /// Nearest enclosing type of a member (itself for types).
    pub fn owner_type(&self, mut id: EntityId) -> Option<EntityId> {
        loop {
            let e = self.entity(id);
            if e.kind.is_type() {
                return Some(id);
            }
            id = e.parent?;
        }
    }

    /// The compilation unit an entity is declared in.
    pub fn unit_of(&self, mut id: EntityId) -> Option<EntityId> {
        loop {
            let e = self.entity(id);
            if e.kind == EntityKind::CompilationUnit {
                return Some(id);
            }
            id = e.parent?;
        }
    }

    /// Direct supertypes declared in the project (or external).
    pub fn supertypes(&self, id: EntityId) -> Vec<EntityId> {
        self.outgoing(id)
            .filter(|r| matches!(r.kind, RelKind::Extends | RelKind::Implements))
            .map(|r| r.dst)
            .collect()
    }

    /// Occurrences of relations from `src` to `dst`.
    pub fn occurrences_of(&self, src: EntityId, dst: EntityId) -> impl Iterator<Item = &Occurrence> {
        self.occurrences
            .iter()
            .filter(move |o| o.rel.src == src && o.rel.dst == dst)
    }

    pub fn to_dump(&self) -> PegDump<'_> {
        PegDump {
            version: self.tag,
            entities: self
                .entities
                .iter()
                .map(|e| DumpEntity {
                    id: e.id.0,
                    kind: e.kind,
                    fqn: &e.fqn,
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| DumpRelation {
                    src: r.src.0,
                    dst: r.dst.0,
                    kind: r.kind,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct PegDump<'a> {
    pub version: VersionTag,
    pub entities: Vec<DumpEntity<'a>>,
    pub relations: Vec<DumpRelation>,
}

#[derive(Serialize)]
pub struct DumpEntity<'a> {
    pub id: u32,
    pub kind: EntityKind,
    pub fqn: &'a str,
}

#[derive(Serialize)]
pub struct DumpRelation {
    pub src: u32,
    pub dst: u32,
    pub kind: RelKind,
}
