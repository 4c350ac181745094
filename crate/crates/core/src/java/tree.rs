//! Syntax tree for the supported Java subset.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of a node, unique within one tree. Parsed trees number their
/// nodes in pre-order starting at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    CompilationUnit,
    PackageDecl,
    ImportDecl,
    ClassDecl,
    InterfaceDecl,
    EnumDecl,
    FieldDecl,
    MethodDecl,
    ConstructorDecl,
    EnumConstant,
    Parameter,
    TypeRef,
    Modifier,
    Annotation,
    /// `extends` clause of a class or interface; children are `TypeRef`s.
    ExtendsList,
    /// `implements` clause; children are `TypeRef`s.
    ImplementsList,
    /// `throws` clause; children are `TypeRef`s.
    ThrowsList,
    Block,
    IfStmt,
    ForStmt,
    ForEachStmt,
    WhileStmt,
    ReturnStmt,
    ThrowStmt,
    ExprStmt,
    LocalVarDecl,
    MethodInvocation,
    FieldAccess,
    ObjectCreation,
    AnonymousBody,
    Name,
    Literal,
    BinaryExpr,
    /// Prefix operator (`!x`, `-x`, `++x`).
    UnaryExpr,
    /// Postfix operator (`i++`).
    PostfixExpr,
    Assignment,
    CastExpr,
    ArgumentList,
}

impl NodeKind {
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            NodeKind::IfStmt
                | NodeKind::ForStmt
                | NodeKind::ForEachStmt
                | NodeKind::WhileStmt
                | NodeKind::ReturnStmt
                | NodeKind::ThrowStmt
                | NodeKind::ExprStmt
                | NodeKind::LocalVarDecl
        )
    }

    /// Statements that own nested blocks; only their header takes part in
    /// header comparison.
    pub fn is_compound(self) -> bool {
        matches!(
            self,
            NodeKind::IfStmt | NodeKind::ForStmt | NodeKind::ForEachStmt | NodeKind::WhileStmt
        )
    }

    pub fn is_type_decl(self) -> bool {
        matches!(
            self,
            NodeKind::ClassDecl | NodeKind::InterfaceDecl | NodeKind::EnumDecl
        )
    }

    pub fn is_expression(self) -> bool {
        matches!(
            self,
            NodeKind::MethodInvocation
                | NodeKind::FieldAccess
                | NodeKind::ObjectCreation
                | NodeKind::Name
                | NodeKind::Literal
                | NodeKind::BinaryExpr
                | NodeKind::UnaryExpr
                | NodeKind::PostfixExpr
                | NodeKind::Assignment
                | NodeKind::CastExpr
        )
    }

    /// Kinds that always carry a non-empty value.
    pub fn requires_value(self) -> bool {
        matches!(
            self,
            NodeKind::PackageDecl
                | NodeKind::ImportDecl
                | NodeKind::ClassDecl
                | NodeKind::InterfaceDecl
                | NodeKind::EnumDecl
                | NodeKind::FieldDecl
                | NodeKind::MethodDecl
                | NodeKind::ConstructorDecl
                | NodeKind::EnumConstant
                | NodeKind::Parameter
                | NodeKind::TypeRef
                | NodeKind::Modifier
                | NodeKind::Annotation
                | NodeKind::LocalVarDecl
                | NodeKind::MethodInvocation
                | NodeKind::FieldAccess
                | NodeKind::Name
                | NodeKind::Literal
                | NodeKind::BinaryExpr
                | NodeKind::UnaryExpr
                | NodeKind::PostfixExpr
                | NodeKind::Assignment
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SyntaxNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub value: Option<String>,
    pub children: Vec<SyntaxNode>,
    pub span: Span,
}

impl SyntaxNode {
    pub fn new(kind: NodeKind, value: Option<String>, children: Vec<SyntaxNode>) -> Self {
        SyntaxNode {
            id: NodeId(0),
            kind,
            value,
            children,
            span: Span::default(),
        }
    }

    pub fn leaf(kind: NodeKind, value: impl Into<String>) -> Self {
        SyntaxNode::new(kind, Some(value.into()), Vec::new())
    }

    pub fn value_str(&self) -> &str {
        self.value.as_deref().unwrap_or("")
    }

    /// Renumbers the whole tree in pre-order, starting at `start`. Returns the
    /// next unused id.
    pub fn renumber(&mut self, start: u32) -> u32 {
        let mut next = start;
        self.walk_mut(&mut |n| {
            n.id = NodeId(next);
            next += 1;
        });
        next
    }

    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a SyntaxNode)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    pub fn walk_mut(&mut self, f: &mut impl FnMut(&mut SyntaxNode)) {
        f(self);
        for c in &mut self.children {
            c.walk_mut(f);
        }
    }

    pub fn preorder(&self) -> Vec<&SyntaxNode> {
        let mut out = Vec::new();
        self.walk(&mut |n| out.push(n));
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(SyntaxNode::size).sum::<usize>()
    }

    pub fn max_id(&self) -> u32 {
        let mut m = self.id.0;
        self.walk(&mut |n| m = m.max(n.id.0));
        m
    }

    pub fn find(&self, id: NodeId) -> Option<&SyntaxNode> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter().find_map(|c| c.find(id))
    }

    pub fn find_mut(&mut self, id: NodeId) -> Option<&mut SyntaxNode> {
        if self.id == id {
            return Some(self);
        }
        self.children.iter_mut().find_map(|c| c.find_mut(id))
    }

    /// Child indices leading from `self` to the node `id`.
    pub fn path_to(&self, id: NodeId) -> Option<Vec<usize>> {
        if self.id == id {
            return Some(Vec::new());
        }
        for (i, c) in self.children.iter().enumerate() {
            if let Some(mut p) = c.path_to(id) {
                p.insert(0, i);
                return Some(p);
            }
        }
        None
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&SyntaxNode> {
        let mut cur = self;
        for &i in path {
            cur = cur.children.get(i)?;
        }
        Some(cur)
    }

    /// Ancestors of `id` from the root down to, but excluding, the node itself.
    pub fn ancestors_of(&self, id: NodeId) -> Option<Vec<&SyntaxNode>> {
        let path = self.path_to(id)?;
        let mut out = Vec::with_capacity(path.len());
        let mut cur = self;
        for &i in &path {
            out.push(cur);
            cur = &cur.children[i];
        }
        Some(out)
    }

    pub fn parent_of(&self, id: NodeId) -> Option<&SyntaxNode> {
        self.ancestors_of(id).and_then(|a| a.last().copied())
    }

    pub fn children_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &SyntaxNode> {
        self.children.iter().filter(move |c| c.kind == kind)
    }

    pub fn child_of_kind(&self, kind: NodeKind) -> Option<&SyntaxNode> {
        self.children.iter().find(|c| c.kind == kind)
    }

    pub fn has_modifier(&self, m: &str) -> bool {
        self.children_of_kind(NodeKind::Modifier).any(|c| c.value_str() == m)
    }

    /// Structural equality: kinds, values and child order; ids and spans are
    /// ignored.
    pub fn same_structure(&self, other: &SyntaxNode) -> bool {
        self.kind == other.kind
            && self.value == other.value
            && self.children.len() == other.children.len()
            && self
                .children
                .iter()
                .zip(&other.children)
                .all(|(a, b)| a.same_structure(b))
    }

    /// The declared type of a field, local variable, parameter or method.
    pub fn declared_type(&self) -> Option<&SyntaxNode> {
        match self.kind {
            NodeKind::FieldDecl
            | NodeKind::LocalVarDecl
            | NodeKind::Parameter
            | NodeKind::MethodDecl => self.child_of_kind(NodeKind::TypeRef),
            _ => None,
        }
    }

    /// Initializer expression of a field or local variable.
    pub fn initializer(&self) -> Option<&SyntaxNode> {
        match self.kind {
            NodeKind::FieldDecl | NodeKind::LocalVarDecl => {
                let ty = self.children.iter().position(|c| c.kind == NodeKind::TypeRef)?;
                self.children.get(ty + 1)
            }
            _ => None,
        }
    }

    pub fn params(&self) -> impl Iterator<Item = &SyntaxNode> {
        self.children_of_kind(NodeKind::Parameter)
    }

    pub fn body(&self) -> Option<&SyntaxNode> {
        match self.kind {
            NodeKind::MethodDecl | NodeKind::ConstructorDecl => {
                self.child_of_kind(NodeKind::Block)
            }
            _ => None,
        }
    }

    /// Receiver of a method invocation, if it has one.
    pub fn receiver(&self) -> Option<&SyntaxNode> {
        match self.kind {
            NodeKind::MethodInvocation if self.children.len() == 2 => Some(&self.children[0]),
            NodeKind::FieldAccess => self.children.first(),
            _ => None,
        }
    }

    pub fn arguments(&self) -> Option<&SyntaxNode> {
        self.child_of_kind(NodeKind::ArgumentList)
    }

    pub fn arity(&self) -> Option<usize> {
        self.arguments().map(|a| a.children.len())
    }
}

/// Base name of a type reference: generic arguments and array brackets are
/// stripped, qualification is kept.
pub fn type_base(text: &str) -> &str {
    let text = text.strip_suffix("...").unwrap_or(text);
    let end = text.find(['<', '[']).unwrap_or(text.len());
    text[..end].trim()
}

/// Last segment of a possibly qualified, possibly generic type name.
pub fn type_simple_name(text: &str) -> &str {
    let base = type_base(text);
    base.rsplit('.').next().unwrap_or(base)
}

/// Replaces the base name of `text` with `new_base`, keeping generic arguments
/// and array suffixes.
pub fn replace_type_base(text: &str, new_base: &str) -> String {
    let end = text.find(['<', '[']).unwrap_or(text.len());
    format!("{}{}", new_base, &text[end..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_name_helpers() {
        assert_eq!(type_base("Set<String>"), "Set");
        assert_eq!(type_simple_name("java.util.Map<K, V>"), "Map");
        assert_eq!(type_simple_name("String[]"), "String");
        assert_eq!(replace_type_base("Foo<Bar>", "Baz"), "Baz<Bar>");
    }

    #[test]
    fn paths_and_lookup() {
        let mut t = SyntaxNode::new(
            NodeKind::Block,
            None,
            vec![
                SyntaxNode::leaf(NodeKind::Name, "a"),
                SyntaxNode::new(
                    NodeKind::ExprStmt,
                    None,
                    vec![SyntaxNode::leaf(NodeKind::Name, "b")],
                ),
            ],
        );
        assert_eq!(t.renumber(0), 4);
        assert_eq!(t.path_to(NodeId(3)), Some(vec![1, 0]));
        assert_eq!(t.at_path(&[1, 0]).unwrap().value_str(), "b");
        assert_eq!(t.parent_of(NodeId(3)).unwrap().kind, NodeKind::ExprStmt);
    }
}
