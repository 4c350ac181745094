//! Recursive-descent parser for the supported Java subset.
//!
//! Supported: package and import declarations; top-level and nested
//! classes, interfaces and enums with extends/implements clauses; fields with
//! initializers; methods and constructors with modifiers, name-only
//! annotations, parameters and throws clauses; enum constants; block, local
//! variable, expression, if/else, for, for-each, while, return and throw
//! statements; names, qualified names, literals, method invocations with
//! receiver chains, field accesses, object creation with anonymous bodies,
//! unary/binary operators, assignment and casts. Generic arguments are kept
//! as opaque type text. Anything else is a syntax error.
//!
//! Single-statement bodies of `if`/`for`/`while` are wrapped in a `Block` so
//! that printing and re-parsing is structure preserving.

use super::lexer::{tokenize, Token, TokenKind};
use super::tree::{NodeKind, Pos, Span, SyntaxNode};
use super::SyntaxError;

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
];
const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default",
];

type PResult<T> = Result<T, SyntaxError>;

pub(crate) struct Parser<'a> {
    path: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

pub(crate) fn parse_compilation_unit(path: &str, text: &str) -> PResult<SyntaxNode> {
    let toks = tokenize(path, text)?;
    let mut p = Parser { path, toks, pos: 0 };
    let mut root = p.compilation_unit()?;
    root.renumber(0);
    Ok(root)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is(text)
    }

    fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = self.peek();
        Err(SyntaxError {
            path: self.path.to_string(),
            line: t.start.line,
            col: t.start.col,
            message: msg.into(),
        })
    }

    fn expect(&mut self, text: &str) -> PResult<Token> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            let found = self.peek().text.clone();
            self.error(format!("expected `{text}`, found `{found}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        if self.peek().kind == TokenKind::Ident {
            Ok(self.bump().text)
        } else {
            let found = self.peek().text.clone();
            self.error(format!("expected identifier, found `{found}`"))
        }
    }

    fn start(&self) -> Pos {
        self.peek().start
    }

    fn last_end(&self) -> Pos {
        if self.pos == 0 {
            self.toks[0].start
        } else {
            self.toks[self.pos - 1].end
        }
    }

    fn finish(&self, mut node: SyntaxNode, start: Pos) -> SyntaxNode {
        node.span = Span {
            start,
            end: self.last_end(),
        };
        node
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.at(".") && self.peek_at(1).kind == TokenKind::Ident {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    // ---- declarations -------------------------------------------------

    fn compilation_unit(&mut self) -> PResult<SyntaxNode> {
        let start = self.start();
        let mut children = Vec::new();
        if self.at("package") {
            let s = self.start();
            self.bump();
            let name = self.qualified_name()?;
            self.expect(";")?;
            children.push(self.finish(SyntaxNode::leaf(NodeKind::PackageDecl, name), s));
        }
        while self.at("import") {
            let s = self.start();
            self.bump();
            let mut name = String::new();
            if self.eat("static") {
                name.push_str("static ");
            }
            name.push_str(&self.qualified_name()?);
            if self.eat(".") {
                self.expect("*")?;
                name.push_str(".*");
            }
            self.expect(";")?;
            children.push(self.finish(SyntaxNode::leaf(NodeKind::ImportDecl, name), s));
        }
        while !self.at_eof() {
            let s = self.start();
            let mods = self.modifiers()?;
            children.push(self.type_decl(mods, s)?);
        }
        Ok(self.finish(SyntaxNode::new(NodeKind::CompilationUnit, None, children), start))
    }

    /// Annotations and modifiers, in source order.
    fn modifiers(&mut self) -> PResult<Vec<SyntaxNode>> {
        let mut out = Vec::new();
        loop {
            let s = self.start();
            if self.at("@") && !self.peek_at(1).is("interface") {
                self.bump();
                let name = self.qualified_name()?;
                if self.at("(") {
                    return self.error("annotation arguments are not supported");
                }
                out.push(self.finish(SyntaxNode::leaf(NodeKind::Annotation, name), s));
            } else if self.peek().kind == TokenKind::Keyword
                && MODIFIERS.contains(&self.peek().text.as_str())
            {
                // `default` only counts as a modifier inside interfaces; J0 has no switch.
                let t = self.bump();
                out.push(self.finish(SyntaxNode::leaf(NodeKind::Modifier, t.text), s));
            } else {
                return Ok(out);
            }
        }
    }

    fn type_list(&mut self, kind: NodeKind) -> PResult<SyntaxNode> {
        let s = self.start();
        self.bump();
        let mut tys = vec![self.type_ref()?];
        while self.eat(",") {
            tys.push(self.type_ref()?);
        }
        Ok(self.finish(SyntaxNode::new(kind, None, tys), s))
    }

    fn type_decl(&mut self, mut children: Vec<SyntaxNode>, start: Pos) -> PResult<SyntaxNode> {
        let kind = if self.eat("class") {
            NodeKind::ClassDecl
        } else if self.eat("interface") {
            NodeKind::InterfaceDecl
        } else if self.eat("enum") {
            NodeKind::EnumDecl
        } else {
            let found = self.peek().text.clone();
            return self.error(format!("expected type declaration, found `{found}`"));
        };
        let name = self.ident()?;
        if self.at("<") {
            return self.error("type parameters on declarations are not supported");
        }
        if kind != NodeKind::EnumDecl && self.at("extends") {
            children.push(self.type_list(NodeKind::ExtendsList)?);
        }
        if kind != NodeKind::InterfaceDecl && self.at("implements") {
            children.push(self.type_list(NodeKind::ImplementsList)?);
        }
        self.expect("{")?;
        if kind == NodeKind::EnumDecl {
            while self.peek().kind == TokenKind::Ident {
                let s = self.start();
                let cname = self.ident()?;
                let mut cc = Vec::new();
                if self.at("(") {
                    cc.push(self.arguments()?);
                }
                children.push(self.finish(
                    SyntaxNode::new(NodeKind::EnumConstant, Some(cname), cc),
                    s,
                ));
                if !self.eat(",") {
                    break;
                }
            }
            if !self.at("}") {
                self.expect(";")?;
            }
        }
        children.extend(self.members(&name)?);
        self.expect("}")?;
        Ok(self.finish(SyntaxNode::new(kind, Some(name), children), start))
    }

    /// Members up to (not including) the closing brace.
    fn members(&mut self, type_name: &str) -> PResult<Vec<SyntaxNode>> {
        let mut out = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return self.error("unexpected end of file in type body");
            }
            if self.eat(";") {
                continue;
            }
            out.push(self.member(type_name)?);
        }
        Ok(out)
    }

    fn member(&mut self, type_name: &str) -> PResult<SyntaxNode> {
        let start = self.start();
        let mut children = self.modifiers()?;
        if self.at("class") || self.at("interface") || self.at("enum") {
            return self.type_decl(children, start);
        }
        if self.at("<") {
            return self.error("generic methods are not supported");
        }
        if self.at("{") {
            return self.error("initializer blocks are not supported");
        }
        // constructor: Ident '('
        if self.peek().kind == TokenKind::Ident && self.peek_at(1).is("(") {
            let name = self.ident()?;
            if name != type_name {
                return self.error(format!("method `{name}` lacks a return type"));
            }
            children.extend(self.parameters()?);
            if self.at("throws") {
                children.push(self.type_list(NodeKind::ThrowsList)?);
            }
            children.push(self.block()?);
            return Ok(self.finish(
                SyntaxNode::new(NodeKind::ConstructorDecl, Some(name), children),
                start,
            ));
        }
        children.push(self.type_ref()?);
        let name = self.ident()?;
        if self.at("(") {
            children.extend(self.parameters()?);
            if self.at("throws") {
                children.push(self.type_list(NodeKind::ThrowsList)?);
            }
            if !self.eat(";") {
                children.push(self.block()?);
            }
            return Ok(self.finish(
                SyntaxNode::new(NodeKind::MethodDecl, Some(name), children),
                start,
            ));
        }
        if self.eat("=") {
            children.push(self.expression()?);
        }
        if self.at(",") {
            return self.error("multiple declarators are not supported");
        }
        self.expect(";")?;
        Ok(self.finish(
            SyntaxNode::new(NodeKind::FieldDecl, Some(name), children),
            start,
        ))
    }

    fn parameters(&mut self) -> PResult<Vec<SyntaxNode>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if !self.at(")") {
            loop {
                let s = self.start();
                let mut children = self.modifiers()?;
                children.push(self.type_ref()?);
                let name = self.ident()?;
                out.push(self.finish(
                    SyntaxNode::new(NodeKind::Parameter, Some(name), children),
                    s,
                ));
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(out)
    }

    // ---- types --------------------------------------------------------

    fn type_ref(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        let text = self.type_text()?;
        Ok(self.finish(SyntaxNode::leaf(NodeKind::TypeRef, text), s))
    }

    fn type_text(&mut self) -> PResult<String> {
        let mut text = if self.peek().kind == TokenKind::Keyword
            && PRIMITIVES.contains(&self.peek().text.as_str())
        {
            self.bump().text
        } else {
            let mut t = self.qualified_name()?;
            if self.at("<") {
                t.push_str(&self.type_args()?);
            }
            // nested type after generic args, e.g. Map<K, V>.Entry
            while self.at(".") && self.peek_at(1).kind == TokenKind::Ident {
                self.bump();
                t.push('.');
                t.push_str(&self.ident()?);
                if self.at("<") {
                    t.push_str(&self.type_args()?);
                }
            }
            t
        };
        while self.at("[") && self.peek_at(1).is("]") {
            self.bump();
            self.bump();
            text.push_str("[]");
        }
        if self.eat("...") {
            text.push_str("...");
        }
        Ok(text)
    }

    fn type_args(&mut self) -> PResult<String> {
        self.expect("<")?;
        let mut out = String::from("<");
        if self.eat(">") {
            out.push('>');
            return Ok(out);
        }
        loop {
            if self.eat("?") {
                out.push('?');
                if self.at("extends") || self.at("super") {
                    let kw = self.bump().text;
                    out.push(' ');
                    out.push_str(&kw);
                    out.push(' ');
                    out.push_str(&self.type_text()?);
                }
            } else {
                out.push_str(&self.type_text()?);
            }
            if self.eat(",") {
                out.push_str(", ");
            } else {
                break;
            }
        }
        self.expect(">")?;
        out.push('>');
        Ok(out)
    }

    /// Speculatively parses `Type Ident`; restores the position on failure.
    fn try_typed_name(&mut self) -> Option<(SyntaxNode, String)> {
        let save = self.pos;
        let starts_type = self.peek().kind == TokenKind::Ident
            || (self.peek().kind == TokenKind::Keyword
                && PRIMITIVES.contains(&self.peek().text.as_str()));
        if starts_type {
            if let Ok(ty) = self.type_ref() {
                if self.peek().kind == TokenKind::Ident {
                    let name = self.bump().text;
                    return Some((ty, name));
                }
            }
        }
        self.pos = save;
        None
    }

    // ---- statements ---------------------------------------------------

    fn block(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return self.error("unexpected end of file in block");
            }
            stmts.push(self.statement()?);
        }
        self.bump();
        Ok(self.finish(SyntaxNode::new(NodeKind::Block, None, stmts), s))
    }

    /// A statement used as a body; non-block bodies are wrapped.
    fn body_statement(&mut self) -> PResult<SyntaxNode> {
        if self.at("{") {
            return self.block();
        }
        let s = self.start();
        let st = self.statement()?;
        Ok(self.finish(SyntaxNode::new(NodeKind::Block, None, vec![st]), s))
    }

    fn statement(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        let tok = self.peek().clone();
        if tok.kind == TokenKind::Keyword || tok.kind == TokenKind::Punct {
            match tok.text.as_str() {
                "{" => return self.error("nested blocks are not supported"),
                "if" => {
                    self.bump();
                    self.expect("(")?;
                    let cond = self.expression()?;
                    self.expect(")")?;
                    let then = self.body_statement()?;
                    let mut children = vec![cond, then];
                    if self.eat("else") {
                        if self.at("if") {
                            children.push(self.statement()?);
                        } else {
                            children.push(self.body_statement()?);
                        }
                    }
                    return Ok(self.finish(SyntaxNode::new(NodeKind::IfStmt, None, children), s));
                }
                "while" => {
                    self.bump();
                    self.expect("(")?;
                    let cond = self.expression()?;
                    self.expect(")")?;
                    let body = self.body_statement()?;
                    return Ok(self.finish(
                        SyntaxNode::new(NodeKind::WhileStmt, None, vec![cond, body]),
                        s,
                    ));
                }
                "for" => return self.for_statement(),
                "return" => {
                    self.bump();
                    let mut children = Vec::new();
                    if !self.at(";") {
                        children.push(self.expression()?);
                    }
                    self.expect(";")?;
                    return Ok(self.finish(
                        SyntaxNode::new(NodeKind::ReturnStmt, None, children),
                        s,
                    ));
                }
                "throw" => {
                    self.bump();
                    let e = self.expression()?;
                    self.expect(";")?;
                    return Ok(self.finish(SyntaxNode::new(NodeKind::ThrowStmt, None, vec![e]), s));
                }
                "switch" | "try" | "do" | "break" | "continue" | "synchronized" | ";" | "class" => {
                    return self.error(format!("`{}` statements are not supported", tok.text));
                }
                _ => {}
            }
        }
        if let Some(decl) = self.try_local_var(true)? {
            return Ok(decl);
        }
        let e = self.expression()?;
        self.expect(";")?;
        Ok(self.finish(SyntaxNode::new(NodeKind::ExprStmt, None, vec![e]), s))
    }

    /// `[final] Type name [= init]` with trailing `;` when `terminated`.
    fn try_local_var(&mut self, terminated: bool) -> PResult<Option<SyntaxNode>> {
        let s = self.start();
        let save = self.pos;
        let mut children = Vec::new();
        while self.at("final") {
            let ms = self.start();
            self.bump();
            children.push(self.finish(SyntaxNode::leaf(NodeKind::Modifier, "final"), ms));
        }
        let Some((ty, name)) = self.try_typed_name() else {
            self.pos = save;
            return Ok(None);
        };
        if !(self.at("=") || self.at(";") || (!terminated && self.at(";"))) {
            self.pos = save;
            return Ok(None);
        }
        children.push(ty);
        if self.eat("=") {
            children.push(self.expression()?);
        }
        if terminated {
            if self.at(",") {
                return self.error("multiple declarators are not supported");
            }
            self.expect(";")?;
        }
        Ok(Some(self.finish(
            SyntaxNode::new(NodeKind::LocalVarDecl, Some(name), children),
            s,
        )))
    }

    fn for_statement(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        self.bump();
        self.expect("(")?;
        // for-each: [final] Type name ':'
        let save = self.pos;
        let ps = self.start();
        let mut mods = Vec::new();
        while self.at("final") {
            let ms = self.start();
            self.bump();
            mods.push(self.finish(SyntaxNode::leaf(NodeKind::Modifier, "final"), ms));
        }
        if let Some((ty, name)) = self.try_typed_name() {
            if self.eat(":") {
                mods.push(ty);
                let param =
                    self.finish(SyntaxNode::new(NodeKind::Parameter, Some(name), mods), ps);
                let iter = self.expression()?;
                self.expect(")")?;
                let body = self.body_statement()?;
                return Ok(self.finish(
                    SyntaxNode::new(NodeKind::ForEachStmt, None, vec![param, iter, body]),
                    s,
                ));
            }
        }
        self.pos = save;
        let init = match self.try_local_var(false)? {
            Some(d) => d,
            None => {
                let is = self.start();
                let e = self.expression()?;
                self.finish(SyntaxNode::new(NodeKind::ExprStmt, None, vec![e]), is)
            }
        };
        self.expect(";")?;
        if self.at(";") {
            return self.error("for loops require a condition");
        }
        let cond = self.expression()?;
        self.expect(";")?;
        if self.at(")") {
            return self.error("for loops require an update expression");
        }
        let update = self.expression()?;
        self.expect(")")?;
        let body = self.body_statement()?;
        Ok(self.finish(
            SyntaxNode::new(NodeKind::ForStmt, None, vec![init, cond, update, body]),
            s,
        ))
    }

    // ---- expressions --------------------------------------------------

    pub(crate) fn expression(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        let lhs = self.binary(0)?;
        const ASSIGN: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^="];
        if self.peek().kind == TokenKind::Punct && ASSIGN.contains(&self.peek().text.as_str()) {
            if !matches!(lhs.kind, NodeKind::Name | NodeKind::FieldAccess) {
                return self.error("invalid assignment target");
            }
            let op = self.bump().text;
            let rhs = self.expression()?;
            return Ok(self.finish(
                SyntaxNode::new(NodeKind::Assignment, Some(op), vec![lhs, rhs]),
                s,
            ));
        }
        if self.at("?") {
            return self.error("conditional expressions are not supported");
        }
        Ok(lhs)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<SyntaxNode> {
        let s = self.start();
        let mut lhs = self.unary()?;
        loop {
            let t = self.peek();
            let op = t.text.clone();
            let Some(prec) = binary_precedence(&op).filter(|_| {
                t.kind == TokenKind::Punct || (t.kind == TokenKind::Keyword && op == "instanceof")
            }) else {
                break;
            };
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = if op == "instanceof" {
                self.type_ref()?
            } else {
                self.binary(prec + 1)?
            };
            lhs = self.finish(
                SyntaxNode::new(NodeKind::BinaryExpr, Some(op), vec![lhs, rhs]),
                s,
            );
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        for op in ["!", "-", "+", "~", "++", "--"] {
            if self.at(op) {
                self.bump();
                let operand = self.unary()?;
                return Ok(self.finish(
                    SyntaxNode::new(NodeKind::UnaryExpr, Some(op.to_string()), vec![operand]),
                    s,
                ));
            }
        }
        if self.at("(") {
            if let Some(cast) = self.try_cast()? {
                return Ok(cast);
            }
        }
        let mut e = self.postfix_primary()?;
        while self.at("++") || self.at("--") {
            let op = self.bump().text;
            e = self.finish(SyntaxNode::new(NodeKind::PostfixExpr, Some(op), vec![e]), s);
        }
        Ok(e)
    }

    fn try_cast(&mut self) -> PResult<Option<SyntaxNode>> {
        let s = self.start();
        let save = self.pos;
        self.bump();
        let is_prim = self.peek().kind == TokenKind::Keyword
            && PRIMITIVES.contains(&self.peek().text.as_str());
        let upper = self.peek().kind == TokenKind::Ident
            && self.peek().text.starts_with(|c: char| c.is_uppercase());
        if is_prim || upper {
            if let Ok(ty) = self.type_ref() {
                if self.eat(")") {
                    let next = self.peek();
                    let operand_start = matches!(next.kind, TokenKind::Ident | TokenKind::Literal)
                        || ["(", "this", "new", "super", "!", "~"].iter().any(|p| next.is(p))
                        || (is_prim && (next.is("-") || next.is("+")));
                    if operand_start {
                        let operand = self.unary()?;
                        return Ok(Some(self.finish(
                            SyntaxNode::new(NodeKind::CastExpr, None, vec![ty, operand]),
                            s,
                        )));
                    }
                }
            }
        }
        self.pos = save;
        Ok(None)
    }

    fn postfix_primary(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        let mut e = self.primary()?;
        loop {
            if self.at(".") {
                self.bump();
                if self.eat("class") {
                    e = self.finish(
                        SyntaxNode::new(NodeKind::FieldAccess, Some("class".into()), vec![e]),
                        s,
                    );
                    continue;
                }
                if self.at("<") {
                    return self.error("explicit generic invocations are not supported");
                }
                let name = self.ident()?;
                if self.at("(") {
                    let args = self.arguments()?;
                    e = self.finish(
                        SyntaxNode::new(NodeKind::MethodInvocation, Some(name), vec![e, args]),
                        s,
                    );
                } else {
                    e = self.finish(
                        SyntaxNode::new(NodeKind::FieldAccess, Some(name), vec![e]),
                        s,
                    );
                }
            } else if self.at("[") {
                return self.error("array access is not supported");
            } else {
                return Ok(e);
            }
        }
    }

    fn arguments(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.at(")") {
            loop {
                args.push(self.expression()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(self.finish(SyntaxNode::new(NodeKind::ArgumentList, None, args), s))
    }

    fn primary(&mut self) -> PResult<SyntaxNode> {
        let s = self.start();
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Literal => {
                self.bump();
                Ok(self.finish(SyntaxNode::leaf(NodeKind::Literal, t.text), s))
            }
            TokenKind::Ident => {
                self.bump();
                if self.at("(") {
                    let args = self.arguments()?;
                    Ok(self.finish(
                        SyntaxNode::new(NodeKind::MethodInvocation, Some(t.text), vec![args]),
                        s,
                    ))
                } else {
                    Ok(self.finish(SyntaxNode::leaf(NodeKind::Name, t.text), s))
                }
            }
            TokenKind::Keyword if t.text == "this" || t.text == "super" => {
                self.bump();
                if self.at("(") {
                    let args = self.arguments()?;
                    Ok(self.finish(
                        SyntaxNode::new(NodeKind::MethodInvocation, Some(t.text), vec![args]),
                        s,
                    ))
                } else {
                    Ok(self.finish(SyntaxNode::leaf(NodeKind::Name, t.text), s))
                }
            }
            TokenKind::Keyword if t.text == "new" => {
                self.bump();
                let ty = self.type_ref()?;
                if self.at("[") {
                    return self.error("array creation is not supported");
                }
                let args = self.arguments()?;
                let mut children = vec![ty, args];
                if self.at("{") {
                    let bs = self.start();
                    self.bump();
                    let members = self.members("")?;
                    self.expect("}")?;
                    children.push(self.finish(
                        SyntaxNode::new(NodeKind::AnonymousBody, None, members),
                        bs,
                    ));
                }
                Ok(self.finish(SyntaxNode::new(NodeKind::ObjectCreation, None, children), s))
            }
            TokenKind::Punct if t.text == "(" => {
                self.bump();
                let e = self.expression()?;
                self.expect(")")?;
                Ok(e)
            }
            TokenKind::Keyword if PRIMITIVES.contains(&t.text.as_str()) => {
                // int.class and friends
                self.bump();
                self.expect(".")?;
                self.expect("class")?;
                let recv = self.finish(SyntaxNode::leaf(NodeKind::Name, t.text), s);
                Ok(self.finish(
                    SyntaxNode::new(NodeKind::FieldAccess, Some("class".into()), vec![recv]),
                    s,
                ))
            }
            _ => self.error(format!("unexpected `{}` in expression", t.text)),
        }
    }
}

/// Binary operator precedence; higher binds tighter.
pub(crate) fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 2,
        "&&" => 3,
        "|" => 4,
        "^" => 5,
        "&" => 6,
        "==" | "!=" => 7,
        "<" | ">" | "<=" | ">=" | "instanceof" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}
