//! Pretty printer. Output uses four-space indentation, one statement per line
//! and re-inserts parentheses where operator precedence requires them.

use super::parser::binary_precedence;
use super::tree::{NodeKind, SyntaxNode};
use super::MalformedTree;

type PResult<T> = Result<T, MalformedTree>;

const INDENT: &str = "    ";

fn malformed<T>(n: &SyntaxNode, msg: &str) -> PResult<T> {
    Err(MalformedTree {
        id: n.id,
        kind: n.kind,
        message: msg.to_string(),
    })
}

fn child(n: &SyntaxNode, i: usize) -> PResult<&SyntaxNode> {
    match n.children.get(i) {
        Some(c) => Ok(c),
        None => malformed(n, "missing child"),
    }
}

fn value(n: &SyntaxNode) -> PResult<&str> {
    match n.value.as_deref() {
        Some(v) if !v.is_empty() => Ok(v),
        _ => malformed(n, "missing value"),
    }
}

fn expect_kind(n: &SyntaxNode, kind: NodeKind) -> PResult<&SyntaxNode> {
    if n.kind == kind {
        Ok(n)
    } else {
        malformed(n, &format!("expected {kind:?}"))
    }
}

fn pad(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str(INDENT);
    }
}

/// Prints a whole compilation unit.
pub fn print_unit(root: &SyntaxNode) -> PResult<String> {
    expect_kind(root, NodeKind::CompilationUnit)?;
    let mut out = String::new();
    let mut section = None;
    for c in &root.children {
        let this = match c.kind {
            NodeKind::PackageDecl => 0,
            NodeKind::ImportDecl => 1,
            _ => 2,
        };
        if let Some(prev) = section {
            if prev != this || this == 2 {
                out.push('\n');
            }
        }
        section = Some(this);
        match c.kind {
            NodeKind::PackageDecl => {
                out.push_str(&format!("package {};\n", value(c)?));
            }
            NodeKind::ImportDecl => {
                out.push_str(&format!("import {};\n", value(c)?));
            }
            k if k.is_type_decl() => type_decl(c, 0, &mut out)?,
            _ => return malformed(c, "unexpected top-level node"),
        }
    }
    Ok(out)
}

/// Prints any declaration, statement or expression node on its own, at
/// indentation level zero.
pub fn print_node(n: &SyntaxNode) -> PResult<String> {
    let mut out = String::new();
    match n.kind {
        NodeKind::CompilationUnit => return print_unit(n),
        NodeKind::PackageDecl => out.push_str(&format!("package {};", value(n)?)),
        NodeKind::ImportDecl => out.push_str(&format!("import {};", value(n)?)),
        k if k.is_type_decl() => type_decl(n, 0, &mut out)?,
        NodeKind::FieldDecl
        | NodeKind::MethodDecl
        | NodeKind::ConstructorDecl => member(n, 0, &mut out)?,
        NodeKind::Block => block(n, 0, &mut out)?,
        k if k.is_statement() => statement(n, 0, &mut out)?,
        NodeKind::Parameter => out.push_str(&parameter(n)?),
        NodeKind::ArgumentList => out.push_str(&format!("({})", args(n, 0)?)),
        NodeKind::TypeRef | NodeKind::Modifier => out.push_str(value(n)?),
        NodeKind::Annotation => out.push_str(&format!("@{}", value(n)?)),
        NodeKind::EnumConstant => out.push_str(&enum_constant(n)?),
        k if k.is_expression() => out.push_str(&expr(n, 0)?),
        _ => {
            for c in &n.children {
                out.push_str(&print_node(c)?);
                out.push(' ');
            }
        }
    }
    Ok(out.trim_end().to_string())
}

/// Single-line rendering with whitespace collapsed.
pub fn compact(n: &SyntaxNode) -> String {
    collapse(&print_node(n).unwrap_or_default())
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// The comparison string of a statement: the whole statement for simple
/// statements, the header only for compound ones.
pub fn header_text(n: &SyntaxNode) -> String {
    let text = || -> PResult<String> {
        Ok(match n.kind {
            NodeKind::IfStmt | NodeKind::WhileStmt => expr(child(n, 0)?, 0)?,
            NodeKind::ForStmt => format!(
                "{}; {}; {}",
                for_init(child(n, 0)?)?,
                expr(child(n, 1)?, 0)?,
                expr(child(n, 2)?, 0)?
            ),
            NodeKind::ForEachStmt => {
                format!("{} : {}", parameter(child(n, 0)?)?, expr(child(n, 1)?, 0)?)
            }
            _ => print_node(n)?,
        })
    };
    collapse(&text().unwrap_or_default())
}

fn modifiers_prefix(n: &SyntaxNode, level: usize, out: &mut String) -> PResult<usize> {
    let mut i = 0;
    let mut mods = Vec::new();
    while let Some(c) = n.children.get(i) {
        match c.kind {
            NodeKind::Annotation => {
                pad(out, level);
                out.push_str(&format!("@{}\n", value(c)?));
            }
            NodeKind::Modifier => mods.push(value(c)?),
            _ => break,
        }
        i += 1;
    }
    pad(out, level);
    for m in mods {
        out.push_str(m);
        out.push(' ');
    }
    Ok(i)
}

fn type_list(n: &SyntaxNode) -> PResult<String> {
    let mut parts = Vec::new();
    for c in &n.children {
        parts.push(value(expect_kind(c, NodeKind::TypeRef)?)?.to_string());
    }
    if parts.is_empty() {
        return malformed(n, "empty type list");
    }
    Ok(parts.join(", "))
}

fn type_decl(n: &SyntaxNode, level: usize, out: &mut String) -> PResult<()> {
    let mut i = modifiers_prefix(n, level, out)?;
    let kw = match n.kind {
        NodeKind::ClassDecl => "class",
        NodeKind::InterfaceDecl => "interface",
        _ => "enum",
    };
    out.push_str(&format!("{kw} {}", value(n)?));
    while let Some(c) = n.children.get(i) {
        match c.kind {
            NodeKind::ExtendsList => out.push_str(&format!(" extends {}", type_list(c)?)),
            NodeKind::ImplementsList => out.push_str(&format!(" implements {}", type_list(c)?)),
            _ => break,
        }
        i += 1;
    }
    out.push_str(" {\n");
    let mut consts = Vec::new();
    while let Some(c) = n.children.get(i) {
        if c.kind != NodeKind::EnumConstant {
            break;
        }
        consts.push(enum_constant(c)?);
        i += 1;
    }
    if !consts.is_empty() {
        pad(out, level + 1);
        out.push_str(&consts.join(", "));
        out.push_str(";\n");
    }
    members(&n.children[i..], level + 1, out, !consts.is_empty())?;
    pad(out, level);
    out.push('}');
    out.push('\n');
    Ok(())
}

fn members(ms: &[SyntaxNode], level: usize, out: &mut String, mut prev: bool) -> PResult<()> {
    let mut prev_field = false;
    for m in ms {
        let is_field = m.kind == NodeKind::FieldDecl;
        if prev && !(is_field && prev_field) {
            out.push('\n');
        }
        if m.kind.is_type_decl() {
            type_decl(m, level, out)?;
        } else {
            member(m, level, out)?;
        }
        prev = true;
        prev_field = is_field;
    }
    Ok(())
}

fn enum_constant(n: &SyntaxNode) -> PResult<String> {
    let name = value(n)?;
    Ok(match n.children.first() {
        Some(a) => format!("{name}({})", args(expect_kind(a, NodeKind::ArgumentList)?, 0)?),
        None => name.to_string(),
    })
}

fn parameter(n: &SyntaxNode) -> PResult<String> {
    let mut parts = Vec::new();
    let mut ty = None;
    for c in &n.children {
        match c.kind {
            NodeKind::Annotation => parts.push(format!("@{}", value(c)?)),
            NodeKind::Modifier => parts.push(value(c)?.to_string()),
            NodeKind::TypeRef => ty = Some(value(c)?),
            _ => return malformed(c, "unexpected parameter child"),
        }
    }
    let Some(ty) = ty else {
        return malformed(n, "parameter without type");
    };
    parts.push(ty.to_string());
    parts.push(value(n)?.to_string());
    Ok(parts.join(" "))
}

fn member(n: &SyntaxNode, level: usize, out: &mut String) -> PResult<()> {
    let mut i = modifiers_prefix(n, level, out)?;
    match n.kind {
        NodeKind::FieldDecl => {
            let ty = expect_kind(child(n, i)?, NodeKind::TypeRef)?;
            out.push_str(&format!("{} {}", value(ty)?, value(n)?));
            if let Some(init) = n.children.get(i + 1) {
                out.push_str(&format!(" = {}", expr(init, level)?));
            }
            if n.children.len() > i + 2 {
                return malformed(n, "extra field children");
            }
            out.push_str(";\n");
        }
        NodeKind::MethodDecl | NodeKind::ConstructorDecl => {
            if n.kind == NodeKind::MethodDecl {
                let ty = expect_kind(child(n, i)?, NodeKind::TypeRef)?;
                out.push_str(value(ty)?);
                out.push(' ');
                i += 1;
            }
            out.push_str(value(n)?);
            let mut params = Vec::new();
            while let Some(c) = n.children.get(i) {
                if c.kind != NodeKind::Parameter {
                    break;
                }
                params.push(parameter(c)?);
                i += 1;
            }
            out.push_str(&format!("({})", params.join(", ")));
            if let Some(c) = n.children.get(i) {
                if c.kind == NodeKind::ThrowsList {
                    out.push_str(&format!(" throws {}", type_list(c)?));
                    i += 1;
                }
            }
            match n.children.get(i) {
                Some(b) => {
                    out.push(' ');
                    block(expect_kind(b, NodeKind::Block)?, level, out)?;
                    out.push('\n');
                    if n.children.len() > i + 1 {
                        return malformed(n, "extra children after body");
                    }
                }
                None if n.kind == NodeKind::MethodDecl => out.push_str(";\n"),
                None => return malformed(n, "constructor without body"),
            }
        }
        _ => return malformed(n, "not a member"),
    }
    Ok(())
}

/// Prints `{ ... }` starting at the current column; the closing brace is
/// indented at `level` and not followed by a newline.
fn block(n: &SyntaxNode, level: usize, out: &mut String) -> PResult<()> {
    expect_kind(n, NodeKind::Block)?;
    out.push_str("{\n");
    for s in &n.children {
        statement(s, level + 1, out)?;
    }
    pad(out, level);
    out.push('}');
    Ok(())
}

fn for_init(n: &SyntaxNode) -> PResult<String> {
    match n.kind {
        NodeKind::LocalVarDecl => local_var(n, 0),
        NodeKind::ExprStmt => expr(child(n, 0)?, 0),
        _ => malformed(n, "bad for initializer"),
    }
}

fn local_var(n: &SyntaxNode, level: usize) -> PResult<String> {
    let mut parts = Vec::new();
    let mut i = 0;
    while let Some(c) = n.children.get(i) {
        if c.kind != NodeKind::Modifier {
            break;
        }
        parts.push(value(c)?.to_string());
        i += 1;
    }
    let ty = expect_kind(child(n, i)?, NodeKind::TypeRef)?;
    parts.push(value(ty)?.to_string());
    parts.push(value(n)?.to_string());
    let mut s = parts.join(" ");
    if let Some(init) = n.children.get(i + 1) {
        s.push_str(&format!(" = {}", expr(init, level)?));
    }
    Ok(s)
}

fn statement(n: &SyntaxNode, level: usize, out: &mut String) -> PResult<()> {
    pad(out, level);
    statement_inline(n, level, out)?;
    out.push('\n');
    Ok(())
}

/// Statement text after indentation has been written.
fn statement_inline(n: &SyntaxNode, level: usize, out: &mut String) -> PResult<()> {
    match n.kind {
        NodeKind::LocalVarDecl => {
            out.push_str(&local_var(n, level)?);
            out.push(';');
        }
        NodeKind::ExprStmt => {
            out.push_str(&expr(child(n, 0)?, level)?);
            out.push(';');
        }
        NodeKind::ReturnStmt => match n.children.first() {
            Some(e) => out.push_str(&format!("return {};", expr(e, level)?)),
            None => out.push_str("return;"),
        },
        NodeKind::ThrowStmt => out.push_str(&format!("throw {};", expr(child(n, 0)?, level)?)),
        NodeKind::IfStmt => {
            out.push_str(&format!("if ({}) ", expr(child(n, 0)?, level)?));
            block(child(n, 1)?, level, out)?;
            if let Some(e) = n.children.get(2) {
                out.push_str(" else ");
                if e.kind == NodeKind::IfStmt {
                    statement_inline(e, level, out)?;
                } else {
                    block(e, level, out)?;
                }
            }
        }
        NodeKind::WhileStmt => {
            out.push_str(&format!("while ({}) ", expr(child(n, 0)?, level)?));
            block(child(n, 1)?, level, out)?;
        }
        NodeKind::ForStmt => {
            out.push_str(&format!(
                "for ({}; {}; {}) ",
                for_init(child(n, 0)?)?,
                expr(child(n, 1)?, level)?,
                expr(child(n, 2)?, level)?
            ));
            block(child(n, 3)?, level, out)?;
        }
        NodeKind::ForEachStmt => {
            out.push_str(&format!(
                "for ({} : {}) ",
                parameter(child(n, 0)?)?,
                expr(child(n, 1)?, level)?
            ));
            block(child(n, 2)?, level, out)?;
        }
        NodeKind::Block => block(n, level, out)?,
        _ => return malformed(n, "not a statement"),
    }
    Ok(())
}

const PRIMARY: u8 = 13;

fn precedence(n: &SyntaxNode) -> u8 {
    match n.kind {
        NodeKind::Assignment => 1,
        NodeKind::BinaryExpr => binary_precedence(n.value_str()).unwrap_or(1),
        NodeKind::UnaryExpr | NodeKind::CastExpr => 11,
        NodeKind::PostfixExpr => 12,
        _ => PRIMARY,
    }
}

fn operand(n: &SyntaxNode, min: u8, level: usize) -> PResult<String> {
    let s = expr(n, level)?;
    Ok(if precedence(n) < min { format!("({s})") } else { s })
}

fn args(n: &SyntaxNode, level: usize) -> PResult<String> {
    expect_kind(n, NodeKind::ArgumentList)?;
    let mut parts = Vec::new();
    for a in &n.children {
        parts.push(expr(a, level)?);
    }
    Ok(parts.join(", "))
}

/// Prints an expression; `level` is the indentation of the enclosing
/// statement, used for anonymous class bodies.
pub(crate) fn expr(n: &SyntaxNode, level: usize) -> PResult<String> {
    Ok(match n.kind {
        NodeKind::Name | NodeKind::Literal => value(n)?.to_string(),
        NodeKind::FieldAccess => {
            format!("{}.{}", operand(child(n, 0)?, PRIMARY, level)?, value(n)?)
        }
        NodeKind::MethodInvocation => match n.children.len() {
            1 => format!("{}({})", value(n)?, args(child(n, 0)?, level)?),
            2 => format!(
                "{}.{}({})",
                operand(child(n, 0)?, PRIMARY, level)?,
                value(n)?,
                args(child(n, 1)?, level)?
            ),
            _ => return malformed(n, "bad invocation"),
        },
        NodeKind::ObjectCreation => {
            let ty = expect_kind(child(n, 0)?, NodeKind::TypeRef)?;
            let mut s = format!("new {}({})", value(ty)?, args(child(n, 1)?, level)?);
            if let Some(body) = n.children.get(2) {
                expect_kind(body, NodeKind::AnonymousBody)?;
                s.push_str(" {\n");
                members(&body.children, level + 1, &mut s, false)?;
                pad(&mut s, level);
                s.push('}');
            }
            s
        }
        NodeKind::BinaryExpr => {
            let op = value(n)?;
            let Some(p) = binary_precedence(op) else {
                return malformed(n, "unknown operator");
            };
            let lhs_node = child(n, 0)?;
            // `a instanceof T < b` would read `T<` as type arguments
            let lhs_min = if p == 8 && lhs_node.kind == NodeKind::BinaryExpr && lhs_node.value_str() == "instanceof" {
                p + 1
            } else {
                p
            };
            let lhs = operand(lhs_node, lhs_min, level)?;
            let rhs_node = child(n, 1)?;
            let rhs = if op == "instanceof" {
                value(expect_kind(rhs_node, NodeKind::TypeRef)?)?.to_string()
            } else {
                operand(rhs_node, p + 1, level)?
            };
            format!("{lhs} {op} {rhs}")
        }
        NodeKind::Assignment => format!(
            "{} {} {}",
            operand(child(n, 0)?, PRIMARY, level)?,
            value(n)?,
            operand(child(n, 1)?, 1, level)?
        ),
        NodeKind::UnaryExpr => {
            let op = value(n)?;
            let inner = operand(child(n, 0)?, 11, level)?;
            // keep `- -x` from lexing as a decrement
            let sep = if inner.starts_with(['-', '+']) { " " } else { "" };
            format!("{op}{sep}{inner}")
        }
        NodeKind::PostfixExpr => format!("{}{}", operand(child(n, 0)?, 12, level)?, value(n)?),
        NodeKind::CastExpr => {
            let ty = expect_kind(child(n, 0)?, NodeKind::TypeRef)?;
            format!("({}) {}", value(ty)?, operand(child(n, 1)?, 11, level)?)
        }
        _ => return malformed(n, "not an expression"),
    })
}
