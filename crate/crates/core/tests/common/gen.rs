//! Random syntax trees in the supported subset, built directly as trees so
//! that printing and parsing can be checked against them.

use mergeweaver::java::{NodeKind as K, SyntaxNode};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

const NAMES: &[&str] = &["a", "b", "count", "name", "value", "item", "config", "x1"];
const TYPES: &[&str] = &["int", "String", "Foo", "List<String>", "Map<String, Foo>", "Bar[]", "long"];
const REF_TYPES: &[&str] = &["Foo", "Bar", "Config", "List<String>"];
const METHODS: &[&str] = &["run", "get", "setValue", "apply", "size", "addAll"];
const BIN_OPS: &[&str] = &["+", "-", "*", "/", "%", "==", "!=", "<", ">", "<=", ">=", "&&", "||", "&", "|", "^"];

fn leaf(k: K, v: &str) -> SyntaxNode {
    SyntaxNode::leaf(k, v)
}

fn node(k: K, v: Option<&str>, c: Vec<SyntaxNode>) -> SyntaxNode {
    SyntaxNode::new(k, v.map(str::to_string), c)
}

fn pick<'a>(rng: &mut Rng8, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

pub fn type_ref(rng: &mut Rng8) -> SyntaxNode {
    leaf(K::TypeRef, pick(rng, TYPES))
}

fn literal(rng: &mut Rng8) -> SyntaxNode {
    let v = match rng.gen_range(0..4) {
        0 => rng.gen_range(0..100).to_string(),
        1 => format!("\"s{}\"", rng.gen_range(0..9)),
        2 => "true".into(),
        _ => "null".into(),
    };
    SyntaxNode::leaf(K::Literal, v)
}

fn args(rng: &mut Rng8, depth: u32) -> SyntaxNode {
    let n = rng.gen_range(0..3);
    node(K::ArgumentList, None, (0..n).map(|_| expr(rng, depth + 1)).collect())
}

/// Expressions safe to use as a receiver.
fn receiver(rng: &mut Rng8, depth: u32) -> SyntaxNode {
    match rng.gen_range(0..5) {
        0 if depth < 3 => node(K::MethodInvocation, Some(pick(rng, METHODS)), vec![args(rng, depth)]),
        1 if depth < 3 => node(K::FieldAccess, Some(pick(rng, NAMES)), vec![leaf(K::Name, "this")]),
        2 if depth < 3 => node(K::ObjectCreation, None, vec![leaf(K::TypeRef, pick(rng, REF_TYPES)), args(rng, depth)]),
        3 => leaf(K::Name, "Foo"),
        _ => leaf(K::Name, pick(rng, NAMES)),
    }
}

pub fn expr(rng: &mut Rng8, depth: u32) -> SyntaxNode {
    if depth >= 3 {
        return if rng.gen_bool(0.5) { leaf(K::Name, pick(rng, NAMES)) } else { literal(rng) };
    }
    match rng.gen_range(0..11) {
        0 => leaf(K::Name, pick(rng, NAMES)),
        1 => literal(rng),
        2 | 3 => {
            let mut c = Vec::new();
            if rng.gen_bool(0.6) {
                c.push(receiver(rng, depth + 1));
            }
            c.push(args(rng, depth));
            node(K::MethodInvocation, Some(pick(rng, METHODS)), c)
        }
        4 => node(K::FieldAccess, Some(pick(rng, NAMES)), vec![receiver(rng, depth + 1)]),
        5 => node(K::BinaryExpr, Some(pick(rng, BIN_OPS)), vec![expr(rng, depth + 1), expr(rng, depth + 1)]),
        6 => {
            let mut c = vec![leaf(K::TypeRef, pick(rng, REF_TYPES)), args(rng, depth)];
            if depth == 0 && rng.gen_bool(0.3) {
                let m = method(rng, false, 2);
                c.push(node(K::AnonymousBody, None, vec![m]));
            }
            node(K::ObjectCreation, None, c)
        }
        7 => {
            // reference casts must not be followed by a sign
            let operand = loop {
                let e = expr(rng, depth + 1);
                if e.kind != K::UnaryExpr || e.value_str() == "!" {
                    break e;
                }
            };
            node(K::CastExpr, None, vec![leaf(K::TypeRef, pick(rng, REF_TYPES)), operand])
        }
        8 => node(K::UnaryExpr, Some(pick(rng, &["!", "-", "+", "++", "--", "~"])), vec![expr(rng, depth + 1)]),
        9 => node(K::PostfixExpr, Some(pick(rng, &["++", "--"])), vec![leaf(K::Name, pick(rng, NAMES))]),
        _ => node(K::BinaryExpr, Some("instanceof"), vec![leaf(K::Name, pick(rng, NAMES)), leaf(K::TypeRef, pick(rng, REF_TYPES))]),
    }
}

fn block(rng: &mut Rng8, depth: u32) -> SyntaxNode {
    let n = rng.gen_range(if depth == 0 { 1 } else { 0 }..4);
    node(K::Block, None, (0..n).map(|_| statement(rng, depth + 1)).collect())
}

fn local_var(rng: &mut Rng8) -> SyntaxNode {
    let mut c = Vec::new();
    if rng.gen_bool(0.2) {
        c.push(leaf(K::Modifier, "final"));
    }
    c.push(type_ref(rng));
    if rng.gen_bool(0.8) {
        c.push(expr(rng, 0));
    }
    node(K::LocalVarDecl, Some(pick(rng, NAMES)), c)
}

pub fn statement(rng: &mut Rng8, depth: u32) -> SyntaxNode {
    let simple = depth >= 2;
    match rng.gen_range(0..if simple { 5 } else { 9 }) {
        0 | 1 => local_var(rng),
        2 => {
            let e = if rng.gen_bool(0.5) {
                let target = if rng.gen_bool(0.7) {
                    leaf(K::Name, pick(rng, NAMES))
                } else {
                    node(K::FieldAccess, Some(pick(rng, NAMES)), vec![leaf(K::Name, "this")])
                };
                node(K::Assignment, Some(pick(rng, &["=", "+=", "-="])), vec![target, expr(rng, 1)])
            } else {
                let mut c = Vec::new();
                if rng.gen_bool(0.5) {
                    c.push(receiver(rng, 1));
                }
                c.push(args(rng, 0));
                node(K::MethodInvocation, Some(pick(rng, METHODS)), c)
            };
            node(K::ExprStmt, None, vec![e])
        }
        3 => {
            let c = if rng.gen_bool(0.3) { vec![] } else { vec![expr(rng, 0)] };
            node(K::ReturnStmt, None, c)
        }
        4 => node(
            K::ThrowStmt,
            None,
            vec![node(K::ObjectCreation, None, vec![leaf(K::TypeRef, "IllegalStateException"), args(rng, 1)])],
        ),
        5 | 6 => {
            let mut c = vec![expr(rng, 1), block(rng, depth)];
            if rng.gen_bool(0.3) {
                c.push(block(rng, depth));
            } else if rng.gen_bool(0.2) {
                c.push(node(K::IfStmt, None, vec![expr(rng, 1), block(rng, depth)]));
            }
            node(K::IfStmt, None, c)
        }
        7 => node(K::WhileStmt, None, vec![expr(rng, 1), block(rng, depth)]),
        _ => {
            if rng.gen_bool(0.5) {
                let init = node(K::LocalVarDecl, Some("i"), vec![leaf(K::TypeRef, "int"), leaf(K::Literal, "0")]);
                let cond = node(K::BinaryExpr, Some("<"), vec![leaf(K::Name, "i"), leaf(K::Name, pick(rng, NAMES))]);
                let upd = node(K::PostfixExpr, Some("++"), vec![leaf(K::Name, "i")]);
                node(K::ForStmt, None, vec![init, cond, upd, block(rng, depth)])
            } else {
                let p = node(K::Parameter, Some(pick(rng, NAMES)), vec![type_ref(rng)]);
                node(K::ForEachStmt, None, vec![p, leaf(K::Name, "items"), block(rng, depth)])
            }
        }
    }
}

fn method(rng: &mut Rng8, abstract_ok: bool, depth: u32) -> SyntaxNode {
    let mut c = Vec::new();
    if rng.gen_bool(0.3) {
        c.push(leaf(K::Annotation, "Override"));
    }
    c.push(leaf(K::Modifier, pick(rng, &["public", "private", "protected"])));
    if rng.gen_bool(0.2) {
        c.push(leaf(K::Modifier, "static"));
    }
    c.push(leaf(K::TypeRef, pick(rng, &["void", "int", "String", "Foo"])));
    for k in 0..rng.gen_range(0..3) {
        c.push(node(K::Parameter, Some(&format!("p{k}")), vec![type_ref(rng)]));
    }
    if rng.gen_bool(0.15) {
        c.push(node(K::ThrowsList, None, vec![leaf(K::TypeRef, "IOException")]));
    }
    if !(abstract_ok && rng.gen_bool(0.3)) {
        let n = rng.gen_range(1..5);
        c.push(node(K::Block, None, (0..n).map(|_| statement(rng, depth)).collect()));
    }
    let name = format!("{}{}", pick(rng, METHODS), rng.gen_range(0..50));
    node(K::MethodDecl, Some(&name), c)
}

fn class(rng: &mut Rng8, name: &str, nested: bool) -> SyntaxNode {
    let mut c = vec![leaf(K::Modifier, "public")];
    if rng.gen_bool(0.3) {
        c.push(node(K::ExtendsList, None, vec![leaf(K::TypeRef, "Base")]));
    }
    if rng.gen_bool(0.3) {
        c.push(node(K::ImplementsList, None, vec![leaf(K::TypeRef, "Runnable"), leaf(K::TypeRef, "Serializable")]));
    }
    for k in 0..rng.gen_range(0..3) {
        let mut f = vec![leaf(K::Modifier, "private"), type_ref(rng)];
        if rng.gen_bool(0.5) {
            f.push(expr(rng, 1));
        }
        c.push(node(K::FieldDecl, Some(&format!("f{k}")), f));
    }
    if rng.gen_bool(0.4) {
        let body = node(K::Block, None, vec![node(K::ExprStmt, None, vec![node(K::MethodInvocation, Some("super"), vec![args(rng, 1)])])]);
        c.push(node(K::ConstructorDecl, Some(name), vec![leaf(K::Modifier, "public"), node(K::Parameter, Some("v"), vec![type_ref(rng)]), body]));
    }
    for _ in 0..rng.gen_range(1..4) {
        c.push(method(rng, false, 0));
    }
    if !nested && rng.gen_bool(0.2) {
        c.push(class(rng, "Inner", true));
    }
    node(K::ClassDecl, Some(name), c)
}

fn enum_decl(rng: &mut Rng8) -> SyntaxNode {
    let mut c = vec![leaf(K::Modifier, "public")];
    for name in ["RED", "GREEN"] {
        let cc = if rng.gen_bool(0.5) { vec![args(rng, 2)] } else { vec![] };
        c.push(node(K::EnumConstant, Some(name), cc));
    }
    if rng.gen_bool(0.5) {
        c.push(node(K::FieldDecl, Some("code"), vec![leaf(K::Modifier, "private"), leaf(K::TypeRef, "int")]));
    }
    node(K::EnumDecl, Some("Color"), c)
}

fn interface(rng: &mut Rng8) -> SyntaxNode {
    let mut c = vec![leaf(K::Modifier, "public")];
    for _ in 0..rng.gen_range(1..3) {
        let mut m = method(rng, false, 0);
        m.children.retain(|x| x.kind != K::Block);
        c.push(m);
    }
    node(K::InterfaceDecl, Some("Service"), c)
}

pub fn unit(rng: &mut Rng8) -> SyntaxNode {
    let mut c = Vec::new();
    if rng.gen_bool(0.7) {
        c.push(leaf(K::PackageDecl, "com.example.app"));
    }
    for imp in ["java.util.List", "java.util.Map", "com.example.other.*"] {
        if rng.gen_bool(0.4) {
            c.push(leaf(K::ImportDecl, imp));
        }
    }
    c.push(class(rng, "Main", false));
    match rng.gen_range(0..4) {
        0 => c.push(enum_decl(rng)),
        1 => c.push(interface(rng)),
        2 => c.push(class(rng, "Helper", false)),
        _ => {}
    }
    let mut root = node(K::CompilationUnit, None, c);
    root.renumber(0);
    root
}

// ---- mutations -------------------------------------------------------------

fn paths(t: &SyntaxNode, pred: &dyn Fn(&SyntaxNode) -> bool) -> Vec<Vec<usize>> {
    fn go(n: &SyntaxNode, path: &mut Vec<usize>, pred: &dyn Fn(&SyntaxNode) -> bool, out: &mut Vec<Vec<usize>>) {
        if pred(n) {
            out.push(path.clone());
        }
        for (i, c) in n.children.iter().enumerate() {
            path.push(i);
            go(c, path, pred, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), pred, &mut out);
    out
}

fn at_mut<'a>(t: &'a mut SyntaxNode, path: &[usize]) -> &'a mut SyntaxNode {
    path.iter().fold(t, |n, &i| &mut n.children[i])
}

/// One random structure-preserving edit (never touching package or import
/// declarations). Returns false if nothing applicable was found.
pub fn mutate(rng: &mut Rng8, t: &mut SyntaxNode) -> bool {
    match rng.gen_range(0..6) {
        0 => {
            let ps = paths(t, &|n| matches!(n.kind, K::Name | K::Literal | K::MethodInvocation | K::LocalVarDecl | K::TypeRef) && n.value.is_some());
            let Some(p) = ps.choose(rng) else { return false };
            let n = at_mut(t, p);
            let v = match n.kind {
                K::Literal => format!("{}", rng.gen_range(100..999)),
                K::TypeRef => pick(rng, REF_TYPES).to_string(),
                _ => format!("{}{}", pick(rng, NAMES), rng.gen_range(0..9)),
            };
            n.value = Some(v);
            true
        }
        1 => {
            let ps = paths(t, &|n| n.kind.is_statement());
            let Some(p) = ps.choose(rng) else { return false };
            let (last, parent) = p.split_last().unwrap();
            let par = at_mut(t, parent);
            if par.kind != K::Block {
                return false;
            }
            par.children.remove(*last);
            true
        }
        2 => {
            let ps = paths(t, &|n| n.kind == K::Block);
            let Some(p) = ps.choose(rng) else { return false };
            let s = statement(rng, 2);
            let b = at_mut(t, p);
            let k = rng.gen_range(0..=b.children.len());
            b.children.insert(k, s);
            true
        }
        3 => {
            let ps = paths(t, &|n| n.kind.is_statement());
            let Some(p) = ps.choose(rng).cloned() else { return false };
            let (last, parent) = p.split_last().unwrap();
            if at_mut(t, parent).kind != K::Block {
                return false;
            }
            let s = at_mut(t, parent).children.remove(*last);
            let blocks = paths(t, &|n| n.kind == K::Block);
            let Some(bp) = blocks.choose(rng) else { return false };
            let b = at_mut(t, bp);
            let k = rng.gen_range(0..=b.children.len());
            b.children.insert(k, s);
            true
        }
        4 => {
            let ps = paths(t, &|n| n.children.len() >= 2 && matches!(n.kind, K::Block | K::ClassDecl));
            let Some(p) = ps.choose(rng) else { return false };
            let n = at_mut(t, p);
            let first = n.children.iter().position(|c| !matches!(c.kind, K::Modifier | K::Annotation | K::ExtendsList | K::ImplementsList)).unwrap_or(0);
            if n.children.len() - first < 2 {
                return false;
            }
            let i = rng.gen_range(first..n.children.len());
            let j = rng.gen_range(first..n.children.len());
            n.children.swap(i, j);
            true
        }
        _ => {
            let ps = paths(t, &|n| n.kind.is_statement());
            let Some(p) = ps.choose(rng).cloned() else { return false };
            let (last, parent) = p.split_last().unwrap();
            let par = at_mut(t, parent);
            if par.kind != K::Block {
                return false;
            }
            let s = par.children.remove(*last);
            let cond = expr(rng, 2);
            par.children.insert(*last, node(K::IfStmt, None, vec![cond, node(K::Block, None, vec![s])]));
            true
        }
    }
}
