//! Random edit examples for dependence-closure checks and a brute-force
//! closure to compare refinement against.

use std::collections::BTreeSet;

use mergeweaver::example::{statement_dependences, EditExample, Refined, Subject};
use mergeweaver::java::{parse_unit, NodeId, NodeKind, SyntaxNode};
use mergeweaver::peg::EntityKind;
use mergeweaver::tree_diff::{apply_script, diff_trees};
use rand::Rng;

use super::gen::Rng8;

fn method(body: &str) -> SyntaxNode {
    let f = parse_unit("A.java", &format!("class A {{\n    void m(Config config) {{\n{body}    }}\n}}\n")).unwrap();
    let mut found = None;
    f.tree.walk(&mut |n| {
        if found.is_none() && n.kind == NodeKind::MethodDecl {
            found = Some(n.clone());
        }
    });
    let mut m = found.unwrap();
    m.renumber(0);
    m
}

/// Appends one statement, sometimes wrapped in an if, in its before and
/// after form.
fn statement(rng: &mut Rng8, i: usize, vars: usize, out: (&mut String, &mut String)) {
    let var = |rng: &mut Rng8| {
        if vars == 0 {
            "config.limit()".to_string()
        } else {
            format!("v{}", rng.gen_range(0..vars))
        }
    };
    let (b, a) = match rng.gen_range(0..5) {
        0 => {
            let v = var(rng);
            (format!("int v{i} = {v} + 1;"), format!("int v{i} = {v} + 2;"))
        }
        1 => {
            let v = var(rng);
            (format!("register(new Widget({v}));"), format!("register(new Gadget({v}));"))
        }
        2 => {
            let v = var(rng);
            (format!("Widget w{i} = make({v});"), format!("Gadget w{i} = make({v});"))
        }
        3 => (format!("log(\"s{i}\");"), format!("log(\"t{i}\");")),
        _ => {
            let v = var(rng);
            (format!("int v{i} = {v};"), format!("int v{i} = {v};"))
        }
    };
    let change = rng.gen_bool(0.5);
    let (bs, as_) = out;
    if rng.gen_bool(0.2) && vars > 0 {
        let cond = format!("if (v{} > 0) {{", rng.gen_range(0..vars));
        bs.push_str(&format!("        {cond}\n            {b}\n        }}\n"));
        as_.push_str(&format!("        {cond}\n            {}\n        }}\n", if change { &a } else { &b }));
    } else {
        bs.push_str(&format!("        {b}\n"));
        as_.push_str(&format!("        {}\n", if change { &a } else { &b }));
    }
}

/// A random method of at most 30 statements and an edited version in which
/// some statements adapt uses of `Widget` to `Gadget`.
pub fn example(rng: &mut Rng8) -> EditExample {
    let n = rng.gen_range(2..=24);
    let (mut b, mut a) = (String::new(), String::new());
    for i in 0..n {
        statement(rng, i, i, (&mut b, &mut a));
    }
    let before = method(&b);
    let after = method(&a);
    let script = diff_trees(&before, &after);
    EditExample {
        subject: Subject {
            kind: EntityKind::Class,
            fqn: "p.Widget".into(),
            names: vec!["Widget".into(), "Gadget".into()],
        },
        host: "p.A.m(Config)".into(),
        file: "A.java".into(),
        before,
        after,
        script,
    }
}

pub fn statement_count(n: &SyntaxNode) -> usize {
    let mut k = 0;
    n.walk(&mut |x| k += usize::from(x.kind.is_statement()));
    k
}

/// Ops of the transitive closure, over control and data dependences in the
/// before and edited trees between edited statements, of the statements
/// edited by `r.e1`.
pub fn brute_force_closure(ex: &EditExample, r: &Refined) -> Vec<usize> {
    let edited = apply_script(&ex.before, &ex.script.ops).unwrap();
    let units: Vec<NodeId> = r.units.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let at = |id: NodeId| units.iter().position(|&u| u == id);
    let n = units.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for d in statement_dependences(&ex.before).into_iter().chain(statement_dependences(&edited)) {
        if let (Some(f), Some(o)) = (at(d.from), at(d.on)) {
            reach[f][o] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let seeds: Vec<usize> = r.e1.iter().filter_map(|&i| r.units[i]).filter_map(at).collect();
    (0..ex.script.ops.len())
        .filter(|&i| {
            r.e1.contains(&i)
                || r.units[i]
                    .and_then(at)
                    .is_some_and(|u| seeds.iter().any(|&s| reach[s][u]))
        })
        .collect()
}
