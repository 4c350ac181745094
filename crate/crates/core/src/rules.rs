//! Conventional resolutions, one per recognized conflict type C1–C16.

use thiserror::Error;

use crate::detect::{Conflict, ConflictType};
use crate::graph_diff::FourWayGraph;
use crate::java::{NodeId, NodeKind, SyntaxNode};
use crate::resolution::Resolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResolutionRule {
    pub code: ConflictType,
    pub action: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("no rule handles {0}")]
    NotCovered(ConflictType),
    #[error("the conflicting site is missing from the merged version")]
    TargetMissing,
}

/// The rule for a conflict type; none for C17–C23.
pub fn rule_for(ty: ConflictType) -> Option<ResolutionRule> {
    use ConflictType::*;
    let action = match ty {
        C1 | C7 => "update the added use to the renamed type",
        C2 => "update method def in sub to match super",
        C3 => "update parameters of the overriding method",
        C4 => "update return type of the overriding method",
        C5 => "re-add the import",
        C6 => "update the import to the renamed package",
        C8 => "add method def in class to override",
        C9 => "update parameters of the implementing method",
        C10 => "remove the orphaned method",
        C11 => "rename the implementing method",
        C12 => "update return type of method",
        C13 => "update the added use to the renamed field",
        C14 => "remove redundant field definition",
        C15 => "update the added use to the renamed method",
        C16 => "remove redundant method definition",
        _ => return None,
    };
    Some(ResolutionRule { code: ty, action })
}

/// Default value returned by a generated method stub.
fn zero_value(ty: &str) -> Option<&'static str> {
    match ty {
        "void" => None,
        "boolean" => Some("false"),
        "int" | "long" | "short" | "byte" | "char" | "float" | "double" => Some("0"),
        _ => Some("null"),
    }
}

struct Rewrite {
    tree: SyntaxNode,
    next: u32,
}

impl Rewrite {
    fn node(&mut self, id: NodeId) -> Result<&mut SyntaxNode, RuleError> {
        self.tree.find_mut(id).ok_or(RuleError::TargetMissing)
    }

    /// Gives `n` and its descendants fresh ids.
    fn fresh(&mut self, mut n: SyntaxNode) -> SyntaxNode {
        self.next = n.renumber(self.next);
        n
    }

    fn parent_id(&self, id: NodeId) -> Result<NodeId, RuleError> {
        self.tree.parent_of(id).map(|p| p.id).ok_or(RuleError::TargetMissing)
    }

    fn remove(&mut self, id: NodeId) -> Result<(), RuleError> {
        let p = self.parent_id(id)?;
        self.node(p)?.children.retain(|c| c.id != id);
        Ok(())
    }

    fn set_return_type(&mut self, method: NodeId, ty: &str) -> Result<(), RuleError> {
        let m = self.node(method)?;
        let t = m
            .children
            .iter_mut()
            .find(|c| c.kind == NodeKind::TypeRef)
            .ok_or(RuleError::TargetMissing)?;
        t.value = Some(ty.to_string());
        Ok(())
    }

    /// Replaces the parameter list of `method` with the types of `model`,
    /// keeping the method's own parameter names where positions agree.
    fn set_params(&mut self, method: NodeId, model: &SyntaxNode) -> Result<(), RuleError> {
        let wanted: Vec<SyntaxNode> = model.params().cloned().collect();
        let m = self.node(method)?.clone();
        let own: Vec<&SyntaxNode> = m.params().collect();
        let mut params = Vec::new();
        for (i, p) in wanted.into_iter().enumerate() {
            let mut p = p;
            if let Some(o) = own.get(i) {
                p.value = o.value.clone();
            }
            params.push(self.fresh(p));
        }
        let m = self.node(method)?;
        let first = m
            .children
            .iter()
            .position(|c| c.kind == NodeKind::Parameter)
            .or_else(|| m.children.iter().position(|c| c.kind == NodeKind::TypeRef).map(|i| i + 1))
            .unwrap_or(m.children.len());
        m.children.retain(|c| c.kind != NodeKind::Parameter);
        for (k, p) in params.into_iter().enumerate() {
            m.children.insert(first + k, p);
        }
        Ok(())
    }

    /// Appends an overriding stub of `model` to `class`.
    fn add_stub(&mut self, class: NodeId, model: &SyntaxNode) -> Result<(), RuleError> {
        let ty = model.declared_type().ok_or(RuleError::TargetMissing)?.clone();
        let mut children = vec![
            SyntaxNode::leaf(NodeKind::Annotation, "Override"),
            SyntaxNode::leaf(NodeKind::Modifier, "public"),
            ty.clone(),
        ];
        children.extend(model.params().cloned());
        if let Some(t) = model.child_of_kind(NodeKind::ThrowsList) {
            children.push(t.clone());
        }
        let body = match zero_value(ty.value_str()) {
            Some(v) => vec![SyntaxNode::new(
                NodeKind::ReturnStmt,
                None,
                vec![SyntaxNode::leaf(NodeKind::Literal, v)],
            )],
            None => Vec::new(),
        };
        children.push(SyntaxNode::new(NodeKind::Block, None, body));
        let stub = SyntaxNode::new(NodeKind::MethodDecl, model.value.clone(), children);
        let stub = self.fresh(stub);
        self.node(class)?.children.push(stub);
        Ok(())
    }
}

fn rename_type_text(text: &str, old: &str, new: &str, old_fqn: &str, new_fqn: &str) -> String {
    let mut out = String::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        if word == old_fqn {
            out.push_str(new_fqn);
        } else if word == old {
            out.push_str(new);
        } else {
            out.push_str(word);
        }
        word.clear();
    };
    for ch in text.chars() {
        if ch.is_alphanumeric() || ch == '_' || ch == '$' || ch == '.' {
            word.push(ch);
        } else {
            flush(&mut word, &mut out);
            out.push(ch);
        }
    }
    flush(&mut word, &mut out);
    out
}

/// Applies the conflict type's rule to the merged version.
pub fn resolve_by_rule(conflict: &Conflict, fw: &FourWayGraph) -> Result<Resolution, RuleError> {
    use ConflictType::*;
    let rule = rule_for(conflict.ty).ok_or(RuleError::NotCovered(conflict.ty))?;
    let site = conflict.sites.first().ok_or(RuleError::TargetMissing)?;
    let path = site.file.clone();
    let before = &fw.merged.files.get(&path).ok_or(RuleError::TargetMissing)?.tree;
    let mut rw = Rewrite {
        tree: before.clone(),
        next: before.max_id() + 1,
    };
    let gx = fw.branch(conflict.def_branch);
    let def = conflict.subject_def.map(|d| gx.entity(d));
    let def_decl = conflict.subject_def.and_then(|d| gx.decl_node(d));
    let old = conflict
        .subject_base
        .map(|b| fw.base.entity(b))
        .ok_or(RuleError::TargetMissing);
    let mut partial = false;

    match conflict.ty {
        C1 | C7 | C13 | C15 => {
            let (old, new) = (old?, def.ok_or(RuleError::TargetMissing)?);
            for s in &conflict.sites {
                let n = rw.node(s.node)?;
                let v = n.value_str().to_string();
                n.value = Some(match n.kind {
                    NodeKind::TypeRef => rename_type_text(&v, &old.name, &new.name, &old.fqn, &new.fqn),
                    _ => new.name.clone(),
                });
            }
            if old.kind.is_type() {
                let imports: Vec<NodeId> = rw
                    .tree
                    .children_of_kind(NodeKind::ImportDecl)
                    .filter(|i| i.value_str() == old.fqn)
                    .map(|i| i.id)
                    .collect();
                for i in imports {
                    rw.node(i)?.value = Some(new.fqn.clone());
                }
            }
        }
        C6 => {
            let old_pkg = conflict.subject.clone();
            let new_pkg = conflict
                .def_change
                .rsplit_once(" -> ")
                .map(|(_, n)| n.to_string())
                .ok_or(RuleError::TargetMissing)?;
            for s in &conflict.sites {
                let n = rw.node(s.node)?;
                let rest = n.value_str().strip_prefix(&old_pkg).unwrap_or("").to_string();
                n.value = Some(format!("{new_pkg}{rest}"));
            }
        }
        C5 => {
            let fqn = conflict.subject.clone();
            let at = rw
                .tree
                .children
                .iter()
                .rposition(|c| matches!(c.kind, NodeKind::ImportDecl | NodeKind::PackageDecl))
                .map(|i| i + 1)
                .unwrap_or(0);
            let imp = rw.fresh(SyntaxNode::leaf(NodeKind::ImportDecl, fqn));
            rw.tree.children.insert(at, imp);
        }
        C2 => {
            let model = def_decl.ok_or(RuleError::TargetMissing)?;
            let s = rw.tree.find(site.node).ok_or(RuleError::TargetMissing)?;
            if s.kind == NodeKind::MethodDecl {
                let ty = model.declared_type().ok_or(RuleError::TargetMissing)?.value_str().to_string();
                rw.set_return_type(site.node, &ty)?;
            } else {
                rw.add_stub(site.node, model)?;
                partial = true;
            }
        }
        C3 | C9 => {
            let model = def_decl.ok_or(RuleError::TargetMissing)?;
            rw.set_params(site.node, model)?;
        }
        C4 => {
            let ty = def
                .and_then(|d| d.ty.clone())
                .ok_or(RuleError::TargetMissing)?;
            rw.set_return_type(site.node, &ty)?;
        }
        C8 => {
            let model = def_decl.ok_or(RuleError::TargetMissing)?;
            rw.add_stub(site.node, model)?;
        }
        C10 | C14 | C16 => rw.remove(site.node)?,
        C11 => {
            let new = def.ok_or(RuleError::TargetMissing)?;
            rw.node(site.node)?.value = Some(new.name.clone());
        }
        C12 => {
            let related = conflict.related.ok_or(RuleError::TargetMissing)?;
            let ty = gx.entity(related).ty.clone().ok_or(RuleError::TargetMissing)?;
            rw.node(site.node)?.value = Some(ty);
        }
        _ => return Err(RuleError::NotCovered(conflict.ty)),
    }

    let mut res = Resolution::from_rewrite(&rule.code.to_string(), &path, before, &rw.tree)
        .ok_or(RuleError::TargetMissing)?;
    res.partial = partial;
    Ok(res)
}

/// Whether the rule for `ty` only renames nodes in place.
pub fn is_renaming(ty: ConflictType) -> bool {
    use ConflictType::*;
    matches!(ty, C1 | C6 | C7 | C11 | C13 | C15)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::detect_conflicts;
    use crate::java::parse_unit;
    use crate::merge::{merge_versions, Version};
    use crate::pipeline::fourway;

    fn version(files: &[(&str, &str)]) -> Version {
        files.iter().map(|(p, t)| (p.to_string(), t.to_string())).collect()
    }

    fn resolve(b: &[(&str, &str)], l: &[(&str, &str)], r: &[(&str, &str)]) -> Vec<Result<Resolution, RuleError>> {
        let s = merge_versions(version(b), version(l), version(r)).unwrap();
        let fw = fourway(&s).unwrap();
        detect_conflicts(&fw).iter().map(|c| resolve_by_rule(c, &fw)).collect()
    }

    fn count(n: &SyntaxNode) -> usize {
        let mut k = 0;
        n.walk(&mut |_| k += 1);
        k
    }

    const ITEM: &str = "package p;\n\npublic class Item {\n    private int qty;\n\n    public int qty() {\n        return qty;\n    }\n\n    public void add(int n) {\n        qty = qty + n;\n    }\n}\n";
    const USE: &str = "package p;\n\npublic class Use {\n    void a() {\n    }\n}\n";

    #[test]
    fn rules_exist_exactly_for_the_first_sixteen_types() {
        for ty in ConflictType::ALL {
            assert_eq!(rule_for(ty).is_some(), ty.number() <= 16, "{ty}");
        }
    }

    #[test]
    fn stub_values() {
        assert_eq!(zero_value("void"), None);
        assert_eq!(zero_value("boolean"), Some("false"));
        assert_eq!(zero_value("double"), Some("0"));
        assert_eq!(zero_value("List<String>"), Some("null"));
    }

    #[test]
    fn type_text_rename_keeps_neighbours() {
        let f = |t| rename_type_text(t, "Item", "Entry", "p.Item", "q.Entry");
        assert_eq!(f("List<Item>"), "List<Entry>");
        assert_eq!(f("Map<Item, Item[]>"), "Map<Entry, Entry[]>");
        assert_eq!(f("p.Item"), "q.Entry");
        assert_eq!(f("ItemList"), "ItemList");
    }

    #[test]
    fn class_rename_rule_only_renames() {
        let entry = ITEM.replace("Item", "Entry");
        let used = USE.replace(
            "    void a() {\n    }\n",
            "    void a() {\n    }\n\n    int b() {\n        Item i = new Item();\n        i.add(2);\n        return i.qty();\n    }\n",
        );
        let rs = resolve(
            &[("p/Item.java", ITEM), ("p/Use.java", USE)],
            &[("p/Entry.java", &entry), ("p/Use.java", USE)],
            &[("p/Item.java", ITEM), ("p/Use.java", &used)],
        );
        assert_eq!(rs.len(), 1);
        let r = rs[0].as_ref().unwrap();
        assert!(r.resolved_text.contains("Entry i = new Entry();"), "{}", r.resolved_text);
        let before = parse_unit("p/Use.java", &used).unwrap().tree;
        let after = parse_unit("p/Use.java", &r.resolved_text).unwrap().tree;
        assert_eq!(count(&before), count(&after));
        assert!(r.ops.iter().all(|o| o.name() == "update"));
    }

    #[test]
    fn interface_method_stub() {
        let iface = "package p;\n\npublic interface Shape {\n    String name();\n}\n";
        let grown = "package p;\n\npublic interface Shape {\n    String name();\n\n    int sides();\n\n    void draw(int scale);\n}\n";
        let impl_ = "package p;\n\npublic class Dot implements Shape {\n    public String name() {\n        return \"dot\";\n    }\n}\n";
        let rs = resolve(
            &[("p/Shape.java", iface)],
            &[("p/Shape.java", grown)],
            &[("p/Shape.java", iface), ("p/Dot.java", impl_)],
        );
        assert_eq!(rs.len(), 2);
        let texts: Vec<String> = rs.into_iter().map(|r| r.unwrap().resolved_text).collect();
        assert!(texts.iter().any(|t| t.contains("public void draw(int scale) {\n    }")), "{texts:?}");
        assert!(texts.iter().any(|t| t.contains("public int sides() {\n        return 0;")), "{texts:?}");
        assert!(texts.iter().all(|t| t.contains("@Override")));
    }

    #[test]
    fn deleted_class_has_no_rule() {
        let used = USE.replace("    void a() {\n    }\n", "    void a() {\n        Item i = new Item();\n    }\n");
        let rs = resolve(
            &[("p/Item.java", ITEM), ("p/Use.java", USE)],
            &[("p/Use.java", USE)],
            &[("p/Item.java", ITEM), ("p/Use.java", &used)],
        );
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].as_ref().unwrap_err(), &RuleError::NotCovered(ConflictType::C17));
    }
}
