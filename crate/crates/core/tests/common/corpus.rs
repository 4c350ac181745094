//! Checks over the bundled scenario corpus, shared by the corpus and
//! acceptance tests. Each check returns a description of the first
//! discrepancy.

use std::path::{Path, PathBuf};

use mergeweaver::detect::{detect_conflicts, ConflictType};
use mergeweaver::java::token_equal;
use mergeweaver::pipeline::{fourway_with, run_dirs, Analysis};
use mergeweaver::resolution::Resolution;

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

pub fn analyze(id: &str) -> Result<Analysis, String> {
    let d = corpus_dir().join(id);
    run_dirs(&d.join("base"), &d.join("left"), &d.join("right"), true).map_err(|e| format!("{id}: {e}"))
}

pub fn expected(id: &str, file: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(id).join("expected").join(file)).unwrap_or_default()
}

/// Scenario, conflict code, using entity and a snippet of the site's text.
pub const TAXONOMY: &[(&str, &str, &str, &str)] = &[
    ("tax-c01", "C1", "app.Shop.total()", "Widget w = new Widget()"),
    ("tax-c02", "C2", "app.Sub.tally()", "long tally()"),
    ("tax-c03", "C3", "app.Sub.run(int)", "void run(int k)"),
    ("tax-c04", "C4", "app.Sub.level()", "int level()"),
    ("tax-c05", "C5", "app.Repo.count(List<String>)", "List<String> items"),
    ("tax-c06", "C6", "app/Names.java", "import app.util.Strings;"),
    ("tax-c07", "C7", "app.Circle", "implements Shape"),
    ("tax-c08", "C8", "app.Square", "class Square"),
    ("tax-c09", "C9", "app.Printer.handle(String)", "handle(String text)"),
    ("tax-c10", "C10", "app.Printer.reset()", "@Override"),
    ("tax-c11", "C11", "app.Printer.start(int)", "start(int delay)"),
    ("tax-c12", "C12", "app.Box.size()", "public long size()"),
    ("tax-c13", "C13", "app.Counter.snapshot()", "return count;"),
    ("tax-c14", "C14", "app.Limits", "private int limit;"),
    ("tax-c15", "C15", "app.Calc.twice(int)", "compute(y)"),
    ("tax-c16", "C16", "app.Limits", "void clear()"),
    ("tax-c17", "C17", "app.Report.describe(String)", "LegacyFormatter legacy"),
    ("tax-c18", "C18", "app.Client.reopen()", "new Connection(host)"),
    ("tax-c19", "C19", "app.Timer.await()", "long secs = timeout;"),
    ("tax-c20", "C20", "app.Logger.warn(String)", "print(prefix + msg)"),
    ("tax-c21", "C21", "app.Notifier.alert(String)", "bus.send(msg)"),
    ("tax-c22", "C22", "app.View.footer()", "String n = profile.nick();"),
    ("tax-c23", "C23", "app.Index.probe(String)", "legacyHash(key)"),
];

pub const CONTROLS: &[&str] = &[
    "ctrl-ctor-overload",
    "ctrl-delete-unused",
    "ctrl-disjoint-adds",
    "ctrl-field-add",
    "ctrl-iface-add",
    "ctrl-imports",
    "ctrl-new-package",
    "ctrl-rename-adapted",
    "ctrl-rename-unrelated",
    "ctrl-super-add",
];

pub fn check_taxonomy(id: &str, code: &str, entity: &str, snippet: &str) -> Result<(), String> {
    let a = analyze(id)?;
    let found: Vec<String> = a.conflicts.iter().map(|c| c.ty.to_string()).collect();
    if found != [code] {
        return Err(format!("{id}: expected [{code}], detected {found:?}"));
    }
    let c = &a.conflicts[0];
    let site = c.sites.first().ok_or(format!("{id}: no site"))?;
    if site.entity != entity {
        return Err(format!("{id}: site in {}, expected {entity}", site.entity));
    }
    let text = &a.scenario.am[&site.file].text;
    let (from, to) = (site.span.start.line as usize, site.span.end.line as usize);
    let lines: Vec<&str> = text.lines().skip(from - 1).take(to + 1 - from).collect();
    if !lines.iter().any(|l| l.contains(snippet)) {
        return Err(format!("{id}: site lines {lines:?} lack {snippet:?}"));
    }
    Ok(())
}

pub fn check_control(id: &str) -> Result<(), String> {
    let a = analyze(id)?;
    if a.conflicts.is_empty() {
        Ok(())
    } else {
        let found: Vec<String> = a.conflicts.iter().map(|c| format!("{} {}", c.ty, c.subject)).collect();
        Err(format!("{id}: spurious {found:?}"))
    }
}

/// The rule resolution equals the expected file and re-detection on the
/// resolved merge finds no conflict of the same code.
pub fn check_rule(id: &str, code: ConflictType) -> Result<(), String> {
    let a = analyze(id)?;
    let i = a
        .conflicts
        .iter()
        .position(|c| c.ty == code)
        .ok_or(format!("{id}: no {code} detected"))?;
    let r = a.resolutions[i].rule.as_ref().ok_or(format!("{id}: no rule resolution"))?;
    if !token_equal(&r.resolved_text, &expected(id, &r.target_file)) {
        return Err(format!("{id}: rule output differs from expected:\n{}", r.resolved_text));
    }
    let fw = fourway_with(&a.scenario, &a.apply(r)).map_err(|e| format!("{id}: {e}"))?;
    let again: Vec<String> = detect_conflicts(&fw)
        .iter()
        .filter(|c| c.ty == code)
        .map(|c| c.subject.clone())
        .collect();
    if again.is_empty() {
        Ok(())
    } else {
        Err(format!("{id}: {code} still detected after resolution: {again:?}"))
    }
}

fn single<'a>(a: &'a Analysis, id: &str, code: &str) -> Result<(Option<&'a Resolution>, Option<&'a Resolution>), String> {
    let found: Vec<String> = a.conflicts.iter().map(|c| c.ty.to_string()).collect();
    if found != [code] {
        return Err(format!("{id}: expected [{code}], detected {found:?}"));
    }
    Ok((a.resolutions[0].example.as_ref(), a.resolutions[0].rule.as_ref()))
}

fn correct(id: &str, r: &Resolution) -> bool {
    token_equal(&r.resolved_text, &expected(id, &r.target_file))
}

/// Fixtures built to show one particular outcome of the two strategies.
pub const OUTCOMES: &[&str] = &[
    "method-rename-rule-only",
    "field-removed-example-only",
    "two-calls-partial",
    "example-wrong-intent",
    "import-readd-wrong-intent",
];

pub fn check_outcome(id: &str) -> Result<(), String> {
    let a = analyze(id)?;
    match id {
        "method-rename-rule-only" => {
            let (ex, rule) = single(&a, id, "C15")?;
            match (ex, rule) {
                (None, Some(r)) if correct(id, r) && r.resolved_text.contains("schema.set$ref(target);") => Ok(()),
                _ => Err(format!("{id}: expected a correct rule-only resolution")),
            }
        }
        "field-removed-example-only" => {
            let (ex, rule) = single(&a, id, "C20")?;
            let want = "new JedisClusterCommand<Set<String>>(connectionHandler, maxRedirections)";
            match (ex, rule) {
                (Some(r), None) if !r.partial && correct(id, r) && r.resolved_text.contains(want) => Ok(()),
                _ => Err(format!("{id}: expected a complete example-only resolution")),
            }
        }
        "two-calls-partial" => {
            let (ex, _) = single(&a, id, "C23")?;
            let want = "ctx.serialization().toData(value).merge(ctx.getSerializationService().toData(other))";
            match ex {
                Some(r) if r.partial && !correct(id, r) && r.resolved_text.contains(want) => Ok(()),
                _ => Err(format!("{id}: expected a partial example resolution rewriting the first call")),
            }
        }
        "example-wrong-intent" => {
            let (ex, _) = single(&a, id, "C18")?;
            match ex {
                Some(r) if r.resolved_text.contains("new Cache(id, 64)") && !correct(id, r) => Ok(()),
                _ => Err(format!("{id}: expected an incorrect example resolution adding the argument")),
            }
        }
        "import-readd-wrong-intent" => {
            let (_, rule) = single(&a, id, "C5")?;
            match rule {
                Some(r) if r.resolved_text.contains("import com.lib.OldJson;") && !correct(id, r) => Ok(()),
                _ => Err(format!("{id}: expected an incorrect rule resolution re-adding the import")),
            }
        }
        _ => Err(format!("no outcome fixture {id}")),
    }
}

pub const OLD_DECL: &str = "TypeSerializerConfig typeSerializerConfig = new TypeSerializerConfig();";
pub const NAIVE_DECL: &str = "SerializerConfig typeSerializerConfig = new SerializerConfig();";

/// Motivating scenario: one C1, an example resolution equal to the
/// developer's and a rule resolution that only renames the type.
pub fn check_motivating() -> Result<(), String> {
    let id = "motivating";
    let a = analyze(id)?;
    let (ex, rule) = single(&a, id, "C1")?;
    let ex = ex.ok_or("no example resolution")?;
    let rank = ex.rank.ok_or("example resolution has no rank")?;
    if rank.c_m != 4 || !(9.5..=10.0).contains(&rank.sigma_m) {
        return Err(format!("rank Cm={} Σm={}", rank.c_m, rank.sigma_m));
    }
    if ex.partial || !correct(id, ex) {
        return Err(format!("example resolution differs:\n{}", ex.resolved_text));
    }
    let rule = rule.ok_or("no rule resolution")?;
    let am = &a.scenario.am[&rule.target_file].text;
    if am.matches(OLD_DECL).count() != 1 {
        return Err("merged file does not hold exactly one old declaration".into());
    }
    let naive = am.replace(OLD_DECL, NAIVE_DECL);
    if !token_equal(&rule.resolved_text, &naive) {
        return Err(format!("rule resolution differs:\n{}", rule.resolved_text));
    }
    Ok(())
}
