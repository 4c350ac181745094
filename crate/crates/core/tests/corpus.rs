mod common;

use common::corpus::*;
use mergeweaver::detect::ConflictType;
use mergeweaver::eval::{evaluate_corpus, GoldenKey};

#[test]
fn motivating_scenario() {
    check_motivating().unwrap();
}

#[test]
fn taxonomy_fixtures_report_their_type_and_site() {
    let errs: Vec<String> = TAXONOMY
        .iter()
        .filter_map(|&(id, code, entity, snippet)| check_taxonomy(id, code, entity, snippet).err())
        .collect();
    assert!(errs.is_empty(), "{errs:#?}");
}

#[test]
fn controls_have_no_conflicts() {
    let errs: Vec<String> = CONTROLS.iter().filter_map(|id| check_control(id).err()).collect();
    assert!(errs.is_empty(), "{errs:#?}");
}

#[test]
fn rules_produce_golden_output_and_clear_the_conflict() {
    let errs: Vec<String> = TAXONOMY[..16]
        .iter()
        .filter_map(|&(id, code, ..)| check_rule(id, code.parse::<ConflictType>().unwrap()).err())
        .collect();
    assert!(errs.is_empty(), "{errs:#?}");
}

#[test]
fn outcome_fixtures() {
    for id in OUTCOMES {
        check_outcome(id).unwrap();
    }
}

#[test]
fn corpus_matches_golden_key() {
    let s = evaluate_corpus(&corpus_dir()).unwrap();
    let key = GoldenKey::load(&corpus_dir().join("golden.toml")).unwrap();
    assert_eq!(key.mismatches(&s), Vec::<String>::new());
    assert!(s.coverage >= 0.9, "coverage {}", s.coverage);
}

#[test]
fn rules_cover_every_taxonomy_code_up_to_sixteen() {
    let codes: Vec<&str> = TAXONOMY[..16].iter().map(|t| t.1).collect();
    let want: Vec<String> = (1..=16).map(|i| format!("C{i}")).collect();
    assert_eq!(codes, want);
}
