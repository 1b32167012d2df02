use std::path::PathBuf;

use koszul_core::commands::{
    check_koszul, corpus, corpus_replay, fsplit, grassmannian, pair_tor_cmd, FsplitArgs, GrassmannianArgs, Method,
    Settings, SplittingSource,
};
use koszul_core::flag::{PlueckerIndex, SchubertSpec};
use koszul_core::fsplit::ChartCase;
use koszul_core::report::{Status, Verdict};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn settings() -> Settings {
    Settings::new(vec!["test".into()])
}

#[test]
fn plane_is_koszul_and_reruns_match() {
    let a = check_koszul(&settings(), &data("plane.toml"), Method::Both);
    assert_eq!(a.status(), Status::Pass);
    assert_eq!(a.record("agreement").unwrap().verdict, Verdict::Pass);
    let b = check_koszul(&settings(), &data("plane.toml"), Method::Both);
    assert_eq!(a.without_timing().to_json(), b.without_timing().to_json());
    assert_eq!(a.inputs.len(), 1);
    assert_eq!(a.inputs[0].sha256.len(), 64);
}

#[test]
fn witness_is_negative_with_a_rechecked_witness() {
    let r = check_koszul(&settings(), &data("non_koszul_witness.toml"), Method::Lattice);
    assert_eq!(r.exit_code(), 1);
    let failed: Vec<_> = r.records.iter().filter(|x| x.verdict == Verdict::Fail).collect();
    assert_eq!(failed[0].degree.as_deref(), Some("4"));
    let w = failed[0].witness.as_ref().unwrap();
    assert_eq!(w["rechecked"], serde_json::Value::Bool(true));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "generators = [\"x\"]\nrelations = [[[0, 3, \"1\"]]]\n").unwrap();
    assert_eq!(check_koszul(&settings(), &bad, Method::Both).exit_code(), 2);
    assert_eq!(check_koszul(&settings(), &dir.path().join("missing.toml"), Method::Both).exit_code(), 2);
    assert_eq!(corpus(&settings(), 1, 0, 3).exit_code(), 2);
    let args = FsplitArgs { source: SplittingSource::Case(ChartCase::P1), p: Some(4), ideals: vec![], section_degree: 5, closure: false };
    assert_eq!(fsplit(&settings(), &args).exit_code(), 2);
}

#[test]
fn oversized_grassmannian_hits_the_resource_limit() {
    let args = GrassmannianArgs { k: 3, n: 12, schubert: None, tor_degree: None, emit: None };
    assert_eq!(grassmannian(&settings(), &args).exit_code(), 3);
}

#[test]
fn emitted_modules_feed_pair_tor() {
    let dir = tempfile::tempdir().unwrap();
    let w = PlueckerIndex::new(vec![1, 3], 4).unwrap();
    let mut s = settings();
    s.max_degree = Some(3);
    for (spec, sub) in [(SchubertSpec::standard(w.clone()), "std"), (SchubertSpec::opposite(w.clone()), "opp")] {
        let args = GrassmannianArgs { k: 2, n: 4, schubert: Some(spec), tor_degree: Some(3), emit: Some(dir.path().join(sub)) };
        let r = grassmannian(&s, &args);
        assert_eq!(r.exit_code(), 0, "{}", r.summary_lines());
        assert_eq!(r.record("quotient-dims").unwrap().verdict, Verdict::Pass);
    }
    let right = dir.path().join("std/module.toml");
    let left = dir.path().join("opp/module.toml");
    let r = pair_tor_cmd(&s, &right, &left, Some(2));
    assert_eq!(r.exit_code(), 0, "{}", r.summary_lines());
    assert_eq!(pair_tor_cmd(&s, &right, &right, Some(2)).exit_code(), 2);
}

#[test]
fn fsplit_verdicts() {
    let args = FsplitArgs { source: SplittingSource::Case(ChartCase::P1), p: Some(5), ideals: vec![], section_degree: 10, closure: true };
    assert_eq!(fsplit(&settings(), &args).exit_code(), 0);
    let args = FsplitArgs { source: SplittingSource::Sigma(data("sigma_t2.txt")), p: None, ideals: vec![], section_degree: 10, closure: false };
    assert_eq!(fsplit(&settings(), &args).exit_code(), 1);
    let args = FsplitArgs {
        source: SplittingSource::Sigma(data("sigma_xy.txt")),
        p: None,
        ideals: vec![data("ideal_x.txt"), data("ideal_y.txt")],
        section_degree: 6,
        closure: true,
    };
    let r = fsplit(&settings(), &args);
    assert_eq!(r.exit_code(), 0, "{}", r.summary_lines());
    assert!(r.record("closure").is_some());
}

#[test]
fn corpus_is_reproducible_and_replayable() {
    let a = corpus(&settings(), 7, 5, 2);
    let b = corpus(&settings(), 7, 5, 2);
    assert_eq!(a.exit_code(), 0);
    assert_eq!(a.without_timing().to_text(), b.without_timing().to_text());
    assert_eq!(a.records.len(), 6);
    assert_eq!(corpus_replay(&settings(), &data("non_koszul_witness.toml")).exit_code(), 0);
}
