//! Emitted scripts against committed snapshots. Set `HYPERPROB_BLESS=1`
//! to rewrite the snapshots after an intended encoding change.

use std::fs;
use std::path::PathBuf;

use hyperprob_core::casegen::{gen_conformance, Tier};
use hyperprob_core::enumcheck::CheckOptions;
use hyperprob_core::fixtures::m_coin;
use hyperprob_core::formula::parse_formula;
use hyperprob_core::smt::{emit_smtlib2, encode_main};
use sha2::{Digest, Sha256};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn bless() -> bool {
    std::env::var_os("HYPERPROB_BLESS").is_some()
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{:02x}", b)).collect()
}

#[test]
fn coin_script_matches_snapshot() {
    let f = parse_formula("exists sched s. forall st x(s). init(x) -> P(F a(x)) >= P(X a(x))").unwrap();
    let cs = encode_main(&m_coin(), &f, false, &CheckOptions::default()).unwrap();
    let script = emit_smtlib2(&cs);
    let path = golden("coin_reach_next.smt2");
    if bless() {
        fs::write(&path, &script).unwrap();
    }
    assert_eq!(script, fs::read_to_string(&path).unwrap());
}

#[test]
fn conformance_script_matches_digest() {
    let spec = gen_conformance(Tier::S0);
    let cs = encode_main(&spec.mdp, &spec.formula, false, &CheckOptions::default()).unwrap();
    let script = emit_smtlib2(&cs);
    let header: String = script.lines().take(5).map(|l| format!("{}\n", l)).collect();
    assert!(header.contains(&format!("; subformulas: {}\n", cs.dag.len())));
    let digest = format!("{}  {} bytes\n{}", hex(&Sha256::digest(script.as_bytes())), script.len(), header);
    let path = golden("pc_s0.sha256");
    if bless() {
        fs::write(&path, &digest).unwrap();
    }
    assert_eq!(digest, fs::read_to_string(&path).unwrap());
}
