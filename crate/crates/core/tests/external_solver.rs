//! Runs emitted scripts through the solver named by `HYPERPROB_SOLVER`.
//! Every test passes trivially when the variable is unset.

use std::path::PathBuf;

use hyperprob_core::casegen::{gen_password, gen_thread_sched};
use hyperprob_core::enumcheck::{check, replay, CheckOptions};
use hyperprob_core::fixtures::m_coin;
use hyperprob_core::formula::parse_formula;
use hyperprob_core::model::Mdp;
use hyperprob_core::smt::{encode_main, solve_encoded, solve_external};

fn solver() -> Option<PathBuf> {
    std::env::var_os("HYPERPROB_SOLVER").map(PathBuf::from)
}

fn agree(mdp: &Mdp, text: &str) {
    let Some(path) = solver() else {
        eprintln!("HYPERPROB_SOLVER not set; skipping");
        return;
    };
    let f = parse_formula(text).unwrap();
    let opts = CheckOptions::default();
    let cs = encode_main(mdp, &f, false, &opts).unwrap();
    let external = solve_external(&cs, &f, &path).unwrap();
    let eager = solve_encoded(mdp, &f, &cs, &opts).unwrap();
    assert_eq!(external.sat, eager.sat, "{}", text);
    let verdict = external.decoded.unwrap();
    assert_eq!(verdict.truth, check(mdp, &f, &opts).unwrap().truth, "{}", text);
    assert!(replay(mdp, &f, &verdict, &opts).unwrap(), "{}", text);
}

#[test]
fn coin_queries_match() {
    let m = m_coin();
    for text in [
        "exists sched s. exists st x(s). init(x) & P(F a(x)) = 1",
        "exists sched s. exists st x(s). init(x) & P(F a(x)) = 1/2",
        "forall sched s. forall st x(s). init(x) -> P(F a(x)) = 1",
        "exists sched s. forall st x(s). P(a(x) U<=2 !a(x)) + 1/4 >= 1/2",
        "exists sched s. exists sched t. exists st x(s). exists st y(t). init(x) & init(y) & P(X a(x)) < P(X a(y))",
    ] {
        agree(&m, text);
    }
}

#[test]
fn case_studies_match() {
    for spec in [gen_thread_sched(0, 1).unwrap(), gen_password(1).unwrap()] {
        agree(&spec.mdp, &spec.formula_text);
    }
}
