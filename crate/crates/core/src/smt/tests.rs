use super::*;
use crate::enumcheck::{check, replay, CheckOptions};
use crate::fixtures::{d_half, m_coin};
use crate::formula::parse_formula;
use crate::model::Mdp;
use crate::rational::ratio;
use crate::verdict::VerdictMode;
use crate::Error;

fn encode(mdp: &Mdp, text: &str) -> ConstraintSystem {
    encode_main(mdp, &parse_formula(text).unwrap(), false, &CheckOptions::default()).unwrap()
}

fn solve(mdp: &Mdp, text: &str) -> SmtVerdict {
    solve_eager(mdp, &parse_formula(text).unwrap(), false, &CheckOptions::default()).unwrap()
}

fn agrees(mdp: &Mdp, text: &str) {
    let f = parse_formula(text).unwrap();
    let opts = CheckOptions::default();
    let smt = solve_eager(mdp, &f, false, &opts).unwrap().decoded.unwrap();
    let pruned = solve_eager(mdp, &f, true, &opts).unwrap().decoded.unwrap();
    let reference = check(mdp, &f, &opts).unwrap();
    assert_eq!(smt, reference, "{}", text);
    assert_eq!(pruned, reference, "{} (pruned)", text);
    assert!(replay(mdp, &f, &smt, &opts).unwrap());
}

#[test]
fn reach_one_is_sat_with_alpha() {
    let m = m_coin();
    let text = "exists sched s. exists st x(s). init(x) & P(F a(x)) = 1";
    let cs = encode(&m, text);
    assert_eq!(cs.polarity, Polarity::Direct);
    let v = solve(&m, text);
    assert!(v.sat);
    let model = v.model.unwrap();
    let names = Names::new(&cs);
    let alpha = m.action_id("alpha").unwrap();
    let s0 = m.state_id("s0").unwrap();
    assert_eq!(model.choices[&(0, s0)], alpha);
    assert_eq!(names.choice(&ChoiceLit { sched: 0, state: s0, action: alpha }), "ch_0_s0_alpha");
    let w = v.decoded.unwrap();
    assert!(w.truth);
    assert_eq!(w.mode, VerdictMode::Witness);
    assert_eq!(w.states, vec![("x".to_string(), s0)]);
    agrees(&m, text);
}

#[test]
fn universal_prefix_is_negated_with_beta_counterexample() {
    let m = m_coin();
    let text = "forall sched s. forall st x(s). init(x) -> P(F a(x)) = 1";
    assert_eq!(encode(&m, text).polarity, Polarity::Negated);
    let v = solve(&m, text);
    assert!(v.sat);
    let w = v.decoded.unwrap();
    assert!(!w.truth);
    assert_eq!(w.mode, VerdictMode::Counterexample);
    assert_eq!(w.schedulers[0].1.table(&m)[0], ("s0", "beta"));
    agrees(&m, text);
}

#[test]
fn half_is_unreachable_by_deterministic_schedulers() {
    let m = m_coin();
    let v = solve(&m, "exists sched s. exists st x(s). init(x) & P(F a(x)) = 1/2");
    assert!(!v.sat);
    assert!(!v.decoded.unwrap().truth);
}

#[test]
fn mixed_block_is_rejected() {
    let f = parse_formula("exists sched s. forall sched t. exists st x(s). forall st y(t). a(x) | a(y)").unwrap();
    let err = encode_main(&m_coin(), &f, false, &CheckOptions::default()).unwrap_err();
    assert_eq!(err, Error::MixedSchedulerBlock);
}

#[test]
fn negation_gives_xor_and_label_facts() {
    let cs = encode(&m_coin(), "exists sched s. forall st x(s). !a(x)");
    let per_node: Vec<usize> = cs.blocks.iter().map(|b| b.constraints.len()).collect();
    assert_eq!(per_node, vec![3, 3]);
    assert!(cs.blocks[1]
        .constraints
        .iter()
        .all(|c| matches!(c.body, BoolExpr::Xor(..))));
}

#[test]
fn next_sums_follow_the_guard() {
    let m = m_coin();
    let cs = encode(&m, "exists sched s. forall st x(s). P(X a(x)) = 1/2");
    let script = emit_smtlib2(&cs);
    assert!(script.contains("(=> ch_0_s0_alpha (= pr_s0_1 (+ (* (/ 1 2) ti_s0_0) (* (/ 1 2) ti_s1_0))))"));
    assert!(script.contains("(=> ch_0_s0_beta (= pr_s0_1 ti_s2_0))"));
    assert!(script.contains("(or ch_0_s0_alpha ch_0_s0_beta)"));
    assert!(script.contains("(not (and ch_0_s0_alpha ch_0_s0_beta))"));
}

#[test]
fn constants_are_pinned_in_every_state() {
    let cs = encode(&m_coin(), "exists sched s. forall st x(s). 1/3 < 1/2");
    let consts: Vec<&Block> = cs
        .blocks
        .iter()
        .filter(|b| matches!(cs.dag.kind(b.node), NodeKind::Const(_)))
        .collect();
    assert_eq!(consts.len(), 2);
    assert!(consts.iter().all(|b| b.constraints.len() == 3));
}

#[test]
fn until_values_follow_the_choice() {
    let m = m_coin();
    let f = parse_formula("exists sched s. exists st x(s). P(F a(x)) = 0").unwrap();
    let v = solve_eager(&m, &f, false, &CheckOptions::default()).unwrap();
    let model = v.model.unwrap();
    let cs = encode_main(&m, &f, false, &CheckOptions::default()).unwrap();
    let until = (0..cs.dag.len())
        .find(|&i| matches!(cs.dag.kind(i), NodeKind::Until(..)))
        .unwrap();
    // Lowest scheduler is alpha at s0, under which s0 reaches a surely; s2 never does.
    assert_eq!(model.num(Var::Prob { tuple: 0, node: until }), Some(&ratio(1, 1)));
    assert_eq!(model.num(Var::Prob { tuple: 2, node: until }), Some(&ratio(0, 1)));
    assert_eq!(v.decoded.unwrap().states[0].1 .0, 2);
}

#[test]
fn bounded_window_one_one_is_next() {
    let m = d_half();
    let f = parse_formula("exists sched s. exists st x(s). init(x) & P(true U[1,1] a(x)) = 1/2").unwrap();
    let v = solve_eager(&m, &f, false, &CheckOptions::default()).unwrap();
    assert!(v.sat);
    let cs = encode_main(&m, &f, false, &CheckOptions::default()).unwrap();
    let windows: Vec<(u32, u32)> = cs
        .dag
        .nodes()
        .iter()
        .filter_map(|n| match n {
            NodeKind::BoundedUntil { k1, k2, .. } => Some((*k1, *k2)),
            _ => None,
        })
        .collect();
    assert_eq!(windows, vec![(0, 0), (1, 1)]);
}

#[test]
fn bounded_family_is_fully_interned() {
    let cs = encode(&m_coin(), "exists sched s. forall st x(s). P(true U[2,3] a(x)) > 0");
    let windows: Vec<(u32, u32)> = cs
        .dag
        .nodes()
        .iter()
        .filter_map(|n| match n {
            NodeKind::BoundedUntil { k1, k2, .. } => Some((*k1, *k2)),
            _ => None,
        })
        .collect();
    assert_eq!(windows, vec![(0, 0), (0, 1), (1, 2), (2, 3)]);
}

#[test]
fn truth_tree_nests_in_declared_order() {
    let cs = encode(&m_coin(), "exists sched s. exists st x(s). forall st y(s). a(x) | a(y)");
    let TruthTree::Exists(outer) = &cs.truth else { panic!() };
    assert_eq!(outer.len(), 3);
    assert!(outer.iter().all(|k| matches!(k, TruthTree::Forall(v) if v.len() == 3)));
    assert_eq!(cs.truth.literal_count(), 9);
    let closed = encode(&m_coin(), "exists sched s. P(X true) = 1");
    assert!(matches!(closed.truth, TruthTree::Leaf(_)));
}

#[test]
fn agrees_with_enumeration_on_reference_queries() {
    let m = m_coin();
    for text in [
        "exists sched s. forall st x(s). P(F a(x)) > 0",
        "forall sched s. exists st x(s). P(G a(x)) = 1",
        "exists sched s. exists sched t. exists st x(s). exists st y(t). init(x) & init(y) & P(F a(x)) < P(F a(y))",
        "forall sched s. forall sched t. forall st x(s). forall st y(t). P(X a(x)) = P(X a(y))",
        "exists sched s. forall st x(s). P(a(x) U<=2 !a(x)) + 1/4 >= 1/2",
        "exists sched s. exists st x(s). P(X P(F a(x)) = 1) * 2 = 1",
        "exists sched s. exists st x(s). P(F[1,2] a(x)) * P(F a(x)) > 1/8",
        "forall sched s. P(X true) = 1",
        "exists sched s. exists st x(s). forall st y(s). (init(x) & a(y)) -> P(F a(x)) <= P(F a(y))",
    ] {
        agrees(&m, text);
    }
}

#[test]
fn decoding_requires_choices() {
    let m = m_coin();
    let f = parse_formula("exists sched s. exists st x(s). a(x)").unwrap();
    let cs = encode_main(&m, &f, false, &CheckOptions::default()).unwrap();
    let err = decode_witness(&cs, &Model::default(), &f).unwrap_err();
    assert!(matches!(err, Error::IncompleteModel { .. }));
}

#[test]
fn script_header_and_trailer() {
    let cs = encode(&m_coin(), "exists sched s. exists st x(s). a(x)");
    let script = emit_smtlib2(&cs);
    assert!(script.contains("; subformulas: 1\n"));
    assert!(script.contains(";   0: a(x)\n"));
    assert!(script.contains("(set-logic QF_LRA)"));
    assert!(script.ends_with("(check-sat)\n(get-model)\n"));
}

#[test]
fn solver_model_round_trip() {
    let m = m_coin();
    let f = parse_formula("exists sched s. exists st x(s). init(x) & P(F a(x)) = 1").unwrap();
    let cs = encode_main(&m, &f, false, &CheckOptions::default()).unwrap();
    let v = solve_encoded(&m, &f, &cs, &CheckOptions::default()).unwrap();
    let model = v.model.unwrap();
    let names = Names::new(&cs);
    let mut text = String::from("(\n");
    for (&(j, s), &a) in &model.choices {
        for b in m.enabled(s) {
            let lit = ChoiceLit { sched: j, state: s, action: b };
            text += &format!("  (define-fun {} () Bool {})\n", names.choice(&lit), a == b);
        }
    }
    for (v, val) in &model.values {
        let shown = match val {
            Value::Bool(b) => b.to_string(),
            Value::Num(q) => crate::rational::to_smtlib(q),
        };
        text += &format!("  (define-fun {} () {} {})\n", names.var(*v), if v.is_bool() { "Bool" } else { "Real" }, shown);
    }
    text += ")\n";
    let parsed = parse_model(&cs, &text).unwrap();
    assert_eq!(parsed, model);
    assert_eq!(decode_witness(&cs, &parsed, &f).unwrap(), v.decoded.unwrap());
}
