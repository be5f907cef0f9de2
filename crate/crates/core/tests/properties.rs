mod common;

use hyperprob_core::enumcheck::{check, replay, CheckOptions};
use hyperprob_core::formula::{parse_formula, Formula, NonQuantified, PathFormula, ProbExpr, QuantDecl, Quantifier};
use hyperprob_core::rational::ratio;
use hyperprob_core::smt::solve_eager;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prop_atom() -> impl Strategy<Value = NonQuantified> {
    prop_oneof![
        Just(NonQuantified::True),
        (prop::sample::select(vec!["init", "a", "b"]), prop::sample::select(vec!["x", "y"]))
            .prop_map(|(p, v)| NonQuantified::prop(p, v)),
    ]
}

fn propositional() -> impl Strategy<Value = NonQuantified> {
    prop_atom().prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| NonQuantified::and(l, r)),
            inner.prop_map(NonQuantified::not),
        ]
    })
}

fn path() -> impl Strategy<Value = PathFormula> {
    prop_oneof![
        propositional().prop_map(PathFormula::Next),
        (propositional(), propositional()).prop_map(|(l, r)| PathFormula::Until(l, r)),
        (propositional(), propositional(), 0u32..3, 0u32..3)
            .prop_map(|(l, r, a, b)| PathFormula::BoundedUntil(l, r, a.min(b), a.max(b))),
    ]
}

fn prob_expr() -> impl Strategy<Value = ProbExpr> {
    let leaf = prop_oneof![
        path().prop_map(ProbExpr::prob),
        (0i64..5, 1i64..5).prop_map(|(n, d)| ProbExpr::constant(ratio(n, d))),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ProbExpr::add(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| ProbExpr::sub(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| ProbExpr::mul(l, r)),
        ]
    })
}

fn body() -> impl Strategy<Value = NonQuantified> {
    let leaf = prop_oneof![
        propositional(),
        (prob_expr(), prob_expr()).prop_map(|(l, r)| NonQuantified::less(l, r)),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| NonQuantified::and(l, r)),
            inner.prop_map(NonQuantified::not),
        ]
    })
}

fn quantifier() -> impl Strategy<Value = Quantifier> {
    prop_oneof![Just(Quantifier::Exists), Just(Quantifier::Forall)]
}

/// Formulas over two state variables bound to one or two schedulers of the
/// same quantifier.
fn formula() -> impl Strategy<Value = Formula> {
    (quantifier(), any::<bool>(), quantifier(), quantifier(), body()).prop_map(|(sq, two, qx, qy, body)| {
        let mut prefix = vec![QuantDecl::Sched { q: sq, name: "s".into() }];
        let second = if two {
            prefix.push(QuantDecl::Sched { q: sq, name: "t".into() });
            "t"
        } else {
            "s"
        };
        prefix.push(QuantDecl::State { q: qx, name: "x".into(), sched: "s".into() });
        prefix.push(QuantDecl::State { q: qy, name: "y".into(), sched: second.into() });
        Formula::new(prefix, body)
    })
}

fn model(seed: u64) -> hyperprob_core::Mdp {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    common::random_mdp(&mut rng, seed.is_multiple_of(3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_formulas_parse_back(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&text).unwrap(), f, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_has_opposite_truth(f in formula(), seed in any::<u64>()) {
        let mdp = model(seed);
        let opts = CheckOptions::default();
        let v = check(&mdp, &f, &opts).unwrap();
        let d = check(&mdp, &f.dual(), &opts).unwrap();
        prop_assert_eq!(v.truth, !d.truth);
        prop_assert!(replay(&mdp, &f, &v, &opts).unwrap());
    }

    #[test]
    fn eager_engine_matches_enumeration(f in formula(), seed in any::<u64>(), prune in any::<bool>()) {
        let mdp = model(seed);
        let opts = CheckOptions::default();
        let reference = check(&mdp, &f, &opts).unwrap();
        let smt = solve_eager(&mdp, &f, prune, &opts).unwrap();
        prop_assert_eq!(smt.decoded.unwrap(), reference);
    }
}
