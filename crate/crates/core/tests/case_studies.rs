use hyperprob_core::analysis::until_probs;
use hyperprob_core::casegen::{gen_conformance, gen_password, gen_thread_sched, gen_timing_attack, CaseSpec, Tier};
use hyperprob_core::enumcheck::{check, replay, CheckOptions};
use hyperprob_core::model::induce_dtmc;
use hyperprob_core::rational::ratio;
use hyperprob_core::smt::solve_eager;

fn both_engines(spec: &CaseSpec) -> bool {
    let opts = CheckOptions::default();
    let reference = check(&spec.mdp, &spec.formula, &opts).unwrap();
    let smt = solve_eager(&spec.mdp, &spec.formula, false, &opts)
        .unwrap()
        .decoded
        .unwrap();
    assert_eq!(smt, reference, "{}", spec.stem);
    assert!(replay(&spec.mdp, &spec.formula, &reference, &opts).unwrap());
    reference.truth
}

#[test]
fn timing_attack_leaks_at_one_bit() {
    assert!(!both_engines(&gen_timing_attack(1).unwrap()));
}

#[test]
fn password_leaks_at_one_character() {
    assert!(!both_engines(&gen_password(1).unwrap()));
}

#[test]
fn thread_scheduling_leaks_the_secret() {
    let spec = gen_thread_sched(0, 1).unwrap();
    assert!(spec.mdp.scheduler_space() <= 128u32.into());
    assert!(!both_engines(&spec));
}

#[test]
fn conformance_witness_reproduces_a_fair_die() {
    let spec = gen_conformance(Tier::S0);
    assert!(both_engines(&spec));
    let v = solve_eager(&spec.mdp, &spec.formula, false, &CheckOptions::default())
        .unwrap()
        .decoded
        .unwrap();
    let d = induce_dtmc(&spec.mdp, &v.schedulers[0].1).unwrap();
    let c0 = spec.mdp.state_id("c0").unwrap();
    let all = vec![true; d.num_states()];
    for l in 1..=6 {
        let target = d.indicator(d.prop_id(&format!("die{}", l)).unwrap());
        assert_eq!(until_probs(&d, &all, &target).unwrap()[c0.0], ratio(1, 6));
    }
}
