use super::{reach_equalities, CaseSpec, Family};
use crate::model::{validate_mdp, Mdp, RawModel};
use crate::rational::{one, ratio};

/// Which coin states receive the extra nondeterministic moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    S0,
    S01,
    S012,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::S0 => "s0",
            Tier::S01 => "s01",
            Tier::S012 => "s012",
        }
    }

    pub fn parse(text: &str) -> Option<Tier> {
        match text {
            "s0" | "0" => Some(Tier::S0),
            "s01" | "0-1" | "0,1" => Some(Tier::S01),
            "s012" | "0-1-2" | "0,1,2" => Some(Tier::S012),
            _ => None,
        }
    }

    fn sources(self) -> &'static [&'static str] {
        match self {
            Tier::S0 => &["c0"],
            Tier::S01 => &["c0", "c1"],
            Tier::S012 => &["c0", "c1", "c2"],
        }
    }
}

const COIN: [(&str, &str, &str); 7] = [
    ("c0", "c1", "c2"),
    ("c1", "c3", "c4"),
    ("c2", "c5", "c6"),
    ("c3", "c1", "d1"),
    ("c4", "d2", "d3"),
    ("c5", "d4", "d5"),
    ("c6", "d6", "c2"),
];

fn die_states() -> Vec<String> {
    COIN.iter()
        .map(|c| c.0.to_string())
        .chain((1..=6).map(|l| format!("d{}", l)))
        .collect()
}

/// Knuth-Yao die: seven coin states, six outcomes `d1..d6`, a reference
/// state `r` rolling a fair die directly, and six unused padding states.
/// `extra` states get one half/half move to every pair of the other die
/// states, declared ahead of their `ky` move.
fn build(extra: &[&str]) -> RawModel {
    let die = die_states();
    let mut raw = RawModel::default();
    let mut props = vec!["init".to_string(), "ref".to_string()];
    props.extend((1..=6).map(|l| format!("die{}", l)));
    raw.props = Some(props.into_iter().map(|p| (p, 0)).collect());
    for s in &die {
        raw.state(s);
    }
    raw.state("r");
    for k in 1..=6 {
        raw.state(&format!("pad{}", k));
    }
    let half = ratio(1, 2);
    for (s, a, b) in COIN {
        if extra.contains(&s) {
            let others: Vec<&String> = die.iter().filter(|d| *d != s).collect();
            for i in 0..others.len() {
                for j in i + 1..others.len() {
                    let action = format!("e_{}_{}", others[i], others[j]);
                    raw.action(s, &action, &[(others[i], half.clone()), (others[j], half.clone())]);
                }
            }
        }
        raw.action(s, "ky", &[(a, half.clone()), (b, half.clone())]);
    }
    for l in 1..=6 {
        let d = format!("d{}", l);
        raw.action(&d, "halt", &[(&d, one())]);
        raw.label(&d, &[&format!("die{}", l)]);
    }
    let sixth = ratio(1, 6);
    let faces: Vec<(String, _)> = (1..=6).map(|l| (format!("d{}", l), sixth.clone())).collect();
    let faces: Vec<(&str, _)> = faces.iter().map(|(s, p)| (s.as_str(), p.clone())).collect();
    raw.action("r", "roll", &faces);
    for k in 1..=6 {
        let p = format!("pad{}", k);
        raw.action(&p, "halt", &[(&p, one())]);
    }
    raw.label("c0", &["init"]);
    raw.label("r", &["ref"]);
    raw
}

/// The plain die without extra moves.
pub fn knuth_yao() -> Mdp {
    validate_mdp(&build(&[])).expect("die model is well formed")
}

/// Is there a scheduler under which the coin protocol started at `init`
/// matches the reference die on every face?
pub fn gen_conformance(tier: Tier) -> CaseSpec {
    let props: Vec<String> = (1..=6).map(|l| format!("die{}", l)).collect();
    let formula = format!(
        "exists sched s. forall st x(s). exists st y(s). init(x) -> (ref(y) & {})",
        reach_equalities(&props, "x", "y")
    );
    let reference = match tier {
        Tier::S0 => (20, 158),
        Tier::S01 => (20, 280),
        Tier::S012 => (20, 404),
    };
    CaseSpec::build(
        Family::Conformance,
        format!("pc_{}", tier.name()),
        &build(tier.sources()),
        formula,
        Some(reference),
    )
}
