//! Random small-model corpus and independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

use hyperprob_core::model::{enumerate_schedulers, induce_dtmc, validate_mdp, RawModel};
use hyperprob_core::rational::{ratio, to_f64};
use hyperprob_core::{Dtmc, Mdp, Rational};
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x5eed_2024;
pub const CORPUS_SIZE: usize = 200;

/// A model of the random corpus; acyclic models only loop at their last
/// (absorbing) state.
pub struct CorpusModel {
    pub mdp: Mdp,
    pub acyclic: bool,
}

/// Splits `den` units over `targets`, giving each chosen target at least one.
fn distribution(rng: &mut ChaCha8Rng, targets: &[usize]) -> Vec<(usize, Rational)> {
    let den: i64 = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=targets.len().min(den as usize));
    let mut picked: Vec<usize> = Vec::new();
    while picked.len() < k {
        let t = targets[rng.gen_range(0..targets.len())];
        if !picked.contains(&t) {
            picked.push(t);
        }
    }
    let mut units = vec![1i64; k];
    for _ in 0..(den - k as i64) {
        units[rng.gen_range(0..k)] += 1;
    }
    picked.into_iter().zip(units).map(|(t, u)| (t, ratio(u, den))).collect()
}

pub fn random_mdp(rng: &mut ChaCha8Rng, acyclic: bool) -> Mdp {
    let n = rng.gen_range(2..=4);
    let names: Vec<String> = (0..n).map(|i| format!("q{}", i)).collect();
    let mut raw = RawModel {
        props: Some(["init", "a", "b"].iter().map(|p| (p.to_string(), 0)).collect()),
        ..RawModel::default()
    };
    for s in &names {
        raw.state(s);
    }
    for i in 0..n {
        let targets: Vec<usize> = if acyclic {
            if i + 1 == n {
                vec![i]
            } else {
                (i + 1..n).collect()
            }
        } else {
            (0..n).collect()
        };
        let actions = if acyclic && i + 1 == n { 1 } else { rng.gen_range(1..=2) };
        for a in 0..actions {
            let dist = distribution(rng, &targets);
            let entries: Vec<(&str, Rational)> =
                dist.iter().map(|(t, p)| (names[*t].as_str(), p.clone())).collect();
            raw.action(&names[i], &format!("act{}", a), &entries);
        }
        let mut props = Vec::new();
        if i == 0 || rng.gen_bool(0.25) {
            props.push("init");
        }
        if rng.gen_bool(0.4) {
            props.push("a");
        }
        if rng.gen_bool(0.4) {
            props.push("b");
        }
        if !props.is_empty() {
            raw.label(&names[i], &props);
        }
    }
    validate_mdp(&raw).expect("corpus models are well formed")
}

pub fn corpus() -> Vec<CorpusModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|i| {
            let acyclic = i % 4 == 0;
            CorpusModel {
                mdp: random_mdp(&mut rng, acyclic),
                acyclic,
            }
        })
        .collect()
}

pub fn induced(mdp: &Mdp) -> Vec<Dtmc> {
    enumerate_schedulers(mdp)
        .map(|s| induce_dtmc(mdp, &s).unwrap())
        .collect()
}

pub fn label(d: &Dtmc, p: &str) -> Vec<bool> {
    match d.prop_id(p) {
        Some(id) => d.indicator(id),
        None => vec![false; d.num_states()],
    }
}

/// Plain Jacobi value iteration in floating point, started from 0.
pub fn value_iteration(d: &Dtmc, phi1: &[bool], phi2: &[bool], iterations: usize) -> Vec<f64> {
    let n = d.num_states();
    let mut x = vec![0.0; n];
    for _ in 0..iterations {
        x = (0..n)
            .map(|s| {
                if phi2[s] {
                    1.0
                } else if !phi1[s] {
                    0.0
                } else {
                    d.row(hyperprob_core::StateId(s))
                        .entries()
                        .iter()
                        .map(|(t, p)| to_f64(p) * x[t.0])
                        .sum()
                }
            })
            .collect();
    }
    x
}

fn is_absorbing(d: &Dtmc, s: usize) -> bool {
    let row = d.row(hyperprob_core::StateId(s)).entries();
    row.len() == 1 && row[0].0 .0 == s
}

/// Sums the probability of every finite path that satisfies the until;
/// paths end at absorbing states. Only valid when the only cycles are
/// absorbing self-loops.
pub fn path_until(d: &Dtmc, phi1: &[bool], phi2: &[bool], s: usize) -> Rational {
    if phi2[s] {
        return ratio(1, 1);
    }
    if !phi1[s] || is_absorbing(d, s) {
        return Rational::zero();
    }
    d.row(hyperprob_core::StateId(s))
        .entries()
        .iter()
        .map(|(t, p)| p * path_until(d, phi1, phi2, t.0))
        .sum()
}

/// Exact probability of `phi1 U[k1,k2] phi2` by enumerating all path
/// prefixes of length `k2`.
pub fn path_bounded(d: &Dtmc, phi1: &[bool], phi2: &[bool], k1: usize, k2: usize, s: usize) -> Rational {
    fn walk(
        d: &Dtmc,
        phi1: &[bool],
        phi2: &[bool],
        k1: usize,
        k2: usize,
        path: &mut Vec<usize>,
        p: Rational,
    ) -> Rational {
        let j = path.len() - 1;
        let s = path[j];
        if j >= k1 && phi2[s] && path[..j].iter().all(|&u| phi1[u]) {
            return p;
        }
        if j == k2 {
            return Rational::zero();
        }
        let mut acc = Rational::zero();
        for (t, q) in d.row(hyperprob_core::StateId(s)).entries() {
            path.push(t.0);
            acc += walk(d, phi1, phi2, k1, k2, path, &p * q);
            path.pop();
        }
        acc
    }
    walk(d, phi1, phi2, k1, k2, &mut vec![s], ratio(1, 1))
}

/// Bottom strongly connected components, by mutual reachability.
pub fn bottom_sccs(d: &Dtmc) -> Vec<Vec<usize>> {
    let n = d.num_states();
    let mut reach = vec![vec![false; n]; n];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![s];
        row[s] = true;
        while let Some(u) = stack.pop() {
            for (t, _) in d.row(hyperprob_core::StateId(u)).entries() {
                if !row[t.0] {
                    row[t.0] = true;
                    stack.push(t.0);
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (s, row) in reach.iter().enumerate() {
        let bottom = (0..n).all(|t| !row[t] || reach[t][s]);
        if bottom && !out.iter().any(|c| c.contains(&s)) {
            out.push((0..n).filter(|&t| row[t]).collect());
        }
    }
    out
}

/// Formula templates over the corpus propositions, all with a homogeneous
/// scheduler prefix.
pub const TEMPLATES: [&str; 10] = [
    "forall sched s. forall st x(s). forall st y(s). (init(x) & init(y)) -> P(F a(x)) = P(F a(y))",
    "exists sched s. exists sched t. exists st x(s). exists st y(t). init(x) & init(y) & P(F a(x)) > P(F a(y))",
    "exists sched s. forall st x(s). P(X a(x)) >= 1/2 | b(x)",
    "forall sched s. exists st x(s). P(a(x) U[1,3] b(x)) > 1/4",
    "exists sched s. exists st x(s). forall st y(s). P(F b(x)) + P(F b(y)) >= 2 * P(X a(y))",
    "exists sched s. exists st x(s). init(x) & P(G !b(x)) = 1",
    "forall sched s. forall st x(s). P(F P(X a(x)) = 1) > 0",
    "exists sched s. exists sched t. forall st x(s). exists st y(t). P(F<=2 a(x)) = P(F<=2 a(y))",
    "forall sched s. forall sched t. forall st x(s). forall st y(t). (init(x) & init(y)) -> P(F a(x)) - P(F a(y)) <= 1/2",
    "exists sched s. forall st x(s). a(x) -> P(b(x) U a(x)) >= P(X b(x))",
];
