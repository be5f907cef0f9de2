use std::collections::VecDeque;

use num::Zero;

use super::linear::FixedPointSystem;
use super::AnalysisError;
use crate::model::{Dtmc, StateId};
use crate::rational::{one, zero, Rational};

/// Predecessor lists of a chain.
pub fn predecessors(d: &Dtmc) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); d.num_states()];
    for s in d.states() {
        for t in d.row(s).support() {
            pred[t.0].push(s.0);
        }
    }
    pred
}

/// `(S_zero, S_yes)`: states that cannot reach a `phi2` state along `phi1`
/// states, and the `phi2` states.
pub fn qualitative_sets(d: &Dtmc, phi1: &[bool], phi2: &[bool]) -> (Vec<bool>, Vec<bool>) {
    let pred = predecessors(d);
    let mut reach = phi2.to_vec();
    let mut queue: VecDeque<usize> = (0..d.num_states()).filter(|&s| phi2[s]).collect();
    while let Some(t) = queue.pop_front() {
        for &s in &pred[t] {
            if !reach[s] && phi1[s] {
                reach[s] = true;
                queue.push_back(s);
            }
        }
    }
    (reach.iter().map(|r| !r).collect(), phi2.to_vec())
}

/// Exact probabilities of `phi1 U phi2` from every state.
pub fn until_probs(d: &Dtmc, phi1: &[bool], phi2: &[bool]) -> Result<Vec<Rational>, AnalysisError> {
    let (s_zero, s_yes) = qualitative_sets(d, phi1, phi2);
    let n = d.num_states();
    let mut sys = FixedPointSystem::new(n);
    for s in 0..n {
        if s_yes[s] {
            sys.rhs[s] = one();
        } else if !s_zero[s] {
            // Only phi1 states outside S_zero remain; successors in S_zero
            // contribute nothing.
            sys.rows[s] = d
                .row(StateId(s))
                .entries()
                .iter()
                .filter(|(t, _)| !s_zero[t.0])
                .map(|(t, p)| (t.0, p.clone()))
                .collect();
        }
    }
    sys.solve()
}

/// One-step expectation `sum_t P(s,t) v[t]`.
fn expect(d: &Dtmc, s: usize, v: &[Rational]) -> Rational {
    d.row(StateId(s))
        .entries()
        .iter()
        .filter(|(t, _)| !v[t.0].is_zero())
        .map(|(t, p)| p * &v[t.0])
        .sum()
}

/// Probabilities of `phi1 U[k1,k2] phi2`, unrolled bottom-up through the
/// intervals `[k1-t, k2-t]`.
pub fn bounded_until_probs(
    d: &Dtmc,
    phi1: &[bool],
    phi2: &[bool],
    k1: u32,
    k2: u32,
) -> Result<Vec<Rational>, AnalysisError> {
    if k1 > k2 {
        return Err(AnalysisError::BoundError { k1, k2 });
    }
    let n = d.num_states();
    let indicator = |b: bool| if b { one() } else { zero() };
    let mut v: Vec<Rational> = phi2.iter().map(|&b| indicator(b)).collect();
    // Unroll from [k1-k2 clamped, 0] upwards; lower bound first hits zero
    // after the upper bound has shrunk by k2-k1 steps.
    let gap = k2 - k1;
    for step in 1..=k2 {
        let lower = step.saturating_sub(gap);
        v = (0..n)
            .map(|s| {
                if lower == 0 {
                    if phi2[s] {
                        one()
                    } else if !phi1[s] {
                        zero()
                    } else {
                        expect(d, s, &v)
                    }
                } else if !phi1[s] {
                    zero()
                } else {
                    expect(d, s, &v)
                }
            })
            .collect();
    }
    Ok(v)
}

/// Probability of moving to a `phi` state in one step.
pub fn next_probs(d: &Dtmc, phi: &[bool]) -> Vec<Rational> {
    d.states()
        .map(|s| {
            d.row(s)
                .entries()
                .iter()
                .filter(|(t, _)| phi[t.0])
                .map(|(_, p)| p.clone())
                .sum()
        })
        .collect()
}

/// `iterations` rounds of value iteration for `phi1 U phi2`, started from
/// the `phi2` indicator.
pub fn until_probs_vi(d: &Dtmc, phi1: &[bool], phi2: &[bool], iterations: usize) -> Vec<Rational> {
    let n = d.num_states();
    let mut v: Vec<Rational> = phi2.iter().map(|&b| if b { one() } else { zero() }).collect();
    for _ in 0..iterations {
        v = (0..n)
            .map(|s| {
                if phi2[s] {
                    one()
                } else if !phi1[s] {
                    zero()
                } else {
                    expect(d, s, &v)
                }
            })
            .collect();
    }
    v
}
