use std::collections::VecDeque;

use super::dag::{Dag, NodeKind};
use super::system::{
    Block, BoolExpr, ChoiceDomain, ChoiceLit, CmpOp, ConstraintSystem, Constraint, Polarity, Term,
    TruthTree, Var,
};
use crate::enumcheck::CheckOptions;
use crate::formula::{Binding, Formula, Quantifier};
use crate::model::{Mdp, StateId, TupleIndexer};
use crate::rational::{one, zero, Rational};
use crate::Error;

/// One joint action of all components at a composed state: its choice
/// guard and the product distribution over composed successors.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub guard: Vec<ChoiceLit>,
    pub succ: Vec<(usize, Rational)>,
}

struct Encoder<'a> {
    mdp: &'a Mdp,
    indexer: TupleIndexer,
    component_scheds: Vec<usize>,
    tuples: Vec<usize>,
    steps: Vec<Vec<Step>>,
    nonlinear: bool,
}

fn holds(tuple: usize, node: usize) -> BoolExpr {
    BoolExpr::Var(Var::Holds { tuple, node })
}

fn pr(tuple: usize, node: usize) -> Term {
    Term::Var(Var::Prob { tuple, node })
}

fn konst(c: Rational) -> Term {
    Term::Const(c)
}

fn and(xs: Vec<BoolExpr>) -> BoolExpr {
    BoolExpr::And(xs)
}

fn or(xs: Vec<BoolExpr>) -> BoolExpr {
    BoolExpr::Or(xs)
}

impl Encoder<'_> {
    /// Joint actions at composed state `t`; joint actions that give one
    /// scheduler variable two different actions at the same state can never
    /// be enabled and are left out.
    fn steps_at(&self, t: usize) -> Vec<Step> {
        let arity = self.indexer.arity();
        if arity == 0 {
            return vec![Step {
                guard: Vec::new(),
                succ: vec![(0, one())],
            }];
        }
        let states: Vec<StateId> = self.indexer.decode(t).0;
        let mut partial = vec![Step {
            guard: Vec::new(),
            succ: vec![(0, one())],
        }];
        for (i, &s) in states.iter().enumerate() {
            let sched = self.component_scheds[i];
            let mut next = Vec::new();
            for Step { guard, succ } in &partial {
                for choice in self.mdp.choices(s) {
                    let lit = ChoiceLit {
                        sched,
                        state: s,
                        action: choice.action,
                    };
                    let clash = guard
                        .iter()
                        .any(|g| g.sched == sched && g.state == s && g.action != choice.action);
                    if clash {
                        continue;
                    }
                    let mut g = guard.clone();
                    if !g.contains(&lit) {
                        g.push(lit);
                    }
                    let mut out = Vec::with_capacity(succ.len() * choice.dist.len());
                    for (prefix, p) in succ {
                        for (u, q) in choice.dist.entries() {
                            out.push((prefix * self.indexer.base() + u.0, p * q));
                        }
                    }
                    next.push(Step { guard: g, succ: out });
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|mut step| {
                step.succ.sort_by_key(|(u, _)| *u);
                step
            })
            .collect()
    }

    fn label(&self, t: usize, prop: crate::model::PropId, comp: usize) -> bool {
        self.mdp.has_label(self.indexer.component(t, comp), prop)
    }

    fn unconditional(t: usize, body: BoolExpr) -> Constraint {
        Constraint {
            tuple: t,
            guard: Vec::new(),
            body,
        }
    }

    fn prob_bounds(t: usize, node: usize) -> Constraint {
        Self::unconditional(
            t,
            and(vec![
                BoolExpr::cmp(CmpOp::Le, konst(zero()), pr(t, node)),
                BoolExpr::cmp(CmpOp::Le, pr(t, node), konst(one())),
            ]),
        )
    }

    /// Constraints giving node `node` its meaning in every encoded state.
    fn semantics(&mut self, dag: &Dag, node: usize) -> Block {
        let mut cs = Vec::new();
        let tuples = self.tuples.clone();
        for &t in &tuples {
            let h = || holds(t, node);
            match dag.kind(node).clone() {
                NodeKind::True => cs.push(Self::unconditional(t, h())),
                NodeKind::Prop { prop, comp } => {
                    let lit = if self.label(t, prop, comp) { h() } else { BoolExpr::not(h()) };
                    cs.push(Self::unconditional(t, lit));
                }
                NodeKind::And(a, b) => cs.push(Self::unconditional(
                    t,
                    or(vec![
                        and(vec![h(), holds(t, a), holds(t, b)]),
                        and(vec![
                            BoolExpr::not(h()),
                            or(vec![BoolExpr::not(holds(t, a)), BoolExpr::not(holds(t, b))]),
                        ]),
                    ]),
                )),
                NodeKind::Not(a) => cs.push(Self::unconditional(t, BoolExpr::xor(h(), holds(t, a)))),
                NodeKind::Less(a, b) => cs.push(Self::unconditional(
                    t,
                    or(vec![
                        and(vec![h(), BoolExpr::cmp(CmpOp::Lt, pr(t, a), pr(t, b))]),
                        and(vec![BoolExpr::not(h()), BoolExpr::cmp(CmpOp::Ge, pr(t, a), pr(t, b))]),
                    ]),
                )),
                NodeKind::Const(c) => cs.push(Self::unconditional(t, BoolExpr::eq(pr(t, node), konst(c)))),
                NodeKind::Add(a, b) => cs.push(Self::unconditional(
                    t,
                    BoolExpr::eq(pr(t, node), Term::Add(Box::new(pr(t, a)), Box::new(pr(t, b)))),
                )),
                NodeKind::Sub(a, b) => cs.push(Self::unconditional(
                    t,
                    BoolExpr::eq(pr(t, node), Term::Sub(Box::new(pr(t, a)), Box::new(pr(t, b)))),
                )),
                NodeKind::Mul(a, b) => {
                    let v = |x: usize| Var::Prob { tuple: t, node: x };
                    let rhs = match (dag.constant_value(a), dag.constant_value(b)) {
                        (Some(c), _) => Term::Lin(vec![(c, v(b))]),
                        (None, Some(c)) => Term::Lin(vec![(c, v(a))]),
                        (None, None) => {
                            self.nonlinear = true;
                            Term::Mul(Box::new(pr(t, a)), Box::new(pr(t, b)))
                        }
                    };
                    cs.push(Self::unconditional(t, BoolExpr::eq(pr(t, node), rhs)));
                }
                NodeKind::Next(x) => {
                    let ti = |u: usize| Var::ToInt { tuple: u, node: x };
                    cs.push(Self::unconditional(
                        t,
                        or(vec![
                            and(vec![BoolExpr::eq(Term::Var(ti(t)), konst(one())), holds(t, x)]),
                            and(vec![
                                BoolExpr::eq(Term::Var(ti(t)), konst(zero())),
                                BoolExpr::not(holds(t, x)),
                            ]),
                        ]),
                    ));
                    cs.push(Self::prob_bounds(t, node));
                    for step in self.step_list(t) {
                        let sum = step.succ.iter().map(|(u, p)| (p.clone(), ti(*u))).collect();
                        cs.push(Constraint {
                            tuple: t,
                            guard: step.guard.clone(),
                            body: BoolExpr::eq(pr(t, node), Term::Lin(sum)),
                        });
                    }
                }
                NodeKind::Until(a, b) => cs.extend(self.unbounded_until(t, node, a, b)),
                NodeKind::BoundedUntil { l, r, k1, k2 } => {
                    let lower = dag.bounded_successor(l, r, k1, k2);
                    cs.extend(self.bounded_until(t, node, l, r, k1, k2, lower))
                }
            }
        }
        Block { node, constraints: cs }
    }

    fn step_list(&mut self, t: usize) -> Vec<Step> {
        self.steps[t].clone()
    }

    fn unbounded_until(&mut self, t: usize, node: usize, a: usize, b: usize) -> Vec<Constraint> {
        let mut cs = vec![
            Self::unconditional(
                t,
                and(vec![
                    BoolExpr::implies(holds(t, b), BoolExpr::eq(pr(t, node), konst(one()))),
                    BoolExpr::implies(
                        and(vec![BoolExpr::not(holds(t, a)), BoolExpr::not(holds(t, b))]),
                        BoolExpr::eq(pr(t, node), konst(zero())),
                    ),
                ]),
            ),
            Self::prob_bounds(t, node),
        ];
        let d = |u: usize| Term::Var(Var::Dist { tuple: u, node: b });
        for step in self.step_list(t) {
            let sum = step
                .succ
                .iter()
                .map(|(u, p)| (p.clone(), Var::Prob { tuple: *u, node }))
                .collect();
            let progress = step
                .succ
                .iter()
                .map(|(u, _)| or(vec![holds(*u, b), BoolExpr::cmp(CmpOp::Gt, d(t), d(*u))]))
                .collect();
            cs.push(Constraint {
                tuple: t,
                guard: step.guard.clone(),
                body: BoolExpr::implies(
                    and(vec![holds(t, a), BoolExpr::not(holds(t, b))]),
                    and(vec![
                        BoolExpr::eq(pr(t, node), Term::Lin(sum)),
                        BoolExpr::implies(
                            BoolExpr::cmp(CmpOp::Gt, pr(t, node), konst(zero())),
                            or(progress),
                        ),
                    ]),
                ),
            });
        }
        cs
    }

    #[allow(clippy::too_many_arguments)]
    fn bounded_until(
        &mut self,
        t: usize,
        node: usize,
        l: usize,
        r: usize,
        k1: u32,
        k2: u32,
        lower: Option<usize>,
    ) -> Vec<Constraint> {
        let is = |c: Rational| BoolExpr::eq(pr(t, node), konst(c));
        let mut cs = vec![Self::prob_bounds(t, node)];
        let lower = match lower {
            None => {
                debug_assert_eq!(k2, 0);
                cs.push(Self::unconditional(
                    t,
                    and(vec![
                        BoolExpr::implies(holds(t, r), is(one())),
                        BoolExpr::implies(BoolExpr::not(holds(t, r)), is(zero())),
                    ]),
                ));
                return cs;
            }
            Some(lower) => lower,
        };
        let premise = if k1 == 0 {
            cs.push(Self::unconditional(
                t,
                and(vec![
                    BoolExpr::implies(holds(t, r), is(one())),
                    BoolExpr::implies(
                        and(vec![BoolExpr::not(holds(t, l)), BoolExpr::not(holds(t, r))]),
                        is(zero()),
                    ),
                ]),
            ));
            and(vec![holds(t, l), BoolExpr::not(holds(t, r))])
        } else {
            cs.push(Self::unconditional(
                t,
                BoolExpr::implies(BoolExpr::not(holds(t, l)), is(zero())),
            ));
            holds(t, l)
        };
        for step in self.step_list(t) {
            let sum = step
                .succ
                .iter()
                .map(|(u, p)| (p.clone(), Var::Prob { tuple: *u, node: lower }))
                .collect();
            cs.push(Constraint {
                tuple: t,
                guard: step.guard.clone(),
                body: BoolExpr::implies(premise.clone(), BoolExpr::eq(pr(t, node), Term::Lin(sum))),
            });
        }
        cs
    }

    /// Nested conjunctions/disjunctions over the state quantifiers.
    fn truth(
        &self,
        quantifiers: &[Quantifier],
        root: usize,
        encoded: &[bool],
        outside: bool,
    ) -> TruthTree {
        fn go(
            enc: &Encoder<'_>,
            qs: &[Quantifier],
            prefix: usize,
            root: usize,
            encoded: &[bool],
            outside: bool,
        ) -> TruthTree {
            match qs.split_first() {
                None => {
                    if encoded[prefix] {
                        TruthTree::Leaf(holds(prefix, root))
                    } else {
                        TruthTree::Leaf(BoolExpr::Const(outside))
                    }
                }
                Some((q, rest)) => {
                    let kids = (0..enc.indexer.base())
                        .map(|s| go(enc, rest, prefix * enc.indexer.base() + s, root, encoded, outside))
                        .collect();
                    match q {
                        Quantifier::Forall => TruthTree::Forall(kids),
                        Quantifier::Exists => TruthTree::Exists(kids),
                    }
                }
            }
        }
        go(self, quantifiers, 0, root, encoded, outside)
    }
}

/// Composed states satisfying a leading conjunction of propositions in an
/// implication body, closed under successors. `None` when the body has no
/// such antecedent.
fn prune_roots(enc: &Encoder<'_>, dag: &Dag, body: usize) -> Option<Vec<bool>> {
    let NodeKind::Not(inner) = dag.kind(body) else {
        return None;
    };
    let NodeKind::And(antecedent, _) = dag.kind(*inner) else {
        return None;
    };
    fn literal_conj(dag: &Dag, n: usize, enc: &Encoder<'_>, t: usize) -> Option<bool> {
        match dag.kind(n) {
            NodeKind::True => Some(true),
            NodeKind::Prop { prop, comp } => Some(enc.label(t, *prop, *comp)),
            NodeKind::And(a, b) => Some(literal_conj(dag, *a, enc, t)? && literal_conj(dag, *b, enc, t)?),
            _ => None,
        }
    }
    let count = enc.indexer.count();
    let mut keep = vec![false; count];
    let mut queue = VecDeque::new();
    for (t, slot) in keep.iter_mut().enumerate() {
        if literal_conj(dag, *antecedent, enc, t)? {
            *slot = true;
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        for step in enc.steps_at(t) {
            for (u, _) in step.succ {
                if !keep[u] {
                    keep[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    Some(keep)
}

/// Builds the constraint system for `f` on `mdp`. A universal scheduler
/// block is handled by encoding the dual formula ([`Polarity::Negated`]).
/// With `prune`, implication bodies whose antecedent is a conjunction of
/// propositions are encoded only on states reachable from tuples
/// satisfying the antecedent; elsewhere the body is trivially true.
pub fn encode_main(
    mdp: &Mdp,
    f: &Formula,
    prune: bool,
    opts: &CheckOptions,
) -> Result<ConstraintSystem, Error> {
    let binding = Binding::against(f, mdp)?;
    opts.admit(&binding)?;
    let polarity = match binding.homogeneous_sched_block() {
        Some(Quantifier::Exists) => Polarity::Direct,
        Some(Quantifier::Forall) => Polarity::Negated,
        None => return Err(Error::MixedSchedulerBlock),
    };
    let indexer = TupleIndexer::new(mdp.num_states(), binding.arity())?;
    let mut dag = Dag::default();
    let body = dag.add_state(&f.body, &binding, mdp)?;
    let root = match polarity {
        Polarity::Direct => body,
        Polarity::Negated => dag.not(body),
    };
    let state_quantifiers: Vec<Quantifier> = binding
        .state_vars
        .iter()
        .map(|v| match polarity {
            Polarity::Direct => v.q,
            Polarity::Negated => v.q.flip(),
        })
        .collect();

    let mut enc = Encoder {
        mdp,
        indexer,
        component_scheds: binding.component_scheds(),
        tuples: Vec::new(),
        steps: Vec::new(),
        nonlinear: false,
    };
    let encoded = if prune {
        prune_roots(&enc, &dag, body).unwrap_or_else(|| vec![true; indexer.count()])
    } else {
        vec![true; indexer.count()]
    };
    enc.tuples = (0..indexer.count()).filter(|&t| encoded[t]).collect();
    enc.steps = (0..indexer.count())
        .map(|t| if encoded[t] { enc.steps_at(t) } else { Vec::new() })
        .collect();

    let blocks: Vec<Block> = (0..dag.len()).map(|node| enc.semantics(&dag, node)).collect();
    let outside = polarity == Polarity::Direct;
    let truth = enc.truth(&state_quantifiers, root, &encoded, outside);

    let domains = (0..binding.sched_vars.len())
        .flat_map(|j| {
            mdp.states().map(move |s| ChoiceDomain {
                sched: j,
                state: s,
                actions: mdp.enabled(s).collect(),
            })
        })
        .collect();

    Ok(ConstraintSystem {
        polarity,
        sched_names: binding.sched_vars.iter().map(|(_, n)| n.clone()).collect(),
        state_quantifiers,
        component_scheds: enc.component_scheds.clone(),
        base_states: mdp.num_states(),
        state_names: mdp.state_names().to_vec(),
        action_names: mdp.action_names().to_vec(),
        tuple_count: indexer.count(),
        tuples: enc.tuples.clone(),
        dag,
        root,
        domains,
        blocks,
        truth,
        nonlinear: enc.nonlinear,
    })
}

/// Successor lists under each joint action, as used by the encoding.
pub(crate) fn steps_of(cs: &ConstraintSystem, mdp: &Mdp) -> Vec<Vec<Step>> {
    let enc = Encoder {
        mdp,
        indexer: TupleIndexer::new(cs.base_states, cs.arity()).expect("size checked at encoding"),
        component_scheds: cs.component_scheds.clone(),
        tuples: Vec::new(),
        steps: Vec::new(),
        nonlinear: false,
    };
    let mut out = vec![Vec::new(); cs.tuple_count];
    for &t in &cs.tuples {
        out[t] = enc.steps_at(t);
    }
    out
}
