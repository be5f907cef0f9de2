use std::collections::{HashMap, HashSet, VecDeque};

use num::Zero;
use rayon::prelude::*;

use super::assign::{Model, Value};
use super::dag::NodeKind;
use super::decode::{decode_witness, unsat_verdict};
use super::encode::{encode_main, steps_of, Step};
use super::system::{BoolExpr, CmpOp, ConstraintSystem, Term, Var};
use crate::analysis::FixedPointSystem;
use crate::enumcheck::CheckOptions;
use crate::formula::Formula;
use crate::model::{scheduler_at, scheduler_count, Mdp};
use crate::rational::{one, Rational};
use crate::verdict::Verdict;
use crate::Error;

/// Outcome of deciding a constraint system.
#[derive(Debug, Clone, PartialEq)]
pub struct SmtVerdict {
    pub sat: bool,
    /// Satisfying assignment when `sat`.
    pub model: Option<Model>,
    /// Verdict on the original formula, polarity applied.
    pub decoded: Option<Verdict>,
}

/// Encodes `f` and decides the system by enumerating scheduler tuples.
pub fn solve_eager(mdp: &Mdp, f: &Formula, prune: bool, opts: &CheckOptions) -> Result<SmtVerdict, Error> {
    let cs = encode_main(mdp, f, prune, opts)?;
    solve_encoded(mdp, f, &cs, opts)
}

/// Decides an already encoded system. Choice variables are fixed one
/// scheduler tuple at a time, in lexicographic order of scheduler indices;
/// the remaining variables then follow block by block. The least
/// satisfying tuple is reported whatever the thread count.
pub fn solve_encoded(
    mdp: &Mdp,
    f: &Formula,
    cs: &ConstraintSystem,
    opts: &CheckOptions,
) -> Result<SmtVerdict, Error> {
    let count = scheduler_count(mdp)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or(Error::SchedulerSpaceTooLarge)?;
    let k = cs.sched_names.len();
    let total = count
        .checked_pow(k as u32)
        .ok_or(Error::SchedulerSpaceTooLarge)?;
    let solver = Eager::new(mdp, cs);
    let hit = opts.install(|| {
        (0..total)
            .into_par_iter()
            .map(|i| solver.try_tuple(i, count))
            .find_first(|r| !matches!(r, Ok(None)))
    });
    match hit {
        None => Ok(SmtVerdict {
            sat: false,
            model: None,
            decoded: Some(unsat_verdict(cs, f)?),
        }),
        Some(r) => {
            let model = r?.expect("find_first keeps only hits");
            let decoded = decode_witness(cs, &model, f)?;
            Ok(SmtVerdict {
                sat: true,
                model: Some(model),
                decoded: Some(decoded),
            })
        }
    }
}

struct Eager<'a> {
    mdp: &'a Mdp,
    cs: &'a ConstraintSystem,
    steps: Vec<Vec<Step>>,
    /// Per block: constraint positions grouped by composed state.
    by_tuple: Vec<HashMap<usize, Vec<usize>>>,
    /// Right operands of unbounded untils, each owning distance variables.
    targets: Vec<usize>,
}

impl<'a> Eager<'a> {
    fn new(mdp: &'a Mdp, cs: &'a ConstraintSystem) -> Self {
        let by_tuple = cs
            .blocks
            .iter()
            .map(|b| {
                let mut m: HashMap<usize, Vec<usize>> = HashMap::new();
                for (i, c) in b.constraints.iter().enumerate() {
                    m.entry(c.tuple).or_default().push(i);
                }
                m
            })
            .collect();
        let mut targets: Vec<usize> = cs
            .dag
            .nodes()
            .iter()
            .filter_map(|n| match n {
                NodeKind::Until(_, b) => Some(*b),
                _ => None,
            })
            .collect();
        targets.sort_unstable();
        targets.dedup();
        Eager {
            mdp,
            cs,
            steps: steps_of(cs, mdp),
            by_tuple,
            targets,
        }
    }

    fn try_tuple(&self, index: usize, count: usize) -> Result<Option<Model>, Error> {
        let k = self.cs.sched_names.len();
        let mut model = Model::default();
        let mut rest = index;
        for j in (0..k).rev() {
            let sched = scheduler_at(self.mdp, (rest % count) as u64).expect("index in range");
            rest /= count;
            for s in self.mdp.states() {
                model.choices.insert((j, s), sched.action(s));
            }
        }
        for (b, block) in self.cs.blocks.iter().enumerate() {
            if !self.assign_discrete(&mut model, b) {
                return Ok(None);
            }
            self.assign_numeric(&mut model, &block.constraints)?;
        }
        self.assign_distances(&mut model);
        let consistent = self.cs.blocks.iter().all(|b| {
            b.constraints
                .iter()
                .all(|c| model.guard(&c.guard) == Some(false) || model.eval(&c.body) == Some(true))
        });
        debug_assert!(consistent, "derived assignment violates a constraint");
        if consistent && model.eval(&self.cs.truth.to_expr()) == Some(true) {
            Ok(Some(model))
        } else {
            Ok(None)
        }
    }

    /// Truth and 0/1 variables, one composed state at a time: each takes
    /// the first value that leaves its state's active constraints open or
    /// satisfied.
    fn assign_discrete(&self, model: &mut Model, b: usize) -> bool {
        let block = &self.cs.blocks[b];
        let mut tuples: Vec<&usize> = self.by_tuple[b].keys().collect();
        tuples.sort_unstable();
        for t in tuples {
            let idx = &self.by_tuple[b][t];
            let mut unknown = Vec::new();
            for &i in idx {
                discrete_vars(&block.constraints[i].body, *t, model, &mut unknown);
            }
            unknown.dedup();
            for v in unknown {
                if model.values.contains_key(&v) {
                    continue;
                }
                let candidates = match v {
                    Var::Holds { .. } => [Value::Bool(true), Value::Bool(false)],
                    _ => [Value::Num(one()), Value::Num(Rational::zero())],
                };
                let ok = candidates.into_iter().any(|val| {
                    model.values.insert(v, val);
                    idx.iter().all(|&i| {
                        let c = &block.constraints[i];
                        model.guard(&c.guard) == Some(false) || model.eval(&c.body) != Some(false)
                    })
                });
                if !ok {
                    model.values.remove(&v);
                    return false;
                }
            }
        }
        true
    }

    /// Probability variables: the active equations form a fixed-point
    /// system, solved for its least solution.
    fn assign_numeric(&self, model: &mut Model, constraints: &[super::system::Constraint]) -> Result<(), Error> {
        let mut defs = Vec::new();
        for c in constraints {
            if model.guard(&c.guard) == Some(true) {
                definitions(model, &c.body, &mut defs);
            }
        }
        if defs.is_empty() {
            return Ok(());
        }
        let mut pos: HashMap<Var, usize> = HashMap::new();
        let mut order = Vec::new();
        for (v, lin, _) in &defs {
            for w in std::iter::once(v).chain(lin.iter().map(|(_, w)| w)) {
                pos.entry(*w).or_insert_with(|| {
                    order.push(*w);
                    order.len() - 1
                });
            }
        }
        let n = order.len();
        let mut sys = FixedPointSystem::new(n);
        let mut defined = vec![false; n];
        for (v, lin, k) in defs {
            let i = pos[&v];
            if defined[i] {
                continue;
            }
            defined[i] = true;
            sys.rows[i] = lin.into_iter().map(|(c, w)| (pos[&w], c)).collect();
            sys.rhs[i] = k;
        }
        // Variables that cannot reach a nonzero constant take value 0.
        let mut preds = vec![Vec::new(); n];
        for (i, row) in sys.rows.iter().enumerate() {
            for (j, c) in row {
                if !c.is_zero() {
                    preds[*j].push(i);
                }
            }
        }
        let mut live = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| !sys.rhs[i].is_zero()).collect();
        for &i in &queue {
            live[i] = true;
        }
        while let Some(j) = queue.pop_front() {
            for &i in &preds[j] {
                if !live[i] {
                    live[i] = true;
                    queue.push_back(i);
                }
            }
        }
        for i in 0..n {
            if live[i] {
                sys.rows[i].retain(|(j, _)| live[*j]);
            } else {
                sys.rows[i].clear();
            }
        }
        let x = sys.solve()?;
        for (v, q) in order.into_iter().zip(x) {
            model.values.insert(v, Value::Num(q));
        }
        Ok(())
    }

    /// Distance to the target set along the active joint actions.
    fn assign_distances(&self, model: &mut Model) {
        if self.targets.is_empty() {
            return;
        }
        let mut preds: HashMap<usize, Vec<usize>> = HashMap::new();
        for &t in &self.cs.tuples {
            if let Some(step) = self.steps[t].iter().find(|s| model.guard(&s.guard) == Some(true)) {
                for (u, _) in &step.succ {
                    preds.entry(*u).or_default().push(t);
                }
            }
        }
        let far = Rational::from_integer((self.cs.tuple_count as i64 + 1).into());
        for &b in &self.targets {
            let mut dist: HashMap<usize, usize> = HashMap::new();
            let mut queue = VecDeque::new();
            for &t in &self.cs.tuples {
                if model.bool(Var::Holds { tuple: t, node: b }) == Some(true) {
                    dist.insert(t, 0);
                    queue.push_back(t);
                }
            }
            while let Some(u) = queue.pop_front() {
                let du = dist[&u];
                for &t in preds.get(&u).map(Vec::as_slice).unwrap_or_default() {
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(t) {
                        e.insert(du + 1);
                        queue.push_back(t);
                    }
                }
            }
            for &t in &self.cs.tuples {
                let d = dist
                    .get(&t)
                    .map(|d| Rational::from_integer((*d as i64).into()))
                    .unwrap_or_else(|| far.clone());
                model.values.insert(Var::Dist { tuple: t, node: b }, Value::Num(d));
            }
        }
    }
}

/// Unassigned truth and 0/1 variables of composed state `t` in `e`.
fn discrete_vars(e: &BoolExpr, t: usize, model: &Model, out: &mut Vec<Var>) {
    let mut all = HashSet::new();
    super::system::collect_vars(e, &mut all);
    let mut found: Vec<Var> = all
        .into_iter()
        .filter(|v| {
            matches!(v, Var::Holds { tuple, .. } | Var::ToInt { tuple, .. } if *tuple == t)
                && !model.values.contains_key(v)
        })
        .collect();
    found.sort_unstable();
    out.extend(found);
}

/// `v = sum(c * w) + k`.
type Definition = (Var, Vec<(Rational, Var)>, Rational);

/// Equations `v = term` for unassigned `v` that are in force under the
/// current assignment.
fn definitions(model: &Model, e: &BoolExpr, out: &mut Vec<Definition>) {
    match e {
        BoolExpr::Cmp(CmpOp::Eq, Term::Var(v), rhs) if model.num(*v).is_none() => {
            if let Some((lin, k)) = model.linearize(rhs) {
                out.push((*v, lin, k));
            }
        }
        BoolExpr::Implies(p, q) => {
            if model.eval(p) == Some(true) {
                definitions(model, q, out);
            }
        }
        BoolExpr::And(xs) => xs.iter().for_each(|x| definitions(model, x, out)),
        _ => {}
    }
}
