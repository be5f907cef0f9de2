use rayon::prelude::*;

use super::eval::BodyEvaluator;
use crate::formula::{Binding, Formula, Quantifier};
use crate::model::{
    induce_dtmc, scheduler_at, scheduler_count, self_compose, Dtmc, Mdp, SchedulerAssignment,
    StateId, TupleIndexer,
};
use crate::verdict::{Instance, Verdict};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_sched_vars: usize,
    pub max_state_vars: usize,
    /// Worker threads for the outermost scheduler quantifier; `None` uses
    /// rayon's global pool.
    pub jobs: Option<usize>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            max_sched_vars: 3,
            max_state_vars: 3,
            jobs: None,
        }
    }
}

impl CheckOptions {
    pub(crate) fn admit(&self, binding: &Binding) -> Result<(), Error> {
        if binding.sched_vars.len() > self.max_sched_vars {
            return Err(Error::CapExceeded {
                what: "scheduler quantifiers",
                count: binding.sched_vars.len(),
                cap: self.max_sched_vars,
            });
        }
        if binding.state_vars.len() > self.max_state_vars {
            return Err(Error::CapExceeded {
                what: "state quantifiers",
                count: binding.state_vars.len(),
                cap: self.max_state_vars,
            });
        }
        Ok(())
    }

    /// Runs `f` inside a pool sized by `jobs`.
    pub(crate) fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.jobs {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            None => f(),
        }
    }
}

/// Builds the self-composition for one instance of every scheduler variable.
pub(crate) fn compose_for(
    mdp: &Mdp,
    binding: &Binding,
    scheds: &[SchedulerAssignment],
) -> Result<Dtmc, Error> {
    if binding.arity() == 0 {
        return Ok(Dtmc::unit());
    }
    let induced: Vec<Dtmc> = scheds
        .iter()
        .map(|s| induce_dtmc(mdp, s))
        .collect::<Result<_, _>>()?;
    let components: Vec<Dtmc> = binding
        .component_scheds()
        .into_iter()
        .map(|j| induced[j].clone())
        .collect();
    Ok(self_compose(&components)?)
}

/// Values forced for some quantifiers; unset entries range over their
/// whole domain.
#[derive(Debug, Clone, Default)]
struct Fixed {
    scheds: Vec<Option<SchedulerAssignment>>,
    states: Vec<Option<StateId>>,
}

/// Result of one quantifier level: its truth and, when the level
/// short-circuited, the deciding values from here downwards.
type Outcome = (bool, Option<Vec<Instance>>);

struct Search<'a> {
    mdp: &'a Mdp,
    formula: &'a Formula,
    binding: &'a Binding,
    fixed: Fixed,
    count: usize,
}

fn decides(q: Quantifier, truth: bool) -> bool {
    match q {
        Quantifier::Exists => truth,
        Quantifier::Forall => !truth,
    }
}

fn prepend(head: Instance, tail: Option<Vec<Instance>>) -> Option<Vec<Instance>> {
    let mut out = vec![head];
    out.extend(tail.unwrap_or_default());
    Some(out)
}

impl Search<'_> {
    fn domain(&self, level: usize) -> Vec<usize> {
        match &self.fixed.scheds[level] {
            Some(s) => vec![self.index_of(s)],
            None => (0..self.count).collect(),
        }
    }

    fn index_of(&self, s: &SchedulerAssignment) -> usize {
        // Mixed-radix position, first state most significant.
        self.mdp.states().fold(0, |acc, st| {
            let options = self.mdp.choices(st);
            let digit = options
                .iter()
                .position(|c| c.action == s.action(st))
                .unwrap_or(0);
            acc * options.len() + digit
        })
    }

    fn sched_level(
        &self,
        level: usize,
        chosen: &mut Vec<SchedulerAssignment>,
    ) -> Result<Outcome, Error> {
        if level == self.binding.sched_vars.len() {
            return self.state_part(chosen);
        }
        let q = self.binding.sched_vars[level].0;
        for k in self.domain(level) {
            let s = scheduler_at(self.mdp, k as u64).expect("index in range");
            chosen.push(s.clone());
            let (truth, path) = self.sched_level(level + 1, chosen)?;
            chosen.pop();
            if decides(q, truth) {
                return Ok((truth, prepend(Instance::Sched(s), path)));
            }
        }
        Ok((q == Quantifier::Forall, None))
    }

    /// The outermost scheduler level, split across worker threads; the
    /// lowest deciding index wins regardless of completion order.
    fn run(&self) -> Result<Outcome, Error> {
        if self.binding.sched_vars.is_empty() {
            return self.sched_level(0, &mut Vec::new());
        }
        let q = self.binding.sched_vars[0].0;
        let hit = self
            .domain(0)
            .into_par_iter()
            .map(|k| {
                let s = scheduler_at(self.mdp, k as u64).expect("index in range");
                let mut chosen = vec![s.clone()];
                self.sched_level(1, &mut chosen).map(|r| (s, r))
            })
            .find_first(|r| match r {
                Ok((_, (truth, _))) => decides(q, *truth),
                Err(_) => true,
            });
        match hit {
            None => Ok((q == Quantifier::Forall, None)),
            Some(r) => {
                let (s, (truth, path)) = r?;
                Ok((truth, prepend(Instance::Sched(s), path)))
            }
        }
    }

    fn state_part(&self, scheds: &[SchedulerAssignment]) -> Result<Outcome, Error> {
        let composed = compose_for(self.mdp, self.binding, scheds)?;
        let mut ev = BodyEvaluator::new(&composed, self.binding);
        let body = ev.truth(&self.formula.body)?;
        let indexer = TupleIndexer::new(self.mdp.num_states(), self.binding.arity())?;
        let mut tuple = Vec::with_capacity(self.binding.arity());
        Ok(self.state_level(0, &mut tuple, &indexer, &body))
    }

    fn state_level(
        &self,
        level: usize,
        tuple: &mut Vec<StateId>,
        indexer: &TupleIndexer,
        body: &[bool],
    ) -> Outcome {
        if level == self.binding.arity() {
            return (body[indexer.encode(tuple)], None);
        }
        let q = self.binding.state_vars[level].q;
        let domain: Vec<StateId> = match self.fixed.states[level] {
            Some(s) => vec![s],
            None => self.mdp.states().collect(),
        };
        for s in domain {
            tuple.push(s);
            let (truth, path) = self.state_level(level + 1, tuple, indexer, body);
            tuple.pop();
            if decides(q, truth) {
                return (truth, prepend(Instance::State(s), path));
            }
        }
        (q == Quantifier::Forall, None)
    }
}

fn search(
    mdp: &Mdp,
    f: &Formula,
    opts: &CheckOptions,
    fixed: Option<Vec<Instance>>,
) -> Result<(Binding, Outcome), Error> {
    let binding = Binding::against(f, mdp)?;
    opts.admit(&binding)?;
    let count = scheduler_count(mdp)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or(Error::SchedulerSpaceTooLarge)?;
    TupleIndexer::new(mdp.num_states(), binding.arity())?;
    let mut pinned = Fixed {
        scheds: vec![None; binding.sched_vars.len()],
        states: vec![None; binding.arity()],
    };
    let (mut si, mut ti) = (0, 0);
    for inst in fixed.unwrap_or_default() {
        match inst {
            Instance::Sched(s) => {
                SchedulerAssignment::new(mdp, s.choices().to_vec())?;
                pinned.scheds[si] = Some(s);
                si += 1;
            }
            Instance::State(s) => {
                pinned.states[ti] = Some(s);
                ti += 1;
            }
        }
    }
    let outcome = {
        let search = Search {
            mdp,
            formula: f,
            binding: &binding,
            fixed: pinned,
            count,
        };
        opts.install(|| search.run())?
    };
    Ok((binding, outcome))
}

/// Decides `f` on `mdp` by instantiating every quantifier.
pub fn check(mdp: &Mdp, f: &Formula, opts: &CheckOptions) -> Result<Verdict, Error> {
    let (binding, (truth, path)) = search(mdp, f, opts, None)?;
    Ok(Verdict::from_instances(truth, &binding, path.unwrap_or_default()))
}

/// Re-evaluates `f` with the verdict's recorded instances pinned; a valid
/// witness or counterexample reproduces the verdict's truth value.
pub fn replay(mdp: &Mdp, f: &Formula, verdict: &Verdict, opts: &CheckOptions) -> Result<bool, Error> {
    let (_, (truth, _)) = search(mdp, f, opts, Some(verdict.instances()))?;
    Ok(truth == verdict.truth)
}
