use super::assign::Model;
use super::emit::Names;
use super::system::{ConstraintSystem, Polarity, TruthTree};
use crate::formula::{Binding, Formula};
use crate::model::{SchedulerAssignment, StateId};
use crate::verdict::{Instance, Verdict};
use crate::Error;

/// Truth of the original formula when the system is satisfiable.
fn sat_truth(cs: &ConstraintSystem) -> bool {
    cs.polarity == Polarity::Direct
}

/// Verdict for an unsatisfiable system: no instances decide it.
pub fn unsat_verdict(cs: &ConstraintSystem, f: &Formula) -> Result<Verdict, Error> {
    let binding = Binding::of(f)?;
    Ok(Verdict::from_instances(!sat_truth(cs), &binding, Vec::new()))
}

/// Reads scheduler tables and the leading existential state choices off a
/// satisfying model. For a negated encoding these form a counterexample.
pub fn decode_witness(cs: &ConstraintSystem, model: &Model, f: &Formula) -> Result<Verdict, Error> {
    let binding = Binding::of(f)?;
    let names = Names::new(cs);
    let mut path = Vec::new();
    for j in 0..cs.sched_names.len() {
        let mut table = Vec::with_capacity(cs.base_states);
        for s in 0..cs.base_states {
            let a = model.choices.get(&(j, StateId(s))).ok_or_else(|| Error::IncompleteModel {
                var: names.choice_family(j, StateId(s)),
            })?;
            table.push(*a);
        }
        path.push(Instance::Sched(SchedulerAssignment::from_choices_unchecked(table)));
    }
    let mut node = &cs.truth;
    while let TruthTree::Exists(kids) = node {
        let mut chosen = None;
        for (s, kid) in kids.iter().enumerate() {
            match model.eval(&kid.to_expr()) {
                Some(true) => {
                    chosen = Some(s);
                    break;
                }
                Some(false) => {}
                None => {
                    return Err(Error::IncompleteModel {
                        var: format!("h_*_{}", cs.root),
                    })
                }
            }
        }
        let s = chosen.ok_or_else(|| Error::Solver("model violates the truth constraint".into()))?;
        path.push(Instance::State(StateId(s)));
        node = &kids[s];
    }
    Ok(Verdict::from_instances(sat_truth(cs), &binding, path))
}
