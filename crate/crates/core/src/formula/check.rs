use std::collections::HashMap;

use super::ast::{Formula, QuantDecl, Quantifier};
use super::FormulaError;
use crate::model::Mdp;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVar {
    pub q: Quantifier,
    pub name: String,
    /// Position of the binding scheduler variable in the scheduler prefix.
    pub sched: usize,
}

/// Resolved quantifier prefix: scheduler variables in order, state
/// variables in order, and the component index of each state variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub sched_vars: Vec<(Quantifier, String)>,
    pub state_vars: Vec<StateVar>,
    components: HashMap<String, usize>,
}

impl Binding {
    /// Checks scoping and quantifier order.
    pub fn of(f: &Formula) -> Result<Self, FormulaError> {
        let mut sched_vars: Vec<(Quantifier, String)> = Vec::new();
        let mut state_vars: Vec<StateVar> = Vec::new();
        for d in &f.prefix {
            if sched_vars.iter().any(|(_, n)| n == d.name())
                || state_vars.iter().any(|v| v.name == d.name())
            {
                return Err(FormulaError::DuplicateVariable {
                    name: d.name().to_string(),
                });
            }
            match d {
                QuantDecl::Sched { q, name } => {
                    if let Some(first) = state_vars.first() {
                        return Err(FormulaError::QuantifierOrderViolation {
                            state: first.name.clone(),
                            sched: name.clone(),
                        });
                    }
                    sched_vars.push((*q, name.clone()));
                }
                QuantDecl::State { q, name, sched } => {
                    let idx = match sched_vars.iter().position(|(_, n)| n == sched) {
                        Some(i) => i,
                        None if f.sched_decls().any(|(_, n)| n == sched) => {
                            return Err(FormulaError::QuantifierOrderViolation {
                                state: name.clone(),
                                sched: sched.clone(),
                            })
                        }
                        None => {
                            return Err(FormulaError::UnboundSchedulerVariable {
                                name: sched.clone(),
                            })
                        }
                    };
                    state_vars.push(StateVar {
                        q: *q,
                        name: name.clone(),
                        sched: idx,
                    });
                }
            }
        }
        let components: HashMap<String, usize> = state_vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), i))
            .collect();
        if let Some((_, var)) = f.body.props().into_iter().find(|(_, v)| !components.contains_key(*v)) {
            return Err(FormulaError::UnboundStateVariable {
                name: var.to_string(),
            });
        }
        Ok(Binding {
            sched_vars,
            state_vars,
            components,
        })
    }

    /// [`Binding::of`] plus a check that every proposition exists in `mdp`.
    pub fn against(f: &Formula, mdp: &Mdp) -> Result<Self, FormulaError> {
        let b = Self::of(f)?;
        if let Some((name, _)) = f.body.props().into_iter().find(|(n, _)| mdp.prop_id(n).is_none()) {
            return Err(FormulaError::UnknownProposition {
                name: name.to_string(),
            });
        }
        Ok(b)
    }

    /// Self-composition component that state variable `var` ranges over.
    pub fn component(&self, var: &str) -> Option<usize> {
        self.components.get(var).copied()
    }

    /// Arity of the self-composition.
    pub fn arity(&self) -> usize {
        self.state_vars.len()
    }

    /// Scheduler variable index driving each component.
    pub fn component_scheds(&self) -> Vec<usize> {
        self.state_vars.iter().map(|v| v.sched).collect()
    }

    /// `Some(q)` when every scheduler quantifier is `q` (vacuously `Exists`
    /// for an empty scheduler prefix).
    pub fn homogeneous_sched_block(&self) -> Option<Quantifier> {
        let first = self.sched_vars.first().map_or(Quantifier::Exists, |(q, _)| *q);
        self.sched_vars
            .iter()
            .all(|(q, _)| *q == first)
            .then_some(first)
    }
}

pub fn check_well_formed(f: &Formula) -> Result<(), FormulaError> {
    Binding::of(f).map(|_| ())
}

/// `(scheduler quantifiers, state quantifiers)`.
pub fn count_quantifiers(f: &Formula) -> (usize, usize) {
    (f.sched_decls().count(), f.state_decls().count())
}
