//! Outcome of a check, with the quantifier instances that decide it.

use crate::formula::Binding;
use crate::model::{SchedulerAssignment, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictMode {
    /// The recorded instances make an existential prefix true.
    Witness,
    /// The recorded instances make a universal prefix false.
    Counterexample,
    None,
}

impl VerdictMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictMode::Witness => "witness",
            VerdictMode::Counterexample => "counterexample",
            VerdictMode::None => "none",
        }
    }
}

/// One decided quantifier instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Sched(SchedulerAssignment),
    State(StateId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub truth: bool,
    pub mode: VerdictMode,
    /// Instances for the leading scheduler variables of the decisive block.
    pub schedulers: Vec<(String, SchedulerAssignment)>,
    /// Instances for the state variables continuing that block.
    pub states: Vec<(String, StateId)>,
}

impl Verdict {
    /// Attaches names to the values chosen for the longest leading run of
    /// quantifiers whose kind decides `truth` (`exists` when true, `forall`
    /// when false).
    pub fn from_instances(truth: bool, binding: &Binding, path: Vec<Instance>) -> Self {
        let mode = match (path.is_empty(), truth) {
            (true, _) => VerdictMode::None,
            (false, true) => VerdictMode::Witness,
            (false, false) => VerdictMode::Counterexample,
        };
        let mut schedulers = Vec::new();
        let mut states = Vec::new();
        for inst in path {
            match inst {
                Instance::Sched(s) => {
                    let name = binding.sched_vars[schedulers.len()].1.clone();
                    schedulers.push((name, s));
                }
                Instance::State(s) => {
                    let name = binding.state_vars[states.len()].name.clone();
                    states.push((name, s));
                }
            }
        }
        Verdict {
            truth,
            mode,
            schedulers,
            states,
        }
    }

    /// The recorded instances in prefix order.
    pub fn instances(&self) -> Vec<Instance> {
        self.schedulers
            .iter()
            .map(|(_, s)| Instance::Sched(s.clone()))
            .chain(self.states.iter().map(|(_, s)| Instance::State(*s)))
            .collect()
    }
}
