use std::collections::HashMap;

use num::One;

use super::{Distribution, Mdp, ModelError, PropId, SchedulerAssignment, StateId};

/// Discrete-time Markov chain with exactly stochastic rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dtmc {
    state_names: Vec<String>,
    rows: Vec<Distribution>,
    prop_names: Vec<String>,
    labels: Vec<Vec<PropId>>,
    prop_index: HashMap<String, PropId>,
}

impl Dtmc {
    /// Builds a chain; every row must sum to exactly 1 and every label must
    /// name a declared proposition.
    pub fn new(
        state_names: Vec<String>,
        rows: Vec<Distribution>,
        prop_names: Vec<String>,
        mut labels: Vec<Vec<PropId>>,
    ) -> Result<Self, ModelError> {
        if state_names.is_empty() {
            return Err(ModelError::NoStates);
        }
        assert_eq!(state_names.len(), rows.len(), "one row per state");
        assert_eq!(state_names.len(), labels.len(), "one label set per state");
        for (s, row) in rows.iter().enumerate() {
            if !row.total().is_one() {
                return Err(ModelError::RowSum {
                    line: 0,
                    state: state_names[s].clone(),
                    action: String::new(),
                    sum: row.total(),
                });
            }
            if let Some((t, _)) = row.entries().iter().find(|(t, _)| t.0 >= rows.len()) {
                return Err(ModelError::DanglingReference {
                    line: 0,
                    kind: "state",
                    name: format!("#{}", t.0),
                });
            }
        }
        for l in &mut labels {
            l.sort();
            l.dedup();
            if let Some(p) = l.iter().find(|p| p.0 >= prop_names.len()) {
                return Err(ModelError::DanglingReference {
                    line: 0,
                    kind: "proposition",
                    name: format!("#{}", p.0),
                });
            }
        }
        let prop_index = prop_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), PropId(i)))
            .collect();
        Ok(Dtmc {
            state_names,
            rows,
            prop_names,
            labels,
            prop_index,
        })
    }

    /// One unlabelled absorbing state: the 0-ary self-composition, used to
    /// evaluate closed formulas.
    pub fn unit() -> Self {
        Dtmc::new(
            vec!["()".to_string()],
            vec![Distribution::dirac(StateId(0))],
            Vec::new(),
            vec![Vec::new()],
        )
        .expect("unit chain is well formed")
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.rows.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    pub fn row(&self, s: StateId) -> &Distribution {
        &self.rows[s.0]
    }

    pub fn rows(&self) -> &[Distribution] {
        &self.rows
    }

    pub fn prop_names(&self) -> &[String] {
        &self.prop_names
    }

    pub fn prop_id(&self, name: &str) -> Option<PropId> {
        self.prop_index.get(name).copied()
    }

    pub fn labels(&self, s: StateId) -> &[PropId] {
        &self.labels[s.0]
    }

    pub fn has_label(&self, s: StateId, p: PropId) -> bool {
        self.labels[s.0].binary_search(&p).is_ok()
    }

    /// Characteristic vector of a proposition.
    pub fn indicator(&self, p: PropId) -> Vec<bool> {
        self.states().map(|s| self.has_label(s, p)).collect()
    }

    pub fn transition_count(&self) -> usize {
        self.rows.iter().map(Distribution::len).sum()
    }
}

/// The chain obtained by resolving every state's nondeterminism with the
/// scheduler's action; labels are carried over unchanged.
pub fn induce_dtmc(mdp: &Mdp, sched: &SchedulerAssignment) -> Result<Dtmc, ModelError> {
    if sched.len() != mdp.num_states() {
        return Err(ModelError::SchedulerArity {
            expected: mdp.num_states(),
            got: sched.len(),
        });
    }
    let mut rows = Vec::with_capacity(mdp.num_states());
    for s in mdp.states() {
        let a = sched.action(s);
        let dist = mdp
            .distribution(s, a)
            .ok_or_else(|| ModelError::IncompatibleScheduler {
                state: mdp.state_name(s).to_string(),
                action: mdp
                    .action_names()
                    .get(a.0)
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", a.0)),
            })?;
        rows.push(dist.clone());
    }
    Dtmc::new(
        mdp.state_names().to_vec(),
        rows,
        mdp.prop_names().to_vec(),
        mdp.states().map(|s| mdp.labels(s).to_vec()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{enumerate_schedulers, ActionId};
    use crate::rational::{one, ratio};

    fn sched(m: &Mdp, s0: &str) -> SchedulerAssignment {
        let a = m.action_id(s0).unwrap();
        let tau = m.action_id("tau").unwrap();
        SchedulerAssignment::new(m, vec![a, tau, tau]).unwrap()
    }

    #[test]
    fn beta_goes_to_s2() {
        let m = fixtures::m_coin();
        let d = induce_dtmc(&m, &sched(&m, "beta")).unwrap();
        assert_eq!(d.row(StateId(0)).prob(StateId(2)), one());
        assert_eq!(d.row(StateId(0)).len(), 1);
    }

    #[test]
    fn alpha_splits() {
        let m = fixtures::m_coin();
        let d = induce_dtmc(&m, &sched(&m, "alpha")).unwrap();
        assert_eq!(d.row(StateId(0)).prob(StateId(0)), ratio(1, 2));
        assert_eq!(d.row(StateId(0)).prob(StateId(1)), ratio(1, 2));
        let init = d.prop_id("init").unwrap();
        assert!(d.has_label(StateId(0), init));
    }

    #[test]
    fn rejects_incompatible() {
        let m = fixtures::m_coin();
        let bad = SchedulerAssignment::from_choices_unchecked(vec![ActionId(2); 3]);
        assert!(matches!(
            induce_dtmc(&m, &bad),
            Err(ModelError::IncompatibleScheduler { .. })
        ));
    }

    #[test]
    fn induced_rows_are_stochastic() {
        let m = fixtures::m_coin();
        for s in enumerate_schedulers(&m) {
            let d = induce_dtmc(&m, &s).unwrap();
            assert!(d.rows().iter().all(|r| r.total() == one()));
        }
    }
}
