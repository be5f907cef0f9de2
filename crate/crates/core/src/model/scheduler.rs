use super::{ActionId, Mdp, ModelError, StateId};

/// A memoryless deterministic scheduler: one enabled action per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchedulerAssignment {
    choice: Vec<ActionId>,
}

impl SchedulerAssignment {
    /// Checks that `choice` is total and picks only enabled actions.
    pub fn new(mdp: &Mdp, choice: Vec<ActionId>) -> Result<Self, ModelError> {
        if choice.len() != mdp.num_states() {
            return Err(ModelError::SchedulerArity {
                expected: mdp.num_states(),
                got: choice.len(),
            });
        }
        for (s, a) in choice.iter().enumerate() {
            if !mdp.is_enabled(StateId(s), *a) {
                return Err(ModelError::IncompatibleScheduler {
                    state: mdp.state_name(StateId(s)).to_string(),
                    action: mdp
                        .action_names()
                        .get(a.0)
                        .cloned()
                        .unwrap_or_else(|| format!("#{}", a.0)),
                });
            }
        }
        Ok(SchedulerAssignment { choice })
    }

    /// Builds an assignment without checking it against a model.
    pub fn from_choices_unchecked(choice: Vec<ActionId>) -> Self {
        SchedulerAssignment { choice }
    }

    pub fn action(&self, s: StateId) -> ActionId {
        self.choice[s.0]
    }

    pub fn choices(&self) -> &[ActionId] {
        &self.choice
    }

    pub fn len(&self) -> usize {
        self.choice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choice.is_empty()
    }

    /// `(state name, action name)` pairs in state order.
    pub fn table<'m>(&self, mdp: &'m Mdp) -> Vec<(&'m str, &'m str)> {
        self.choice
            .iter()
            .enumerate()
            .map(|(s, a)| (mdp.state_name(StateId(s)), mdp.action_name(*a)))
            .collect()
    }
}

/// Streams every scheduler of `mdp` in lexicographic order: the first
/// declared state is the most significant digit, and each state's digits
/// follow its enabled-action order.
pub fn enumerate_schedulers(mdp: &Mdp) -> SchedulerIter<'_> {
    SchedulerIter {
        mdp,
        digits: Some(vec![0; mdp.num_states()]),
    }
}

/// Number of schedulers if it fits in a `u64`.
pub fn scheduler_count(mdp: &Mdp) -> Option<u64> {
    mdp.states()
        .try_fold(1u64, |acc, s| acc.checked_mul(mdp.choices(s).len() as u64))
}

/// The `index`-th scheduler in [`enumerate_schedulers`] order.
pub fn scheduler_at(mdp: &Mdp, mut index: u64) -> Option<SchedulerAssignment> {
    if index >= scheduler_count(mdp)? {
        return None;
    }
    let mut choice = vec![ActionId(0); mdp.num_states()];
    for s in (0..mdp.num_states()).rev() {
        let options = mdp.choices(StateId(s));
        let n = options.len() as u64;
        choice[s] = options[(index % n) as usize].action;
        index /= n;
    }
    Some(SchedulerAssignment { choice })
}

#[derive(Debug, Clone)]
pub struct SchedulerIter<'m> {
    mdp: &'m Mdp,
    digits: Option<Vec<usize>>,
}

impl Iterator for SchedulerIter<'_> {
    type Item = SchedulerAssignment;

    fn next(&mut self) -> Option<SchedulerAssignment> {
        let digits = self.digits.as_mut()?;
        let choice = digits
            .iter()
            .enumerate()
            .map(|(s, &d)| self.mdp.choices(StateId(s))[d].action)
            .collect();
        // advance the odometer, least significant digit last
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                self.digits = None;
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < self.mdp.choices(StateId(pos)).len() {
                break;
            }
            digits[pos] = 0;
        }
        Some(SchedulerAssignment { choice })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::parse_mdpx;
    use std::collections::HashSet;

    #[test]
    fn m_coin_has_two_schedulers() {
        let m = fixtures::m_coin();
        let all: Vec<_> = enumerate_schedulers(&m).collect();
        assert_eq!(all.len(), 2);
        assert_eq!(m.action_name(all[0].action(StateId(0))), "alpha");
        assert_eq!(m.action_name(all[1].action(StateId(0))), "beta");
    }

    #[test]
    fn indexed_access_matches_stream() {
        let m = parse_mdpx(
            "states: a b c\n\
             action a x: a 1\naction a y: b 1\n\
             action b x: a 1\naction b y: b 1\naction b z: c 1\n\
             action c x: c 1\n",
        )
        .unwrap();
        assert_eq!(scheduler_count(&m), Some(6));
        for (k, s) in enumerate_schedulers(&m).enumerate() {
            assert_eq!(scheduler_at(&m, k as u64), Some(s));
        }
        assert_eq!(scheduler_at(&m, 6), None);
    }

    #[test]
    fn deterministic_model_has_one_scheduler() {
        let m = fixtures::d_half();
        assert_eq!(enumerate_schedulers(&m).count(), 1);
    }

    #[test]
    fn counts_product_of_enabled_sizes() {
        let m = parse_mdpx(
            "states: a b c\n\
             action a x: a 1\naction a y: b 1\n\
             action b x: a 1\naction b y: b 1\naction b z: c 1\n\
             action c x: c 1\n",
        )
        .unwrap();
        let all: Vec<_> = enumerate_schedulers(&m).collect();
        assert_eq!(all.len(), 6);
        let first: Vec<&str> = all[0].table(&m).iter().map(|(_, a)| *a).collect();
        assert_eq!(first, vec!["x", "x", "x"]);
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 6);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn rejects_disabled_choice() {
        let m = fixtures::m_coin();
        let tau = m.action_id("tau").unwrap();
        let err = SchedulerAssignment::new(&m, vec![tau, tau, tau]).unwrap_err();
        assert!(matches!(err, ModelError::IncompatibleScheduler { .. }));
    }
}
