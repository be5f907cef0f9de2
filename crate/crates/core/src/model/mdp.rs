use std::collections::{BTreeMap, HashMap};

use num::{BigUint, One, Signed, Zero};

use super::{ActionId, ModelError, PropId, StateId};
use crate::rational::{one, Rational};

/// A probability distribution over successor states. Entries are sorted by
/// state, never repeat a state, and never carry probability zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    entries: Vec<(StateId, Rational)>,
}

impl Distribution {
    /// Builds a distribution, merging duplicate successors and dropping zeros.
    pub fn new(entries: impl IntoIterator<Item = (StateId, Rational)>) -> Self {
        let mut merged: BTreeMap<StateId, Rational> = BTreeMap::new();
        for (s, p) in entries {
            *merged.entry(s).or_insert_with(Rational::zero) += p;
        }
        Distribution {
            entries: merged.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        }
    }

    pub fn dirac(s: StateId) -> Self {
        Distribution {
            entries: vec![(s, one())],
        }
    }

    pub fn entries(&self) -> &[(StateId, Rational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    pub fn prob(&self, s: StateId) -> Rational {
        self.entries
            .binary_search_by_key(&s, |(t, _)| *t)
            .map(|i| self.entries[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn support(&self) -> impl Iterator<Item = StateId> + '_ {
        self.entries.iter().map(|(s, _)| *s)
    }
}

/// One enabled action of a state together with its distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Choice {
    pub action: ActionId,
    pub dist: Distribution,
}

/// Explicit-state Markov decision process.
///
/// States, actions and propositions keep their declaration order; enabled
/// actions of each state are ordered by the global action alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mdp {
    state_names: Vec<String>,
    action_names: Vec<String>,
    prop_names: Vec<String>,
    choices: Vec<Vec<Choice>>,
    labels: Vec<Vec<PropId>>,
    state_index: HashMap<String, StateId>,
    prop_index: HashMap<String, PropId>,
}

impl Mdp {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_names.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a.0]
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.action_names
            .iter()
            .position(|n| n == name)
            .map(ActionId)
    }

    pub fn prop_names(&self) -> &[String] {
        &self.prop_names
    }

    pub fn prop_id(&self, name: &str) -> Option<PropId> {
        self.prop_index.get(name).copied()
    }

    pub fn choices(&self, s: StateId) -> &[Choice] {
        &self.choices[s.0]
    }

    pub fn enabled(&self, s: StateId) -> impl Iterator<Item = ActionId> + '_ {
        self.choices[s.0].iter().map(|c| c.action)
    }

    pub fn is_enabled(&self, s: StateId, a: ActionId) -> bool {
        self.choices[s.0].iter().any(|c| c.action == a)
    }

    pub fn distribution(&self, s: StateId, a: ActionId) -> Option<&Distribution> {
        self.choices[s.0]
            .iter()
            .find(|c| c.action == a)
            .map(|c| &c.dist)
    }

    pub fn labels(&self, s: StateId) -> &[PropId] {
        &self.labels[s.0]
    }

    pub fn has_label(&self, s: StateId, p: PropId) -> bool {
        self.labels[s.0].binary_search(&p).is_ok()
    }

    /// Number of stored `(state, action, successor)` entries.
    pub fn transition_count(&self) -> usize {
        self.choices
            .iter()
            .flat_map(|cs| cs.iter())
            .map(|c| c.dist.len())
            .sum()
    }

    /// Number of memoryless deterministic schedulers, `Π_s |enabled(s)|`.
    pub fn scheduler_space(&self) -> BigUint {
        self.choices
            .iter()
            .fold(BigUint::one(), |acc, cs| acc * BigUint::from(cs.len()))
    }

    pub fn is_deterministic(&self) -> bool {
        self.choices.iter().all(|cs| cs.len() == 1)
    }

    /// Renders the model in `.mdpx` syntax. Parsing the output yields an
    /// equal model.
    pub fn to_mdpx(&self) -> String {
        let mut out = String::new();
        out.push_str("states:");
        for name in &self.state_names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        out.push_str("props:");
        for name in &self.prop_names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        let labelled: Vec<String> = self
            .states()
            .filter(|s| !self.labels[s.0].is_empty())
            .map(|s| {
                let props: Vec<&str> = self.labels[s.0]
                    .iter()
                    .map(|p| self.prop_names[p.0].as_str())
                    .collect();
                format!("{}: {};", self.state_name(s), props.join(" "))
            })
            .collect();
        if !labelled.is_empty() {
            out.push_str("labels: ");
            out.push_str(&labelled.join(" "));
            out.push('\n');
        }
        for s in self.states() {
            for c in &self.choices[s.0] {
                let entries: Vec<String> = c
                    .dist
                    .entries()
                    .iter()
                    .map(|(t, p)| format!("{} {}", self.state_name(*t), p))
                    .collect();
                out.push_str(&format!(
                    "action {} {}: {}\n",
                    self.state_name(s),
                    self.action_name(c.action),
                    entries.join(", ")
                ));
            }
        }
        out
    }
}

/// Unvalidated model description, as read from a `.mdpx` file or built
/// programmatically. Line numbers are carried for error reporting; use 0
/// when there is no source file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawModel {
    pub states: Vec<(String, usize)>,
    /// Explicit proposition alphabet; when absent, the alphabet is every
    /// proposition mentioned in a label, in order of first mention.
    pub props: Option<Vec<(String, usize)>>,
    pub labels: Vec<RawLabel>,
    pub actions: Vec<RawAction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawLabel {
    pub state: String,
    pub props: Vec<String>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawAction {
    pub state: String,
    pub action: String,
    pub entries: Vec<(String, Rational)>,
    pub line: usize,
}

impl RawModel {
    pub fn state(&mut self, name: &str) -> &mut Self {
        self.states.push((name.to_string(), 0));
        self
    }

    pub fn label(&mut self, state: &str, props: &[&str]) -> &mut Self {
        self.labels.push(RawLabel {
            state: state.to_string(),
            props: props.iter().map(|p| p.to_string()).collect(),
            line: 0,
        });
        self
    }

    pub fn action(&mut self, state: &str, action: &str, entries: &[(&str, Rational)]) -> &mut Self {
        self.actions.push(RawAction {
            state: state.to_string(),
            action: action.to_string(),
            entries: entries
                .iter()
                .map(|(t, p)| (t.to_string(), p.clone()))
                .collect(),
            line: 0,
        });
        self
    }
}

/// Checks a raw description against the MDP well-formedness rules and
/// builds the validated model.
///
/// An action is enabled in a state iff its row sums to exactly 1; rows
/// summing to 0 are dropped, any other sum is rejected.
pub fn validate_mdp(raw: &RawModel) -> Result<Mdp, ModelError> {
    if raw.states.is_empty() {
        return Err(ModelError::NoStates);
    }
    let mut state_index = HashMap::new();
    let mut state_names = Vec::new();
    for (name, line) in &raw.states {
        if state_index
            .insert(name.clone(), StateId(state_names.len()))
            .is_some()
        {
            return Err(ModelError::Duplicate {
                line: *line,
                kind: "state",
                name: name.clone(),
            });
        }
        state_names.push(name.clone());
    }
    let lookup_state = |name: &str, line: usize| {
        state_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::DanglingReference {
                line,
                kind: "state",
                name: name.to_string(),
            })
    };

    let mut prop_names: Vec<String> = Vec::new();
    let mut prop_index: HashMap<String, PropId> = HashMap::new();
    let declared_props = raw.props.is_some();
    if let Some(props) = &raw.props {
        for (name, line) in props {
            if prop_index
                .insert(name.clone(), PropId(prop_names.len()))
                .is_some()
            {
                return Err(ModelError::Duplicate {
                    line: *line,
                    kind: "proposition",
                    name: name.clone(),
                });
            }
            prop_names.push(name.clone());
        }
    }

    let mut labels: Vec<Vec<PropId>> = vec![Vec::new(); state_names.len()];
    for label in &raw.labels {
        let s = lookup_state(&label.state, label.line)?;
        for p in &label.props {
            let id = match prop_index.get(p) {
                Some(id) => *id,
                None if declared_props => {
                    return Err(ModelError::DanglingReference {
                        line: label.line,
                        kind: "proposition",
                        name: p.clone(),
                    })
                }
                None => {
                    let id = PropId(prop_names.len());
                    prop_index.insert(p.clone(), id);
                    prop_names.push(p.clone());
                    id
                }
            };
            labels[s.0].push(id);
        }
    }
    for l in &mut labels {
        l.sort();
        l.dedup();
    }

    let mut action_names: Vec<String> = Vec::new();
    let mut rows: Vec<BTreeMap<ActionId, Choice>> = vec![BTreeMap::new(); state_names.len()];
    for act in &raw.actions {
        let s = lookup_state(&act.state, act.line)?;
        let a = match action_names.iter().position(|n| n == &act.action) {
            Some(i) => ActionId(i),
            None => {
                action_names.push(act.action.clone());
                ActionId(action_names.len() - 1)
            }
        };
        let mut entries = Vec::with_capacity(act.entries.len());
        for (target, p) in &act.entries {
            let t = lookup_state(target, act.line)?;
            if p.is_negative() || *p > one() {
                return Err(ModelError::InvalidProbability {
                    line: act.line,
                    value: p.clone(),
                });
            }
            entries.push((t, p.clone()));
        }
        let dist = Distribution::new(entries);
        let sum = dist.total();
        if sum.is_zero() {
            continue;
        }
        if sum != one() {
            return Err(ModelError::RowSum {
                line: act.line,
                state: act.state.clone(),
                action: act.action.clone(),
                sum,
            });
        }
        if rows[s.0].insert(a, Choice { action: a, dist }).is_some() {
            return Err(ModelError::Duplicate {
                line: act.line,
                kind: "action row",
                name: format!("{} {}", act.state, act.action),
            });
        }
    }

    let mut choices = Vec::with_capacity(state_names.len());
    for (i, row) in rows.into_iter().enumerate() {
        if row.is_empty() {
            return Err(ModelError::NoEnabledAction {
                state: state_names[i].clone(),
            });
        }
        choices.push(row.into_values().collect());
    }

    Ok(Mdp {
        state_names,
        action_names,
        prop_names,
        choices,
        labels,
        state_index,
        prop_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_mdpx;
    use crate::rational::ratio;

    use crate::fixtures::M_COIN;

    #[test]
    fn m_coin_enabled_sets() {
        let m = parse_mdpx(M_COIN).unwrap();
        let names = |s: &str| -> Vec<String> {
            m.enabled(m.state_id(s).unwrap())
                .map(|a| m.action_name(a).to_string())
                .collect()
        };
        assert_eq!(names("s0"), vec!["alpha", "beta"]);
        assert_eq!(names("s1"), vec!["tau"]);
        assert_eq!(names("s2"), vec!["tau"]);
        assert_eq!(m.transition_count(), 5);
        assert_eq!(m.scheduler_space(), BigUint::from(2u32));
    }

    #[test]
    fn half_row_is_rejected() {
        let err = parse_mdpx("states: s0 s1\naction s0 alpha: s1 1/2\n").unwrap_err();
        assert!(matches!(err, ModelError::RowSum { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn zero_rows_are_dropped_and_empty_states_rejected() {
        let mut raw = RawModel::default();
        raw.state("s0").state("s1");
        raw.action("s0", "a", &[("s1", ratio(0, 1))]);
        raw.action("s1", "a", &[("s1", ratio(1, 1))]);
        let err = validate_mdp(&raw).unwrap_err();
        assert_eq!(
            err,
            ModelError::NoEnabledAction {
                state: "s0".into()
            }
        );
    }

    #[test]
    fn dangling_references() {
        let err = parse_mdpx("states: s0\naction s0 a: s9 1\n").unwrap_err();
        assert!(matches!(err, ModelError::DanglingReference { kind: "state", .. }));
        let err = parse_mdpx("states: s0\nprops: a\nlabels: s0: b;\naction s0 a: s0 1\n").unwrap_err();
        assert!(matches!(
            err,
            ModelError::DanglingReference {
                kind: "proposition",
                line: 3,
                ..
            }
        ));
    }

    #[test]
    fn zero_probability_entries_are_not_stored() {
        let m = parse_mdpx("states: s0 s1\naction s0 a: s0 1, s1 0\naction s1 a: s1 1\n").unwrap();
        let d = m.distribution(StateId(0), ActionId(0)).unwrap();
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn mdpx_round_trip() {
        let m = parse_mdpx(M_COIN).unwrap();
        let again = parse_mdpx(&m.to_mdpx()).unwrap();
        assert_eq!(m, again);
    }
}
