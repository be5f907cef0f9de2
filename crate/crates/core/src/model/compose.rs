use super::{Distribution, Dtmc, ModelError, PropId, StateId};
use crate::rational::Rational;

/// Upper bound on materialised composed state spaces.
pub const MAX_COMPOSED_STATES: usize = 4_000_000;

/// A state of the n-ary self-composition: one base state per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComposedState(pub Vec<StateId>);

/// Mixed-radix numbering of `S^n`. The first component is the most
/// significant digit, so numeric order is lexicographic tuple order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleIndexer {
    base: usize,
    arity: usize,
    count: usize,
}

impl TupleIndexer {
    pub fn new(base: usize, arity: usize) -> Result<Self, ModelError> {
        let count = u32::try_from(arity)
            .ok()
            .and_then(|a| base.checked_pow(a))
            .filter(|c| *c <= MAX_COMPOSED_STATES)
            .ok_or(ModelError::CompositionTooLarge {
                states: base,
                arity,
                limit: MAX_COMPOSED_STATES,
            })?;
        Ok(TupleIndexer { base, arity, count })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `base^arity`; 1 for the empty tuple.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn encode(&self, tuple: &[StateId]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple.iter().fold(0, |acc, s| acc * self.base + s.0)
    }

    pub fn decode(&self, mut index: usize) -> ComposedState {
        let mut out = vec![StateId(0); self.arity];
        for slot in out.iter_mut().rev() {
            *slot = StateId(index % self.base);
            index /= self.base;
        }
        ComposedState(out)
    }

    /// Component `i` of the tuple numbered `index`.
    pub fn component(&self, index: usize, i: usize) -> StateId {
        let shift = self.arity - 1 - i;
        StateId(index / self.base.pow(shift as u32) % self.base)
    }
}

/// Product of `rows[i]`, one distribution per component, as a distribution
/// over encoded composed states.
pub(crate) fn product_row(indexer: &TupleIndexer, rows: &[&Distribution]) -> Distribution {
    let mut acc: Vec<(usize, Rational)> = vec![(0, crate::rational::one())];
    for row in rows {
        let mut next = Vec::with_capacity(acc.len() * row.len());
        for (prefix, p) in &acc {
            for (t, q) in row.entries() {
                next.push((prefix * indexer.base() + t.0, p * q));
            }
        }
        acc = next;
    }
    Distribution::new(acc.into_iter().map(|(i, p)| (StateId(i), p)))
}

/// n-ary parallel composition of chains over one shared state space.
/// Proposition `a` of component `i` (1-based) becomes `a@i`.
pub fn self_compose(dtmcs: &[Dtmc]) -> Result<Dtmc, ModelError> {
    let first = dtmcs.first().ok_or(ModelError::ArityZero)?;
    let base = first.num_states();
    if dtmcs
        .iter()
        .any(|d| d.num_states() != base || d.prop_names() != first.prop_names())
    {
        return Err(ModelError::MismatchedStateSpace);
    }
    let indexer = TupleIndexer::new(base, dtmcs.len())?;
    let ap = first.prop_names();
    let prop_names: Vec<String> = (1..=dtmcs.len())
        .flat_map(|i| ap.iter().map(move |a| format!("{}@{}", a, i)))
        .collect();

    let mut state_names = Vec::with_capacity(indexer.count());
    let mut rows = Vec::with_capacity(indexer.count());
    let mut labels = Vec::with_capacity(indexer.count());
    for index in 0..indexer.count() {
        let ComposedState(tuple) = indexer.decode(index);
        let names: Vec<&str> = tuple.iter().map(|s| first.state_name(*s)).collect();
        state_names.push(format!("({})", names.join(",")));
        let comp_rows: Vec<&Distribution> = tuple
            .iter()
            .zip(dtmcs)
            .map(|(s, d)| d.row(*s))
            .collect();
        rows.push(product_row(&indexer, &comp_rows));
        labels.push(
            tuple
                .iter()
                .zip(dtmcs)
                .enumerate()
                .flat_map(|(i, (s, d))| d.labels(*s).iter().map(move |p| PropId(i * ap.len() + p.0)))
                .collect(),
        );
    }
    Dtmc::new(state_names, rows, prop_names, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{enumerate_schedulers, induce_dtmc};
    use crate::rational::{one, ratio};

    fn alpha_chain() -> Dtmc {
        let m = fixtures::m_coin();
        let s = enumerate_schedulers(&m).next().unwrap();
        induce_dtmc(&m, &s).unwrap()
    }

    #[test]
    fn unary_composition_renames() {
        let d = alpha_chain();
        let c = self_compose(std::slice::from_ref(&d)).unwrap();
        assert_eq!(c.num_states(), 3);
        assert_eq!(c.prop_names(), &["init@1".to_string(), "a@1".to_string()]);
        assert_eq!(c.rows(), d.rows());
        assert!(c.has_label(StateId(1), c.prop_id("a@1").unwrap()));
    }

    #[test]
    fn binary_edge_probability() {
        let d = alpha_chain();
        let c = self_compose(&[d.clone(), d]).unwrap();
        let ix = TupleIndexer::new(3, 2).unwrap();
        let from = ix.encode(&[StateId(0), StateId(0)]);
        let to = ix.encode(&[StateId(0), StateId(1)]);
        assert_eq!(c.row(StateId(from)).prob(StateId(to)), ratio(1, 4));
        assert_eq!(c.state_name(StateId(to)), "(s0,s1)");
    }

    #[test]
    fn d_half_absorbing_pair() {
        let m = fixtures::d_half();
        let s = enumerate_schedulers(&m).next().unwrap();
        let d = induce_dtmc(&m, &s).unwrap();
        let c = self_compose(&[d.clone(), d]).unwrap();
        let ix = TupleIndexer::new(3, 2).unwrap();
        let u1 = m.state_id("u1").unwrap();
        let u2 = m.state_id("u2").unwrap();
        let pair = StateId(ix.encode(&[u1, u2]));
        assert_eq!(c.row(pair).entries(), &[(pair, one())]);
    }

    #[test]
    fn arity_zero_is_an_error() {
        assert_eq!(self_compose(&[]), Err(ModelError::ArityZero));
    }

    #[test]
    fn indexer_round_trip() {
        let ix = TupleIndexer::new(4, 3).unwrap();
        for i in 0..ix.count() {
            let t = ix.decode(i);
            assert_eq!(ix.encode(&t.0), i);
            for c in 0..3 {
                assert_eq!(ix.component(i, c), t.0[c]);
            }
        }
        assert_eq!(TupleIndexer::new(5, 0).unwrap().count(), 1);
        assert!(TupleIndexer::new(1000, 4).is_err());
    }
}
