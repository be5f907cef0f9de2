use std::collections::HashMap;

use crate::formula::{Binding, FormulaError, NonQuantified, PathFormula, ProbExpr};
use crate::model::{Mdp, PropId};
use crate::rational::Rational;

/// A subformula with children replaced by node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    True,
    Prop { prop: PropId, comp: usize },
    And(usize, usize),
    Not(usize),
    Less(usize, usize),
    Const(Rational),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Next(usize),
    Until(usize, usize),
    BoundedUntil { l: usize, r: usize, k1: u32, k2: u32 },
}

impl NodeKind {
    pub fn is_bool(&self) -> bool {
        matches!(
            self,
            NodeKind::True
                | NodeKind::Prop { .. }
                | NodeKind::And(..)
                | NodeKind::Not(_)
                | NodeKind::Less(..)
        )
    }

    /// Probability operators, whose values are confined to [0,1].
    pub fn is_probability(&self) -> bool {
        matches!(
            self,
            NodeKind::Next(_) | NodeKind::Until(..) | NodeKind::BoundedUntil { .. }
        )
    }
}

/// Subformulas interned by structure; children always precede parents.
#[derive(Debug, Clone, Default)]
pub struct Dag {
    nodes: Vec<NodeKind>,
    text: Vec<String>,
    index: HashMap<NodeKind, usize>,
}

impl Dag {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kind(&self, i: usize) -> &NodeKind {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    /// Printed form of node `i` in formula syntax.
    pub fn text(&self, i: usize) -> &str {
        &self.text[i]
    }

    fn intern(&mut self, kind: NodeKind, text: impl FnOnce(&[String]) -> String) -> usize {
        if let Some(&i) = self.index.get(&kind) {
            return i;
        }
        let i = self.nodes.len();
        self.text.push(text(&self.text));
        self.index.insert(kind.clone(), i);
        self.nodes.push(kind);
        i
    }

    pub fn add_state(
        &mut self,
        phi: &NonQuantified,
        binding: &Binding,
        mdp: &Mdp,
    ) -> Result<usize, FormulaError> {
        Ok(match phi {
            NonQuantified::True => self.intern(NodeKind::True, |_| "true".into()),
            NonQuantified::Prop { name, var } => {
                let prop = mdp
                    .prop_id(name)
                    .ok_or_else(|| FormulaError::UnknownProposition { name: name.clone() })?;
                let comp = binding
                    .component(var)
                    .ok_or_else(|| FormulaError::UnboundStateVariable { name: var.clone() })?;
                self.intern(NodeKind::Prop { prop, comp }, |_| format!("{}({})", name, var))
            }
            NonQuantified::And(l, r) => {
                let (l, r) = (self.add_state(l, binding, mdp)?, self.add_state(r, binding, mdp)?);
                self.intern(NodeKind::And(l, r), |t| format!("({} & {})", t[l], t[r]))
            }
            NonQuantified::Not(x) => {
                let x = self.add_state(x, binding, mdp)?;
                self.not(x)
            }
            NonQuantified::Less(l, r) => {
                let (l, r) = (self.add_prob(l, binding, mdp)?, self.add_prob(r, binding, mdp)?);
                self.intern(NodeKind::Less(l, r), |t| format!("({} < {})", t[l], t[r]))
            }
        })
    }

    pub fn not(&mut self, x: usize) -> usize {
        self.intern(NodeKind::Not(x), |t| format!("!{}", t[x]))
    }

    pub fn add_prob(
        &mut self,
        p: &ProbExpr,
        binding: &Binding,
        mdp: &Mdp,
    ) -> Result<usize, FormulaError> {
        let binary = |dag: &mut Self,
                          l: &ProbExpr,
                          r: &ProbExpr,
                          make: fn(usize, usize) -> NodeKind,
                          op: &'static str|
         -> Result<usize, FormulaError> {
            let (l, r) = (dag.add_prob(l, binding, mdp)?, dag.add_prob(r, binding, mdp)?);
            Ok(dag.intern(make(l, r), |t| format!("({} {} {})", t[l], op, t[r])))
        };
        Ok(match p {
            ProbExpr::Const(c) => {
                self.intern(NodeKind::Const(c.clone()), |_| ProbExpr::Const(c.clone()).to_string())
            }
            ProbExpr::Add(l, r) => binary(self, l, r, NodeKind::Add, "+")?,
            ProbExpr::Sub(l, r) => binary(self, l, r, NodeKind::Sub, "-")?,
            ProbExpr::Mul(l, r) => binary(self, l, r, NodeKind::Mul, "*")?,
            ProbExpr::Prob(path) => match path.as_ref() {
                PathFormula::Next(x) => {
                    let x = self.add_state(x, binding, mdp)?;
                    self.intern(NodeKind::Next(x), |t| format!("P(X {})", t[x]))
                }
                PathFormula::Until(l, r) => {
                    let (l, r) = (self.add_state(l, binding, mdp)?, self.add_state(r, binding, mdp)?);
                    self.intern(NodeKind::Until(l, r), |t| format!("P({} U {})", t[l], t[r]))
                }
                PathFormula::BoundedUntil(l, r, k1, k2) => {
                    let (l, r) = (self.add_state(l, binding, mdp)?, self.add_state(r, binding, mdp)?);
                    self.bounded_family(l, r, *k1, *k2)
                }
            },
        })
    }

    /// Interns the windows `[k1-t, k2-t]` (lower bound clamped at 0) from
    /// `[0,0]` upwards and returns the node of `[k1,k2]`.
    fn bounded_family(&mut self, l: usize, r: usize, k1: u32, k2: u32) -> usize {
        let gap = k2 - k1;
        let mut last = 0;
        for upper in 0..=k2 {
            let lower = upper.saturating_sub(gap);
            last = self.intern(
                NodeKind::BoundedUntil { l, r, k1: lower, k2: upper },
                |t| format!("P({} U[{},{}] {})", t[l], lower, upper, t[r]),
            );
        }
        last
    }

    /// Node one step below a bounded window in its family.
    pub fn bounded_successor(&self, l: usize, r: usize, k1: u32, k2: u32) -> Option<usize> {
        if k2 == 0 {
            return None;
        }
        let kind = NodeKind::BoundedUntil {
            l,
            r,
            k1: k1.saturating_sub(1),
            k2: k2 - 1,
        };
        self.index.get(&kind).copied()
    }

    /// Value of a node built only from constants.
    pub fn constant_value(&self, i: usize) -> Option<Rational> {
        match &self.nodes[i] {
            NodeKind::Const(c) => Some(c.clone()),
            NodeKind::Add(l, r) => Some(self.constant_value(*l)? + self.constant_value(*r)?),
            NodeKind::Sub(l, r) => Some(self.constant_value(*l)? - self.constant_value(*r)?),
            NodeKind::Mul(l, r) => Some(self.constant_value(*l)? * self.constant_value(*r)?),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::m_coin;
    use crate::formula::parse_formula;

    fn dag_of(text: &str) -> (Dag, usize) {
        let f = parse_formula(text).unwrap();
        let b = Binding::of(&f).unwrap();
        let mut d = Dag::default();
        let root = d.add_state(&f.body, &b, &m_coin()).unwrap();
        (d, root)
    }

    #[test]
    fn equal_subterms_share_a_node() {
        let (d, _) = dag_of("exists sched s. forall st x(s). P(F a(x)) = P(F a(x))");
        let untils = d.nodes().iter().filter(|k| matches!(k, NodeKind::Until(..))).count();
        assert_eq!(untils, 1);
    }

    #[test]
    fn bounded_window_family() {
        let (d, _) = dag_of("exists sched s. forall st x(s). P(init(x) U[2,3] a(x)) < 1");
        let mut windows: Vec<(u32, u32)> = d
            .nodes()
            .iter()
            .filter_map(|k| match k {
                NodeKind::BoundedUntil { k1, k2, .. } => Some((*k1, *k2)),
                _ => None,
            })
            .collect();
        windows.sort();
        assert_eq!(windows, vec![(0, 0), (0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn children_precede_parents() {
        let (d, root) = dag_of(
            "exists sched s. forall st x(s). P(X (P(X a(x)) > 1/2)) + 1/4 < P(G init(x))",
        );
        assert_eq!(root, d.len() - 1);
        for (i, k) in d.nodes().iter().enumerate() {
            let kids: Vec<usize> = match k {
                NodeKind::And(a, b)
                | NodeKind::Less(a, b)
                | NodeKind::Add(a, b)
                | NodeKind::Sub(a, b)
                | NodeKind::Mul(a, b)
                | NodeKind::Until(a, b) => vec![*a, *b],
                NodeKind::BoundedUntil { l, r, .. } => vec![*l, *r],
                NodeKind::Not(a) | NodeKind::Next(a) => vec![*a],
                _ => vec![],
            };
            assert!(kids.iter().all(|&c| c < i));
        }
        assert!(d.text(root).contains("P(X "));
    }
}
