use std::collections::HashMap;
use std::rc::Rc;

use crate::analysis::{bounded_until_probs, next_probs, until_probs};
use crate::formula::{Binding, NonQuantified, PathFormula, ProbExpr};
use crate::model::{Dtmc, StateId};
use crate::rational::Rational;
use crate::Error;

/// Evaluates quantifier-free subformulas on every state of a
/// self-composition at once, caching each distinct subformula.
pub struct BodyEvaluator<'a, 'f> {
    composed: &'a Dtmc,
    binding: &'a Binding,
    truth: HashMap<&'f NonQuantified, Rc<Vec<bool>>>,
    probs: HashMap<&'f ProbExpr, Rc<Vec<Rational>>>,
}

impl<'a, 'f> BodyEvaluator<'a, 'f> {
    pub fn new(composed: &'a Dtmc, binding: &'a Binding) -> Self {
        BodyEvaluator {
            composed,
            binding,
            truth: HashMap::new(),
            probs: HashMap::new(),
        }
    }

    /// Truth of `phi` in every composed state.
    pub fn truth(&mut self, phi: &'f NonQuantified) -> Result<Rc<Vec<bool>>, Error> {
        if let Some(v) = self.truth.get(phi) {
            return Ok(v.clone());
        }
        let n = self.composed.num_states();
        let v: Vec<bool> = match phi {
            NonQuantified::True => vec![true; n],
            NonQuantified::Prop { name, var } => {
                let comp = self.binding.component(var).ok_or_else(|| {
                    crate::formula::FormulaError::UnboundStateVariable { name: var.clone() }
                })?;
                match self.composed.prop_id(&format!("{}@{}", name, comp + 1)) {
                    Some(p) => self.composed.indicator(p),
                    None => vec![false; n],
                }
            }
            NonQuantified::And(l, r) => {
                let (l, r) = (self.truth(l)?, self.truth(r)?);
                l.iter().zip(r.iter()).map(|(a, b)| *a && *b).collect()
            }
            NonQuantified::Not(x) => self.truth(x)?.iter().map(|b| !b).collect(),
            NonQuantified::Less(l, r) => {
                let (l, r) = (self.prob(l)?, self.prob(r)?);
                l.iter().zip(r.iter()).map(|(a, b)| a < b).collect()
            }
        };
        let v = Rc::new(v);
        self.truth.insert(phi, v.clone());
        Ok(v)
    }

    /// Value of `p` in every composed state.
    pub fn prob(&mut self, p: &'f ProbExpr) -> Result<Rc<Vec<Rational>>, Error> {
        if let Some(v) = self.probs.get(p) {
            return Ok(v.clone());
        }
        let n = self.composed.num_states();
        let zip = |l: &[Rational], r: &[Rational], f: fn(&Rational, &Rational) -> Rational| {
            l.iter().zip(r).map(|(a, b)| f(a, b)).collect::<Vec<_>>()
        };
        let v: Vec<Rational> = match p {
            ProbExpr::Const(c) => vec![c.clone(); n],
            ProbExpr::Add(l, r) => zip(&self.prob(l)?, &self.prob(r)?, |a, b| a + b),
            ProbExpr::Sub(l, r) => zip(&self.prob(l)?, &self.prob(r)?, |a, b| a - b),
            ProbExpr::Mul(l, r) => zip(&self.prob(l)?, &self.prob(r)?, |a, b| a * b),
            ProbExpr::Prob(path) => match path.as_ref() {
                PathFormula::Next(phi) => next_probs(self.composed, &self.truth(phi)?),
                PathFormula::Until(l, r) => {
                    let (l, r) = (self.truth(l)?, self.truth(r)?);
                    until_probs(self.composed, &l, &r)?
                }
                PathFormula::BoundedUntil(l, r, k1, k2) => {
                    let (l, r) = (self.truth(l)?, self.truth(r)?);
                    bounded_until_probs(self.composed, &l, &r, *k1, *k2)?
                }
            },
        };
        let v = Rc::new(v);
        self.probs.insert(p, v.clone());
        Ok(v)
    }
}

/// Truth of `body` at one composed state.
pub fn eval_body(
    composed: &Dtmc,
    binding: &Binding,
    body: &NonQuantified,
    at: StateId,
) -> Result<bool, Error> {
    Ok(BodyEvaluator::new(composed, binding).truth(body)?[at.0])
}

/// Value of `expr` at one composed state.
pub fn eval_prob(
    composed: &Dtmc,
    binding: &Binding,
    expr: &ProbExpr,
    at: StateId,
) -> Result<Rational, Error> {
    Ok(BodyEvaluator::new(composed, binding).prob(expr)?[at.0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::d_half;
    use crate::formula::{parse_formula, Formula};
    use crate::model::{
        enumerate_schedulers, induce_dtmc, parse_mdpx, self_compose, TupleIndexer,
    };
    use crate::rational::{int, ratio};

    fn composed(text: &str, n: usize) -> Dtmc {
        let m = parse_mdpx(text).unwrap();
        let d = induce_dtmc(&m, &enumerate_schedulers(&m).next().unwrap()).unwrap();
        self_compose(&vec![d; n]).unwrap()
    }

    fn formula(vars: &[&str], body: &str) -> Formula {
        let mut text = String::from("exists sched s. ");
        for v in vars {
            text.push_str(&format!("forall st {}(s). ", v));
        }
        text.push_str(body);
        parse_formula(&text).unwrap()
    }

    #[test]
    fn literals_and_labels() {
        let c = composed(crate::fixtures::D_HALF, 2);
        let f = formula(&["x", "y"], "a(x) & true");
        let b = Binding::of(&f).unwrap();
        let m = d_half();
        let ix = TupleIndexer::new(3, 2).unwrap();
        let at = StateId(ix.encode(&[m.state_id("u1").unwrap(), m.state_id("u2").unwrap()]));
        assert!(eval_body(&c, &b, &f.body, at).unwrap());
        let g = formula(&["x", "y"], "1/2 < 1/3");
        assert!(!eval_body(&c, &b, &g.body, at).unwrap());
    }

    #[test]
    fn probability_terms() {
        let c = composed(crate::fixtures::D_HALF, 1);
        let f = formula(&["x"], "2 * P(F a(x)) < 3");
        let b = Binding::of(&f).unwrap();
        let (lhs, _) = match &f.body {
            NonQuantified::Less(l, r) => (l.as_ref().clone(), r),
            _ => unreachable!(),
        };
        assert_eq!(eval_prob(&c, &b, &lhs, StateId(0)).unwrap(), int(1));
        if let ProbExpr::Mul(_, inner) = &lhs {
            assert_eq!(eval_prob(&c, &b, inner, StateId(0)).unwrap(), ratio(1, 2));
        }
    }

    #[test]
    fn nested_next() {
        // q0 -> q1 (1/2), q2 (1/2); q1 -> q1 (1/2), q2 (1/2); q2 absorbing, a on q2.
        // Inner P(X a) is 1/2 at q0 and q1, 1 at q2; "> 1/2" holds only at q2.
        // Outer P(X inner) is 1/2 at q0 and q1, 1 at q2.
        let text = "states: q0 q1 q2\nlabels: q2: a;\n\
                    action q0 t: q1 1/2, q2 1/2\naction q1 t: q1 1/2, q2 1/2\naction q2 t: q2 1\n";
        let c = composed(text, 1);
        let f = formula(&["x"], "P(X (P(X a(x)) > 1/2)) = 1/2");
        let b = Binding::of(&f).unwrap();
        let mut ev = BodyEvaluator::new(&c, &b);
        assert_eq!(*ev.truth(&f.body).unwrap(), vec![true, true, false]);
    }
}
