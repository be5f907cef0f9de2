use std::collections::{BTreeMap, HashMap};

use num::Zero;

use super::system::{BoolExpr, ChoiceLit, CmpOp, Term, Var};
use crate::model::{ActionId, StateId};
use crate::rational::Rational;

/// Value of a non-choice variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Num(Rational),
}

/// A (possibly partial) assignment to the variables of a constraint system.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Model {
    /// `(scheduler variable, state) -> action`.
    pub choices: BTreeMap<(usize, StateId), ActionId>,
    pub values: HashMap<Var, Value>,
}

impl Model {
    pub fn choice(&self, lit: &ChoiceLit) -> Option<bool> {
        self.choices.get(&(lit.sched, lit.state)).map(|a| *a == lit.action)
    }

    pub fn bool(&self, v: Var) -> Option<bool> {
        match self.values.get(&v)? {
            Value::Bool(b) => Some(*b),
            Value::Num(_) => None,
        }
    }

    pub fn num(&self, v: Var) -> Option<&Rational> {
        match self.values.get(&v)? {
            Value::Num(q) => Some(q),
            Value::Bool(_) => None,
        }
    }

    /// Whether every literal of `guard` holds; `None` if a choice is unset.
    pub fn guard(&self, guard: &[ChoiceLit]) -> Option<bool> {
        let mut all = true;
        for lit in guard {
            match self.choice(lit) {
                Some(false) => return Some(false),
                Some(true) => {}
                None => all = false,
            }
        }
        all.then_some(true)
    }

    /// Three-valued evaluation: `None` when unassigned variables leave the
    /// result open.
    pub fn eval(&self, e: &BoolExpr) -> Option<bool> {
        match e {
            BoolExpr::Const(b) => Some(*b),
            BoolExpr::Var(v) => self.bool(*v),
            BoolExpr::Choice(lit) => self.choice(lit),
            BoolExpr::Not(x) => self.eval(x).map(|b| !b),
            BoolExpr::And(xs) => {
                let mut open = false;
                for x in xs {
                    match self.eval(x) {
                        Some(false) => return Some(false),
                        None => open = true,
                        Some(true) => {}
                    }
                }
                (!open).then_some(true)
            }
            BoolExpr::Or(xs) => {
                let mut open = false;
                for x in xs {
                    match self.eval(x) {
                        Some(true) => return Some(true),
                        None => open = true,
                        Some(false) => {}
                    }
                }
                (!open).then_some(false)
            }
            BoolExpr::Implies(p, q) => match (self.eval(p), self.eval(q)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            BoolExpr::Xor(p, q) => Some(self.eval(p)? != self.eval(q)?),
            BoolExpr::Cmp(op, l, r) => {
                let (l, r) = (self.term(l)?, self.term(r)?);
                Some(match op {
                    CmpOp::Lt => l < r,
                    CmpOp::Le => l <= r,
                    CmpOp::Eq => l == r,
                    CmpOp::Ge => l >= r,
                    CmpOp::Gt => l > r,
                })
            }
        }
    }

    pub fn term(&self, t: &Term) -> Option<Rational> {
        match t {
            Term::Const(c) => Some(c.clone()),
            Term::Var(v) => self.num(*v).cloned(),
            Term::Lin(xs) => {
                let mut acc = Rational::zero();
                for (c, v) in xs {
                    acc += c * self.num(*v)?;
                }
                Some(acc)
            }
            Term::Add(a, b) => Some(self.term(a)? + self.term(b)?),
            Term::Sub(a, b) => Some(self.term(a)? - self.term(b)?),
            Term::Mul(a, b) => Some(self.term(a)? * self.term(b)?),
        }
    }

    /// Writes `t` as `sum c_i * v_i + k` over the unassigned variables.
    /// `None` if an unassigned variable occurs inside a product.
    pub fn linearize(&self, t: &Term) -> Option<(Vec<(Rational, Var)>, Rational)> {
        match t {
            Term::Const(c) => Some((Vec::new(), c.clone())),
            Term::Var(v) => Some(match self.num(*v) {
                Some(q) => (Vec::new(), q.clone()),
                None => (vec![(Rational::from_integer(1.into()), *v)], Rational::zero()),
            }),
            Term::Lin(xs) => {
                let mut lin = Vec::new();
                let mut k = Rational::zero();
                for (c, v) in xs {
                    match self.num(*v) {
                        Some(q) => k += c * q,
                        None => lin.push((c.clone(), *v)),
                    }
                }
                Some((lin, k))
            }
            Term::Add(a, b) | Term::Sub(a, b) => {
                let (mut la, ka) = self.linearize(a)?;
                let (lb, kb) = self.linearize(b)?;
                if matches!(t, Term::Add(..)) {
                    la.extend(lb);
                    Some((la, ka + kb))
                } else {
                    la.extend(lb.into_iter().map(|(c, v)| (-c, v)));
                    Some((la, ka - kb))
                }
            }
            Term::Mul(a, b) => {
                let (la, ka) = self.linearize(a)?;
                let (lb, kb) = self.linearize(b)?;
                match (la.is_empty(), lb.is_empty()) {
                    (true, true) => Some((Vec::new(), ka * kb)),
                    (true, false) => Some((lb.into_iter().map(|(c, v)| (c * &ka, v)).collect(), ka * kb)),
                    (false, true) => Some((la.into_iter().map(|(c, v)| (c * &kb, v)).collect(), ka * kb)),
                    (false, false) => None,
                }
            }
        }
    }
}
