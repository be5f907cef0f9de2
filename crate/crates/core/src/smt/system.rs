use crate::formula::Quantifier;
use crate::model::{ActionId, StateId};
use crate::rational::Rational;

use super::dag::Dag;

/// Non-choice variables, indexed by composed state and subformula node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// Truth of a Boolean subformula.
    Holds { tuple: usize, node: usize },
    /// Value of a probability expression.
    Prob { tuple: usize, node: usize },
    /// 0/1 image of a Boolean subformula.
    ToInt { tuple: usize, node: usize },
    /// Ranking towards states satisfying a node.
    Dist { tuple: usize, node: usize },
}

impl Var {
    pub fn is_bool(self) -> bool {
        matches!(self, Var::Holds { .. })
    }
}

/// `sched_j(state) = action`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceLit {
    pub sched: usize,
    pub state: StateId,
    pub action: ActionId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Const(Rational),
    Var(Var),
    /// `sum c_i * v_i`
    Lin(Vec<(Rational, Var)>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoolExpr {
    Const(bool),
    Var(Var),
    Choice(ChoiceLit),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
    Xor(Box<BoolExpr>, Box<BoolExpr>),
    Cmp(CmpOp, Term, Term),
}

#[allow(clippy::should_implement_trait)]
impl BoolExpr {
    pub fn var(v: Var) -> Self {
        BoolExpr::Var(v)
    }

    pub fn not(x: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(x))
    }

    pub fn implies(p: BoolExpr, q: BoolExpr) -> Self {
        BoolExpr::Implies(Box::new(p), Box::new(q))
    }

    pub fn xor(p: BoolExpr, q: BoolExpr) -> Self {
        BoolExpr::Xor(Box::new(p), Box::new(q))
    }

    pub fn cmp(op: CmpOp, l: Term, r: Term) -> Self {
        BoolExpr::Cmp(op, l, r)
    }

    pub fn eq(l: Term, r: Term) -> Self {
        BoolExpr::Cmp(CmpOp::Eq, l, r)
    }
}

/// `guard -> body`, where the guard is a conjunction of choice literals
/// (empty for unconditional constraints).
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub tuple: usize,
    pub guard: Vec<ChoiceLit>,
    pub body: BoolExpr,
}

/// All constraints introduced for one subformula node.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub node: usize,
    pub constraints: Vec<Constraint>,
}

/// The quantified-state part of the top-level constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum TruthTree {
    Leaf(BoolExpr),
    Forall(Vec<TruthTree>),
    Exists(Vec<TruthTree>),
}

impl TruthTree {
    pub fn to_expr(&self) -> BoolExpr {
        match self {
            TruthTree::Leaf(e) => e.clone(),
            TruthTree::Forall(xs) => BoolExpr::And(xs.iter().map(TruthTree::to_expr).collect()),
            TruthTree::Exists(xs) => BoolExpr::Or(xs.iter().map(TruthTree::to_expr).collect()),
        }
    }

    pub fn literal_count(&self) -> usize {
        match self {
            TruthTree::Leaf(_) => 1,
            TruthTree::Forall(xs) | TruthTree::Exists(xs) => xs.iter().map(Self::literal_count).sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Satisfiable iff the formula holds.
    Direct,
    /// Encodes the dual formula: satisfiable iff the formula fails.
    Negated,
}

/// Choice-variable domain of one scheduler variable at one state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceDomain {
    pub sched: usize,
    pub state: StateId,
    pub actions: Vec<ActionId>,
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub polarity: Polarity,
    pub sched_names: Vec<String>,
    /// State quantifiers of the encoded (possibly dual) formula.
    pub state_quantifiers: Vec<Quantifier>,
    /// Scheduler variable of each composition component.
    pub component_scheds: Vec<usize>,
    pub base_states: usize,
    pub state_names: Vec<String>,
    pub action_names: Vec<String>,
    /// `base_states ^ arity`.
    pub tuple_count: usize,
    /// Composed states that carry variables (all of them unless pruned).
    pub tuples: Vec<usize>,
    pub dag: Dag,
    /// Node whose truth the top-level constraint quantifies over.
    pub root: usize,
    pub domains: Vec<ChoiceDomain>,
    /// In dependency order: a block only reads variables of earlier
    /// blocks, its own node, and distance variables.
    pub blocks: Vec<Block>,
    pub truth: TruthTree,
    pub nonlinear: bool,
}

impl ConstraintSystem {
    pub fn arity(&self) -> usize {
        self.state_quantifiers.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.domains.len() + self.blocks.iter().map(|b| b.constraints.len()).sum::<usize>() + 1
    }

    /// Distinct variables referenced by the system, choice selectors
    /// included.
    pub fn variable_count(&self) -> usize {
        let mut vars = std::collections::HashSet::new();
        for b in &self.blocks {
            for c in &b.constraints {
                collect_vars(&c.body, &mut vars);
            }
        }
        collect_vars(&self.truth.to_expr(), &mut vars);
        vars.len() + self.domains.iter().map(|d| d.actions.len()).sum::<usize>()
    }
}

pub(crate) fn collect_vars(e: &BoolExpr, out: &mut std::collections::HashSet<Var>) {
    match e {
        BoolExpr::Const(_) | BoolExpr::Choice(_) => {}
        BoolExpr::Var(v) => {
            out.insert(*v);
        }
        BoolExpr::Not(x) => collect_vars(x, out),
        BoolExpr::And(xs) | BoolExpr::Or(xs) => xs.iter().for_each(|x| collect_vars(x, out)),
        BoolExpr::Implies(a, b) | BoolExpr::Xor(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        BoolExpr::Cmp(_, l, r) => {
            collect_term_vars(l, out);
            collect_term_vars(r, out);
        }
    }
}

pub(crate) fn collect_term_vars(t: &Term, out: &mut std::collections::HashSet<Var>) {
    match t {
        Term::Const(_) => {}
        Term::Var(v) => {
            out.insert(*v);
        }
        Term::Lin(xs) => xs.iter().for_each(|(_, v)| {
            out.insert(*v);
        }),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            collect_term_vars(a, out);
            collect_term_vars(b, out);
        }
    }
}
