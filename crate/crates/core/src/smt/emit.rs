use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write;

use num::One;

use super::system::{collect_vars, BoolExpr, ChoiceLit, CmpOp, Constraint, ConstraintSystem, Polarity, Term, Var};
use crate::model::StateId;
use crate::rational::to_smtlib as rational;

/// A declared SMT symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Choice(ChoiceLit),
    Var(Var),
}

fn simple(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Stable symbol names for the variables of one system. State and action
/// names are used verbatim when they are plain identifiers and replaced by
/// their indices otherwise.
#[derive(Debug, Clone)]
pub struct Names {
    states: Vec<String>,
    actions: Vec<String>,
    base: usize,
    arity: usize,
}

impl Names {
    pub fn new(cs: &ConstraintSystem) -> Self {
        let pick = |names: &[String]| -> Vec<String> {
            let distinct: HashSet<&String> = names.iter().collect();
            if names.iter().all(|n| simple(n)) && distinct.len() == names.len() {
                names.to_vec()
            } else {
                (0..names.len()).map(|i| i.to_string()).collect()
            }
        };
        Names {
            states: pick(&cs.state_names),
            actions: pick(&cs.action_names),
            base: cs.base_states,
            arity: cs.arity(),
        }
    }

    pub fn choice_family(&self, sched: usize, state: StateId) -> String {
        format!("ch_{}_{}", sched, self.states[state.0])
    }

    pub fn choice(&self, lit: &ChoiceLit) -> String {
        format!("{}_{}", self.choice_family(lit.sched, lit.state), self.actions[lit.action.0])
    }

    fn tuple(&self, mut t: usize) -> String {
        if self.arity == 0 {
            return "unit".into();
        }
        let mut parts = vec![""; self.arity];
        for i in (0..self.arity).rev() {
            parts[i] = &self.states[t % self.base];
            t /= self.base;
        }
        parts.join(".")
    }

    pub fn var(&self, v: Var) -> String {
        let (prefix, tuple, node) = match v {
            Var::Holds { tuple, node } => ("h", tuple, node),
            Var::Prob { tuple, node } => ("pr", tuple, node),
            Var::ToInt { tuple, node } => ("ti", tuple, node),
            Var::Dist { tuple, node } => ("d", tuple, node),
        };
        format!("{}_{}_{}", prefix, self.tuple(tuple), node)
    }

    /// Name-to-symbol table over everything `cs` declares.
    pub fn table(&self, cs: &ConstraintSystem) -> HashMap<String, Symbol> {
        let mut out = HashMap::new();
        for lit in choice_lits(cs) {
            out.insert(self.choice(&lit), Symbol::Choice(lit));
        }
        for v in system_vars(cs) {
            out.insert(self.var(v), Symbol::Var(v));
        }
        out
    }
}

fn choice_lits(cs: &ConstraintSystem) -> Vec<ChoiceLit> {
    cs.domains
        .iter()
        .flat_map(|d| {
            d.actions.iter().map(move |&action| ChoiceLit {
                sched: d.sched,
                state: d.state,
                action,
            })
        })
        .collect()
}

fn system_vars(cs: &ConstraintSystem) -> BTreeSet<Var> {
    let mut vars = HashSet::new();
    for b in &cs.blocks {
        for c in &b.constraints {
            collect_vars(&c.body, &mut vars);
        }
    }
    collect_vars(&cs.truth.to_expr(), &mut vars);
    vars.into_iter().collect()
}

fn nary(out: &mut String, op: &str, empty: &str, items: Vec<String>) {
    match items.len() {
        0 => out.push_str(empty),
        1 => out.push_str(&items[0]),
        _ => {
            let _ = write!(out, "({} {})", op, items.join(" "));
        }
    }
}

struct Printer<'a> {
    names: &'a Names,
}

impl Printer<'_> {
    fn term(&self, t: &Term) -> String {
        match t {
            Term::Const(c) => rational(c),
            Term::Var(v) => self.names.var(*v),
            Term::Lin(xs) => {
                let items = xs
                    .iter()
                    .map(|(c, v)| {
                        if c.is_one() {
                            self.names.var(*v)
                        } else {
                            format!("(* {} {})", rational(c), self.names.var(*v))
                        }
                    })
                    .collect();
                let mut out = String::new();
                nary(&mut out, "+", "0", items);
                out
            }
            Term::Add(a, b) => format!("(+ {} {})", self.term(a), self.term(b)),
            Term::Sub(a, b) => format!("(- {} {})", self.term(a), self.term(b)),
            Term::Mul(a, b) => format!("(* {} {})", self.term(a), self.term(b)),
        }
    }

    fn bool(&self, e: &BoolExpr) -> String {
        match e {
            BoolExpr::Const(b) => b.to_string(),
            BoolExpr::Var(v) => self.names.var(*v),
            BoolExpr::Choice(lit) => self.names.choice(lit),
            BoolExpr::Not(x) => format!("(not {})", self.bool(x)),
            BoolExpr::And(xs) => {
                let mut out = String::new();
                nary(&mut out, "and", "true", xs.iter().map(|x| self.bool(x)).collect());
                out
            }
            BoolExpr::Or(xs) => {
                let mut out = String::new();
                nary(&mut out, "or", "false", xs.iter().map(|x| self.bool(x)).collect());
                out
            }
            BoolExpr::Implies(p, q) => format!("(=> {} {})", self.bool(p), self.bool(q)),
            BoolExpr::Xor(p, q) => format!("(xor {} {})", self.bool(p), self.bool(q)),
            BoolExpr::Cmp(op, l, r) => {
                let op = match op {
                    CmpOp::Lt => "<",
                    CmpOp::Le => "<=",
                    CmpOp::Eq => "=",
                    CmpOp::Ge => ">=",
                    CmpOp::Gt => ">",
                };
                format!("({} {} {})", op, self.term(l), self.term(r))
            }
        }
    }

    /// `guard -> body`; an implication body is folded into the guard.
    fn constraint(&self, c: &Constraint) -> String {
        if c.guard.is_empty() {
            return self.bool(&c.body);
        }
        let mut premise: Vec<String> = c.guard.iter().map(|g| self.names.choice(g)).collect();
        let conclusion = match &c.body {
            BoolExpr::Implies(p, q) => {
                premise.push(self.bool(p));
                self.bool(q)
            }
            other => self.bool(other),
        };
        let mut lhs = String::new();
        nary(&mut lhs, "and", "true", premise);
        format!("(=> {} {})", lhs, conclusion)
    }
}

/// Renders `cs` as an SMT-LIB2 script. Choice variables become one-hot
/// Boolean selectors; every other variable is Boolean or Real.
pub fn emit_smtlib2(cs: &ConstraintSystem) -> String {
    let names = Names::new(cs);
    let p = Printer { names: &names };
    let mut out = String::new();
    let _ = writeln!(out, "; hyperprob constraint system");
    let _ = writeln!(
        out,
        "; polarity: {}",
        match cs.polarity {
            Polarity::Direct => "direct (sat iff the formula holds)",
            Polarity::Negated => "negated (sat iff the formula fails)",
        }
    );
    let _ = writeln!(out, "; scheduler variables: {}", cs.sched_names.join(" "));
    let _ = writeln!(
        out,
        "; composed states: {} (encoded: {})",
        cs.tuple_count,
        cs.tuples.len()
    );
    let _ = writeln!(out, "; subformulas: {}", cs.dag.len());
    for i in 0..cs.dag.len() {
        let _ = writeln!(out, ";   {}: {}", i, cs.dag.text(i));
    }
    let _ = writeln!(
        out,
        "(set-logic {})",
        if cs.nonlinear { "QF_NRA" } else { "QF_LRA" }
    );
    let lits = choice_lits(cs);
    for lit in &lits {
        let _ = writeln!(out, "(declare-const {} Bool)", names.choice(lit));
    }
    let vars = system_vars(cs);
    for v in &vars {
        let sort = if v.is_bool() { "Bool" } else { "Real" };
        let _ = writeln!(out, "(declare-const {} {})", names.var(*v), sort);
    }
    for d in &cs.domains {
        let sel: Vec<String> = d
            .actions
            .iter()
            .map(|&action| {
                names.choice(&ChoiceLit {
                    sched: d.sched,
                    state: d.state,
                    action,
                })
            })
            .collect();
        let mut one_of = String::new();
        nary(&mut one_of, "or", "false", sel.clone());
        let _ = writeln!(out, "(assert {})", one_of);
        for i in 0..sel.len() {
            for j in i + 1..sel.len() {
                let _ = writeln!(out, "(assert (not (and {} {})))", sel[i], sel[j]);
            }
        }
    }
    for b in &cs.blocks {
        if !b.constraints.is_empty() {
            let _ = writeln!(out, "; node {}", b.node);
        }
        for c in &b.constraints {
            let _ = writeln!(out, "(assert {})", p.constraint(c));
        }
    }
    let _ = writeln!(out, "(assert {})", p.bool(&cs.truth.to_expr()));
    let _ = writeln!(out, "(check-sat)");
    if !lits.is_empty() || !vars.is_empty() {
        let _ = writeln!(out, "(get-model)");
    }
    out
}
