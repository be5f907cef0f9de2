use std::fmt;

use num::Signed;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn flip(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

/// One entry of the quantifier prefix, kept in source order so that
/// misplaced scheduler quantifiers can be reported.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QuantDecl {
    Sched { q: Quantifier, name: String },
    State { q: Quantifier, name: String, sched: String },
}

impl QuantDecl {
    pub fn quantifier(&self) -> Quantifier {
        match self {
            QuantDecl::Sched { q, .. } | QuantDecl::State { q, .. } => *q,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            QuantDecl::Sched { name, .. } | QuantDecl::State { name, .. } => name,
        }
    }

    fn flipped(&self) -> Self {
        match self {
            QuantDecl::Sched { q, name } => QuantDecl::Sched {
                q: q.flip(),
                name: name.clone(),
            },
            QuantDecl::State { q, name, sched } => QuantDecl::State {
                q: q.flip(),
                name: name.clone(),
                sched: sched.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    pub prefix: Vec<QuantDecl>,
    pub body: NonQuantified,
}

/// Quantifier-free state formulas over the core connectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NonQuantified {
    True,
    Prop { name: String, var: String },
    And(Box<NonQuantified>, Box<NonQuantified>),
    Not(Box<NonQuantified>),
    Less(Box<ProbExpr>, Box<ProbExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProbExpr {
    Prob(Box<PathFormula>),
    Const(Rational),
    Add(Box<ProbExpr>, Box<ProbExpr>),
    Sub(Box<ProbExpr>, Box<ProbExpr>),
    Mul(Box<ProbExpr>, Box<ProbExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathFormula {
    Next(NonQuantified),
    Until(NonQuantified, NonQuantified),
    BoundedUntil(NonQuantified, NonQuantified, u32, u32),
}

#[allow(clippy::should_implement_trait)]
impl NonQuantified {
    pub fn prop(name: &str, var: &str) -> Self {
        NonQuantified::Prop {
            name: name.to_string(),
            var: var.to_string(),
        }
    }

    pub fn and(l: Self, r: Self) -> Self {
        NonQuantified::And(Box::new(l), Box::new(r))
    }

    pub fn not(x: Self) -> Self {
        NonQuantified::Not(Box::new(x))
    }

    pub fn less(l: ProbExpr, r: ProbExpr) -> Self {
        NonQuantified::Less(Box::new(l), Box::new(r))
    }

    /// Negation that cancels an existing outer `Not`.
    pub fn neg(x: Self) -> Self {
        match x {
            NonQuantified::Not(inner) => *inner,
            other => NonQuantified::not(other),
        }
    }

    pub fn falsity() -> Self {
        NonQuantified::not(NonQuantified::True)
    }

    pub fn or(l: Self, r: Self) -> Self {
        NonQuantified::not(NonQuantified::and(Self::neg(l), Self::neg(r)))
    }

    pub fn implies(l: Self, r: Self) -> Self {
        Self::or(Self::neg(l), r)
    }

    pub fn iff(l: Self, r: Self) -> Self {
        Self::and(Self::implies(l.clone(), r.clone()), Self::implies(r, l))
    }

    pub fn eq(l: ProbExpr, r: ProbExpr) -> Self {
        Self::neg(Self::or(
            Self::less(l.clone(), r.clone()),
            Self::less(r, l),
        ))
    }

    pub fn ne(l: ProbExpr, r: ProbExpr) -> Self {
        Self::neg(Self::eq(l, r))
    }

    pub fn le(l: ProbExpr, r: ProbExpr) -> Self {
        Self::or(Self::less(l.clone(), r.clone()), Self::eq(l, r))
    }

    pub fn ge(l: ProbExpr, r: ProbExpr) -> Self {
        Self::le(r, l)
    }

    pub fn gt(l: ProbExpr, r: ProbExpr) -> Self {
        Self::less(r, l)
    }

    /// Every `(proposition, state variable)` occurrence, nested ones included.
    pub fn props(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        match self {
            NonQuantified::True => {}
            NonQuantified::Prop { name, var } => out.push((name, var)),
            NonQuantified::And(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
            NonQuantified::Not(x) => x.collect_props(out),
            NonQuantified::Less(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
        }
    }

    /// Number of nested `P` operators on the deepest branch.
    pub fn prob_depth(&self) -> usize {
        match self {
            NonQuantified::True | NonQuantified::Prop { .. } => 0,
            NonQuantified::And(l, r) => l.prob_depth().max(r.prob_depth()),
            NonQuantified::Not(x) => x.prob_depth(),
            NonQuantified::Less(l, r) => l.prob_depth().max(r.prob_depth()),
        }
    }
}

#[allow(clippy::should_implement_trait)]
impl ProbExpr {
    pub fn prob(path: PathFormula) -> Self {
        ProbExpr::Prob(Box::new(path))
    }

    pub fn constant(c: Rational) -> Self {
        ProbExpr::Const(c)
    }

    pub fn add(l: Self, r: Self) -> Self {
        ProbExpr::Add(Box::new(l), Box::new(r))
    }

    pub fn sub(l: Self, r: Self) -> Self {
        ProbExpr::Sub(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Self, r: Self) -> Self {
        ProbExpr::Mul(Box::new(l), Box::new(r))
    }

    pub fn neg(x: Self) -> Self {
        Self::sub(ProbExpr::Const(rational::zero()), x)
    }

    /// `P(F φ)` as `P(true U φ)`.
    pub fn eventually(phi: NonQuantified) -> Self {
        Self::prob(PathFormula::Until(NonQuantified::True, phi))
    }

    /// `P(G φ)` as `1 - P(F ¬φ)`.
    pub fn globally(phi: NonQuantified) -> Self {
        Self::sub(
            ProbExpr::Const(rational::one()),
            Self::eventually(NonQuantified::not(phi)),
        )
    }

    fn collect_props<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        match self {
            ProbExpr::Prob(p) => p.collect_props(out),
            ProbExpr::Const(_) => {}
            ProbExpr::Add(l, r) | ProbExpr::Sub(l, r) | ProbExpr::Mul(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
        }
    }

    fn prob_depth(&self) -> usize {
        match self {
            ProbExpr::Prob(p) => 1 + p.operands().iter().map(|o| o.prob_depth()).max().unwrap_or(0),
            ProbExpr::Const(_) => 0,
            ProbExpr::Add(l, r) | ProbExpr::Sub(l, r) | ProbExpr::Mul(l, r) => {
                l.prob_depth().max(r.prob_depth())
            }
        }
    }

    /// Value of a constant-only expression.
    pub fn eval_const(&self) -> Option<Rational> {
        match self {
            ProbExpr::Prob(_) => None,
            ProbExpr::Const(c) => Some(c.clone()),
            ProbExpr::Add(l, r) => Some(l.eval_const()? + r.eval_const()?),
            ProbExpr::Sub(l, r) => Some(l.eval_const()? - r.eval_const()?),
            ProbExpr::Mul(l, r) => Some(l.eval_const()? * r.eval_const()?),
        }
    }
}

impl PathFormula {
    pub fn operands(&self) -> Vec<&NonQuantified> {
        match self {
            PathFormula::Next(x) => vec![x],
            PathFormula::Until(l, r) | PathFormula::BoundedUntil(l, r, _, _) => vec![l, r],
        }
    }

    fn collect_props<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        for o in self.operands() {
            o.collect_props(out);
        }
    }
}

impl Formula {
    pub fn new(prefix: Vec<QuantDecl>, body: NonQuantified) -> Self {
        Formula { prefix, body }
    }

    /// The formula with every quantifier flipped and the body negated; its
    /// truth value is the negation of this formula's.
    pub fn dual(&self) -> Self {
        Formula {
            prefix: self.prefix.iter().map(QuantDecl::flipped).collect(),
            body: NonQuantified::not(self.body.clone()),
        }
    }

    pub fn sched_decls(&self) -> impl Iterator<Item = (Quantifier, &str)> {
        self.prefix.iter().filter_map(|d| match d {
            QuantDecl::Sched { q, name } => Some((*q, name.as_str())),
            QuantDecl::State { .. } => None,
        })
    }

    pub fn state_decls(&self) -> impl Iterator<Item = (Quantifier, &str, &str)> {
        self.prefix.iter().filter_map(|d| match d {
            QuantDecl::State { q, name, sched } => Some((*q, name.as_str(), sched.as_str())),
            QuantDecl::Sched { .. } => None,
        })
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_negative() {
        write!(f, "(0 - {})", -c)
    } else {
        write!(f, "{}", c)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.prefix {
            match d {
                QuantDecl::Sched { q, name } => write!(f, "{} sched {}. ", q.keyword(), name)?,
                QuantDecl::State { q, name, sched } => {
                    write!(f, "{} st {}({}). ", q.keyword(), name, sched)?
                }
            }
        }
        write!(f, "{}", self.body)
    }
}

impl fmt::Display for NonQuantified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonQuantified::True => write!(f, "true"),
            NonQuantified::Prop { name, var } => write!(f, "{}({})", name, var),
            NonQuantified::And(l, r) => write!(f, "({} & {})", l, r),
            NonQuantified::Not(x) => write!(f, "!{}", x),
            NonQuantified::Less(l, r) => write!(f, "({} < {})", l, r),
        }
    }
}

impl fmt::Display for ProbExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbExpr::Prob(p) => write!(f, "P({})", p),
            ProbExpr::Const(c) => write_rational(f, c),
            ProbExpr::Add(l, r) => write!(f, "({} + {})", l, r),
            ProbExpr::Sub(l, r) => write!(f, "({} - {})", l, r),
            ProbExpr::Mul(l, r) => write!(f, "({} * {})", l, r),
        }
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathFormula::Next(x) => write!(f, "X {}", x),
            PathFormula::Until(l, r) => write!(f, "{} U {}", l, r),
            PathFormula::BoundedUntil(l, r, k1, k2) => write!(f, "{} U[{},{}] {}", l, k1, k2, r),
        }
    }
}
