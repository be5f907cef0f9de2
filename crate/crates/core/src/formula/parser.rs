use std::collections::HashSet;

use num::{ToPrimitive, Zero};

use super::ast::{Formula, NonQuantified as Nq, PathFormula, ProbExpr, QuantDecl, Quantifier};
use super::lexer::{tokenize, Spanned, Tok};
use super::FormulaError;
use crate::rational::Rational;

const KEYWORDS: &[&str] = &[
    "forall", "exists", "sched", "st", "true", "false", "P", "X", "U", "F", "G",
];

/// Parses a formula and expands all derived operators into the core
/// grammar. Scoping is not checked here; see [`super::check_well_formed`].
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        failed_comparisons: HashSet::new(),
    };
    let prefix = p.prefix()?;
    let body = p.state()?;
    p.expect(Tok::Eof)?;
    Ok(Formula { prefix, body })
}

type PResult<T> = Result<T, FormulaError>;

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Positions where a comparison was already tried and failed.
    failed_comparisons: HashSet<usize>,
}

#[derive(Clone, Copy)]
enum Bound {
    Unbounded,
    Interval(u32, u32),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> FormulaError {
        let s = &self.toks[self.pos];
        FormulaError::Syntax {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> FormulaError {
        self.error_here(format!("expected {}, found {}", wanted, self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let wanted = match &tok {
                Tok::Eof => "end of input".to_string(),
                t => t.describe(),
            };
            Err(self.unexpected(&wanted))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn prefix(&mut self) -> PResult<Vec<QuantDecl>> {
        let mut out = Vec::new();
        loop {
            let q = if self.is_keyword("forall") {
                Quantifier::Forall
            } else if self.is_keyword("exists") {
                Quantifier::Exists
            } else {
                return Ok(out);
            };
            self.bump();
            if self.is_keyword("sched") {
                self.bump();
                let name = self.ident("scheduler variable")?;
                out.push(QuantDecl::Sched { q, name });
            } else if self.is_keyword("st") {
                self.bump();
                let name = self.ident("state variable")?;
                self.expect(Tok::LParen)?;
                let sched = self.ident("scheduler variable")?;
                self.expect(Tok::RParen)?;
                out.push(QuantDecl::State { q, name, sched });
            } else {
                return Err(self.unexpected("'sched' or 'st'"));
            }
            self.expect(Tok::Dot)?;
        }
    }

    fn state(&mut self) -> PResult<Nq> {
        let mut l = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let r = self.implication()?;
            l = Nq::iff(l, r);
        }
        Ok(l)
    }

    fn implication(&mut self) -> PResult<Nq> {
        let l = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.implication()?;
            return Ok(Nq::implies(l, r));
        }
        Ok(l)
    }

    fn disjunction(&mut self) -> PResult<Nq> {
        let mut l = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let r = self.conjunction()?;
            l = Nq::or(l, r);
        }
        Ok(l)
    }

    fn conjunction(&mut self) -> PResult<Nq> {
        let mut l = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.unary()?;
            l = Nq::and(l, r);
        }
        Ok(l)
    }

    fn unary(&mut self) -> PResult<Nq> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Nq::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Nq> {
        if self.is_keyword("true") {
            self.bump();
            return Ok(Nq::True);
        }
        if self.is_keyword("false") {
            self.bump();
            return Ok(Nq::falsity());
        }
        let starts_expr = match self.peek() {
            Tok::LParen | Tok::Number(_) | Tok::Minus => true,
            Tok::Ident(s) => s == "P" && *self.peek_at(1) == Tok::LParen,
            _ => false,
        };
        if starts_expr {
            let start = self.pos;
            let cmp_err = if self.failed_comparisons.contains(&start) {
                None
            } else {
                match self.comparison() {
                    Ok(c) => return Ok(c),
                    Err(e) => {
                        let reached = self.pos;
                        self.failed_comparisons.insert(start);
                        self.pos = start;
                        Some((e, reached))
                    }
                }
            };
            if *self.peek() != Tok::LParen {
                return Err(cmp_err.map(|(e, _)| e).unwrap_or_else(|| self.unexpected("comparison")));
            }
            self.bump();
            let inner = self.state().and_then(|s| self.expect(Tok::RParen).map(|_| s));
            return match (inner, cmp_err) {
                (Ok(s), _) => Ok(s),
                (Err(_), Some((ce, reached))) if reached > self.pos => Err(ce),
                (Err(e), _) => Err(e),
            };
        }
        if let Tok::Ident(_) = self.peek() {
            let name = self.ident("proposition")?;
            self.expect(Tok::LParen)?;
            let var = self.ident("state variable")?;
            self.expect(Tok::RParen)?;
            return Ok(Nq::Prop { name, var });
        }
        Err(self.unexpected("state formula"))
    }

    fn comparison(&mut self) -> PResult<Nq> {
        let l = self.expr()?;
        let build: fn(ProbExpr, ProbExpr) -> Nq = match self.peek() {
            Tok::Lt => Nq::less,
            Tok::Le => Nq::le,
            Tok::Gt => Nq::gt,
            Tok::Ge => Nq::ge,
            Tok::Eq => Nq::eq,
            Tok::Ne => Nq::ne,
            _ => return Err(self.unexpected("comparison operator")),
        };
        self.bump();
        let r = self.expr()?;
        Ok(build(l, r))
    }

    fn expr(&mut self) -> PResult<ProbExpr> {
        let mut l = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    l = ProbExpr::add(l, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    l = ProbExpr::sub(l, self.term()?);
                }
                _ => return Ok(l),
            }
        }
    }

    fn term(&mut self) -> PResult<ProbExpr> {
        let mut l = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            l = ProbExpr::mul(l, self.factor()?);
        }
        Ok(l)
    }

    fn factor(&mut self) -> PResult<ProbExpr> {
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                Ok(ProbExpr::neg(self.factor()?))
            }
            Tok::Number(n) => {
                self.bump();
                Ok(ProbExpr::Const(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) if s == "P" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let e = self.path()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected("probability expression")),
        }
    }

    /// Path formula inside `P(...)`; `G` yields an arithmetic expression.
    fn path(&mut self) -> PResult<ProbExpr> {
        if self.is_keyword("X") {
            self.bump();
            return Ok(ProbExpr::prob(PathFormula::Next(self.state()?)));
        }
        if self.is_keyword("F") || self.is_keyword("G") {
            let globally = self.is_keyword("G");
            self.bump();
            let bound = self.bound()?;
            let phi = self.state()?;
            let target = if globally { Nq::not(phi) } else { phi };
            let reach = ProbExpr::prob(until(Nq::True, target, bound));
            return Ok(if globally {
                ProbExpr::sub(ProbExpr::Const(crate::rational::one()), reach)
            } else {
                reach
            });
        }
        let l = self.state()?;
        if !self.is_keyword("U") {
            return Err(self.unexpected("'U'"));
        }
        self.bump();
        let bound = self.bound()?;
        let r = self.state()?;
        Ok(ProbExpr::prob(until(l, r, bound)))
    }

    fn bound(&mut self) -> PResult<Bound> {
        match self.peek() {
            Tok::LBracket => {
                self.bump();
                let k1 = self.step_count()?;
                self.expect(Tok::Comma)?;
                let k2 = self.step_count()?;
                if k1 > k2 {
                    return Err(FormulaError::InvalidBound { k1, k2 });
                }
                self.expect(Tok::RBracket)?;
                Ok(Bound::Interval(k1, k2))
            }
            Tok::Le => {
                self.bump();
                Ok(Bound::Interval(0, self.step_count()?))
            }
            _ => Ok(Bound::Unbounded),
        }
    }

    fn step_count(&mut self) -> PResult<u32> {
        if let Tok::Number(n) = self.peek() {
            if let Some(k) = as_step_count(n) {
                self.bump();
                return Ok(k);
            }
        }
        Err(self.unexpected("nonnegative integer step bound"))
    }
}

fn as_step_count(n: &Rational) -> Option<u32> {
    if n.is_integer() && !(n < &Rational::zero()) {
        n.to_integer().to_u32()
    } else {
        None
    }
}

fn until(l: Nq, r: Nq, bound: Bound) -> PathFormula {
    match bound {
        Bound::Unbounded => PathFormula::Until(l, r),
        Bound::Interval(k1, k2) => PathFormula::BoundedUntil(l, r, k1, k2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn body(text: &str) -> Nq {
        parse_formula(text).unwrap().body
    }

    fn reach_a() -> ProbExpr {
        ProbExpr::eventually(Nq::prop("a", "x"))
    }

    #[test]
    fn prefix_and_equality_expansion() {
        let f = parse_formula("forall sched s. forall st x(s). P(F a(x)) = 1").unwrap();
        assert_eq!(
            f.prefix,
            vec![
                QuantDecl::Sched {
                    q: Quantifier::Forall,
                    name: "s".into()
                },
                QuantDecl::State {
                    q: Quantifier::Forall,
                    name: "x".into(),
                    sched: "s".into()
                },
            ]
        );
        let one = ProbExpr::Const(int(1));
        let expected = Nq::and(
            Nq::not(Nq::less(reach_a(), one.clone())),
            Nq::not(Nq::less(one, reach_a())),
        );
        assert_eq!(f.body, expected);
    }

    #[test]
    fn globally_is_one_minus_eventually_not() {
        let b = body("P(G a(x)) < 1");
        let g = ProbExpr::sub(
            ProbExpr::Const(int(1)),
            ProbExpr::eventually(Nq::not(Nq::prop("a", "x"))),
        );
        assert_eq!(b, Nq::less(g, ProbExpr::Const(int(1))));
    }

    #[test]
    fn bounded_sugar() {
        let until = |k1, k2| {
            ProbExpr::prob(PathFormula::BoundedUntil(Nq::True, Nq::prop("a", "x"), k1, k2))
        };
        let half = || ProbExpr::Const(ratio(1, 2));
        assert_eq!(body("P(F<=3 a(x)) > 1/2"), Nq::less(half(), until(0, 3)));
        assert_eq!(body("P(true U[1,2] a(x)) > 1/2"), Nq::less(half(), until(1, 2)));
        assert_eq!(body("P(F[2,2] a(x)) > 0.5"), Nq::less(half(), until(2, 2)));
    }

    #[test]
    fn conformance_prefix_shape() {
        let f = parse_formula(
            "exists sched s. exists st x(s). forall st y(s). init(x) -> P(F a(x)) = P(F a(y))",
        )
        .unwrap();
        let kinds: Vec<Quantifier> = f.prefix.iter().map(QuantDecl::quantifier).collect();
        assert_eq!(
            kinds,
            vec![Quantifier::Exists, Quantifier::Exists, Quantifier::Forall]
        );
    }

    #[test]
    fn precedence_and_parenthesised_comparisons() {
        let a = || Nq::prop("a", "x");
        let b = || Nq::prop("b", "x");
        let c = || Nq::prop("c", "x");
        assert_eq!(body("a(x) | b(x) & c(x)"), Nq::or(a(), Nq::and(b(), c())));
        assert_eq!(
            body("a(x) -> b(x) -> c(x)"),
            Nq::implies(a(), Nq::implies(b(), c()))
        );
        assert_eq!(body("!a(x) & b(x)"), Nq::and(Nq::not(a()), b()));
        let lhs = ProbExpr::add(reach_a(), ProbExpr::Const(ratio(1, 2)));
        assert_eq!(
            body("((P(F a(x)) + 1/2) < 1)"),
            Nq::less(lhs, ProbExpr::Const(int(1)))
        );
        assert_eq!(
            body("-1/2 < 2 * 3"),
            Nq::less(
                ProbExpr::neg(ProbExpr::Const(ratio(1, 2))),
                ProbExpr::mul(ProbExpr::Const(int(2)), ProbExpr::Const(int(3)))
            )
        );
    }

    #[test]
    fn nested_probability() {
        let b = body("P(X (P(X a(x)) > 1/2)) = 1");
        assert_eq!(b.prob_depth(), 2);
    }

    #[test]
    fn false_is_not_true() {
        assert_eq!(body("false"), Nq::not(Nq::True));
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_formula("forall sched s.\n  P(F a(x) < 1") {
            Err(FormulaError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("P(a(x) U[3,1] b(x)) < 1"),
            Err(FormulaError::InvalidBound { k1: 3, k2: 1 })
        ));
        assert!(parse_formula("a(x) &").is_err());
        assert!(parse_formula("P(X a(x))").is_err());
    }

    #[test]
    fn deep_parentheses_parse_quickly() {
        let depth = 40;
        let text = format!("{}a(x){}", "(".repeat(depth), ")".repeat(depth));
        assert_eq!(body(&text), Nq::prop("a", "x"));
        let text = format!("{}1 < 2{}", "(".repeat(depth), ")".repeat(depth));
        assert!(parse_formula(&text).is_ok());
    }
}
