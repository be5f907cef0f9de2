use std::io::Write;
use std::path::Path;
use std::process::Command;

use super::assign::{Model, Value};
use super::decode::{decode_witness, unsat_verdict};
use super::eager::SmtVerdict;
use super::emit::{emit_smtlib2, Names, Symbol};
use super::system::ConstraintSystem;
use crate::formula::Formula;
use crate::rational::{parse_rational, Rational};
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexps(text: &str) -> Result<Vec<Sexp>, Error> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => stack.push(Vec::new()),
            ')' => {
                let done = stack.pop().filter(|_| !stack.is_empty());
                let done = done.ok_or_else(|| Error::Solver("unbalanced ')' in solver output".into()))?;
                stack.last_mut().expect("non-empty").push(Sexp::List(done));
            }
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {}
            '|' | '"' => {
                let close = c;
                let mut atom = String::new();
                for c in chars.by_ref() {
                    if c == close {
                        break;
                    }
                    atom.push(c);
                }
                stack.last_mut().expect("non-empty").push(Sexp::Atom(atom));
            }
            c => {
                let mut atom = c.to_string();
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' {
                        break;
                    }
                    atom.push(n);
                    chars.next();
                }
                stack.last_mut().expect("non-empty").push(Sexp::Atom(atom));
            }
        }
    }
    if stack.len() != 1 {
        return Err(Error::Solver("unbalanced '(' in solver output".into()));
    }
    Ok(stack.pop().expect("one level"))
}

fn numeric(e: &Sexp) -> Option<Rational> {
    match e {
        Sexp::Atom(a) => parse_rational(a),
        Sexp::List(xs) => match xs.as_slice() {
            [Sexp::Atom(op), x] if op == "-" => Some(-numeric(x)?),
            [Sexp::Atom(op), x, y] if op == "/" => {
                let d = numeric(y)?;
                if num::Zero::is_zero(&d) {
                    None
                } else {
                    Some(numeric(x)? / d)
                }
            }
            _ => None,
        },
    }
}

/// Reads `(define-fun name () Sort value)` entries of a `get-model` reply.
pub fn parse_model(cs: &ConstraintSystem, text: &str) -> Result<Model, Error> {
    let table = Names::new(cs).table(cs);
    let mut model = Model::default();
    let mut pending = parse_sexps(text)?;
    while let Some(e) = pending.pop() {
        let Sexp::List(xs) = e else { continue };
        match xs.as_slice() {
            [Sexp::Atom(kw), Sexp::Atom(name), Sexp::List(args), _sort, value]
                if kw == "define-fun" && args.is_empty() =>
            {
                let bad = || Error::Solver(format!("unreadable value for '{}'", name));
                match table.get(name) {
                    Some(Symbol::Choice(lit)) => {
                        if *value == Sexp::Atom("true".into()) {
                            model.choices.insert((lit.sched, lit.state), lit.action);
                        }
                    }
                    Some(Symbol::Var(v)) if v.is_bool() => {
                        let b = match value {
                            Sexp::Atom(a) if a == "true" => true,
                            Sexp::Atom(a) if a == "false" => false,
                            _ => return Err(bad()),
                        };
                        model.values.insert(*v, Value::Bool(b));
                    }
                    Some(Symbol::Var(v)) => {
                        model.values.insert(*v, Value::Num(numeric(value).ok_or_else(bad)?));
                    }
                    None => {}
                }
            }
            _ => pending.extend(xs),
        }
    }
    Ok(model)
}

/// Writes the script to a temporary file, runs `solver <file>` and decodes
/// its answer.
pub fn solve_external(
    cs: &ConstraintSystem,
    f: &Formula,
    solver: &Path,
) -> Result<SmtVerdict, Error> {
    let script = emit_smtlib2(cs);
    let mut file = tempfile::Builder::new()
        .suffix(".smt2")
        .tempfile()
        .map_err(|e| Error::Solver(format!("temporary file: {}", e)))?;
    file.write_all(script.as_bytes())
        .and_then(|_| file.flush())
        .map_err(|e| Error::Solver(format!("temporary file: {}", e)))?;
    let out = Command::new(solver)
        .arg(file.path())
        .output()
        .map_err(|e| Error::Solver(format!("cannot run {}: {}", solver.display(), e)))?;
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("sat") => {
            let rest: Vec<&str> = lines.collect();
            let model = parse_model(cs, &rest.join("\n"))?;
            let decoded = decode_witness(cs, &model, f)?;
            Ok(SmtVerdict {
                sat: true,
                model: Some(model),
                decoded: Some(decoded),
            })
        }
        Some("unsat") => Ok(SmtVerdict {
            sat: false,
            model: None,
            decoded: Some(unsat_verdict(cs, f)?),
        }),
        other => Err(Error::Solver(format!(
            "unexpected answer {:?}{}",
            other.unwrap_or(""),
            String::from_utf8_lossy(&out.stderr)
                .lines()
                .next()
                .map(|l| format!(": {}", l))
                .unwrap_or_default()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_solver_numbers() {
        let xs = parse_sexps("(/ (- 1.0) 3.0) 0.5 (- 2)").unwrap();
        assert_eq!(numeric(&xs[0]), Some(crate::rational::ratio(-1, 3)));
        assert_eq!(numeric(&xs[1]), Some(crate::rational::ratio(1, 2)));
        assert_eq!(numeric(&xs[2]), Some(crate::rational::int(-2)));
    }

    #[test]
    fn rejects_unbalanced_output() {
        assert!(parse_sexps("(a (b)").is_err());
        assert!(parse_sexps("a)").is_err());
    }
}
