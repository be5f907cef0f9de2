//! Generators for the four case-study families: a timing side channel in
//! modular exponentiation (TA), password comparison with early exit (PW),
//! a scheduling channel between two threads (TS) and a coin-driven die
//! with extra nondeterministic moves (PC).
//!
//! Each generator returns a validated model together with the property
//! checked on it. Program fragments are abstracted to one state per
//! (location, counter) pair; fair interleaving is a 1/2 split.

mod conformance;
mod password;
mod thread_sched;
mod timing;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::formula::{parse_formula, Formula};
use crate::model::{validate_mdp, Mdp, RawModel};

pub use conformance::{gen_conformance, knuth_yao, Tier};
pub use password::gen_password;
pub use thread_sched::gen_thread_sched;
pub use timing::gen_timing_attack;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    TimingAttack,
    Password,
    ThreadSched,
    Conformance,
}

impl Family {
    pub fn short(self) -> &'static str {
        match self {
            Family::TimingAttack => "ta",
            Family::Password => "pw",
            Family::ThreadSched => "ts",
            Family::Conformance => "pc",
        }
    }
}

/// Published state and transition counts for a parameter setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceSize {
    pub states: usize,
    pub transitions: usize,
}

#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub family: Family,
    /// File stem, e.g. `ta_m2`.
    pub stem: String,
    pub mdp: Mdp,
    pub formula: Formula,
    /// Source text of `formula`, as written to the `.hpctl` file.
    pub formula_text: String,
    pub reference: Option<ReferenceSize>,
}

impl CaseSpec {
    fn build(
        family: Family,
        stem: String,
        raw: &RawModel,
        formula_text: String,
        reference: Option<(usize, usize)>,
    ) -> Self {
        let mdp = validate_mdp(raw).expect("generated models are well formed");
        let formula = parse_formula(&formula_text).expect("generated formulas parse");
        CaseSpec {
            family,
            stem,
            mdp,
            formula,
            formula_text,
            reference: reference.map(|(states, transitions)| ReferenceSize {
                states,
                transitions,
            }),
        }
    }

    pub fn hpctl(&self) -> String {
        format!("{}\n", self.formula_text)
    }

    /// Writes `<stem>.mdpx` and `<stem>.hpctl` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        let model = dir.join(format!("{}.mdpx", self.stem));
        let formula = dir.join(format!("{}.hpctl", self.stem));
        fs::write(&model, self.mdp.to_mdpx())?;
        fs::write(&formula, self.hpctl())?;
        Ok((model, formula))
    }
}

/// `P(F p(x)) = P(F p(y)) & ...` over the given propositions.
fn reach_equalities(props: &[String], x: &str, y: &str) -> String {
    let parts: Vec<String> = props
        .iter()
        .map(|p| format!("P(F {p}({x})) = P(F {p}({y}))"))
        .collect();
    format!("({})", parts.join(" & "))
}

/// Shared builder for the loop programs: states are `(location, j)` with an
/// attacker counter `j` that advances in parallel until it reaches `m`.
struct CounterLoop {
    raw: RawModel,
    m: usize,
}

impl CounterLoop {
    fn new(locations: &[String], m: usize, props: Vec<String>) -> Self {
        let mut raw = RawModel::default();
        for loc in locations {
            for j in 0..=m {
                raw.state(&Self::name(loc, j));
            }
        }
        raw.props = Some(props.into_iter().map(|p| (p, 0)).collect());
        CounterLoop { raw, m }
    }

    fn name(loc: &str, j: usize) -> String {
        format!("{}_j{}", loc, j)
    }

    /// Program step `from -> to` under `action`, interleaved with the
    /// counter.
    fn step(&mut self, from: &str, action: &str, to: &str) {
        for j in 0..=self.m {
            let src = Self::name(from, j);
            let dst = Self::name(to, j);
            if j < self.m {
                let tick = Self::name(from, j + 1);
                let half = crate::rational::ratio(1, 2);
                self.raw
                    .action(&src, action, &[(&dst, half.clone()), (&tick, half)]);
            } else {
                self.raw.action(&src, action, &[(&dst, crate::rational::one())]);
            }
        }
    }

    /// Absorbing final location labelled with the counter value.
    fn finish(&mut self, loc: &str) {
        for j in 0..=self.m {
            let s = Self::name(loc, j);
            self.raw.action(&s, "halt", &[(&s, crate::rational::one())]);
            let prop = format!("j{}", j);
            self.raw.label(&s, &[&prop]);
        }
    }
}

/// The two-execution equality property over counter outcomes.
fn counter_formula(m: usize) -> String {
    let props: Vec<String> = (0..=m).map(|l| format!("j{}", l)).collect();
    format!(
        "forall sched s1. forall sched s2. forall st x(s1). forall st y(s2). \
         (init(x) & init(y)) -> {}",
        reach_equalities(&props, "x", "y")
    )
}
