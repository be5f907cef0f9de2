//! JSON and text rendering of a check run.

use serde::Serialize;

use hyperprob_core::{Mdp, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub engine: &'static str,
    pub verdict: VerdictReport,
    pub stats: Stats,
    pub timings_ms: Timings,
}

#[derive(Debug, Serialize)]
pub struct VerdictReport {
    pub truth: bool,
    pub mode: &'static str,
    pub schedulers: Vec<SchedulerReport>,
    pub states: Vec<StateReport>,
}

#[derive(Debug, Serialize)]
pub struct SchedulerReport {
    pub name: String,
    pub table: Vec<ChoiceReport>,
}

#[derive(Debug, Serialize)]
pub struct ChoiceReport {
    pub state: String,
    pub action: String,
}

#[derive(Debug, Serialize)]
pub struct StateReport {
    pub name: String,
    pub state: String,
}

#[derive(Debug, Serialize)]
pub struct Stats {
    pub states: usize,
    pub transitions: usize,
    /// Decimal string; the count can exceed 64 bits.
    pub scheduler_space: String,
    pub composed_states: usize,
    pub subformulas: usize,
    pub variables: Option<usize>,
    pub constraints: Option<usize>,
}

#[derive(Debug, Serialize, Default)]
pub struct Timings {
    pub encode: f64,
    pub solve: f64,
}

impl VerdictReport {
    pub fn new(v: &Verdict, mdp: &Mdp) -> Self {
        VerdictReport {
            truth: v.truth,
            mode: v.mode.as_str(),
            schedulers: v
                .schedulers
                .iter()
                .map(|(name, s)| SchedulerReport {
                    name: name.clone(),
                    table: s
                        .table(mdp)
                        .into_iter()
                        .map(|(state, action)| ChoiceReport {
                            state: state.to_string(),
                            action: action.to_string(),
                        })
                        .collect(),
                })
                .collect(),
            states: v
                .states
                .iter()
                .map(|(name, s)| StateReport {
                    name: name.clone(),
                    state: mdp.state_name(*s).to_string(),
                })
                .collect(),
        }
    }
}

impl RunReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let v = &self.verdict;
        out += &format!("engine: {}\n", self.engine);
        out += &format!("verdict: {} ({})\n", v.truth, v.mode);
        for s in &v.schedulers {
            out += &format!("scheduler {}:\n", s.name);
            for c in &s.table {
                out += &format!("  {}: {}\n", c.state, c.action);
            }
        }
        for s in &v.states {
            out += &format!("state {} = {}\n", s.name, s.state);
        }
        let st = &self.stats;
        out += &format!(
            "states={} transitions={} schedulers={} composed_states={} subformulas={}",
            st.states, st.transitions, st.scheduler_space, st.composed_states, st.subformulas
        );
        if let (Some(vars), Some(cons)) = (st.variables, st.constraints) {
            out += &format!(" variables={} constraints={}", vars, cons);
        }
        out += "\n";
        out += &format!(
            "time: encode {:.1} ms, solve {:.1} ms\n",
            self.timings_ms.encode, self.timings_ms.solve
        );
        out
    }
}
