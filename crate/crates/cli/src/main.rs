//! `hyperprob`: check, encode and generate probabilistic hyperproperty
//! instances from the command line.
//!
//! Exit status of `check` is 0 when the formula holds, 1 when it does not
//! and 2 on any error; the other subcommands exit 0 or 2.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hyperprob_core::casegen::{
    gen_conformance, gen_password, gen_thread_sched, gen_timing_attack, CaseSpec, Tier,
};
use hyperprob_core::enumcheck::{self, CheckOptions};
use hyperprob_core::formula::{parse_formula, Binding, Formula};
use hyperprob_core::model::parse_mdpx;
use hyperprob_core::smt::{self, emit_smtlib2, encode_main, ConstraintSystem, Dag};
use hyperprob_core::{Error, Mdp, Verdict};

use report::{RunReport, Stats, Timings, VerdictReport, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "hyperprob", version, about = "Model checking of probabilistic hyperproperties on MDPs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a formula on a model.
    Check(CheckArgs),
    /// Write the constraint encoding of a formula as SMT-LIB2.
    Encode(EncodeArgs),
    /// Generate a case-study model and its property.
    Gen(GenArgs),
    /// Print model (and optionally encoding) sizes.
    Stats(StatsArgs),
}

#[derive(Args)]
struct FormulaSource {
    /// Formula text.
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File holding the formula.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Args)]
struct Limits {
    #[arg(long, default_value_t = 3)]
    max_sched_vars: usize,
    #[arg(long, default_value_t = 3)]
    max_state_vars: usize,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Enum,
    SmtEager,
    SmtExternal,
}

impl Engine {
    fn name(self) -> &'static str {
        match self {
            Engine::Enum => "enum",
            Engine::SmtEager => "smt-eager",
            Engine::SmtExternal => "smt-external",
        }
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Model file (.mdpx).
    model: PathBuf,
    #[command(flatten)]
    formula: FormulaSource,
    #[arg(long, value_enum, default_value = "smt-eager")]
    engine: Engine,
    /// External SMT-LIB2 solver executable.
    #[arg(long, env = "HYPERPROB_SOLVER")]
    solver: Option<PathBuf>,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the SMT-LIB2 encoding to this file.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Encode only states reachable from those satisfying the antecedent.
    #[arg(long)]
    prune: bool,
    #[command(flatten)]
    limits: Limits,
    /// Reserved; checking is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EncodeArgs {
    model: PathBuf,
    #[command(flatten)]
    formula: FormulaSource,
    /// Output file.
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    prune: bool,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Ta,
    Pw,
    Ts,
    Pc,
}

#[derive(Args)]
struct GenArgs {
    family: FamilyArg,
    /// Bit width (ta) or password length (pw).
    #[arg(long)]
    m: Option<usize>,
    /// The two secret values (ts).
    #[arg(long, num_args = 2, value_names = ["H1", "H2"])]
    h: Option<Vec<usize>>,
    /// Extra-move tier (pc): s0, s01 or s012.
    #[arg(long)]
    tier: Option<String>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    model: PathBuf,
    #[command(flatten)]
    formula: FormulaSource,
    #[arg(long)]
    prune: bool,
    #[command(flatten)]
    limits: Limits,
}

type Fail = String;

fn load_model(path: &Path) -> Result<Mdp, Fail> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    parse_mdpx(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn load_formula(src: &FormulaSource) -> Result<Option<Formula>, Fail> {
    let (text, origin) = match (&src.formula, &src.formula_file) {
        (Some(t), _) => (t.clone(), "formula".to_string()),
        (None, Some(p)) => (
            fs::read_to_string(p).map_err(|e| format!("{}: {}", p.display(), e))?,
            p.display().to_string(),
        ),
        (None, None) => return Ok(None),
    };
    parse_formula(&text)
        .map(Some)
        .map_err(|e| format!("{}: {}", origin, e))
}

fn require_formula(src: &FormulaSource) -> Result<Formula, Fail> {
    load_formula(src)?.ok_or_else(|| "a formula is required (--formula or --formula-file)".into())
}

fn options(l: &Limits) -> CheckOptions {
    CheckOptions {
        max_sched_vars: l.max_sched_vars,
        max_state_vars: l.max_state_vars,
        jobs: l.jobs,
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn subformulas(mdp: &Mdp, f: &Formula) -> Result<usize, Fail> {
    let binding = Binding::against(f, mdp).map_err(|e| e.to_string())?;
    let mut dag = Dag::default();
    dag.add_state(&f.body, &binding, mdp).map_err(|e| e.to_string())?;
    Ok(dag.len())
}

fn stats(mdp: &Mdp, f: &Formula, cs: Option<&ConstraintSystem>) -> Result<Stats, Fail> {
    let arity = f.state_decls().count() as u32;
    Ok(Stats {
        states: mdp.num_states(),
        transitions: mdp.transition_count(),
        scheduler_space: mdp.scheduler_space().to_string(),
        composed_states: mdp.num_states().saturating_pow(arity),
        subformulas: match cs {
            Some(cs) => cs.dag.len(),
            None => subformulas(mdp, f)?,
        },
        variables: cs.map(ConstraintSystem::variable_count),
        constraints: cs.map(ConstraintSystem::constraint_count),
    })
}

fn write_script(path: &Path, cs: &ConstraintSystem) -> Result<(), Fail> {
    fs::write(path, emit_smtlib2(cs)).map_err(|e| format!("{}: {}", path.display(), e))
}

fn cmd_check(a: &CheckArgs) -> Result<u8, Fail> {
    let mdp = load_model(&a.model)?;
    let f = require_formula(&a.formula)?;
    let opts = options(&a.limits);
    let mut engine = a.engine;
    let mut timings = Timings::default();
    let mut cs = None;

    if engine != Engine::Enum || a.emit.is_some() {
        let start = Instant::now();
        match encode_main(&mdp, &f, a.prune, &opts) {
            Ok(sys) => cs = Some(sys),
            Err(Error::MixedSchedulerBlock) if engine == Engine::SmtEager && a.emit.is_none() => {
                eprintln!("notice: scheduler quantifiers mix forall and exists; using the enum engine");
                engine = Engine::Enum;
            }
            Err(e) => return Err(e.to_string()),
        }
        timings.encode = ms(start);
    }
    if let (Some(path), Some(sys)) = (&a.emit, &cs) {
        write_script(path, sys)?;
    }

    let start = Instant::now();
    let verdict: Verdict = match engine {
        Engine::Enum => enumcheck::check(&mdp, &f, &opts).map_err(|e| e.to_string())?,
        Engine::SmtEager => {
            let sys = cs.as_ref().expect("encoded above");
            decoded(smt::solve_encoded(&mdp, &f, sys, &opts))?
        }
        Engine::SmtExternal => {
            let solver = a
                .solver
                .as_ref()
                .ok_or("--engine smt-external needs --solver or HYPERPROB_SOLVER")?;
            let sys = cs.as_ref().expect("encoded above");
            decoded(smt::solve_external(sys, &f, solver))?
        }
    };
    timings.solve = ms(start);

    let used = if engine == Engine::Enum { None } else { cs.as_ref() };
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        engine: engine.name(),
        verdict: VerdictReport::new(&verdict, &mdp),
        stats: stats(&mdp, &f, used)?,
        timings_ms: timings,
    };
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
        );
    } else {
        print!("{}", report.text());
    }
    Ok(if verdict.truth { 0 } else { 1 })
}

fn decoded(r: Result<smt::SmtVerdict, Error>) -> Result<Verdict, Fail> {
    r.map_err(|e| e.to_string())?
        .decoded
        .ok_or_else(|| "solver returned no verdict".into())
}

fn cmd_encode(a: &EncodeArgs) -> Result<u8, Fail> {
    let mdp = load_model(&a.model)?;
    let f = require_formula(&a.formula)?;
    let cs = encode_main(&mdp, &f, a.prune, &options(&a.limits)).map_err(|e| e.to_string())?;
    write_script(&a.out, &cs)?;
    println!("wrote {}", a.out.display());
    println!(
        "subformulas={} variables={} constraints={}",
        cs.dag.len(),
        cs.variable_count(),
        cs.constraint_count()
    );
    Ok(0)
}

fn cmd_gen(a: &GenArgs) -> Result<u8, Fail> {
    let need_m = || a.m.ok_or_else(|| "--m is required for this family".to_string());
    let spec: CaseSpec = match a.family {
        FamilyArg::Ta => gen_timing_attack(need_m()?).map_err(|e| e.to_string())?,
        FamilyArg::Pw => gen_password(need_m()?).map_err(|e| e.to_string())?,
        FamilyArg::Ts => {
            let h = a.h.as_ref().ok_or("--h H1 H2 is required for ts")?;
            gen_thread_sched(h[0], h[1]).map_err(|e| e.to_string())?
        }
        FamilyArg::Pc => {
            let text = a.tier.as_deref().unwrap_or("s0");
            let tier = Tier::parse(text)
                .ok_or_else(|| format!("invalid parameter: unknown tier '{}' (s0, s01, s012)", text))?;
            gen_conformance(tier)
        }
    };
    let (model, formula) = spec
        .write_to(&a.out_dir)
        .map_err(|e| format!("{}: {}", a.out_dir.display(), e))?;
    println!("wrote {}", model.display());
    println!("wrote {}", formula.display());
    let (n, t) = (spec.mdp.num_states(), spec.mdp.transition_count());
    match spec.reference {
        Some(r) => {
            println!("states={} (reference: {})", n, r.states);
            println!("transitions={} (reference: {})", t, r.transitions);
            println!("size={}/{} (reference: {}/{})", n, t, r.states, r.transitions);
        }
        None => {
            println!("states={}", n);
            println!("transitions={}", t);
        }
    }
    println!("schedulers={}", spec.mdp.scheduler_space());
    Ok(0)
}

fn cmd_stats(a: &StatsArgs) -> Result<u8, Fail> {
    let mdp = load_model(&a.model)?;
    println!("states={}", mdp.num_states());
    println!("transitions={}", mdp.transition_count());
    println!("actions={}", mdp.action_names().len());
    println!("propositions={}", mdp.prop_names().join(" "));
    println!("schedulers={}", mdp.scheduler_space());
    if let Some(f) = load_formula(&a.formula)? {
        let cs = match encode_main(&mdp, &f, a.prune, &options(&a.limits)) {
            Ok(cs) => Some(cs),
            Err(Error::MixedSchedulerBlock) => None,
            Err(e) => return Err(e.to_string()),
        };
        let s = stats(&mdp, &f, cs.as_ref())?;
        println!("composed_states={}", s.composed_states);
        println!("subformulas={}", s.subformulas);
        match (s.variables, s.constraints) {
            (Some(v), Some(c)) => {
                println!("variables={}", v);
                println!("constraints={}", c);
            }
            _ => println!("encoding: not available for mixed scheduler quantifiers"),
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Check(a) => cmd_check(a),
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
