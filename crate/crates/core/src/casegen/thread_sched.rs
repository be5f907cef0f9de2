use super::{reach_equalities, CaseError, CaseSpec, Family};
use crate::model::RawModel;
use crate::rational::{one, ratio};

/// Two threads share a low variable `l`. Thread 1 counts a secret `h` down
/// to zero and then sets `l = 1`; thread 2 sets `l = 2`. State `v<k>_<p>`
/// has `h = k` with thread 2 pending (`p = 0`) or finished (`p = 1`). The
/// `fair` action interleaves uniformly, `first` runs thread 1. Runs for
/// both secrets share the model and start at the `init` states.
pub fn gen_thread_sched(h1: usize, h2: usize) -> Result<CaseSpec, CaseError> {
    if h1 == h2 {
        return Err(CaseError::InvalidParameter("the two secrets must differ".into()));
    }
    let top = h1.max(h2);
    let name = |v: usize, p: usize| format!("v{}_{}", v, p);
    let mut raw = RawModel {
        props: Some(["init", "l1", "l2"].iter().map(|p| (p.to_string(), 0)).collect()),
        ..RawModel::default()
    };
    for v in 0..=top {
        raw.state(&name(v, 0)).state(&name(v, 1));
    }
    raw.state("end").state("out1").state("out2");
    for v in 0..=top {
        // Thread 1's next step from h = v.
        let t1 = |p: usize| match (v, p) {
            (0, 0) => "end".to_string(),
            (0, _) => "out1".to_string(),
            _ => name(v - 1, p),
        };
        raw.action(&name(v, 0), "fair", &[(&t1(0), ratio(1, 2)), (&name(v, 1), ratio(1, 2))]);
        raw.action(&name(v, 0), "first", &[(&t1(0), one())]);
        raw.action(&name(v, 1), "step", &[(&t1(1), one())]);
    }
    raw.action("end", "step", &[("out2", one())]);
    raw.action("out1", "halt", &[("out1", one())]);
    raw.action("out2", "halt", &[("out2", one())]);
    raw.label(&name(h1, 0), &["init"]);
    raw.label(&name(h2, 0), &["init"]);
    raw.label("out1", &["l1"]);
    raw.label("out2", &["l2"]);
    let formula = format!(
        "forall sched s. forall st x(s). forall st y(s). (init(x) & init(y)) -> {}",
        reach_equalities(&["l1".into(), "l2".into()], "x", "y")
    );
    let reference = match (h1.min(h2), top) {
        (0, 1) => Some((7, 13)),
        (0, 15) | (8, 15) => Some((35, 83)),
        (4, 8) => Some((21, 48)),
        _ => None,
    };
    Ok(CaseSpec::build(
        Family::ThreadSched,
        format!("ts_h{}_{}", h1, h2),
        &raw,
        formula,
        reference,
    ))
}
