use super::{counter_formula, CaseError, CaseSpec, CounterLoop, Family};

/// Character-by-character comparison of an `m`-character input with early
/// exit. At `cmp_i` the scheduler decides whether the character matches:
/// `eq` continues through `inc_i`, `neq` returns immediately. The attacker
/// counter measures the running time.
pub fn gen_password(m: usize) -> Result<CaseSpec, CaseError> {
    if m == 0 {
        return Err(CaseError::InvalidParameter("password length m must be at least 1".into()));
    }
    let mut locs = Vec::new();
    for i in 0..m {
        locs.extend([format!("cmp{i}"), format!("inc{i}")]);
    }
    locs.push("done".into());
    let mut props = vec!["init".to_string()];
    props.extend((0..=m).map(|l| format!("j{}", l)));
    let mut prog = CounterLoop::new(&locs, m, props);
    for i in 0..m {
        let next = if i + 1 < m { format!("cmp{}", i + 1) } else { "done".into() };
        prog.step(&format!("cmp{i}"), "eq", &format!("inc{i}"));
        prog.step(&format!("cmp{i}"), "neq", "done");
        prog.step(&format!("inc{i}"), "step", &next);
    }
    prog.finish("done");
    prog.raw.label(&CounterLoop::name("cmp0", 0), &["init"]);
    let reference = match m {
        2 => Some((24, 46)),
        4 => Some((70, 146)),
        6 => Some((140, 302)),
        _ => None,
    };
    Ok(CaseSpec::build(
        Family::Password,
        format!("pw_m{}", m),
        &prog.raw,
        counter_formula(m),
        reference,
    ))
}
