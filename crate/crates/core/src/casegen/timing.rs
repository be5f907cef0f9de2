use super::{counter_formula, CaseError, CaseSpec, CounterLoop, Family};

/// Square-and-multiply over `m` key bits. At each `if` the scheduler picks
/// the bit: `one` runs the extra multiplication, `zero` goes straight to
/// squaring. An attacker counter runs alongside; its value when the loop
/// ends is observable.
pub fn gen_timing_attack(m: usize) -> Result<CaseSpec, CaseError> {
    if m == 0 {
        return Err(CaseError::InvalidParameter("bit width m must be at least 1".into()));
    }
    let mut locs = Vec::new();
    for i in 0..m {
        locs.extend([format!("if{i}"), format!("mul{i}"), format!("sq{i}")]);
    }
    locs.push("done".into());
    let mut props = vec!["init".to_string()];
    props.extend((0..=m).map(|l| format!("j{}", l)));
    let mut prog = CounterLoop::new(&locs, m, props);
    for i in 0..m {
        let next = if i + 1 < m { format!("if{}", i + 1) } else { "done".into() };
        prog.step(&format!("if{i}"), "one", &format!("mul{i}"));
        prog.step(&format!("if{i}"), "zero", &format!("sq{i}"));
        prog.step(&format!("mul{i}"), "step", &format!("sq{i}"));
        prog.step(&format!("sq{i}"), "step", &next);
    }
    prog.finish("done");
    prog.raw.label(&CounterLoop::name("if0", 0), &["init"]);
    let reference = match m {
        2 => Some((24, 46)),
        4 => Some((60, 136)),
        6 => Some((112, 274)),
        _ => None,
    };
    Ok(CaseSpec::build(
        Family::TimingAttack,
        format!("ta_m{}", m),
        &prog.raw,
        counter_formula(m),
        reference,
    ))
}
