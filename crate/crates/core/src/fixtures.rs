//! Small reference models shared by tests, docs and the CLI.

use crate::model::{parse_mdpx, Mdp};

/// Three states; `alpha` at `s0` loops back or moves to the `a`-state `s1`,
/// `beta` jumps to the sink `s2`.
pub const M_COIN: &str = "\
states: s0 s1 s2
labels: s0: init; s1: a;
action s0 alpha: s0 1/2, s1 1/2
action s0 beta: s2 1
action s1 tau: s1 1
action s2 tau: s2 1
";

/// One fair split from `u0` into two absorbing states.
pub const D_HALF: &str = "\
states: u0 u1 u2
labels: u0: init; u1: a;
action u0 tau: u1 1/2, u2 1/2
action u1 tau: u1 1
action u2 tau: u2 1
";

pub fn m_coin() -> Mdp {
    parse_mdpx(M_COIN).expect("M_COIN is well formed")
}

pub fn d_half() -> Mdp {
    parse_mdpx(D_HALF).expect("D_HALF is well formed")
}
