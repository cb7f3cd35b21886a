use std::fmt;
use std::str::FromStr;

use super::inert::WindowRule;
use super::{GateError, GroupElement};
use crate::bitcore::{BitError, BitWord};

/// The standard generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedGate {
    Sigma,
    /// `c^k`: flip coordinate 0 iff coordinates `1..=k` are all 1.
    Cnot(u32),
    /// `R c^1 R`: flip coordinate 0 iff coordinate -1 is 1.
    ReversedCnot,
    /// Exchange coordinates 0 and 1.
    Swap,
}

impl NamedGate {
    pub const FLIP: NamedGate = NamedGate::Cnot(0);
    pub const CNOT: NamedGate = NamedGate::Cnot(1);
    pub const TOFFOLI: NamedGate = NamedGate::Cnot(2);
}

impl fmt::Display for NamedGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGate::Sigma => f.write_str("sigma"),
            NamedGate::Cnot(k) => write!(f, "c{k}"),
            NamedGate::ReversedCnot => f.write_str("rc1"),
            NamedGate::Swap => f.write_str("swap"),
        }
    }
}

impl FromStr for NamedGate {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sigma" => Ok(NamedGate::Sigma),
            "rc1" => Ok(NamedGate::ReversedCnot),
            "swap" | "s" => Ok(NamedGate::Swap),
            _ => {
                let k = s
                    .strip_prefix("ck(")
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| s.strip_prefix('c'))
                    .and_then(|k| k.parse::<u32>().ok())
                    .ok_or_else(|| GateError::UnknownName(s.to_string()))?;
                Ok(NamedGate::Cnot(k))
            }
        }
    }
}

pub fn make_named(gate: NamedGate) -> Result<GroupElement, GateError> {
    match gate {
        NamedGate::Sigma => Ok(GroupElement::sigma(1)),
        NamedGate::Cnot(k) => make_ck(k),
        NamedGate::ReversedCnot => Ok(make_ck(1)?.reverse_conjugate()),
        NamedGate::Swap => GroupElement::from_rule(&WindowRule::new(0, 1, vec![0, 2, 1, 3])?),
    }
}

/// Convenience wrapper taking a gate name such as `c2`, `rc1` or `swap`.
pub fn named(name: &str) -> Result<GroupElement, GateError> {
    make_named(name.parse()?)
}

pub fn make_ck(k: u32) -> Result<GroupElement, GateError> {
    let top = 1u32 << k;
    let controls = top - 1;
    GroupElement::from_rule(&WindowRule::from_fn(0, k as i64, |x| {
        if x & controls == controls {
            x ^ top
        } else {
            x
        }
    })?)
}

/// The involution exchanging `u` and `v` on coordinates `[0, n-1]`.
pub fn make_word_swap(u: &BitWord, v: &BitWord) -> Result<GroupElement, GateError> {
    if u.len() != v.len() {
        return Err(BitError::UnequalLengths {
            left: u.len(),
            right: v.len(),
        }
        .into());
    }
    if u.is_empty() {
        return Err(GateError::EmptyWindow { lo: 0, hi: -1 });
    }
    let (a, b) = (u.to_int() as u32, v.to_int() as u32);
    GroupElement::from_rule(&WindowRule::from_fn(0, u.len() as i64 - 1, |x| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    })?)
}

/// Asynchronous application of elementary CA rule `b` at coordinate 0.
///
/// Neighbourhoods are numbered in reverse lexicographic order, `111` first,
/// so the new centre bit for neighbourhood value `x` (read MSB-first as
/// `x_-1 x_0 x_1`) is bit `x` of `b`.
pub fn make_eca(b: u32) -> Result<GroupElement, GateError> {
    if b > 255 {
        return Err(GateError::RuleOutOfRange(b));
    }
    let out = |x: u32| (b >> x) & 1;
    for ctx in 0..4u32 {
        let (l, r) = (ctx >> 1, ctx & 1);
        let with0 = (l << 2) | r;
        let with1 = with0 | 0b010;
        if out(with0) == out(with1) {
            return Err(GateError::EcaNotInvertible {
                rule: b,
                left: l == 1,
                right: r == 1,
            });
        }
    }
    GroupElement::from_rule(&WindowRule::from_fn(-1, 1, |x| (x & !0b010) | (out(x) << 1))?)
}
