//! Straight-line programs for the NCT gates built from the flip, one word
//! swap and the shift.
//!
//! Every program is an expression over the atoms `c0@i` and `f@i`, where
//! `f` is the word swap the caller supplied; an atom at `i` is the generator
//! conjugated so that its window moves by `i`. Nothing leaves this module
//! without having been evaluated and compared with its target.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{classify_swap, AnalysisError, SwapClass, SwapVerdict};
use crate::bitcore::{BitError, BitWord};
use crate::gates::{
    evaluate_expr, make_named, make_word_swap, Atom, GateError, GateExpr, GeneratorDict,
    GroupElement, NamedGate,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("{} and {} do not give a universal set ({:?})", .0.u, .0.v, .0.verdict)]
    NotUniversal(Box<SwapClass>),
    #[error("pattern {0} is too short to lose a letter")]
    NothingToEliminate(BitWord),
    #[error("pattern {pattern} has a 1 at its {side} end")]
    BorderBitSet { pattern: BitWord, side: Side },
    #[error("program for {0} does not evaluate to it")]
    VerificationFailed(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Bit(#[from] BitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(format!("expected left or right, got {s:?}")),
        }
    }
}

/// The gates produced by [`synthesize_nct`], each acting at cell 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NctGate {
    C1,
    Rc1,
    S,
    C2,
}

impl NctGate {
    pub const ALL: [NctGate; 4] = [NctGate::C1, NctGate::Rc1, NctGate::S, NctGate::C2];

    pub fn name(self) -> &'static str {
        match self {
            NctGate::C1 => "c1",
            NctGate::Rc1 => "rc1",
            NctGate::S => "s",
            NctGate::C2 => "c2",
        }
    }

    pub fn element(self) -> Result<GroupElement, GateError> {
        make_named(match self {
            NctGate::C1 => NamedGate::CNOT,
            NctGate::Rc1 => NamedGate::ReversedCnot,
            NctGate::S => NamedGate::Swap,
            NctGate::C2 => NamedGate::TOFFOLI,
        })
    }
}

impl fmt::Display for NctGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NctGate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NctGate::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| format!("unknown gate {s:?}, expected c1, rc1, s or c2"))
    }
}

/// Generators `c0` and `f = f_{u,v}`.
pub fn swap_dict(u: &BitWord, v: &BitWord) -> Result<GeneratorDict, SynthError> {
    Ok(GeneratorDict::new()
        .with("c0", make_named(NamedGate::FLIP)?)
        .with("f", make_word_swap(u, v)?))
}

const INVOLUTIONS: [&str; 2] = ["c0", "f"];

fn flip_at(i: i64) -> Atom {
    Atom::new("c0", i)
}

/// An expression for `f_{0^m, pattern}` acting on `[offset, offset + m - 1]`.
#[derive(Clone, Debug)]
struct Placed {
    expr: GateExpr,
    pattern: BitWord,
    offset: i64,
}

impl Placed {
    /// `c0@i F c0@i F`: flipping an unread-as-1 border cell between two
    /// applications leaves the swap acting on the remaining letters only.
    fn eliminate(&self, side: Side) -> Result<Placed, SynthError> {
        let m = self.pattern.len();
        if m < 2 {
            return Err(SynthError::NothingToEliminate(self.pattern));
        }
        let (index, rest, offset) = match side {
            Side::Left => (0, self.pattern.slice(1, m), self.offset + 1),
            Side::Right => (m - 1, self.pattern.slice(0, m - 1), self.offset),
        };
        if self.pattern.bit(index) {
            return Err(SynthError::BorderBitSet {
                pattern: self.pattern,
                side,
            });
        }
        let flip = GateExpr::new(vec![flip_at(self.offset + index as i64)]);
        let expr = GateExpr::concat([&flip, &self.expr, &flip, &self.expr]);
        Ok(Placed {
            expr,
            pattern: rest,
            offset,
        })
    }

    /// Eliminates border zeros until `left` zeros precede the single 1 and
    /// `right` zeros follow it.
    fn trim(&self, left: usize, right: usize) -> Result<Placed, SynthError> {
        let mut p = self.clone();
        while leading_zeros(&p.pattern) > left {
            p = p.eliminate(Side::Left)?;
        }
        while trailing_zeros(&p.pattern) > right {
            p = p.eliminate(Side::Right)?;
        }
        Ok(p)
    }

    /// The program with the window moved to start at cell 0.
    fn at_origin(&self) -> GateExpr {
        self.expr.shifted(-self.offset)
    }
}

fn leading_zeros(w: &BitWord) -> usize {
    w.iter().take_while(|b| !b).count()
}

fn trailing_zeros(w: &BitWord) -> usize {
    w.iter().collect::<Vec<_>>().iter().rev().take_while(|b| !**b).count()
}

fn verified(
    expr: GateExpr,
    dict: &GeneratorDict,
    target: &GroupElement,
    name: &str,
) -> Result<GateExpr, SynthError> {
    let expr = expr.cancel_adjacent(&INVOLUTIONS);
    if evaluate_expr(&expr, dict)? != *target {
        return Err(SynthError::VerificationFailed(name.to_string()));
    }
    Ok(expr)
}

/// One elimination step applied to `f = f_{0^n, v}`, giving
/// `f_{0^(n-1), v'}` at cell 0, where `v'` is `v` without its `side` letter.
pub fn eliminate_bit(v: &BitWord, side: Side) -> Result<GateExpr, SynthError> {
    let n = v.len();
    let zeros = BitWord::zeros(n)?;
    let dict = swap_dict(&zeros, v)?;
    let base = Placed {
        expr: GateExpr::new(vec![Atom::new("f", 0)]),
        pattern: *v,
        offset: 0,
    };
    let step = base.eliminate(side)?;
    let target = make_word_swap(&BitWord::zeros(n - 1)?, &step.pattern)?;
    verified(step.at_origin(), &dict, &target, "eliminated swap")
}

/// Programs for `c1`, `R c1 R`, `s` and `c2` over `{c0, f_{u,v}}`, each
/// evaluated and checked before being returned.
pub fn synthesize_nct(
    u: &BitWord,
    v: &BitWord,
) -> Result<BTreeMap<NctGate, GateExpr>, SynthError> {
    let class = classify_swap(u, v)?;
    if class.verdict != SwapVerdict::Universal {
        return Err(SynthError::NotUniversal(Box::new(class)));
    }
    let dict = swap_dict(u, v)?;

    // conjugate by flips at the 1s of u: f_{u,v} becomes f_{0^n, d(u,v)}
    let flips = GateExpr::new(u.ones_positions().into_iter().map(|i| flip_at(i as i64)).collect());
    let f = GateExpr::new(vec![Atom::new("f", 0)]);
    let start = Placed {
        expr: GateExpr::concat([&flips, &f, &flips]),
        pattern: class.diff,
        offset: 0,
    };

    let f_00_01 = start.trim(1, 0)?.at_origin();
    let f_00_10 = start.trim(0, 1)?.at_origin();
    let f_000_010 = start.trim(1, 1)?.at_origin();

    let single = |i: i64| GateExpr::new(vec![flip_at(i)]);
    let c1 = GateExpr::concat([&single(1), &f_00_10, &single(1)]);
    // f_{10,11} is R c1 R moved one cell to the right
    let f_10_11 = GateExpr::concat([&single(0), &f_00_01, &single(0)]);
    let s = GateExpr::concat([&c1, &f_10_11, &c1]);
    let flips_12 = GateExpr::concat([&single(1), &single(2)]);
    let c2 = GateExpr::concat([&flips_12, &s, &f_000_010, &s, &flips_12]);

    let mut out = BTreeMap::new();
    for (gate, expr) in [
        (NctGate::C1, c1),
        (NctGate::Rc1, f_10_11.shifted(-1)),
        (NctGate::S, s),
        (NctGate::C2, c2),
    ] {
        out.insert(gate, verified(expr, &dict, &gate.element()?, gate.name())?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// The identities that let `{c2, s, c0, sigma}` and
/// `{c2, c1, R c1 R, c0, sigma}` express each other.
pub fn standard_generating_checks() -> Result<Vec<IdentityCheck>, SynthError> {
    let c1 = make_named(NamedGate::CNOT)?;
    let rc1 = make_named(NamedGate::ReversedCnot)?;
    let s = make_named(NamedGate::Swap)?;
    let c2 = make_named(NamedGate::TOFFOLI)?;
    let w = |t: &str| t.parse::<BitWord>();

    let cnot_swap = c1.compose(&rc1.shift_conjugate(1))?.compose(&c1)?;
    let toffoli = make_word_swap(&w("011")?, &w("111")?)?;
    Ok(vec![
        IdentityCheck {
            name: "c1 . (sigma^-1 . R c1 R . sigma) . c1 = s".into(),
            holds: cnot_swap == s,
        },
        IdentityCheck {
            name: "f_{011,111} = c2".into(),
            holds: toffoli == c2,
        },
        IdentityCheck {
            name: "s . s = id".into(),
            holds: s.compose(&s)?.is_identity(),
        },
    ])
}
