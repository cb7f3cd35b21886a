//! The 50-letter word expressing the flip through three neighbouring copies
//! of ECA 57, and the convention probe that checks it.

use serde::Serialize;

use super::expr::{evaluate_with_order, CompositionOrder, GateExpr, GeneratorDict};
use super::{make_eca, make_named, GateError, GroupElement, NamedGate};

pub const FLIP_WORD: &str = "abcabcbababacbabababcbcabacbabcbcbcbcabcbcbabacbcb";

/// How the letters `a`, `b`, `c` are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LetterConvention {
    /// `a = sigma . e . sigma^-1` acts at cell -1, `b = e` at 0,
    /// `c = sigma^-1 . e . sigma` at cell +1.
    Standard,
    /// `a` at +1 and `c` at -1.
    Mirrored,
}

impl LetterConvention {
    pub fn shifts(self) -> [(char, i64); 3] {
        match self {
            LetterConvention::Standard => [('a', -1), ('b', 0), ('c', 1)],
            LetterConvention::Mirrored => [('a', 1), ('b', 0), ('c', -1)],
        }
    }
}

pub fn letter_dict(base: &GroupElement, convention: LetterConvention) -> GeneratorDict {
    convention
        .shifts()
        .iter()
        .fold(GeneratorDict::new(), |dict, &(letter, k)| {
            dict.with(letter.to_string(), base.shift_conjugate(k))
        })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConventionResult {
    pub convention: LetterConvention,
    pub order: CompositionOrder,
    pub equals_target: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlipIdentityReport {
    pub word: String,
    pub results: Vec<ConventionResult>,
}

impl FlipIdentityReport {
    /// Letter conventions under which the word equals the target in at least
    /// one reading order.
    pub fn validating_conventions(&self) -> Vec<LetterConvention> {
        let mut out = Vec::new();
        for r in self.results.iter().filter(|r| r.equals_target) {
            if !out.contains(&r.convention) {
                out.push(r.convention);
            }
        }
        out
    }

    pub fn holds(&self, convention: LetterConvention, order: CompositionOrder) -> bool {
        self.results
            .iter()
            .any(|r| r.convention == convention && r.order == order && r.equals_target)
    }
}

/// Evaluates `word` over letters built from `base` under every convention
/// and reading order, comparing each result with `target`.
pub fn probe_conventions(
    word: &str,
    base: &GroupElement,
    target: &GroupElement,
) -> Result<FlipIdentityReport, GateError> {
    let expr = GateExpr::from_letters(word)?;
    let mut results = Vec::new();
    for convention in [LetterConvention::Standard, LetterConvention::Mirrored] {
        let dict = letter_dict(base, convention);
        for order in [CompositionOrder::LeftmostLast, CompositionOrder::LeftmostFirst] {
            let value = evaluate_with_order(&expr, &dict, order)?;
            results.push(ConventionResult {
                convention,
                order,
                equals_target: &value == target,
            });
        }
    }
    Ok(FlipIdentityReport {
        word: word.to_string(),
        results,
    })
}

/// Checks the flip word over ECA 57.
pub fn check_flip_identity() -> Result<FlipIdentityReport, GateError> {
    probe_conventions(FLIP_WORD, &make_eca(57)?, &make_named(NamedGate::FLIP)?)
}
