//! A straight-line grammar producing the standard gates as strings over
//! `1..=6`, where letter `i` stands for ECA 57 applied at cell `i`
//! (`sigma^-i . e57 . sigma^i`).
//!
//! Productions are written in composition order: `X -> A B` denotes `A . B`,
//! so `B` acts first. [`Slg::expand`] returns the string in application
//! order (first letter acts first); [`Slg::expand_as_written`] reads every
//! right-hand side left to right. The literal `N_i` strings are the same
//! either way up to reversal, and since every letter and every `N_i` is an
//! involution the two readings evaluate to the same gate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::cyclic::{project_formula, CyclicError, CyclicPerm};
use crate::gates::{
    compose_in_application_order, make_eca, make_named, CompositionOrder, GateError,
    GroupElement, NamedGate, DEFAULT_WINDOW_CAP,
};

/// Anchors tried when locating the target.
pub const ANCHOR_RANGE: std::ops::RangeInclusive<i64> = 0..=8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("{0} is not a start symbol (use N3, C3, T3, D3 or S3)")]
    NotAStart(Nonterminal),
    #[error("grammar is not straight-line: {0} derives itself")]
    Cyclic(Nonterminal),
    #[error("{0} has no production")]
    MissingProduction(Nonterminal),
    #[error("no anchor in 0..=8 matches for {0}")]
    NoAnchor(Nonterminal),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Ring(#[from] CyclicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Nonterminal {
    N2,
    N3,
    N4,
    N5,
    C3,
    T3,
    D3,
    D4,
    S3,
    /// `N3` followed by the letter 3.
    E3,
    /// `N4` followed by the letter 4.
    E4,
}

impl Nonterminal {
    pub const ALL: [Nonterminal; 11] = [
        Nonterminal::N2,
        Nonterminal::N3,
        Nonterminal::N4,
        Nonterminal::N5,
        Nonterminal::C3,
        Nonterminal::T3,
        Nonterminal::D3,
        Nonterminal::D4,
        Nonterminal::S3,
        Nonterminal::E3,
        Nonterminal::E4,
    ];

    pub const STARTS: [Nonterminal; 5] = [
        Nonterminal::N3,
        Nonterminal::C3,
        Nonterminal::T3,
        Nonterminal::D3,
        Nonterminal::S3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Nonterminal::N2 => "N2",
            Nonterminal::N3 => "N3",
            Nonterminal::N4 => "N4",
            Nonterminal::N5 => "N5",
            Nonterminal::C3 => "C3",
            Nonterminal::T3 => "T3",
            Nonterminal::D3 => "D3",
            Nonterminal::D4 => "D4",
            Nonterminal::S3 => "S3",
            Nonterminal::E3 => "E3",
            Nonterminal::E4 => "E4",
        }
    }

    pub fn is_start(self) -> bool {
        Self::STARTS.contains(&self)
    }

    /// The gate a start symbol is meant to produce, at cell 0.
    pub fn target(self) -> Result<GroupElement, GrammarError> {
        let gate = match self {
            Nonterminal::N3 => NamedGate::FLIP,
            Nonterminal::C3 => NamedGate::CNOT,
            Nonterminal::D3 => NamedGate::ReversedCnot,
            Nonterminal::S3 => NamedGate::Swap,
            Nonterminal::T3 => NamedGate::TOFFOLI,
            other => return Err(GrammarError::NotAStart(other)),
        };
        Ok(make_named(gate)?)
    }

    /// The reference string for a start symbol, kept alongside the crate
    /// as golden data.
    pub fn reference_string(self) -> Result<&'static str, GrammarError> {
        let raw = match self {
            Nonterminal::N3 => include_str!("../fixtures/standard_gates/N3.txt"),
            Nonterminal::C3 => include_str!("../fixtures/standard_gates/C3.txt"),
            Nonterminal::T3 => include_str!("../fixtures/standard_gates/T3.txt"),
            Nonterminal::D3 => include_str!("../fixtures/standard_gates/D3.txt"),
            Nonterminal::S3 => include_str!("../fixtures/standard_gates/S3.txt"),
            other => return Err(GrammarError::NotAStart(other)),
        };
        Ok(raw.trim())
    }
}

impl fmt::Display for Nonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Nonterminal {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | '\u{304}'))
            .map(|c| if c == 'Ē' { 'E' } else { c.to_ascii_uppercase() })
            .collect();
        let key = key.replace("BAR", "");
        Self::ALL
            .into_iter()
            .find(|n| n.name() == key)
            .ok_or_else(|| GrammarError::UnknownSymbol(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Letter(u8),
    Var(Nonterminal),
}

const PRODUCTIONS: [(Nonterminal, &str); 11] = [
    (Nonterminal::T3, "S3 N3 E4 N3 S3"),
    (Nonterminal::S3, "C3 D4 C3"),
    (Nonterminal::C3, "E3 N2 E3 N2"),
    (Nonterminal::D3, "N2 E3 N4 E3 N2 N4"),
    (Nonterminal::D4, "N3 E4 N5 E4 N3 N5"),
    (Nonterminal::E3, "N3 3"),
    (Nonterminal::E4, "N4 4"),
    (Nonterminal::N2, "12312321212132121212323121321232323231232321213232"),
    (Nonterminal::N3, "23423432323243232323434232432343434342343432324343"),
    (Nonterminal::N4, "34534543434354343434545343543454545453454543435454"),
    (Nonterminal::N5, "45645654545465454545656454654565656564565654546565"),
];

fn parse_rhs(rhs: &str) -> Result<Vec<Symbol>, GrammarError> {
    let mut out = Vec::new();
    for token in rhs.split_whitespace() {
        if token.chars().all(|c| c.is_ascii_digit()) {
            for c in token.chars() {
                match c.to_digit(10) {
                    Some(d @ 1..=6) => out.push(Symbol::Letter(d as u8)),
                    _ => return Err(GrammarError::UnknownSymbol(c.to_string())),
                }
            }
        } else {
            out.push(Symbol::Var(token.parse()?));
        }
    }
    Ok(out)
}

/// The straight-line grammar.
#[derive(Clone, Debug)]
pub struct Slg {
    productions: BTreeMap<Nonterminal, Vec<Symbol>>,
}

impl Slg {
    /// Loads the built-in productions and checks that they are acyclic.
    pub fn standard() -> Result<Self, GrammarError> {
        let productions = PRODUCTIONS
            .iter()
            .map(|&(lhs, rhs)| Ok((lhs, parse_rhs(rhs)?)))
            .collect::<Result<BTreeMap<_, _>, GrammarError>>()?;
        let slg = Self { productions };
        slg.check_acyclic()?;
        Ok(slg)
    }

    pub fn production(&self, n: Nonterminal) -> Result<&[Symbol], GrammarError> {
        self.productions
            .get(&n)
            .map(Vec::as_slice)
            .ok_or(GrammarError::MissingProduction(n))
    }

    fn check_acyclic(&self) -> Result<(), GrammarError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit(
            slg: &Slg,
            n: Nonterminal,
            marks: &mut BTreeMap<Nonterminal, Mark>,
        ) -> Result<(), GrammarError> {
            match marks.get(&n) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => return Err(GrammarError::Cyclic(n)),
                None => {}
            }
            marks.insert(n, Mark::Open);
            for sym in slg.production(n)? {
                if let Symbol::Var(m) = sym {
                    visit(slg, *m, marks)?;
                }
            }
            marks.insert(n, Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for n in Nonterminal::ALL {
            visit(self, n, &mut marks)?;
        }
        Ok(())
    }

    fn expand_into(&self, n: Nonterminal, reverse: bool, out: &mut String) -> Result<(), GrammarError> {
        let rhs = self.production(n)?;
        let literal = rhs.iter().all(|s| matches!(s, Symbol::Letter(_)));
        let emit = |sym: &Symbol, out: &mut String| -> Result<(), GrammarError> {
            match sym {
                Symbol::Letter(d) => out.push(char::from(b'0' + d)),
                Symbol::Var(m) => self.expand_into(*m, reverse, out)?,
            }
            Ok(())
        };
        // literal strings are data, not compositions, and are kept as given
        if reverse && !literal {
            for sym in rhs.iter().rev() {
                emit(sym, out)?;
            }
        } else {
            for sym in rhs {
                emit(sym, out)?;
            }
        }
        Ok(())
    }

    /// The derived string in application order.
    pub fn expand(&self, start: Nonterminal) -> Result<String, GrammarError> {
        let mut out = String::new();
        self.expand_into(start, true, &mut out)?;
        Ok(out)
    }

    /// The derived string with every production read left to right.
    pub fn expand_as_written(&self, start: Nonterminal) -> Result<String, GrammarError> {
        let mut out = String::new();
        self.expand_into(start, false, &mut out)?;
        Ok(out)
    }

    /// Like [`expand`](Self::expand) but accepts only start symbols.
    pub fn expand_start(&self, start: Nonterminal) -> Result<String, GrammarError> {
        if !start.is_start() {
            return Err(GrammarError::NotAStart(start));
        }
        self.expand(start)
    }
}

/// Gate for the letter `i`: ECA 57 at cell `i`.
pub fn letter_gate(i: u8) -> Result<GroupElement, GateError> {
    Ok(make_eca(57)?.shift_conjugate(i as i64))
}

/// Evaluates a string over `1..=6`, read in `order`.
pub fn evaluate_string(s: &str, order: CompositionOrder) -> Result<GroupElement, GrammarError> {
    let letters: Vec<GroupElement> = (0..=9u8).map(letter_gate).collect::<Result<_, _>>()?;
    let mut factors = s
        .bytes()
        .map(|b| match b {
            b'0'..=b'9' => Ok(letters[(b - b'0') as usize].clone()),
            _ => Err(GrammarError::UnknownSymbol((b as char).to_string())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    if order == CompositionOrder::LeftmostLast {
        factors.reverse();
    }
    Ok(compose_in_application_order(&factors, DEFAULT_WINDOW_CAP)?)
}

fn find_anchor(value: &GroupElement, target: &GroupElement) -> Option<i64> {
    ANCHOR_RANGE.into_iter().find(|&k| target.shift_conjugate(k) == *value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderResult {
    pub order: CompositionOrder,
    pub anchor: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemanticsReport {
    pub start: Nonterminal,
    pub length: usize,
    pub orders: Vec<OrderResult>,
}

impl SemanticsReport {
    /// The anchor under application order, which the ring check also uses.
    pub fn anchor(&self) -> Option<i64> {
        self.orders
            .iter()
            .find(|r| r.order == CompositionOrder::LeftmostFirst)
            .and_then(|r| r.anchor)
    }

    pub fn passed(&self) -> bool {
        self.anchor().is_some()
    }
}

/// Evaluates the expansion of `start` on the full shift under both reading
/// orders and locates `target` among its translates to cells `0..=8`.
pub fn verify_semantics(
    slg: &Slg,
    start: Nonterminal,
    target: &GroupElement,
) -> Result<SemanticsReport, GrammarError> {
    let s = slg.expand(start)?;
    let orders = [CompositionOrder::LeftmostFirst, CompositionOrder::LeftmostLast]
        .into_iter()
        .map(|order| {
            Ok(OrderResult {
                order,
                anchor: find_anchor(&evaluate_string(&s, order)?, target),
            })
        })
        .collect::<Result<Vec<_>, GrammarError>>()?;
    Ok(SemanticsReport {
        start,
        length: s.len(),
        orders,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub start: Nonterminal,
    pub n: u32,
    pub anchor: i64,
    pub holds: bool,
}

/// Projects every letter to the ring of size `n`, composes the projections
/// in application order and compares with the projected target at the
/// anchor found on the full shift.
pub fn verify_on_ring(
    slg: &Slg,
    start: Nonterminal,
    target: &GroupElement,
    n: u32,
) -> Result<RingReport, GrammarError> {
    let anchor = verify_semantics(slg, start, target)?
        .anchor()
        .ok_or(GrammarError::NoAnchor(start))?;
    let s = slg.expand(start)?;
    let projected: Vec<CyclicPerm> = (0..=6u8)
        .map(|i| project_formula(&letter_gate(i)?, n).map_err(GrammarError::from))
        .collect::<Result<_, _>>()?;
    let want = project_formula(&target.shift_conjugate(anchor), n)?;
    let letters: Vec<usize> = s.bytes().map(|b| (b - b'0') as usize).collect();
    let holds = (0..1u32 << n).all(|w| {
        let image = letters.iter().fold(w, |x, &i| projected[i].image(x));
        image == want.image(w)
    });
    Ok(RingReport {
        start,
        n,
        anchor,
        holds,
    })
}

/// Letters removed by repeatedly cancelling adjacent equal letters (each
/// letter is an involution), together with the reduced string.
pub fn cancel_repeats(s: &str) -> (usize, String) {
    let mut out: Vec<u8> = Vec::with_capacity(s.len());
    for b in s.bytes() {
        if out.last() == Some(&b) {
            out.pop();
        } else {
            out.push(b);
        }
    }
    (s.len() - out.len(), String::from_utf8(out).expect("ascii digits"))
}

/// Positions `i` with `s[i] == s[i + 1]`.
pub fn adjacent_repeats(s: &str) -> Vec<usize> {
    s.as_bytes()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] == w[1])
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::named;

    fn slg() -> Slg {
        Slg::standard().unwrap()
    }

    #[test]
    fn expansions_match_reference_strings() {
        let g = slg();
        for start in Nonterminal::STARTS {
            assert_eq!(g.expand(start).unwrap(), start.reference_string().unwrap(), "{start}");
        }
        assert_eq!(
            g.expand(Nonterminal::N3).unwrap(),
            "23423432323243232323434232432343434342343432324343"
        );
    }

    #[test]
    fn bar_symbols_append_their_letter() {
        let g = slg();
        assert_eq!(
            g.expand_as_written(Nonterminal::E3).unwrap(),
            format!("{}3", g.expand(Nonterminal::N3).unwrap())
        );
        assert!(g.expand_start(Nonterminal::E3).is_err());
    }

    #[test]
    fn written_order_differs_but_evaluates_alike() {
        let g = slg();
        let c = Nonterminal::C3;
        assert_ne!(g.expand(c).unwrap(), g.expand_as_written(c).unwrap());
        let a = evaluate_string(&g.expand(c).unwrap(), CompositionOrder::LeftmostFirst).unwrap();
        let b = evaluate_string(&g.expand_as_written(c).unwrap(), CompositionOrder::LeftmostLast)
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn symbol_names_parse() {
        assert_eq!("Ē4".parse::<Nonterminal>().unwrap(), Nonterminal::E4);
        assert_eq!("n_3".parse::<Nonterminal>().unwrap(), Nonterminal::N3);
        assert_eq!("E3bar".parse::<Nonterminal>().unwrap(), Nonterminal::E3);
        assert!("X9".parse::<Nonterminal>().is_err());
    }

    #[test]
    fn semantics_on_the_line() {
        let g = slg();
        let mut anchors = Vec::new();
        for start in Nonterminal::STARTS {
            let report = verify_semantics(&g, start, &start.target().unwrap()).unwrap();
            assert!(report.passed(), "{start}: {report:?}");
            anchors.push(report.anchor().unwrap());
        }
        assert!(anchors.iter().all(|&a| a == anchors[0]), "{anchors:?}");
        assert!((2..=5).contains(&anchors[0]));
    }

    #[test]
    fn bar_reuse_is_consistent() {
        let g = slg();
        let e4 = evaluate_string(&g.expand(Nonterminal::E4).unwrap(), CompositionOrder::LeftmostFirst)
            .unwrap();
        let n4 = evaluate_string(&g.expand(Nonterminal::N4).unwrap(), CompositionOrder::LeftmostFirst)
            .unwrap();
        assert_eq!(e4, n4.compose(&letter_gate(4).unwrap()).unwrap());
    }

    #[test]
    fn ring_examples() {
        let g = slg();
        let t = Nonterminal::T3;
        assert!(verify_on_ring(&g, t, &t.target().unwrap(), 8).unwrap().holds);
        let n = Nonterminal::N3;
        assert!(verify_on_ring(&g, n, &n.target().unwrap(), 12).unwrap().holds);
        for start in Nonterminal::STARTS {
            assert!(verify_on_ring(&g, start, &start.target().unwrap(), 4).unwrap().holds, "{start}");
        }
    }

    #[test]
    fn repeats() {
        assert_eq!(cancel_repeats("1223321"), (4, "121".to_string()));
        assert_eq!(cancel_repeats("122331"), (6, String::new()));
        assert_eq!(adjacent_repeats("1223"), vec![1]);
    }

    #[test]
    fn toffoli_string_has_eight_removable_letters() {
        let t = slg().expand(Nonterminal::T3).unwrap();
        assert_eq!(adjacent_repeats(&t), vec![352, 1209]);
        let (removed, reduced) = cancel_repeats(&t);
        assert_eq!(removed, 8);
        assert_eq!(
            evaluate_string(&reduced, CompositionOrder::LeftmostFirst).unwrap(),
            named("c2").unwrap().shift_conjugate(3)
        );
    }
}
