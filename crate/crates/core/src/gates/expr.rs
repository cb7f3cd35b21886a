use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use super::inert::{check_width, InertGate, DEFAULT_WINDOW_CAP};
use super::{GateError, GroupElement};

/// One factor `sigma^-k . g . sigma^k` of an expression, where `g` is a
/// named generator (or its inverse).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub name: String,
    pub shift: i64,
    pub inverse: bool,
}

impl Atom {
    pub fn new(name: impl Into<String>, shift: i64) -> Self {
        Self {
            name: name.into(),
            shift,
            inverse: false,
        }
    }

    pub fn inverted(&self) -> Self {
        Self {
            inverse: !self.inverse,
            ..self.clone()
        }
    }

    pub fn shifted(&self, k: i64) -> Self {
        Self {
            shift: self.shift + k,
            ..self.clone()
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        write!(f, "@{}", self.shift)
    }
}

impl FromStr for Atom {
    type Err = GateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GateError::ParseExpr(s.to_string());
        let (head, shift) = match s.rsplit_once('@') {
            Some((head, k)) => (head, k.parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (name, inverse) = match head.strip_suffix("^-1") {
            Some(name) => (name, true),
            None => (head, false),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(bad());
        }
        Ok(Self {
            name: name.to_string(),
            shift,
            inverse,
        })
    }
}

/// A word over shift-conjugated generators. The leftmost atom is applied
/// last, as in ordinary function composition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GateExpr {
    atoms: Vec<Atom>,
}

/// Order in which a word's letters act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionOrder {
    /// `abc` means `a . b . c`: `c` acts first.
    LeftmostLast,
    /// `abc` means `c . b . a`: `a` acts first.
    LeftmostFirst,
}

impl GateExpr {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Self { atoms }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Reads a word of single-letter generator names, e.g. `"abcab"`.
    pub fn from_letters(word: &str) -> Result<Self, GateError> {
        word.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                if c.is_ascii_alphanumeric() {
                    Ok(Atom::new(c.to_string(), 0))
                } else {
                    Err(GateError::ParseExpr(c.to_string()))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn push(&mut self, atom: Atom) {
        self.atoms.push(atom);
    }

    /// `self` followed (on the right, i.e. applied earlier) by `other`.
    pub fn then(mut self, other: &GateExpr) -> Self {
        self.atoms.extend_from_slice(&other.atoms);
        self
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a GateExpr>) -> Self {
        Self::new(parts.into_iter().flat_map(|p| p.atoms.iter().cloned()).collect())
    }

    /// Conjugate by `sigma^k`: every atom moves `k` cells to the right.
    pub fn shifted(&self, k: i64) -> Self {
        Self::new(self.atoms.iter().map(|a| a.shifted(k)).collect())
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.atoms.iter().rev().map(Atom::inverted).collect())
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.atoms.iter().rev().cloned().collect())
    }

    /// Removes adjacent pairs that cancel: `x x^-1`, and `x x` for the
    /// generators listed in `involutions`.
    pub fn cancel_adjacent(&self, involutions: &[&str]) -> Self {
        let mut out: Vec<Atom> = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            let cancels = out.last().is_some_and(|prev| {
                prev.name == atom.name
                    && prev.shift == atom.shift
                    && (prev.inverse != atom.inverse
                        || involutions.contains(&atom.name.as_str()))
            });
            if cancels {
                out.pop();
            } else {
                out.push(atom.clone());
            }
        }
        Self::new(out)
    }
}

impl fmt::Display for GateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

impl FromStr for GateExpr {
    type Err = GateError;

    /// Parses whitespace- or comma-separated atoms such as `e57@1 e57@0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

/// Generators available to an expression, plus the table-width cap used
/// while evaluating.
#[derive(Clone, Debug)]
pub struct GeneratorDict {
    generators: BTreeMap<String, GroupElement>,
    window_cap: usize,
}

impl Default for GeneratorDict {
    fn default() -> Self {
        Self {
            generators: BTreeMap::new(),
            window_cap: DEFAULT_WINDOW_CAP,
        }
    }
}

impl GeneratorDict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_window_cap(mut self, cap: usize) -> Self {
        self.window_cap = cap;
        self
    }

    pub fn window_cap(&self) -> usize {
        self.window_cap
    }

    pub fn insert(&mut self, name: impl Into<String>, element: GroupElement) -> &mut Self {
        self.generators.insert(name.into(), element);
        self
    }

    pub fn with(mut self, name: impl Into<String>, element: GroupElement) -> Self {
        self.insert(name, element);
        self
    }

    pub fn get(&self, name: &str) -> Option<&GroupElement> {
        self.generators.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    /// Names of the generators that are their own inverse.
    pub fn involutions(&self) -> Vec<&str> {
        self.generators
            .iter()
            .filter(|(_, g)| g.inverse() == **g)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn resolve(&self, atom: &Atom) -> Result<GroupElement, GateError> {
        let base = self
            .generators
            .get(&atom.name)
            .ok_or_else(|| GateError::UnknownGenerator(atom.name.clone()))?;
        let g = if atom.inverse { base.inverse() } else { base.clone() };
        Ok(g.shift_conjugate(atom.shift))
    }
}

pub fn evaluate_expr(expr: &GateExpr, dict: &GeneratorDict) -> Result<GroupElement, GateError> {
    evaluate_with_order(expr, dict, CompositionOrder::LeftmostLast)
}

/// Evaluates an expression. Purely inert words are run on one table over the
/// hull of all factor windows; words containing shifts fall back to pairwise
/// composition.
pub fn evaluate_with_order(
    expr: &GateExpr,
    dict: &GeneratorDict,
    order: CompositionOrder,
) -> Result<GroupElement, GateError> {
    let mut cache: HashMap<&Atom, GroupElement> = HashMap::new();
    let mut factors: Vec<GroupElement> = Vec::with_capacity(expr.len());
    for atom in expr.atoms() {
        if let Some(g) = cache.get(atom) {
            factors.push(g.clone());
        } else {
            let g = dict.resolve(atom)?;
            cache.insert(atom, g.clone());
            factors.push(g);
        }
    }
    // application order, first to act first
    if order == CompositionOrder::LeftmostLast {
        factors.reverse();
    }
    compose_in_application_order(&factors, dict.window_cap())
}

/// Composes factors where `factors[0]` acts first.
pub fn compose_in_application_order(
    factors: &[GroupElement],
    cap: usize,
) -> Result<GroupElement, GateError> {
    if factors.iter().all(GroupElement::is_inert) {
        let gates: Vec<&InertGate> = factors
            .iter()
            .map(GroupElement::inert)
            .filter(|g| !g.is_identity())
            .collect();
        let Some(lo) = gates.iter().filter_map(|g| g.window()).map(|w| w.0).min() else {
            return Ok(GroupElement::identity());
        };
        let hi = gates.iter().filter_map(|g| g.window()).map(|w| w.1).max().unwrap();
        let width = check_width(lo, hi, cap)?;
        let table: Vec<u32> = (0..1u64 << width)
            .map(|x| gates.iter().fold(x, |y, g| g.act(y, lo, width)) as u32)
            .collect();
        return Ok(GroupElement::from_inert(InertGate::from_trusted_table(lo, width, table)));
    }
    factors
        .iter()
        .try_fold(GroupElement::identity(), |acc, f| f.compose_capped(&acc, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{make_eca, named};

    #[test]
    fn atom_syntax() {
        let e: GateExpr = "e57@1 e57@0, e57@-1 f^-1@3 c0".parse().unwrap();
        assert_eq!(e.len(), 5);
        assert_eq!(e.atoms()[2], Atom::new("e57", -1));
        assert!(e.atoms()[3].inverse);
        assert_eq!(e.to_string(), "e57@1 e57@0 e57@-1 f^-1@3 c0@0");
        assert_eq!(e.to_string().parse::<GateExpr>().unwrap(), e);
        assert!("a@x".parse::<GateExpr>().is_err());
    }

    #[test]
    fn empty_expression_is_identity() {
        let dict = GeneratorDict::new();
        assert!(evaluate_expr(&GateExpr::empty(), &dict).unwrap().is_identity());
    }

    #[test]
    fn unknown_generator_is_reported() {
        let dict = GeneratorDict::new();
        let err = evaluate_expr(&"zz@0".parse().unwrap(), &dict).unwrap_err();
        assert!(matches!(err, GateError::UnknownGenerator(n) if n == "zz"));
    }

    #[test]
    fn word_times_inverse_is_identity() {
        let e = make_eca(57).unwrap();
        let dict = GeneratorDict::new()
            .with("a", e.shift_conjugate(-1))
            .with("b", e.clone())
            .with("sigma", named("sigma").unwrap());
        let ab: GateExpr = "a b sigma@0".parse().unwrap();
        let whole = ab.clone().then(&ab.inverse());
        assert!(evaluate_expr(&whole, &dict).unwrap().is_identity());
        assert_eq!(ab.inverse().to_string(), "sigma^-1@0 b^-1@0 a^-1@0");
    }

    #[test]
    fn order_matters_for_non_commuting_factors() {
        let dict = GeneratorDict::new()
            .with("c", named("c1").unwrap())
            .with("n", named("c0").unwrap().shift_conjugate(1));
        let expr: GateExpr = "c n".parse().unwrap();
        let last = evaluate_with_order(&expr, &dict, CompositionOrder::LeftmostLast).unwrap();
        let first = evaluate_with_order(&expr, &dict, CompositionOrder::LeftmostFirst).unwrap();
        assert_ne!(last, first);
        assert_eq!(last, dict.get("c").unwrap().compose(dict.get("n").unwrap()).unwrap());
    }

    #[test]
    fn peephole_cancels_pairs() {
        let e: GateExpr = "f@0 c0@1 c0@1 f@0 g@2 g^-1@2 h@0".parse().unwrap();
        assert_eq!(e.cancel_adjacent(&["c0", "f"]).to_string(), "h@0");
        assert_eq!(e.cancel_adjacent(&[]).to_string(), "f@0 c0@1 c0@1 f@0 h@0");
    }
}
