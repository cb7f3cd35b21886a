//! Breadth-first and meet-in-the-middle search for words over a finite set
//! of inert generators that evaluate to a target gate.
//!
//! All generators act inside a common window (the hull of their windows and
//! the target's), so every product is a permutation of that window's words
//! and a state is just its table. Words are read like expressions: the
//! leftmost letter acts last. Among words of equal length the
//! lexicographically least (in generator order) is returned.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::gates::{
    evaluate_expr, make_eca, named, Atom, GateError, GateExpr, GeneratorDict, GroupElement,
    InertGate,
};

/// Widest common window searched; tables have `2^width` entries.
pub const MAX_SEARCH_WIDTH: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("generator {0} has a nonzero shift, so its ball is unbounded")]
    NonInertGenerator(usize),
    #[error("the target has a nonzero shift")]
    NonInertTarget,
    #[error("no generators given")]
    NoGenerators,
    #[error("max depth must be at least 1")]
    ZeroDepth,
    #[error("common window of width {0} exceeds {MAX_SEARCH_WIDTH}")]
    WindowTooWide(u32),
    #[error("found word failed re-evaluation")]
    CertificationFailed,
    #[error("cannot parse generator {0:?}")]
    BadGenerator(String),
    #[error("cannot parse byte count {0:?}")]
    BadByteCount(String),
    #[error(transparent)]
    Gate(#[from] GateError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Bfs,
    Mitm,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bfs" => Ok(Strategy::Bfs),
            "mitm" => Ok(Strategy::Mitm),
            _ => Err(format!("unknown strategy {s:?}, expected bfs or mitm")),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Bfs => "bfs",
            Strategy::Mitm => "mitm",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub generators: Vec<GroupElement>,
    /// Display names, one per generator; defaults to `g0, g1, ...`.
    pub labels: Vec<String>,
    pub target: GroupElement,
    pub max_depth: usize,
    pub memory_budget: u64,
    pub strategy: Strategy,
}

impl SearchConfig {
    pub fn new(generators: Vec<GroupElement>, target: GroupElement) -> Self {
        let labels = (0..generators.len()).map(|i| format!("g{i}")).collect();
        Self {
            generators,
            labels,
            target,
            max_depth: 10,
            memory_budget: 1 << 30,
            strategy: Strategy::Bfs,
        }
    }

    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = labels;
        self
    }

    pub fn max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn memory_budget(mut self, bytes: u64) -> Self {
        self.memory_budget = bytes;
        self
    }

    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }
}

/// Parses a generator such as `e57@-1`, `c1@2` or `swap`.
pub fn parse_generator(text: &str) -> Result<GroupElement, SearchError> {
    let bad = || SearchError::BadGenerator(text.to_string());
    let (name, shift) = match text.rsplit_once('@') {
        Some((name, k)) => (name, k.parse::<i64>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let base = match name.strip_prefix('e').and_then(|r| r.parse::<u32>().ok()) {
        Some(rule) => make_eca(rule)?,
        None => named(name).map_err(|_| bad())?,
    };
    Ok(base.shift_conjugate(shift))
}

/// Parses sizes like `512M`, `8G` or a plain byte count.
pub fn parse_bytes(s: &str) -> Result<u64, SearchError> {
    let t = s.trim();
    let (digits, mult) = match t.char_indices().last() {
        Some((i, c)) if c.is_ascii_alphabetic() => {
            let mult = match c.to_ascii_uppercase() {
                'K' => 1u64 << 10,
                'M' => 1 << 20,
                'G' => 1 << 30,
                'T' => 1 << 40,
                'B' => 1,
                _ => return Err(SearchError::BadByteCount(s.to_string())),
            };
            (&t[..i], mult)
        }
        _ => (t, 1),
    };
    digits
        .parse::<u64>()
        .ok()
        .and_then(|d| d.checked_mul(mult))
        .ok_or_else(|| SearchError::BadByteCount(s.to_string()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Distinct group elements stored.
    pub states: usize,
    /// Radius fully explored.
    pub depth_reached: usize,
    /// Elements first reached at the last explored radius.
    pub frontier: usize,
    /// Estimated bytes held by the visited set.
    pub bytes: u64,
    /// Number of elements at each radius `0, 1, ...`.
    pub sphere_sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found {
        /// Generator indices, leftmost acting last.
        word: Vec<usize>,
        expr: String,
        /// No shorter word exists.
        minimal: bool,
        stats: SearchStats,
    },
    NotFoundWithinDepth { stats: SearchStats },
    BudgetExceeded { stats: SearchStats },
}

impl SearchOutcome {
    pub fn word(&self) -> Option<&[usize]> {
        match self {
            SearchOutcome::Found { word, .. } => Some(word),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            SearchOutcome::Found { stats, .. }
            | SearchOutcome::NotFoundWithinDepth { stats }
            | SearchOutcome::BudgetExceeded { stats } => stats,
        }
    }
}

const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    parent: u32,
    generator: u8,
    depth: u16,
}

/// Elements reachable within some radius, each with its shortlex-least word.
struct Ball {
    nodes: Vec<Node>,
    tables: Vec<Box<[u16]>>,
    index: HashMap<Box<[u16]>, u32>,
    entries: usize,
    entry_bytes: u64,
}

impl Ball {
    fn new(entries: usize) -> Self {
        Self {
            nodes: Vec::new(),
            tables: Vec::new(),
            index: HashMap::new(),
            entries,
            // the table twice (arena and key), the node, map bookkeeping
            entry_bytes: 2 * 2 * entries as u64 + 64,
        }
    }

    fn bytes(&self) -> u64 {
        self.nodes.len() as u64 * self.entry_bytes
    }

    fn insert(&mut self, table: Box<[u16]>, node: Node) -> bool {
        if self.index.contains_key(&table) {
            return false;
        }
        self.index.insert(table.clone(), self.nodes.len() as u32);
        self.tables.push(table);
        self.nodes.push(node);
        true
    }

    fn word(&self, mut i: u32) -> Vec<usize> {
        let mut word = Vec::new();
        while self.nodes[i as usize].parent != NO_PARENT {
            word.push(self.nodes[i as usize].generator as usize);
            i = self.nodes[i as usize].parent;
        }
        word.reverse();
        word
    }

    fn stats(&self, depth_reached: usize, sphere_sizes: &[usize]) -> SearchStats {
        SearchStats {
            states: self.nodes.len(),
            depth_reached,
            frontier: sphere_sizes.last().copied().unwrap_or(0),
            bytes: self.bytes(),
            sphere_sizes: sphere_sizes.to_vec(),
        }
    }
}

enum Grown {
    /// The target (if given) was met at this node.
    Hit(u32),
    Done(usize),
    OverBudget(usize),
}

/// Tables of the generators and target over their common window.
struct Setup {
    gens: Vec<Vec<u16>>,
    target: Box<[u16]>,
    entries: usize,
}

fn setup(cfg: &SearchConfig) -> Result<Setup, SearchError> {
    if cfg.generators.is_empty() {
        return Err(SearchError::NoGenerators);
    }
    if cfg.max_depth == 0 {
        return Err(SearchError::ZeroDepth);
    }
    if let Some(i) = cfg.generators.iter().position(|g| !g.is_inert()) {
        return Err(SearchError::NonInertGenerator(i));
    }
    if !cfg.target.is_inert() {
        return Err(SearchError::NonInertTarget);
    }
    let windows: Vec<(i64, i64)> = cfg
        .generators
        .iter()
        .chain(std::iter::once(&cfg.target))
        .filter_map(|g| g.inert().window())
        .collect();
    let (lo, hi) = windows
        .iter()
        .fold((i64::MAX, i64::MIN), |(a, b), w| (a.min(w.0), b.max(w.1)));
    let (lo, hi) = if windows.is_empty() { (0, 0) } else { (lo, hi) };
    let width = (hi - lo + 1) as u32;
    if width > MAX_SEARCH_WIDTH {
        return Err(SearchError::WindowTooWide(width));
    }
    // entries fit in u16 because the width is at most 16
    let table = |g: &InertGate| -> Vec<u16> { g.table_on(lo, hi).into_iter().map(|y| y as u16).collect() };
    Ok(Setup {
        gens: cfg.generators.iter().map(|g| table(g.inert())).collect(),
        target: table(cfg.target.inert()).into_boxed_slice(),
        entries: 1 << width,
    })
}

/// Grows the ball radius by radius, appending letters on the right, so each
/// element is first reached by its shortlex-least word.
fn grow(
    ball: &mut Ball,
    gens: &[Vec<u16>],
    max_depth: usize,
    budget: u64,
    target: Option<&[u16]>,
    spheres: &mut Vec<usize>,
) -> Grown {
    let identity: Box<[u16]> = (0..ball.entries).map(|x| x as u16).collect();
    ball.insert(
        identity.clone(),
        Node {
            parent: NO_PARENT,
            generator: 0,
            depth: 0,
        },
    );
    spheres.push(1);
    if target == Some(&identity[..]) {
        return Grown::Hit(0);
    }
    let mut start = 0usize;
    for depth in 1..=max_depth {
        let end = ball.nodes.len();
        for parent in start..end {
            for (gi, g) in gens.iter().enumerate() {
                // word + g means the parent acts after g
                let p = &ball.tables[parent];
                let child: Box<[u16]> = g.iter().map(|&y| p[y as usize]).collect();
                let node = Node {
                    parent: parent as u32,
                    generator: gi as u8,
                    depth: depth as u16,
                };
                if ball.insert(child, node) {
                    let id = ball.nodes.len() as u32 - 1;
                    if target == Some(&ball.tables[id as usize][..]) {
                        spheres.push(ball.nodes.len() - end);
                        return Grown::Hit(id);
                    }
                    if ball.bytes() > budget {
                        spheres.push(ball.nodes.len() - end);
                        return Grown::OverBudget(depth - 1);
                    }
                }
            }
        }
        spheres.push(ball.nodes.len() - end);
        if ball.nodes.len() == end {
            // the whole generated group fits in a smaller ball
            return Grown::Done(max_depth);
        }
        start = end;
    }
    Grown::Done(max_depth)
}

fn invert(t: &[u16]) -> Vec<u16> {
    let mut inv = vec![0u16; t.len()];
    for (x, &y) in t.iter().enumerate() {
        inv[y as usize] = x as u16;
    }
    inv
}

/// Runs the search and re-evaluates any word it finds before returning.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if cfg.generators.len() > u8::MAX as usize {
        return Err(SearchError::BadGenerator("too many generators".into()));
    }
    let setup = setup(cfg)?;
    let mut ball = Ball::new(setup.entries);
    let mut spheres = Vec::new();
    match cfg.strategy {
        Strategy::Bfs => {
            match grow(
                &mut ball,
                &setup.gens,
                cfg.max_depth,
                cfg.memory_budget,
                Some(&setup.target),
                &mut spheres,
            ) {
                Grown::Hit(id) => {
                    let word = ball.word(id);
                    let depth = word.len();
                    finish(cfg, word, true, ball.stats(depth, &spheres))
                }
                Grown::Done(d) => Ok(SearchOutcome::NotFoundWithinDepth {
                    stats: ball.stats(d, &spheres),
                }),
                Grown::OverBudget(d) => Ok(SearchOutcome::BudgetExceeded {
                    stats: ball.stats(d, &spheres),
                }),
            }
        }
        Strategy::Mitm => {
            match grow(
                &mut ball,
                &setup.gens,
                cfg.max_depth,
                cfg.memory_budget,
                None,
                &mut spheres,
            ) {
                Grown::OverBudget(d) => {
                    return Ok(SearchOutcome::BudgetExceeded {
                        stats: ball.stats(d, &spheres),
                    })
                }
                Grown::Hit(_) | Grown::Done(_) => {}
            }
            let stats = ball.stats(cfg.max_depth, &spheres);
            // target = g . h with both g and h in the ball
            let mut best: Option<Vec<usize>> = None;
            for gi in 0..ball.nodes.len() {
                let inv = invert(&ball.tables[gi]);
                let h: Box<[u16]> = setup.target.iter().map(|&y| inv[y as usize]).collect();
                let Some(&hi) = ball.index.get(&h) else {
                    continue;
                };
                let len = ball.nodes[gi].depth as usize + ball.nodes[hi as usize].depth as usize;
                if best.as_ref().is_some_and(|b| b.len() < len) {
                    continue;
                }
                let mut word = ball.word(gi as u32);
                word.extend(ball.word(hi));
                if best.as_ref().is_none_or(|b| (word.len(), &word) < (b.len(), b)) {
                    best = Some(word);
                }
            }
            match best {
                // every word of length <= 2 * depth splits into two ball words
                Some(word) => finish(cfg, word, true, stats),
                None => Ok(SearchOutcome::NotFoundWithinDepth { stats }),
            }
        }
    }
}

fn finish(
    cfg: &SearchConfig,
    word: Vec<usize>,
    minimal: bool,
    stats: SearchStats,
) -> Result<SearchOutcome, SearchError> {
    let expr = word_expr(cfg, &word);
    let mut dict = GeneratorDict::new();
    for (i, g) in cfg.generators.iter().enumerate() {
        dict.insert(format!("g{i}"), g.clone());
    }
    let indexed = GateExpr::new(word.iter().map(|&i| Atom::new(format!("g{i}"), 0)).collect());
    if evaluate_expr(&indexed, &dict)? != cfg.target {
        return Err(SearchError::CertificationFailed);
    }
    Ok(SearchOutcome::Found {
        word,
        expr,
        minimal,
        stats,
    })
}

/// Renders a word with the configured labels.
pub fn word_expr(cfg: &SearchConfig, word: &[usize]) -> String {
    let all_letters = cfg.labels.iter().all(|l| l.chars().count() == 1);
    let sep = if all_letters { "" } else { " " };
    word.iter()
        .map(|&i| cfg.labels.get(i).cloned().unwrap_or_else(|| format!("g{i}")))
        .collect::<Vec<_>>()
        .join(sep)
}
