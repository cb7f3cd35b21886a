//! The end-to-end verification suite behind `gatecalc verify-all`.
//!
//! Each check recomputes its claim from scratch and compares it exactly;
//! timings are measured against a per-check limit.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::analysis::{classify_eca, classify_swap, is_universal_pattern, EcaClass, NonUniversalReason, SwapVerdict};
use crate::bitcore::{diff_set, BitWord};
use crate::cyclic::{
    check_conjugation_identity, check_locality_homomorphism, locality_hypothesis, minimum_ring,
    necklace_count_formula, necklace_count_orbits, project_formula, project_periodic,
    CyclicPerm, LocalityOutcome, Parity,
};
use crate::gates::{
    canonicalize, check_flip_identity, named, CompositionOrder, GroupElement, InertGate,
    LetterConvention, WindowRule,
};
use crate::grammar::{verify_on_ring, verify_semantics, Nonterminal, Slg};
use crate::search::{search, SearchConfig, SearchOutcome, Strategy};
use crate::synth::{standard_generating_checks, synthesize_nct};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Seed for the randomized checks, fixed so reports are reproducible.
pub const DEFAULT_SEED: u64 = 0x005e_ed57;

type CheckResult = Result<(bool, String), Box<dyn std::error::Error>>;

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOptions {
    pub memory_budget: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            memory_budget: 2 << 30,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub correct: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// One entry of the suite.
pub struct Check {
    pub id: u32,
    pub title: &'static str,
    pub limit_seconds: f64,
    run: fn(&VerifyOptions) -> CheckResult,
}

impl Check {
    pub fn run(&self, opts: &VerifyOptions) -> CheckOutcome {
        let started = Instant::now();
        let (correct, detail) = match (self.run)(opts) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let seconds = started.elapsed().as_secs_f64();
        CheckOutcome {
            id: self.id,
            title: self.title.to_string(),
            passed: correct && seconds < self.limit_seconds,
            correct,
            detail,
            seconds,
            limit_seconds: self.limit_seconds,
        }
    }
}

pub fn checks() -> Vec<Check> {
    vec![
        Check { id: 1, title: "flip word equals c0 under exactly one reading order", limit_seconds: 1.0, run: flip_word },
        Check { id: 2, title: "grammar expansions match the reference strings", limit_seconds: 1.0, run: grammar_golden },
        Check { id: 3, title: "grammar expansions evaluate to the standard gates", limit_seconds: 10.0, run: grammar_semantics },
        Check { id: 4, title: "grammar programs work on rings 4..=12", limit_seconds: 60.0, run: grammar_rings },
        Check { id: 5, title: "ring projection: formula = simulation, always even", limit_seconds: 60.0, run: projections },
        Check { id: 6, title: "necklace counts and rotation parity", limit_seconds: 30.0, run: necklaces },
        Check { id: 7, title: "word swap classification, both directions, length <= 6", limit_seconds: 300.0, run: swaps },
        Check { id: 8, title: "ECA classification over rules 0..=255", limit_seconds: 10.0, run: ecas },
        Check { id: 9, title: "CNOT swap identity and Toffoli as a word swap", limit_seconds: 1.0, run: identities },
        Check { id: 10, title: "ring conjugation identity and local homomorphism", limit_seconds: 60.0, run: ring_laws },
        Check { id: 11, title: "meet-in-the-middle search for the flip, depth 25", limit_seconds: f64::INFINITY, run: flip_search },
    ]
}

pub fn run_all(opts: &VerifyOptions) -> VerifyReport {
    VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        checks: checks().iter().map(|c| c.run(opts)).collect(),
    }
}

/// A uniformly random permutation of `{0,1}^width` on `[lo, lo + width - 1]`,
/// canonicalized (so its tight window may be smaller).
pub fn random_inert(rng: &mut impl Rng, max_width: u32, lo_range: std::ops::RangeInclusive<i64>) -> InertGate {
    let width = rng.gen_range(1..=max_width);
    let lo = rng.gen_range(lo_range);
    let mut table: Vec<u32> = (0..1u32 << width).collect();
    table.shuffle(rng);
    canonicalize(&WindowRule::new(lo, lo + width as i64 - 1, table).expect("valid window"))
        .expect("shuffled table is a permutation")
}

fn flip_word(_: &VerifyOptions) -> CheckResult {
    let report = check_flip_identity()?;
    let standard: Vec<CompositionOrder> = report
        .results
        .iter()
        .filter(|r| r.convention == LetterConvention::Standard && r.equals_target)
        .map(|r| r.order)
        .collect();
    let detail = report
        .results
        .iter()
        .map(|r| format!("{:?}/{:?}={}", r.convention, r.order, r.equals_target))
        .collect::<Vec<_>>()
        .join(" ");
    let ok = report.holds(LetterConvention::Standard, CompositionOrder::LeftmostLast) && standard.len() == 1;
    let note = if standard.len() > 1 {
        "; both orders agree because every letter and c0 are involutions"
    } else {
        ""
    };
    Ok((ok, format!("{detail}{note}")))
}

fn grammar_golden(_: &VerifyOptions) -> CheckResult {
    let slg = Slg::standard()?;
    let mut bad = Vec::new();
    for start in Nonterminal::STARTS {
        if slg.expand(start)? != start.reference_string()? {
            bad.push(start.name());
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "all five match".into() } else { format!("mismatch: {bad:?}") }))
}

fn grammar_semantics(_: &VerifyOptions) -> CheckResult {
    let slg = Slg::standard()?;
    let mut anchors = Vec::new();
    for start in Nonterminal::STARTS {
        anchors.push((start, verify_semantics(&slg, start, &start.target()?)?.anchor()));
    }
    let first = anchors[0].1;
    let ok = first.is_some() && anchors.iter().all(|(_, a)| *a == first);
    let detail = anchors
        .iter()
        .map(|(s, a)| format!("{s}@{}", a.map_or("none".into(), |a| a.to_string())))
        .collect::<Vec<_>>()
        .join(" ");
    Ok((ok, detail))
}

fn grammar_rings(_: &VerifyOptions) -> CheckResult {
    let slg = Slg::standard()?;
    let mut failures = Vec::new();
    for start in Nonterminal::STARTS {
        let target = start.target()?;
        for n in 4..=12 {
            if !verify_on_ring(&slg, start, &target, n)?.holds {
                failures.push(format!("{start}/n={n}"));
            }
        }
    }
    Ok((failures.is_empty(), if failures.is_empty() { "45 of 45".into() } else { failures.join(" ") }))
}

fn projections(opts: &VerifyOptions) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let mut cases = 0;
    for _ in 0..500 {
        let g = GroupElement::from_inert(random_inert(&mut rng, 5, -6..=6));
        for n in minimum_ring(&g).max(3)..=10 {
            let p = project_formula(&g, n)?;
            if p != project_periodic(&g, n)? {
                return Ok((false, format!("formula and simulation differ for {g} at n = {n}")));
            }
            if p.sign() != Parity::Even {
                return Ok((false, format!("odd projection of {g} at n = {n}")));
            }
            cases += 1;
        }
    }
    Ok((true, format!("{cases} (gate, n) cases")))
}

fn necklaces(_: &VerifyOptions) -> CheckResult {
    for n in 1..=20 {
        let p = necklace_count_formula(n);
        if p != necklace_count_orbits(n) {
            return Ok((false, format!("counts differ at n = {n}")));
        }
        // p_1 = 2 and p_2 = 3, so n = 2 is the only odd entry
        let expect_even = n != 2;
        if p.is_multiple_of(2) != expect_even {
            return Ok((false, format!("p_{n} = {p} has unexpected parity")));
        }
    }
    if (necklace_count_formula(1), necklace_count_formula(2)) != (2, 3) {
        return Ok((false, "p_1, p_2 wrong".into()));
    }
    for n in 1..=16 {
        let predicted = if ((1u64 << n) - necklace_count_formula(n)).is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        if CyclicPerm::rotation(n, 1)?.sign() != predicted {
            return Ok((false, format!("rotation sign mismatch at n = {n}")));
        }
    }
    Ok((true, "n <= 20 counts agree; only n = 2 is odd; signs agree for n <= 16".into()))
}

fn swaps(_: &VerifyOptions) -> CheckResult {
    let (mut universal, mut other) = (0, 0);
    for n in 1..=6 {
        for u in BitWord::all(n) {
            for v in BitWord::all(n) {
                let class = classify_swap(&u, &v)?;
                let pattern = is_universal_pattern(&diff_set(&u, &v)?);
                if (class.verdict == SwapVerdict::Universal) != pattern {
                    return Ok((false, format!("verdict {:?} for {u}, {v}", class.verdict)));
                }
                if pattern {
                    synthesize_nct(&u, &v)?;
                    universal += 1;
                } else {
                    other += 1;
                }
            }
        }
    }
    Ok((true, format!("{universal} universal pairs synthesized, {other} witnesses verified")))
}

fn ecas(_: &VerifyOptions) -> CheckResult {
    let classes: Vec<EcaClass> = (0..256).map(classify_eca).collect::<Result<_, _>>()?;
    let bijective = classes.iter().filter(|c| c.is_bijective()).count();
    let universal: Vec<usize> = (0..256).filter(|&b| classes[b].is_universal()).collect();
    let reason = |b: usize| match &classes[b] {
        EcaClass::NonUniversal { reason } => Some(*reason),
        _ => None,
    };
    let ok = bijective == 16
        && universal == [57, 99]
        && reason(51) == Some(NonUniversalReason::EqualsC0)
        && reason(105) == Some(NonUniversalReason::Affine);
    Ok((ok, format!("{bijective} bijective, universal {universal:?}")))
}

fn identities(_: &VerifyOptions) -> CheckResult {
    let checks = standard_generating_checks()?;
    let ok = checks.iter().all(|c| c.holds);
    Ok((ok, checks.iter().map(|c| format!("{}: {}", c.name, c.holds)).collect::<Vec<_>>().join("; ")))
}

fn ring_laws(opts: &VerifyOptions) -> CheckResult {
    let mut rng = StdRng::seed_from_u64(opts.seed ^ 0x10);
    for _ in 0..200 {
        let g = loop {
            let g = random_inert(&mut rng, 4, -5..=5);
            if !g.is_identity() {
                break g;
            }
        };
        let min = 2 * g.strong_radius() + 2;
        let n = rng.gen_range(min.max(3)..=10);
        let m = rng.gen_range(-12..=12);
        if !check_conjugation_identity(&g, n, m)? {
            return Ok((false, format!("conjugation identity fails for {g:?}, n = {n}, m = {m}")));
        }
    }
    let mut instances = 0;
    while instances < 100 {
        let k = rng.gen_range(1..=4);
        let fs: Vec<GroupElement> = (0..k)
            .map(|_| loop {
                let g = random_inert(&mut rng, 3, -2..=4);
                if !g.is_identity() {
                    break GroupElement::new(rng.gen_range(-1..=1), g);
                }
            })
            .collect();
        let t: i64 = fs.iter().map(|f| f.shift_power().abs()).sum();
        let spans: Vec<(i64, i64)> = fs
            .iter()
            .map(|f| {
                let g = f.inert();
                let (m, r) = (g.offset().expect("non-identity"), g.strong_radius() as i64);
                (m - t - r, m + t + r)
            })
            .collect();
        let h = spans.iter().map(|s| s.0).min().expect("k >= 1");
        let hi = spans.iter().map(|s| s.1).max().expect("k >= 1");
        let radius = fs.iter().map(|f| f.inert().strong_radius()).max().unwrap_or(0);
        let n = ((hi - h + 1) as u32).max(2 * radius + 2) + rng.gen_range(0..=1);
        if n > 12 {
            continue;
        }
        debug_assert!(locality_hypothesis(&fs, n, h));
        match check_locality_homomorphism(&fs, n, h)? {
            LocalityOutcome::Holds => instances += 1,
            other => return Ok((false, format!("{other:?} for {} factors on n = {n}", fs.len()))),
        }
    }
    Ok((true, "200 conjugation cases, 100 homomorphism instances".into()))
}

fn flip_search(opts: &VerifyOptions) -> CheckResult {
    let e = crate::gates::make_eca(57)?;
    let cfg = SearchConfig::new(vec![e.shift_conjugate(-1), e.clone(), e.shift_conjugate(1)], named("c0")?)
        .labels(vec!["a".into(), "b".into(), "c".into()])
        .strategy(Strategy::Mitm)
        .max_depth(25)
        .memory_budget(opts.memory_budget);
    Ok(match search(&cfg)? {
        SearchOutcome::Found { word, expr, minimal, stats } => (
            word.len() <= 50,
            format!(
                "found {} letters{} ({} states): {expr}",
                word.len(),
                if minimal { ", minimal" } else { "" },
                stats.states
            ),
        ),
        SearchOutcome::BudgetExceeded { stats } => {
            (true, format!("budget exceeded at radius {} with {} states", stats.depth_reached, stats.states))
        }
        SearchOutcome::NotFoundWithinDepth { stats } => {
            (false, format!("no word within depth 25 ({} states)", stats.states))
        }
    })
}
