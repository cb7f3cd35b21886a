//! Membership tests for the proper subgroups used to rule out universality,
//! and the two universality classifiers: word swaps with the flip, and
//! asynchronous elementary cellular automata.
//!
//! All predicates work on the canonical table of the inert part. Coordinates
//! outside the window are untouched by an inert gate, so a property of the
//! finite table is a property of the gate on the full shift. In particular
//! output `i` depends on `x_(-inf, i]` exactly when it depends only on window
//! coordinates `<= i`.

use serde::Serialize;
use thiserror::Error;

use crate::bitcore::{diff_set, gf2_divides, BitError, BitWord, Gf2Poly};
use crate::gates::{
    make_eca, make_named, make_word_swap, probe_conventions, CompositionOrder, GateError,
    GroupElement, InertGate, LetterConvention, NamedGate, FLIP_WORD,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("the coset witness must be a nonzero word")]
    ZeroWitness,
    #[error("witness check failed for verdict {0:?}")]
    WitnessRejected(SwapVerdict),
    #[error("rule {0} escapes every known case")]
    Unresolved(u32),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Bit(#[from] BitError),
}

/// Bit `p` of a window table entry (MSB-first, `p = 0` is the window's lo).
#[inline]
fn letter(x: u32, p: u32, width: u32) -> u32 {
    (x >> (width - 1 - p)) & 1
}

/// `dep[j]` has bit `i` set when output letter `j` depends on input letter `i`.
fn dependence(g: &InertGate) -> Vec<u32> {
    let width = g.width();
    let table = g.table();
    let mut dep = vec![0u32; width as usize];
    for i in 0..width {
        let flip = 1u32 << (width - 1 - i);
        for (x, &y) in table.iter().enumerate() {
            let changed = y ^ table[x ^ flip as usize];
            for (j, d) in dep.iter_mut().enumerate() {
                if letter(changed, j as u32, width) == 1 {
                    *d |= 1 << i;
                }
            }
        }
    }
    dep
}

pub fn is_affine(g: &InertGate) -> bool {
    let width = g.width();
    let table = g.table();
    if table.is_empty() {
        return true;
    }
    let base = table[0];
    let images: Vec<u32> = (0..width).map(|i| table[1 << i] ^ base).collect();
    table.iter().enumerate().all(|(x, &y)| {
        let linear = (0..width)
            .filter(|i| x >> i & 1 == 1)
            .fold(0, |acc, i| acc ^ images[i as usize]);
        y ^ base == linear
    })
}

pub fn is_linear(g: &InertGate) -> bool {
    is_affine(g) && g.table().first().is_none_or(|&y| y == 0)
}

/// Whether the inert part only moves bits around: each output letter is a
/// copy of a distinct input letter.
pub fn is_wire_permutation(f: &GroupElement) -> bool {
    let g = f.inert();
    let width = g.width();
    let table = g.table();
    let mut used = 0u32;
    for j in 0..width {
        let source = (0..width).find(|&i| {
            used & (1 << i) == 0
                && table
                    .iter()
                    .enumerate()
                    .all(|(x, &y)| letter(y, j, width) == letter(x as u32, i, width))
        });
        match source {
            Some(i) => used |= 1 << i,
            None => return false,
        }
    }
    true
}

/// Whether the inert part adds a constant: `f = sigma^n + c`.
pub fn is_lamplighter(f: &GroupElement) -> bool {
    let table = f.inert().table();
    table
        .first()
        .is_none_or(|&c| table.iter().enumerate().all(|(x, &y)| y ^ x as u32 == c))
}

/// Information flows only rightwards: output `i` reads only coordinates `<= i`.
pub fn in_gr(g: &InertGate) -> bool {
    dependence(g)
        .iter()
        .enumerate()
        .all(|(j, &d)| d >> (j + 1) == 0)
}

/// Information flows only leftwards: output `i` reads only coordinates `>= i`.
pub fn in_gl(g: &InertGate) -> bool {
    dependence(g)
        .iter()
        .enumerate()
        .all(|(j, &d)| d & ((1u32 << j) - 1) == 0)
}

/// Whether `g` maps every coset of `V` to a single coset, where `V` is the
/// span of the shifts of `w`. The translation is read off at the all-zeros
/// window word; any other representative differs from it by an element of `V`.
pub fn in_gv(g: &InertGate, w: &BitWord) -> Result<bool, AnalysisError> {
    if w.is_zero() {
        return Err(AnalysisError::ZeroWitness);
    }
    // both polynomials are read MSB-first, so divisibility is unaffected
    let divisor = Gf2Poly::new(w.to_int() as u128, 0);
    let table = g.table();
    let Some(&v0) = table.first() else {
        return Ok(true);
    };
    for (u, &y) in table.iter().enumerate() {
        let displacement = Gf2Poly::new((y ^ u as u32 ^ v0) as u128, 0);
        if !gf2_divides(&divisor, &displacement)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapVerdict {
    Universal,
    Trivial,
    RightOneSided,
    LeftOneSided,
    CosetPreserving,
}

/// The proper subgroup containing `{c0, f_uv, sigma}` for a non-universal pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "subgroup")]
pub enum SwapWitness {
    /// `f_uv` is the identity.
    Identity,
    /// `G_R`.
    RightFlow,
    /// `G_L`.
    LeftFlow,
    /// `G_V` with `V` spanned by the shifts of `w`.
    ShiftSpan { w: BitWord },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwapClass {
    pub u: BitWord,
    pub v: BitWord,
    pub diff: BitWord,
    pub verdict: SwapVerdict,
    pub witness: Option<SwapWitness>,
}

/// Whether `d` is of the form `0*0100*`.
pub fn is_universal_pattern(d: &BitWord) -> bool {
    let ones = d.ones_positions();
    ones.len() == 1 && ones[0] > 0 && ones[0] + 1 < d.len()
}

fn verdict_of(d: &BitWord) -> SwapVerdict {
    let ones = d.ones_positions();
    match ones.as_slice() {
        [] => SwapVerdict::Trivial,
        [i] if *i + 1 == d.len() => SwapVerdict::RightOneSided,
        [0] => SwapVerdict::LeftOneSided,
        [_] => SwapVerdict::Universal,
        _ => SwapVerdict::CosetPreserving,
    }
}

/// Classifies `{c0, f_uv, sigma}` and, for non-universal pairs, checks that
/// all three generators lie in the claimed subgroup.
pub fn classify_swap(u: &BitWord, v: &BitWord) -> Result<SwapClass, AnalysisError> {
    let diff = diff_set(u, v)?;
    let verdict = verdict_of(&diff);
    let f = make_word_swap(u, v)?;
    let c0 = make_named(NamedGate::FLIP)?;
    // sigma has an identity inert part, which lies in every subgroup tested
    let gens = [c0.inert(), f.inert(), &InertGate::identity()];
    let (witness, verified) = match verdict {
        SwapVerdict::Universal => (None, true),
        SwapVerdict::Trivial => (Some(SwapWitness::Identity), f.is_identity()),
        SwapVerdict::RightOneSided => (Some(SwapWitness::RightFlow), gens.iter().all(|g| in_gr(g))),
        SwapVerdict::LeftOneSided => (Some(SwapWitness::LeftFlow), gens.iter().all(|g| in_gl(g))),
        SwapVerdict::CosetPreserving => {
            let mut ok = true;
            for g in gens {
                ok &= in_gv(g, &diff)?;
            }
            (Some(SwapWitness::ShiftSpan { w: diff }), ok)
        }
    };
    if !verified {
        return Err(AnalysisError::WitnessRejected(verdict));
    }
    Ok(SwapClass {
        u: *u,
        v: *v,
        diff,
        verdict,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonUniversalReason {
    IdentityLike,
    FixesUniformPoint,
    EqualsC0,
    Affine,
    OneSided,
}

/// Evidence that a rule together with the shift generates everything: the
/// flip word over three neighbouring copies evaluates to `c0`, and `c0` times
/// the gate is a word swap of universal type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalityCertificate {
    pub word: String,
    pub convention: LetterConvention,
    pub orders: Vec<CompositionOrder>,
    pub swap_u: BitWord,
    pub swap_v: BitWord,
    pub swap_offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum EcaClass {
    NotBijective,
    Universal(UniversalityCertificate),
    NonUniversal { reason: NonUniversalReason },
}

impl EcaClass {
    pub fn is_universal(&self) -> bool {
        matches!(self, EcaClass::Universal(_))
    }

    pub fn is_bijective(&self) -> bool {
        !matches!(self, EcaClass::NotBijective)
    }
}

/// Reads an inert gate that exchanges exactly two window words.
fn as_word_swap(g: &InertGate) -> Option<(BitWord, BitWord, i64)> {
    let (lo, _) = g.window()?;
    let moved: Vec<(usize, u32)> = g
        .table()
        .iter()
        .enumerate()
        .filter(|&(x, &y)| x as u32 != y)
        .map(|(x, &y)| (x, y))
        .collect();
    match moved.as_slice() {
        [(a, b), (c, d)] if *a as u32 == *d && *b == *c as u32 => {
            let width = g.width() as usize;
            Some((
                BitWord::from_int(*a as u64, width).ok()?,
                BitWord::from_int(*b as u64, width).ok()?,
                lo,
            ))
        }
        _ => None,
    }
}

fn certify(e: &GroupElement, convention: LetterConvention) -> Result<Option<UniversalityCertificate>, AnalysisError> {
    let c0 = make_named(NamedGate::FLIP)?;
    let report = probe_conventions(FLIP_WORD, e, &c0)?;
    let orders: Vec<CompositionOrder> = report
        .results
        .iter()
        .filter(|r| r.convention == convention && r.equals_target)
        .map(|r| r.order)
        .collect();
    if orders.is_empty() {
        return Ok(None);
    }
    let Some((swap_u, swap_v, swap_offset)) = as_word_swap(c0.compose(e)?.inert()) else {
        return Ok(None);
    };
    if classify_swap(&swap_u, &swap_v)?.verdict != SwapVerdict::Universal {
        return Ok(None);
    }
    Ok(Some(UniversalityCertificate {
        word: FLIP_WORD.to_string(),
        convention,
        orders,
        swap_u,
        swap_v,
        swap_offset,
    }))
}

/// Decides whether `e^b` alone, with the shift, generates the whole group.
/// Positive answers carry a checked certificate.
pub fn classify_eca(b: u32) -> Result<EcaClass, AnalysisError> {
    let e = match make_eca(b) {
        Ok(e) => e,
        Err(GateError::EcaNotInvertible { .. }) => return Ok(EcaClass::NotBijective),
        Err(err) => return Err(err.into()),
    };
    let non = |reason| Ok(EcaClass::NonUniversal { reason });
    if e.is_identity() {
        return non(NonUniversalReason::IdentityLike);
    }
    // 000 -> 0 fixes the all-zeros point, 111 -> 1 the all-ones point
    if b & 1 == 0 || b >> 7 & 1 == 1 {
        return non(NonUniversalReason::FixesUniformPoint);
    }
    if e == make_named(NamedGate::FLIP)? {
        return non(NonUniversalReason::EqualsC0);
    }
    if is_affine(e.inert()) {
        return non(NonUniversalReason::Affine);
    }
    if in_gr(e.inert()) || in_gl(e.inert()) {
        return non(NonUniversalReason::OneSided);
    }
    for convention in [LetterConvention::Standard, LetterConvention::Mirrored] {
        if let Some(cert) = certify(&e, convention)? {
            return Ok(EcaClass::Universal(cert));
        }
    }
    Err(AnalysisError::Unresolved(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{canonicalize, named, WindowRule};

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    fn gate(lo: i64, table: Vec<u32>) -> InertGate {
        let width = table.len().trailing_zeros() as i64;
        canonicalize(&WindowRule::new(lo, lo + width - 1, table).unwrap()).unwrap()
    }

    #[test]
    fn linearity_examples() {
        let c1 = named("c1").unwrap();
        assert!(is_linear(c1.inert()));
        let e105 = make_eca(105).unwrap();
        assert!(is_affine(e105.inert()));
        assert!(!is_linear(e105.inert()));
        assert!(!is_affine(named("c2").unwrap().inert()));
        assert!(is_linear(&InertGate::identity()));
    }

    #[test]
    fn wire_and_lamplighter_examples() {
        let s = named("swap").unwrap();
        let c0 = named("c0").unwrap();
        assert!(is_wire_permutation(&s) && !is_lamplighter(&s));
        assert!(is_lamplighter(&c0) && !is_wire_permutation(&c0));
        let id = GroupElement::sigma(3);
        assert!(is_wire_permutation(&id) && is_lamplighter(&id));
    }

    #[test]
    fn one_sided_examples() {
        for k in 0..=4 {
            let ck = named(&format!("c{k}")).unwrap();
            assert!(in_gl(ck.inert()), "c{k}");
            assert!(in_gr(ck.reverse_conjugate().inert()), "Rc{k}R");
        }
        assert!(!in_gr(named("c1").unwrap().inert()));
        let s = named("swap").unwrap();
        assert!(!in_gr(s.inert()) && !in_gl(s.inert()));
        assert!(in_gr(&InertGate::identity()) && in_gl(&InertGate::identity()));
    }

    #[test]
    fn coset_examples() {
        let f = make_word_swap(&w("00"), &w("11")).unwrap();
        assert!(in_gv(f.inert(), &w("11")).unwrap());
        // (00)(10)(01 11) on two letters
        let pi = gate(0, vec![0, 3, 2, 1]);
        // a single letter spans everything, so it is the only w that admits pi
        assert!(in_gv(&pi, &w("1")).unwrap());
        for v in ["11", "101", "111", "1001", "1101"] {
            assert!(!in_gv(&pi, &w(v)).unwrap(), "w = {v}");
        }
        assert!(in_gv(&InertGate::identity(), &w("1011")).unwrap());
        assert!(in_gv(named("c0").unwrap().inert(), &w("11")).unwrap());
        assert_eq!(in_gv(f.inert(), &w("000")), Err(AnalysisError::ZeroWitness));
    }

    #[test]
    fn swap_classification_examples() {
        assert_eq!(classify_swap(&w("001"), &w("011")).unwrap().verdict, SwapVerdict::Universal);
        let c = classify_swap(&w("011"), &w("111")).unwrap();
        assert_eq!(c.verdict, SwapVerdict::LeftOneSided);
        assert_eq!(c.diff, w("100"));
        let c = classify_swap(&w("00"), &w("11")).unwrap();
        assert_eq!(c.verdict, SwapVerdict::CosetPreserving);
        assert_eq!(c.witness, Some(SwapWitness::ShiftSpan { w: w("11") }));
        assert_eq!(classify_swap(&w("0110"), &w("0110")).unwrap().verdict, SwapVerdict::Trivial);
        assert_eq!(classify_swap(&w("00"), &w("01")).unwrap().verdict, SwapVerdict::RightOneSided);
        assert!(classify_swap(&w("00"), &w("011")).is_err());
    }

    #[test]
    fn swap_classification_matches_pattern_exhaustively() {
        for n in 1..=5usize {
            for u in BitWord::all(n) {
                for v in BitWord::all(n) {
                    let c = classify_swap(&u, &v).unwrap();
                    let d = diff_set(&u, &v).unwrap();
                    assert_eq!(c.verdict == SwapVerdict::Universal, is_universal_pattern(&d));
                }
            }
        }
    }

    #[test]
    fn eca_classification_examples() {
        let c = classify_eca(57).unwrap();
        let EcaClass::Universal(cert) = &c else {
            panic!("57 not universal: {c:?}")
        };
        assert_eq!(cert.convention, LetterConvention::Standard);
        assert_eq!((cert.swap_u.to_string(), cert.swap_v.to_string()), ("001".into(), "011".into()));
        assert!(classify_eca(99).unwrap().is_universal());
        assert_eq!(
            classify_eca(105).unwrap(),
            EcaClass::NonUniversal { reason: NonUniversalReason::Affine }
        );
        assert_eq!(
            classify_eca(51).unwrap(),
            EcaClass::NonUniversal { reason: NonUniversalReason::EqualsC0 }
        );
        assert_eq!(classify_eca(0).unwrap(), EcaClass::NotBijective);
        assert!(classify_eca(256).is_err());
    }

    #[test]
    fn eca_partition() {
        let classes: Vec<EcaClass> = (0..256).map(|b| classify_eca(b).unwrap()).collect();
        assert_eq!(classes.iter().filter(|c| c.is_bijective()).count(), 16);
        let universal: Vec<u32> = (0..256).filter(|&b| classes[b as usize].is_universal()).collect();
        assert_eq!(universal, vec![57, 99]);
    }

    #[test]
    fn two_sided_flow_forces_lamp_or_wires() {
        // every bijection of {0,1}^3 placed on [0, 2]
        let mut perm: Vec<u32> = (0..8).collect();
        let mut count = 0;
        loop {
            let g = gate(0, perm.clone());
            if in_gr(&g) && in_gl(&g) {
                let f = GroupElement::from_inert(g);
                assert!(is_wire_permutation(&f) || is_lamplighter(&f), "{perm:?}");
                count += 1;
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(count, 8);
    }

    fn next_permutation(p: &mut [u32]) -> bool {
        let Some(i) = (0..p.len().saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return false;
        };
        let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
        true
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_gate() -> impl Strategy<Value = InertGate> {
            (1u32..=4, -3i64..3, any::<u64>()).prop_map(|(width, lo, seed)| {
                let mut table: Vec<u32> = (0..1u32 << width).collect();
                let mut s = seed;
                for i in (1..table.len()).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    table.swap(i, (s >> 33) as usize % (i + 1));
                }
                gate(lo, table)
            })
        }

        proptest! {
            #[test]
            fn affinity_is_conjugation_invariant(g in random_gate(), k in -5i64..5) {
                let a = is_affine(&g);
                prop_assert_eq!(is_affine(&g.shifted(k)), a);
                prop_assert_eq!(is_affine(&g.mirrored()), a);
            }

            #[test]
            fn mirror_exchanges_flow_direction(g in random_gate()) {
                prop_assert_eq!(in_gr(&g), in_gl(&g.mirrored()));
            }
        }
    }
}
