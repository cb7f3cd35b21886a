//! Projection of group elements to permutations of `{0,1}^n`, i.e. the action
//! on `n`-periodic points, plus parity and necklace counting.
//!
//! A word `w` of length `n` stands for the periodic point `...www.www...`
//! with `w_0` at coordinate 0, and is encoded MSB-first like every other
//! table in the crate.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gates::{GateError, GroupElement, InertGate, WindowRule};

/// Default cap on ring size; permutations have `2^n` entries.
pub const DEFAULT_RING_CAP: u32 = 20;

/// Hard limit on ring size accepted by the permutation type.
pub const MAX_RING: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error("ring too small: n = {n}, need n >= {minimum}")]
    RingTooSmall { n: u32, minimum: u32 },
    #[error("ring size {n} exceeds cap {cap}")]
    RingTooLarge { n: u32, cap: u32 },
    #[error("not a permutation of {{0,1}}^{n}")]
    NotAPermutation { n: u32 },
    #[error("mismatched ring sizes {0} and {1}")]
    SizeMismatch(u32, u32),
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// A permutation of `{0,1}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclicPerm {
    n: u32,
    perm: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

fn check_ring(n: u32) -> Result<(), CyclicError> {
    if n == 0 {
        return Err(CyclicError::RingTooSmall { n, minimum: 1 });
    }
    if n > MAX_RING {
        return Err(CyclicError::RingTooLarge {
            n,
            cap: MAX_RING,
        });
    }
    Ok(())
}

impl CyclicPerm {
    pub fn identity(n: u32) -> Result<Self, CyclicError> {
        check_ring(n)?;
        Ok(Self {
            n,
            perm: (0..1u32 << n).collect(),
        })
    }

    pub fn from_table(n: u32, perm: Vec<u32>) -> Result<Self, CyclicError> {
        check_ring(n)?;
        if perm.len() != 1 << n {
            return Err(CyclicError::NotAPermutation { n });
        }
        let mut seen = vec![false; perm.len()];
        for &y in &perm {
            match seen.get_mut(y as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(CyclicError::NotAPermutation { n }),
            }
        }
        Ok(Self { n, perm })
    }

    fn from_fn(n: u32, f: impl Fn(u64) -> u64) -> Self {
        Self {
            n,
            perm: (0..1u64 << n).map(|w| f(w) as u32).collect(),
        }
    }

    /// The cyclic shift `sigma_n^k`: `sigma_n(aw) = wa`.
    pub fn rotation(n: u32, k: i64) -> Result<Self, CyclicError> {
        check_ring(n)?;
        Ok(Self::from_fn(n, |w| rotate(w, n, k)))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn table(&self) -> &[u32] {
        &self.perm
    }

    pub fn image(&self, w: u32) -> u32 {
        self.perm[w as usize]
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &CyclicPerm) -> Result<CyclicPerm, CyclicError> {
        if self.n != other.n {
            return Err(CyclicError::SizeMismatch(self.n, other.n));
        }
        Ok(Self {
            n: self.n,
            perm: other.perm.iter().map(|&y| self.perm[y as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> CyclicPerm {
        let mut perm = vec![0u32; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            perm[y as usize] = x as u32;
        }
        Self { n: self.n, perm }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    /// Cycle decomposition, fixed points included, each cycle starting at
    /// its least element.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in 0..self.perm.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.perm[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Parity of `2^n` minus the number of cycles.
    pub fn sign(&self) -> Parity {
        if (self.perm.len() - self.cycle_count()).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Cycle notation over binary words, omitting fixed points.
    pub fn cycle_notation(&self) -> String {
        let word = |x: u32| format!("{:0width$b}", x, width = self.n as usize);
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| format!("({})", c.into_iter().map(word).collect::<Vec<_>>().join(" ")))
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.join("")
        }
    }
}

impl fmt::Debug for CyclicPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicPerm(n={}, {})", self.n, self.cycle_notation())
    }
}

pub fn sign(p: &CyclicPerm) -> Parity {
    p.sign()
}

/// Rotation of an `n`-bit word: output letter `i` is input letter `i + k mod n`.
fn rotate(w: u64, n: u32, k: i64) -> u64 {
    let k = k.rem_euclid(n as i64) as u32;
    if k == 0 {
        return w;
    }
    let mask = (1u64 << n) - 1;
    ((w << k) | (w >> (n - k))) & mask
}

/// Smallest admissible ring size for `f`: `2R + 2`.
pub fn minimum_ring(f: &GroupElement) -> u32 {
    2 * f.inert().strong_radius() + 2
}

fn check_projectable(g: &InertGate, n: u32) -> Result<(), CyclicError> {
    check_ring(n)?;
    if !g.is_identity() {
        let minimum = 2 * g.strong_radius() + 2;
        if n < minimum {
            return Err(CyclicError::RingTooSmall { n, minimum });
        }
    }
    Ok(())
}

/// `f_n` computed from the local rule at the least offset, handling the case
/// where the rule window wraps around the end of the word.
pub fn project_formula(f: &GroupElement, n: u32) -> Result<CyclicPerm, CyclicError> {
    let g = f.inert();
    check_projectable(g, n)?;
    match g.centered_rule() {
        Some(rule) => Ok(project_rule(&rule, f.shift_power(), n)),
        None => CyclicPerm::rotation(n, f.shift_power()),
    }
}

/// `sigma_n^k` after the local rule wrapped onto the ring; needs
/// `rule.width() <= n`.
fn project_rule(rule: &WindowRule, k: i64, n: u32) -> CyclicPerm {
    let table = rule.table();
    let span = rule.width();
    let a = rule.lo().rem_euclid(n as i64) as u32;
    let field_mask = (1u64 << span) - 1;
    let inert = |w: u64| -> u64 {
        if a + span <= n {
            // window is [a, a + span - 1]
            let shift = n - a - span;
            let field = (w >> shift) & field_mask;
            (w & !(field_mask << shift)) | ((table[field as usize] as u64) << shift)
        } else {
            // window is [a, n-1] followed by [0, head)
            let tail = n - a;
            let head = span - tail;
            let tail_bits = w & ((1u64 << tail) - 1);
            let head_bits = w >> (n - head);
            let u = (tail_bits << head) | head_bits;
            let image = table[u as usize] as u64;
            let new_tail = image >> head;
            let new_head = image & ((1u64 << head) - 1);
            let middle_mask = ((1u64 << n) - 1) & !((1u64 << tail) - 1) & !(((1u64 << head) - 1) << (n - head));
            (new_head << (n - head)) | (w & middle_mask) | new_tail
        }
    };
    CyclicPerm::from_fn(n, |w| rotate(inert(w), n, k))
}

/// `f_n` by direct simulation: write `www` into a buffer of `3n` cells, apply
/// the gate at every translate by a multiple of `n` that touches the middle
/// copy, and read the middle copy.
pub fn project_periodic(f: &GroupElement, n: u32) -> Result<CyclicPerm, CyclicError> {
    let g = f.inert();
    check_projectable(g, n)?;
    let k = f.shift_power();
    let nn = n as usize;
    let Some((lo, hi)) = g.window() else {
        return CyclicPerm::rotation(n, k);
    };
    let table = g.table();
    let width = (hi - lo + 1) as usize;
    // translate lo into [0, n), then that copy and the next cover [n, 2n)
    let base = lo.rem_euclid(n as i64) as usize;
    let perm = (0..1u64 << n)
        .map(|w| {
            let mut cells: Vec<u8> = (0..3 * nn)
                .map(|c| ((w >> (nn - 1 - c % nn)) & 1) as u8)
                .collect();
            for start in [base, base + nn] {
                let idx = cells[start..start + width]
                    .iter()
                    .fold(0usize, |acc, &b| (acc << 1) | b as usize);
                let out = table[idx];
                for j in 0..width {
                    cells[start + j] = ((out >> (width - 1 - j)) & 1) as u8;
                }
            }
            // sigma^k: output cell i reads cell i + k
            (0..nn).fold(0u64, |acc, i| {
                let src = nn + (i as i64 + k).rem_euclid(n as i64) as usize;
                (acc << 1) | cells[src] as u64
            }) as u32
        })
        .collect();
    Ok(CyclicPerm { n, perm })
}

/// Number of binary necklaces of length `n`, by the totient sum.
pub fn necklace_count_formula(n: u32) -> u64 {
    assert!((1..=62).contains(&n), "necklace length out of range");
    let phi = |d: u32| -> u64 { (1..=d).filter(|&j| gcd(j, d) == 1).count() as u64 };
    let total: u64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| phi(d) * (1u64 << (n / d))).sum();
    total / n as u64
}

/// Number of rotation orbits on `{0,1}^n`, counted by walking every orbit.
pub fn necklace_count_orbits(n: u32) -> u64 {
    assert!((1..=24).contains(&n), "orbit enumeration limited to n <= 24");
    let mut seen = vec![false; 1 << n];
    let mut orbits = 0;
    for start in 0..1u64 << n {
        if seen[start as usize] {
            continue;
        }
        orbits += 1;
        let mut w = start;
        while !seen[w as usize] {
            seen[w as usize] = true;
            w = rotate(w, n, 1);
        }
    }
    orbits
}

/// `p_n`, checked against orbit enumeration when `n <= 20`.
pub fn necklace_count(n: u32) -> u64 {
    let p = necklace_count_formula(n);
    if n <= DEFAULT_RING_CAP {
        assert_eq!(p, necklace_count_orbits(n), "necklace methods disagree at n = {n}");
    }
    p
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One row of the parity table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityRow {
    pub n: u32,
    pub necklaces_formula: u64,
    pub necklaces_orbits: Option<u64>,
    /// Parity of `2^n - p_n`.
    pub predicted_sign: Parity,
    /// Sign of the rotation permutation, when computed.
    pub rotation_sign: Option<Parity>,
}

pub fn parity_row(n: u32, with_rotation: bool) -> Result<ParityRow, CyclicError> {
    let p = necklace_count_formula(n);
    let predicted = if ((1u64 << n) - p).is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    };
    Ok(ParityRow {
        n,
        necklaces_formula: p,
        necklaces_orbits: (n <= DEFAULT_RING_CAP).then(|| necklace_count_orbits(n)),
        predicted_sign: predicted,
        rotation_sign: if with_rotation {
            Some(CyclicPerm::rotation(n, 1)?.sign())
        } else {
            None
        },
    })
}

/// Checks `g_n . sigma_n^m = sigma_n^m . (sigma^-m g sigma^m)_n`.
pub fn check_conjugation_identity(g: &InertGate, n: u32, m: i64) -> Result<bool, CyclicError> {
    let ge = GroupElement::from_inert(g.clone());
    let rot = CyclicPerm::rotation(n, m)?;
    let lhs = project_formula(&ge, n)?.compose(&rot)?;
    let rhs = rot.compose(&project_formula(&ge.shift_conjugate(m), n)?)?;
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalityOutcome {
    Holds,
    Fails,
    HypothesisNotMet,
}

/// Whether every factor, widened by the total shift displacement, fits in
/// `[h, h + n - 1]`.
pub fn locality_hypothesis(fs: &[GroupElement], n: u32, h: i64) -> bool {
    let t: i64 = fs.iter().map(|f| f.shift_power().abs()).sum();
    fs.iter().all(|f| {
        let g = f.inert();
        match g.offset() {
            None => true,
            Some(m) => {
                let r = g.strong_radius() as i64;
                m - t - r >= h && m + t + r < h + n as i64
            }
        }
    })
}

/// Compares `(f^1 ... f^k)_n` with `f^1_n ... f^k_n` when the locality
/// hypothesis holds for window start `h`.
pub fn check_locality_homomorphism(
    fs: &[GroupElement],
    n: u32,
    h: i64,
) -> Result<LocalityOutcome, CyclicError> {
    if !locality_hypothesis(fs, n, h) {
        return Ok(LocalityOutcome::HypothesisNotMet);
    }
    let mut product = GroupElement::identity();
    let mut projected = CyclicPerm::identity(n)?;
    for f in fs {
        product = product.compose(f)?;
        projected = projected.compose(&project_formula(f, n)?)?;
    }
    // the hypothesis keeps the product's window inside [h, h + n - 1], which
    // is all the ring needs even when the product's radius is large
    let whole = match product.inert().to_rule() {
        Some(rule) if rule.width() <= n => project_rule(&rule, product.shift_power(), n),
        Some(_) => return Ok(LocalityOutcome::Fails),
        None => CyclicPerm::rotation(n, product.shift_power())?,
    };
    Ok(if whole == projected {
        LocalityOutcome::Holds
    } else {
        LocalityOutcome::Fails
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{make_eca, make_word_swap, named};

    fn w(s: &str) -> crate::bitcore::BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn rotation_moves_first_letter_to_end() {
        let s3 = project_formula(&GroupElement::sigma(1), 3).unwrap();
        assert_eq!(s3.image(0b100), 0b001);
        assert_eq!(s3.image(0b110), 0b101);
        let s5 = project_periodic(&GroupElement::sigma(1), 5).unwrap();
        assert_eq!(s5, CyclicPerm::rotation(5, 1).unwrap());
        assert_eq!(s5.image(0b10110), 0b01101);
    }

    #[test]
    fn identity_projects_to_identity() {
        for n in 1..=6 {
            assert!(project_formula(&GroupElement::identity(), n).unwrap().is_identity());
        }
    }

    #[test]
    fn flip_projection() {
        let p = project_formula(&named("c0").unwrap(), 4).unwrap();
        for x in 0..16 {
            assert_eq!(p.image(x), x ^ 0b1000);
        }
        assert_eq!(p, project_periodic(&named("c0").unwrap(), 4).unwrap());
    }

    #[test]
    fn ring_too_small_reports_minimum() {
        let e = make_eca(57).unwrap();
        assert_eq!(
            project_formula(&e, 3),
            Err(CyclicError::RingTooSmall { n: 3, minimum: 4 })
        );
        assert_eq!(minimum_ring(&e), 4);
    }

    #[test]
    fn word_swap_projection_is_prefix_swap() {
        let f = make_word_swap(&w("01"), &w("10")).unwrap();
        let p = project_periodic(&f, 4).unwrap();
        for x in 0..16u32 {
            let expected = match x >> 2 {
                0b01 => (0b10 << 2) | (x & 3),
                0b10 => (0b01 << 2) | (x & 3),
                _ => x,
            };
            assert_eq!(p.image(x), expected);
        }
    }

    #[test]
    fn wraparound_branch_matches_simulation() {
        // gate on [-1, 1] always wraps; gate on [n-2, n] wraps on the right
        let e = make_eca(57).unwrap();
        for n in 4..=12 {
            assert_eq!(project_formula(&e, n).unwrap(), project_periodic(&e, n).unwrap());
            let right = e.shift_conjugate(n as i64 - 1);
            assert_eq!(project_formula(&right, n).unwrap(), project_periodic(&right, n).unwrap());
            let inside = e.shift_conjugate(2);
            assert_eq!(project_formula(&inside, n).unwrap(), project_periodic(&inside, n).unwrap());
        }
        // explicit wrap: c1 at cell 3 on a ring of 4 reads cell 0
        let c1 = named("c1").unwrap().shift_conjugate(3);
        let p = project_formula(&c1, 4).unwrap();
        assert_eq!(p.image(0b1000), 0b1001);
        assert_eq!(p.image(0b0000), 0b0000);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(CyclicPerm::rotation(2, 1).unwrap().sign(), Parity::Odd);
        for n in 3..=16 {
            assert_eq!(CyclicPerm::rotation(n, 1).unwrap().sign(), Parity::Even);
        }
        assert_eq!(CyclicPerm::identity(5).unwrap().sign(), Parity::Even);
    }

    #[test]
    fn necklace_examples() {
        assert_eq!(necklace_count(1), 2);
        assert_eq!(necklace_count(2), 3);
        assert_eq!(necklace_count(3), 4);
        for n in 3..=32 {
            assert_eq!(necklace_count_formula(n) % 2, 0, "p_{n} odd");
        }
    }

    #[test]
    fn conjugation_identity_examples() {
        let e = make_eca(57).unwrap();
        assert!(check_conjugation_identity(e.inert(), 5, 1).unwrap());
        assert!(check_conjugation_identity(&InertGate::identity(), 3, 7).unwrap());
        let f = make_word_swap(&w("01"), &w("10")).unwrap();
        assert!(check_conjugation_identity(f.inert(), 6, 3).unwrap());
    }

    #[test]
    fn locality_examples() {
        let e = make_eca(57).unwrap();
        let fs: Vec<GroupElement> = (1..=6).map(|i| e.shift_conjugate(i)).collect();
        assert_eq!(check_locality_homomorphism(&fs, 8, 0).unwrap(), LocalityOutcome::Holds);
        assert_eq!(check_locality_homomorphism(&fs[..1], 8, 0).unwrap(), LocalityOutcome::Holds);
        let far = vec![named("c2").unwrap(), named("c0").unwrap().shift_conjugate(9)];
        assert_eq!(check_locality_homomorphism(&far, 14, 0).unwrap(), LocalityOutcome::Holds);
        assert_eq!(
            check_locality_homomorphism(&fs, 8, 1).unwrap(),
            LocalityOutcome::HypothesisNotMet
        );
    }

    #[test]
    fn hypothesis_rejects_gates_reaching_past_the_interval() {
        let c1 = named("c1").unwrap();
        let fs = vec![c1.clone(), c1.shift_conjugate(3)];
        assert_eq!(
            check_locality_homomorphism(&fs, 4, 0).unwrap(),
            LocalityOutcome::HypothesisNotMet
        );
        // a shift widens every window by its displacement
        let shifted = vec![GroupElement::sigma(2), make_eca(57).unwrap().shift_conjugate(3)];
        assert!(!locality_hypothesis(&shifted, 6, 0));
        assert!(locality_hypothesis(&shifted, 9, 0));
        assert_eq!(check_locality_homomorphism(&shifted, 9, 0).unwrap(), LocalityOutcome::Holds);
    }
}
