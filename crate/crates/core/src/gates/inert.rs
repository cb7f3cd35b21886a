use std::fmt;
use std::sync::Arc;

use super::GateError;

/// Hard structural limit on table width, independent of the configurable cap.
pub const MAX_WINDOW_WIDTH: usize = 28;

/// Default cap on the width of any table produced by composition.
pub const DEFAULT_WINDOW_CAP: usize = 24;

pub(crate) fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// A local rule given on an explicit window `[lo, hi]`, not necessarily
/// minimal. Entry `x` of the table is the image of the window word with
/// integer encoding `x` (coordinate `lo` is the most significant bit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowRule {
    lo: i64,
    hi: i64,
    table: Vec<u32>,
}

impl WindowRule {
    pub fn new(lo: i64, hi: i64, table: Vec<u32>) -> Result<Self, GateError> {
        if hi < lo {
            return Err(GateError::EmptyWindow { lo, hi });
        }
        let width = (hi - lo + 1) as usize;
        if width > MAX_WINDOW_WIDTH {
            return Err(GateError::WindowCapExceeded {
                required: width,
                cap: MAX_WINDOW_WIDTH,
            });
        }
        if table.len() != 1 << width {
            return Err(GateError::TableSize {
                expected: 1 << width,
                found: table.len(),
            });
        }
        Ok(Self { lo, hi, table })
    }

    /// Builds the rule whose table entry `x` is `f(x)`.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(u32) -> u32) -> Result<Self, GateError> {
        if hi < lo {
            return Err(GateError::EmptyWindow { lo, hi });
        }
        let width = (hi - lo + 1) as u32;
        if width as usize > MAX_WINDOW_WIDTH {
            return Err(GateError::WindowCapExceeded {
                required: width as usize,
                cap: MAX_WINDOW_WIDTH,
            });
        }
        Self::new(lo, hi, (0..1u32 << width).map(f).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn width(&self) -> u32 {
        (self.hi - self.lo + 1) as u32
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }
}

/// Strips boundary coordinates that are never changed and never read by any
/// other output, and returns the canonical gate.
pub fn canonicalize(rule: &WindowRule) -> Result<InertGate, GateError> {
    check_bijective(&rule.table)?;
    Ok(shrink(rule.lo, rule.width(), rule.table.clone()))
}

fn check_bijective(table: &[u32]) -> Result<(), GateError> {
    let mut seen = vec![false; table.len()];
    for &y in table {
        match seen.get_mut(y as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return Err(GateError::NotAPermutation { value: y }),
        }
    }
    Ok(())
}

fn removable(table: &[u32], bit: u32) -> bool {
    let b = 1u32 << bit;
    table.iter().enumerate().all(|(x, &y)| {
        let x = x as u32;
        (x ^ y) & b == 0 && (y ^ table[(x ^ b) as usize]) == b
    })
}

fn shrink(mut lo: i64, mut width: u32, mut table: Vec<u32>) -> InertGate {
    loop {
        if width == 0 {
            return InertGate::identity();
        }
        if removable(&table, width - 1) {
            // coordinate lo is the MSB; it is fixed at 0 in the lower half
            table.truncate(1 << (width - 1));
            width -= 1;
            lo += 1;
        } else if removable(&table, 0) {
            table = (0..1usize << (width - 1)).map(|y| table[y << 1] >> 1).collect();
            width -= 1;
        } else {
            break;
        }
    }
    InertGate {
        local: Some(Local {
            lo,
            width,
            table: table.into(),
        }),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Local {
    lo: i64,
    width: u32,
    table: Arc<[u32]>,
}

/// An inert element of the group in canonical form: the tight window of
/// coordinates it reads or changes, with its permutation table. The identity
/// carries no window.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct InertGate {
    local: Option<Local>,
}

impl InertGate {
    pub fn identity() -> Self {
        Self { local: None }
    }

    pub fn is_identity(&self) -> bool {
        self.local.is_none()
    }

    /// Tight window `[lo, hi]`; `None` for the identity.
    pub fn window(&self) -> Option<(i64, i64)> {
        self.local
            .as_ref()
            .map(|l| (l.lo, l.lo + l.width as i64 - 1))
    }

    pub fn width(&self) -> u32 {
        self.local.as_ref().map_or(0, |l| l.width)
    }

    pub fn table(&self) -> &[u32] {
        self.local.as_ref().map_or(&[], |l| &l.table)
    }

    /// Strong shift-invariant radius: the smallest `R` such that some
    /// shift-conjugate acts inside `[-R, R]`.
    pub fn strong_radius(&self) -> u32 {
        self.width() / 2
    }

    /// Least `m` such that the gate acts inside `[m - R, m + R]`.
    pub fn offset(&self) -> Option<i64> {
        self.window().map(|(_, hi)| hi - self.strong_radius() as i64)
    }

    /// The window `[m - R, m + R]` together with the rule on it.
    pub fn centered_rule(&self) -> Option<WindowRule> {
        let m = self.offset()?;
        let r = self.strong_radius() as i64;
        Some(
            WindowRule::new(m - r, m + r, self.table_on(m - r, m + r))
                .expect("centered window fits"),
        )
    }

    pub fn to_rule(&self) -> Option<WindowRule> {
        let (lo, hi) = self.window()?;
        Some(WindowRule::new(lo, hi, self.table().to_vec()).expect("canonical rule is valid"))
    }

    /// The table of this gate over a window containing its own.
    pub fn table_on(&self, lo: i64, hi: i64) -> Vec<u32> {
        let width = (hi - lo + 1) as u32;
        (0..1u64 << width).map(|x| self.act(x, lo, width) as u32).collect()
    }

    /// Applies the gate to the word `x` occupying `width` coordinates starting
    /// at `base_lo`. The gate's window must lie inside.
    #[inline]
    pub fn act(&self, x: u64, base_lo: i64, width: u32) -> u64 {
        match &self.local {
            None => x,
            Some(l) => {
                let shift = (base_lo + width as i64) - (l.lo + l.width as i64);
                debug_assert!(shift >= 0 && l.lo >= base_lo, "gate window outside base");
                let shift = shift as u32;
                let m = mask(l.width) << shift;
                let field = ((x & m) >> shift) as usize;
                (x & !m) | ((l.table[field] as u64) << shift)
            }
        }
    }

    pub fn fits_in(&self, lo: i64, hi: i64) -> bool {
        self.window().is_none_or(|(a, b)| lo <= a && b <= hi)
    }

    /// Conjugate by `sigma^k` in the form `sigma^-k . g . sigma^k`, which
    /// translates the window by `+k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            local: self.local.as_ref().map(|l| Local {
                lo: l.lo + k,
                ..l.clone()
            }),
        }
    }

    /// Conjugate by the reversal `x_i -> x_-i`.
    pub fn mirrored(&self) -> Self {
        let Some(l) = &self.local else {
            return Self::identity();
        };
        let w = l.width;
        let rev = |x: u32| if w == 0 { 0 } else { x.reverse_bits() >> (32 - w) };
        let mut table = vec![0u32; l.table.len()];
        for (x, &y) in l.table.iter().enumerate() {
            table[rev(x as u32) as usize] = rev(y);
        }
        let hi = l.lo + w as i64 - 1;
        Self {
            local: Some(Local {
                lo: -hi,
                width: w,
                table: table.into(),
            }),
        }
    }

    pub fn inverse(&self) -> Self {
        let Some(l) = &self.local else {
            return Self::identity();
        };
        let mut table = vec![0u32; l.table.len()];
        for (x, &y) in l.table.iter().enumerate() {
            table[y as usize] = x as u32;
        }
        Self {
            local: Some(Local {
                table: table.into(),
                ..l.clone()
            }),
        }
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &InertGate, cap: usize) -> Result<InertGate, GateError> {
        let (Some((a_lo, a_hi)), Some((b_lo, b_hi))) = (self.window(), other.window()) else {
            return Ok(if self.is_identity() {
                other.clone()
            } else {
                self.clone()
            });
        };
        let lo = a_lo.min(b_lo);
        let hi = a_hi.max(b_hi);
        let width = check_width(lo, hi, cap)?;
        let table = (0..1u64 << width)
            .map(|x| self.act(other.act(x, lo, width), lo, width) as u32)
            .collect();
        Ok(shrink(lo, width, table))
    }

    /// Canonical gate from a table known to be a bijection on `[lo, lo + width)`.
    pub(crate) fn from_trusted_table(lo: i64, width: u32, table: Vec<u32>) -> InertGate {
        shrink(lo, width, table)
    }
}

pub(crate) fn check_width(lo: i64, hi: i64, cap: usize) -> Result<u32, GateError> {
    let required = (hi - lo + 1) as usize;
    let cap = cap.min(MAX_WINDOW_WIDTH);
    if required > cap {
        return Err(GateError::WindowCapExceeded { required, cap });
    }
    Ok(required as u32)
}

impl fmt::Debug for InertGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.window() {
            None => f.write_str("InertGate(id)"),
            Some((lo, hi)) => write!(f, "InertGate([{lo}, {hi}] {:?})", self.table()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_table_collapses() {
        let rule = WindowRule::from_fn(-3, 3, |x| x).unwrap();
        assert!(canonicalize(&rule).unwrap().is_identity());
    }

    #[test]
    fn flip_shrinks_to_single_cell() {
        // flip coordinate 0 inside [-2, 2]; coordinate 0 is bit 2
        let rule = WindowRule::from_fn(-2, 2, |x| x ^ 0b00100).unwrap();
        let g = canonicalize(&rule).unwrap();
        assert_eq!(g.window(), Some((0, 0)));
        assert_eq!(g.table(), &[1, 0]);
        assert_eq!(g.strong_radius(), 0);
        assert_eq!(g.offset(), Some(0));
    }

    #[test]
    fn rejects_non_bijection() {
        let rule = WindowRule::new(0, 1, vec![0, 0, 1, 2]).unwrap();
        assert!(matches!(
            canonicalize(&rule),
            Err(GateError::NotAPermutation { value: 0 })
        ));
    }

    #[test]
    fn interior_irrelevant_cells_are_kept() {
        // flip coordinate 0 iff coordinate 2 is set; coordinate 1 is idle
        let rule = WindowRule::from_fn(0, 2, |x| if x & 1 == 1 { x ^ 0b100 } else { x }).unwrap();
        let g = canonicalize(&rule).unwrap();
        assert_eq!(g.window(), Some((0, 2)));
    }

    #[test]
    fn read_only_boundary_cell_is_kept() {
        // CNOT: coordinate 1 is never changed but is read
        let rule = WindowRule::from_fn(0, 1, |x| if x & 1 == 1 { x ^ 0b10 } else { x }).unwrap();
        let g = canonicalize(&rule).unwrap();
        assert_eq!(g.window(), Some((0, 1)));
        assert_eq!(g.strong_radius(), 1);
        assert_eq!(g.offset(), Some(0));
        let centered = g.centered_rule().unwrap();
        assert_eq!((centered.lo(), centered.hi()), (-1, 1));
    }

    #[test]
    fn width_cap_is_enforced_before_allocation() {
        let a = canonicalize(&WindowRule::new(0, 0, vec![1, 0]).unwrap()).unwrap();
        let b = a.shifted(30);
        assert!(matches!(
            a.compose(&b, 24),
            Err(GateError::WindowCapExceeded { required: 31, cap: 24 })
        ));
    }

    #[test]
    fn mirror_and_inverse_are_involutions() {
        let rule = WindowRule::new(-1, 1, vec![3, 0, 5, 1, 2, 7, 4, 6]).unwrap();
        let g = canonicalize(&rule).unwrap();
        assert_eq!(g.mirrored().mirrored(), g);
        assert_eq!(g.inverse().inverse(), g);
        assert!(g.compose(&g.inverse(), 24).unwrap().is_identity());
    }
}
