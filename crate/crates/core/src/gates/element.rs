use std::fmt;

use serde::{Deserialize, Serialize};

use super::inert::{canonicalize, InertGate, WindowRule, DEFAULT_WINDOW_CAP};
use super::GateError;
use crate::bitcore::BitWord;

/// An element `sigma^n . f` with `f` inert. The decomposition is unique, so
/// derived equality is group-element equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupElement {
    shift: i64,
    inert: InertGate,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(shift: i64, inert: InertGate) -> Self {
        Self { shift, inert }
    }

    /// `sigma^k`, where `sigma(x)_i = x_(i+1)`.
    pub fn sigma(k: i64) -> Self {
        Self {
            shift: k,
            inert: InertGate::identity(),
        }
    }

    pub fn from_inert(inert: InertGate) -> Self {
        Self { shift: 0, inert }
    }

    pub fn from_rule(rule: &WindowRule) -> Result<Self, GateError> {
        Ok(Self::from_inert(canonicalize(rule)?))
    }

    pub fn shift_power(&self) -> i64 {
        self.shift
    }

    pub fn inert(&self) -> &InertGate {
        &self.inert
    }

    pub fn is_inert(&self) -> bool {
        self.shift == 0
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.inert.is_identity()
    }

    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, GateError> {
        self.compose_capped(other, DEFAULT_WINDOW_CAP)
    }

    /// `self . other`. With `self = sigma^a F` and `other = sigma^b G` this is
    /// `sigma^(a+b) (sigma^-b F sigma^b) G`.
    pub fn compose_capped(&self, other: &GroupElement, cap: usize) -> Result<GroupElement, GateError> {
        let inert = self.inert.shifted(other.shift).compose(&other.inert, cap)?;
        Ok(Self {
            shift: self.shift + other.shift,
            inert,
        })
    }

    pub fn inverse(&self) -> GroupElement {
        // (sigma^a F)^-1 = F^-1 sigma^-a = sigma^-a (sigma^a F^-1 sigma^-a)
        Self {
            shift: -self.shift,
            inert: self.inert.inverse().shifted(-self.shift),
        }
    }

    /// `sigma^-k . self . sigma^k`.
    pub fn shift_conjugate(&self, k: i64) -> GroupElement {
        Self {
            shift: self.shift,
            inert: self.inert.shifted(k),
        }
    }

    /// `R . self . R` for the reversal `R(x)_i = x_-i`.
    pub fn reverse_conjugate(&self) -> GroupElement {
        Self {
            shift: -self.shift,
            inert: self.inert.mirrored(),
        }
    }

    /// `self^k` for `k >= 0`.
    pub fn pow(&self, k: u32) -> Result<GroupElement, GateError> {
        let mut acc = GroupElement::identity();
        for _ in 0..k {
            acc = acc.compose(self)?;
        }
        Ok(acc)
    }

    /// Applies the element to the finite configuration `x` whose first letter
    /// sits at coordinate `anchor`. Returns the image and the coordinate of its
    /// first letter, which moves to `anchor - shift_power`.
    pub fn apply(&self, x: &BitWord, anchor: i64) -> Result<(BitWord, i64), GateError> {
        let hi = anchor + x.len() as i64 - 1;
        if let Some((lo_w, hi_w)) = self.inert.window() {
            let missing: Vec<i64> = (lo_w..=hi_w).filter(|&i| i < anchor || i > hi).collect();
            if !missing.is_empty() {
                return Err(GateError::InsufficientContext { missing });
            }
        }
        let y = self.inert.act(x.to_int(), anchor, x.len() as u32);
        Ok((BitWord::from_int(y, x.len())?, anchor - self.shift))
    }

    pub fn to_record(&self) -> GateRecord {
        let window = self.inert.window();
        GateRecord {
            shift_power: self.shift,
            window_lo: window.map(|w| w.0),
            window_hi: window.map(|w| w.1),
            table: self.inert.table().to_vec(),
        }
    }

    pub fn from_record(record: &GateRecord) -> Result<Self, GateError> {
        let inert = match (record.window_lo, record.window_hi) {
            (Some(lo), Some(hi)) => canonicalize(&WindowRule::new(lo, hi, record.table.clone())?)?,
            (None, None) if record.table.is_empty() => InertGate::identity(),
            _ => return Err(GateError::MalformedRecord),
        };
        Ok(Self {
            shift: record.shift_power,
            inert,
        })
    }
}

/// Serialized form of a group element: shift power plus the tight window and
/// its MSB-first table. The identity inert part has no window and an empty
/// table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRecord {
    pub shift_power: i64,
    pub window_lo: Option<i64>,
    pub window_hi: Option<i64>,
    pub table: Vec<u32>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma^{} . {:?}", self.shift, self.inert)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.shift, self.inert.window()) {
            (0, None) => f.write_str("id"),
            (k, None) => write!(f, "sigma^{k}"),
            (k, Some((lo, hi))) => {
                if k != 0 {
                    write!(f, "sigma^{k} . ")?;
                }
                write!(f, "gate[{lo},{hi}] {:?}", self.inert.table())
            }
        }
    }
}
