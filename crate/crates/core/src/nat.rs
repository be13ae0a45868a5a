//! Natural numbers, fuel budgets and step counters.
//!
//! [`Nat`] is arbitrary precision. Values that fit in a `u64` are kept
//! inline, so the stack machine only touches the heap once a value
//! actually outgrows a machine word.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(u64),
    // Invariant: strictly greater than u64::MAX.
    Big(BigUint),
}

/// An arbitrary-precision natural number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nat(Repr);

impl Nat {
    pub const ZERO: Nat = Nat(Repr::Small(0));
    pub const ONE: Nat = Nat(Repr::Small(1));

    pub const fn from_u64(v: u64) -> Self {
        Nat(Repr::Small(v))
    }

    fn from_big(b: BigUint) -> Self {
        match b.to_u64() {
            Some(v) => Nat(Repr::Small(v)),
            None => Nat(Repr::Big(b)),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    /// `Some` when the value fits in a `u64`.
    pub fn to_u64(&self) -> Option<u64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    pub fn succ(&self) -> Nat {
        let mut n = self.clone();
        n.incr();
        n
    }

    /// Predecessor; `None` on zero.
    pub fn pred(&self) -> Option<Nat> {
        let mut n = self.clone();
        n.decr().then_some(n)
    }

    /// In-place successor.
    pub fn incr(&mut self) {
        match &mut self.0 {
            Repr::Small(v) => match v.checked_add(1) {
                Some(w) => *v = w,
                None => self.0 = Repr::Big(BigUint::from(u64::MAX) + 1u32),
            },
            Repr::Big(b) => *b += 1u32,
        }
    }

    /// In-place predecessor. Returns `false` (and leaves the value alone) on zero.
    pub fn decr(&mut self) -> bool {
        match &mut self.0 {
            Repr::Small(0) => false,
            Repr::Small(v) => {
                *v -= 1;
                true
            }
            Repr::Big(b) => {
                *b -= 1u32;
                if let Some(v) = b.to_u64() {
                    self.0 = Repr::Small(v);
                }
                true
            }
        }
    }

    /// `2^exp`.
    pub fn pow2(exp: u64) -> Nat {
        if exp < 64 {
            Nat::from_u64(1u64 << exp)
        } else {
            Nat::from_big(BigUint::from(1u32) << exp)
        }
    }

    /// Saturating subtraction.
    pub fn saturating_sub(&self, rhs: &Nat) -> Nat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => Nat::from_u64(a.saturating_sub(*b)),
            _ if self <= rhs => Nat::ZERO,
            _ => Nat::from_big(self.to_biguint() - rhs.to_biguint()),
        }
    }

    pub fn mul_u64(&self, k: u64) -> Nat {
        match self.0 {
            Repr::Small(v) => match v.checked_mul(k) {
                Some(p) => Nat::from_u64(p),
                None => Nat::from_big(BigUint::from(v) * k),
            },
            Repr::Big(ref b) => Nat::from_big(b * k),
        }
    }

    /// Number of significant bits (0 for zero).
    pub fn bits(&self) -> u64 {
        match &self.0 {
            Repr::Small(v) => 64 - u64::from(v.leading_zeros()),
            Repr::Big(b) => b.bits(),
        }
    }
}

impl Default for Nat {
    fn default() -> Self {
        Nat::ZERO
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat::from_u64(v)
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Self {
        Nat::from_u64(u64::from(v))
    }
}

impl From<usize> for Nat {
    fn from(v: usize) -> Self {
        Nat::from_u64(v as u64)
    }
}

impl From<BigUint> for Nat {
    fn from(b: BigUint) -> Self {
        Nat::from_big(b)
    }
}

impl PartialEq<u64> for Nat {
    fn eq(&self, other: &u64) -> bool {
        matches!(self.0, Repr::Small(v) if v == *other)
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            (Repr::Small(_), Repr::Big(_)) => Ordering::Less,
            (Repr::Big(_), Repr::Small(_)) => Ordering::Greater,
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Nat {
    type Output = Nat;

    fn add(self, rhs: &Nat) -> Nat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_add(*b) {
                Some(s) => Nat::from_u64(s),
                None => Nat::from_big(BigUint::from(*a) + *b),
            },
            _ => Nat::from_big(self.to_biguint() + rhs.to_biguint()),
        }
    }
}

impl Add<u64> for &Nat {
    type Output = Nat;

    fn add(self, rhs: u64) -> Nat {
        self + &Nat::from_u64(rhs)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => fmt::Display::fmt(v, f),
            Repr::Big(b) => fmt::Display::fmt(b, f),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid natural number literal {0:?}")]
pub struct ParseNatError(pub String);

impl FromStr for Nat {
    type Err = ParseNatError;

    /// Plain decimal digits only: no sign, no grouping, no whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseNatError(s.into()));
        }
        if let Ok(v) = s.parse::<u64>() {
            return Ok(Nat::from_u64(v));
        }
        BigUint::parse_bytes(s.as_bytes(), 10)
            .map(Nat::from_big)
            .ok_or_else(|| ParseNatError(s.into()))
    }
}

/// A budget of recursive calls or rewrite steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fuel(pub u64);

impl Fuel {
    pub const UNLIMITED: Fuel = Fuel(u64::MAX);

    /// Consumes one unit. Returns `false` when nothing was left.
    pub fn burn(&mut self) -> bool {
        match self.0.checked_sub(1) {
            Some(rest) => {
                self.0 = rest;
                true
            }
            None => false,
        }
    }

    pub fn remaining(self) -> u64 {
        self.0
    }
}

/// Exact number of calls or steps taken by an evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepCount(pub u64);

impl StepCount {
    pub fn get(self) -> u64 {
        self.0
    }

    pub(crate) fn tick(&mut self) {
        self.0 += 1;
    }
}

impl fmt::Display for StepCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
