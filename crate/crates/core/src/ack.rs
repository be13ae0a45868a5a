//! The recursive Ackermann function.
//!
//! ```text
//! A(0, n)     = n + 1
//! A(m+1, 0)   = A(m, 1)
//! A(m+1, n+1) = A(m, A(m+1, n))
//! ```
//!
//! Three evaluators share these semantics: [`ack_naive`] follows the
//! equations with real recursion under a call budget, [`AckMemo`] replaces
//! the call stack by an explicit work list over a memo table, and
//! [`ack_closed`] is the closed form for `m <= 3`, used only as a test
//! oracle.

use alloc::collections::BTreeMap;
use alloc::vec;

use crate::nat::{Fuel, Nat, StepCount};

/// Depth guard for [`ack_naive`]. Recursion depth tracks the size of the
/// intermediate values, so this admits everything up to `A(3, 10)`.
pub const NAIVE_MAX_DEPTH: usize = 10_000;

/// Default entry cap for [`AckMemo`].
pub const MEMO_DEFAULT_CAP: usize = 1 << 22;

/// Largest exponent [`ack_closed`] will materialise for `m = 3`.
pub const CLOSED_MAX_EXPONENT: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NaiveError {
    #[error("fuel exhausted after {0} calls")]
    FuelExhausted(StepCount),
    #[error("recursion deeper than {0} frames")]
    DepthExceeded(usize),
}

/// Result of a successful [`ack_naive`] run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counted {
    pub value: Nat,
    /// Number of `ack` call-frame entries, the outermost included.
    pub calls: StepCount,
}

struct Naive {
    fuel: Fuel,
    calls: StepCount,
    max_depth: usize,
}

impl Naive {
    fn call(&mut self, m: &Nat, n: &Nat, depth: usize) -> Result<Nat, NaiveError> {
        if !self.fuel.burn() {
            return Err(NaiveError::FuelExhausted(self.calls));
        }
        self.calls.tick();
        if depth > self.max_depth {
            return Err(NaiveError::DepthExceeded(self.max_depth));
        }
        match m.pred() {
            None => Ok(n.succ()),
            Some(m1) => match n.pred() {
                None => self.call(&m1, &Nat::ONE, depth + 1),
                Some(n1) => {
                    let inner = self.call(m, &n1, depth + 1)?;
                    self.call(&m1, &inner, depth + 1)
                }
            },
        }
    }
}

/// Evaluates `A(m, n)` by direct recursion, charging one unit of fuel per call.
pub fn ack_naive(m: &Nat, n: &Nat, fuel: Fuel) -> Result<Counted, NaiveError> {
    ack_naive_with_depth(m, n, fuel, NAIVE_MAX_DEPTH)
}

pub fn ack_naive_with_depth(
    m: &Nat,
    n: &Nat,
    fuel: Fuel,
    max_depth: usize,
) -> Result<Counted, NaiveError> {
    let mut ev = Naive {
        fuel,
        calls: StepCount::default(),
        max_depth,
    };
    let value = ev.call(m, n, 1)?;
    Ok(Counted {
        value,
        calls: ev.calls,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("memo table reached its cap of {cap} entries")]
pub struct ResourceLimit {
    pub cap: usize,
}

/// Memo table for `A`, filled by an explicit work list (no native recursion).
///
/// The table holds exactly the `(m, n)` pairs whose values were needed.
/// It may be reused across queries.
#[derive(Debug, Clone)]
pub struct AckMemo {
    table: BTreeMap<(Nat, Nat), Nat>,
    cap: usize,
}

impl Default for AckMemo {
    fn default() -> Self {
        AckMemo::with_cap(MEMO_DEFAULT_CAP)
    }
}

impl AckMemo {
    pub fn with_cap(cap: usize) -> Self {
        AckMemo {
            table: BTreeMap::new(),
            cap,
        }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, m: &Nat, n: &Nat) -> Option<&Nat> {
        self.table.get(&(m.clone(), n.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Nat, Nat), &Nat)> {
        self.table.iter()
    }

    pub fn eval(&mut self, m: &Nat, n: &Nat) -> Result<Nat, ResourceLimit> {
        if let Some(v) = self.get(m, n) {
            return Ok(v.clone());
        }
        let mut work = vec![(m.clone(), n.clone())];
        while let Some(key) = work.last() {
            if self.table.contains_key(key) {
                work.pop();
                continue;
            }
            let (m, n) = key;
            let value = match (m.pred(), n.pred()) {
                (None, _) => Some(n.succ()),
                (Some(m1), None) => {
                    let need = (m1, Nat::ONE);
                    match self.table.get(&need) {
                        Some(v) => Some(v.clone()),
                        None => {
                            work.push(need);
                            None
                        }
                    }
                }
                (Some(m1), Some(n1)) => {
                    let inner = (m.clone(), n1);
                    match self.table.get(&inner) {
                        Some(r) => {
                            let outer = (m1, r.clone());
                            match self.table.get(&outer) {
                                Some(v) => Some(v.clone()),
                                None => {
                                    work.push(outer);
                                    None
                                }
                            }
                        }
                        None => {
                            work.push(inner);
                            None
                        }
                    }
                }
            };
            if let Some(v) = value {
                if self.table.len() >= self.cap {
                    return Err(ResourceLimit { cap: self.cap });
                }
                let key = work.pop().expect("work list is non-empty");
                self.table.insert(key, v);
            } else if work.len() > self.cap {
                return Err(ResourceLimit { cap: self.cap });
            }
        }
        Ok(self.get(m, n).expect("root entry was computed").clone())
    }
}

/// `A(m, n)` through a fresh memo table with the default cap.
pub fn ack_memo(m: &Nat, n: &Nat) -> Result<Nat, ResourceLimit> {
    AckMemo::default().eval(m, n)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClosedFormError {
    #[error("no closed form for m = {0}")]
    OutOfRange(Nat),
    #[error("2^{0} is too large to materialise")]
    TooLarge(Nat),
}

/// Closed forms for the first four rows.
pub fn ack_closed(m: &Nat, n: &Nat) -> Result<Nat, ClosedFormError> {
    match m.to_u64() {
        Some(0) => Ok(n + 1),
        Some(1) => Ok(n + 2),
        Some(2) => Ok(&n.mul_u64(2) + 3),
        Some(3) => {
            let exp = n + 3;
            match exp.to_u64() {
                Some(e) if e <= CLOSED_MAX_EXPONENT => {
                    Ok(Nat::pow2(e).saturating_sub(&Nat::from(3u64)))
                }
                _ => Err(ClosedFormError::TooLarge(exp)),
            }
        }
        _ => Err(ClosedFormError::OutOfRange(m.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn nat(v: u64) -> Nat {
        Nat::from(v)
    }

    // Plain u64 recursion, written independently of the evaluators above.
    fn oracle(m: u64, n: u64) -> u64 {
        match (m, n) {
            (0, n) => n + 1,
            (m, 0) => oracle(m - 1, 1),
            (m, n) => oracle(m - 1, oracle(m, n - 1)),
        }
    }

    #[test]
    fn naive_first_equation_is_one_call() {
        let r = ack_naive(&nat(0), &nat(7), Fuel(100)).unwrap();
        assert_eq!(r.value, 8u64);
        assert_eq!(r.calls, StepCount(1));
    }

    #[test]
    fn naive_small_values() {
        let r = ack_naive(&nat(2), &nat(3), Fuel(1_000_000)).unwrap();
        assert_eq!(r.value, 9u64);
        assert_eq!(r.calls, StepCount(44));
        let r = ack_naive(&nat(3), &nat(3), Fuel(10_000_000)).unwrap();
        assert_eq!(r.value, 61u64);
        assert_eq!(r.calls, StepCount(2432));
    }

    #[test]
    fn naive_reports_exhaustion() {
        assert_eq!(
            ack_naive(&nat(2), &nat(3), Fuel(43)),
            Err(NaiveError::FuelExhausted(StepCount(43)))
        );
        assert!(ack_naive(&nat(2), &nat(3), Fuel(44)).is_ok());
        assert_eq!(
            ack_naive(&nat(0), &nat(0), Fuel(0)),
            Err(NaiveError::FuelExhausted(StepCount(0)))
        );
    }

    #[test]
    fn naive_depth_guard() {
        let err = ack_naive_with_depth(&nat(3), &nat(3), Fuel::UNLIMITED, 10).unwrap_err();
        assert_eq!(err, NaiveError::DepthExceeded(10));
    }

    #[test]
    fn memo_examples() {
        assert_eq!(ack_memo(&nat(1), &nat(1)).unwrap(), 3u64);
        assert_eq!(ack_memo(&nat(4), &nat(0)).unwrap(), 13u64);
        assert_eq!(ack_memo(&nat(0), &nat(0)).unwrap(), 1u64);
        assert_eq!(ack_memo(&nat(3), &nat(3)).unwrap(), 61u64);
    }

    #[test]
    fn memo_a41_fits_default_cap() {
        assert_eq!(ack_memo(&nat(4), &nat(1)).unwrap(), 65533u64);
    }

    #[test]
    fn memo_only_holds_visited_pairs() {
        let mut memo = AckMemo::default();
        memo.eval(&nat(1), &nat(1)).unwrap();
        // A(1,1) -> A(1,0), A(0,A(1,0)) ; A(1,0) -> A(0,1)
        let keys: alloc::vec::Vec<_> = memo.entries().map(|(k, _)| k.clone()).collect();
        assert_eq!(
            keys,
            [
                (nat(0), nat(1)),
                (nat(0), nat(2)),
                (nat(1), nat(0)),
                (nat(1), nat(1))
            ]
        );
    }

    #[test]
    fn memo_cap_is_enforced() {
        let mut memo = AckMemo::with_cap(100);
        assert_eq!(memo.eval(&nat(3), &nat(5)), Err(ResourceLimit { cap: 100 }));
        // a huge argument stops at the cap instead of running away
        let mut memo = AckMemo::with_cap(10_000);
        assert!(memo.eval(&nat(3), &nat(61)).is_err());
    }

    #[test]
    fn closed_examples() {
        assert_eq!(ack_closed(&nat(0), &nat(5)).unwrap(), 6u64);
        assert_eq!(ack_closed(&nat(2), &nat(3)).unwrap(), 9u64);
        assert_eq!(ack_closed(&nat(3), &nat(2)).unwrap(), 29u64);
        assert_eq!(
            ack_closed(&nat(4), &nat(0)),
            Err(ClosedFormError::OutOfRange(nat(4)))
        );
        assert_eq!(
            ack_closed(&nat(3), &nat(61)).unwrap().to_biguint(),
            (num_bigint::BigUint::from(1u32) << 64u32) - 3u32
        );
        assert!(matches!(
            ack_closed(&nat(3), &nat(u64::MAX)),
            Err(ClosedFormError::TooLarge(_))
        ));
    }

    #[test]
    fn closed_forms_match_oracle_before_use() {
        for m in 0..=3 {
            for n in 0..=10 {
                assert_eq!(
                    ack_closed(&nat(m), &nat(n)).unwrap(),
                    oracle(m, n),
                    "A({m},{n})"
                );
            }
        }
    }

    #[test]
    fn evaluators_agree_on_grid() {
        let mut memo = AckMemo::default();
        for m in 0..=3u64 {
            for n in 0..=8u64 {
                let expect = oracle(m, n);
                let naive = ack_naive(&nat(m), &nat(n), Fuel(10_000_000)).unwrap();
                assert_eq!(naive.value, expect);
                assert_eq!(memo.eval(&nat(m), &nat(n)).unwrap(), expect);
                assert_eq!(ack_closed(&nat(m), &nat(n)).unwrap(), expect);
            }
        }
    }

    #[test]
    fn strictly_monotone_on_grid() {
        let mut memo = AckMemo::default();
        for m in 0..=3u64 {
            for n in 0..=8u64 {
                let here = memo.eval(&nat(m), &nat(n)).unwrap();
                assert!(memo.eval(&nat(m), &nat(n + 1)).unwrap() > here);
                if m < 3 {
                    assert!(memo.eval(&nat(m + 1), &nat(n)).unwrap() > here);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn fuel_monotone(m in 0u64..=3, n in 0u64..=5, extra in 0u64..1000) {
            let m = nat(m);
            let n = nat(n);
            let exact = ack_naive(&m, &n, Fuel::UNLIMITED).unwrap();
            let f = exact.calls.get();
            prop_assert_eq!(ack_naive(&m, &n, Fuel(f)), Ok(exact.clone()));
            prop_assert_eq!(ack_naive(&m, &n, Fuel(f + extra)), Ok(exact.clone()));
            if f > 0 {
                prop_assert!(matches!(ack_naive(&m, &n, Fuel(f - 1)), Err(NaiveError::FuelExhausted(_))));
            }
        }

        #[test]
        fn deterministic(m in 0u64..=3, n in 0u64..=6) {
            let a = ack_naive(&nat(m), &nat(n), Fuel::UNLIMITED);
            let b = ack_naive(&nat(m), &nat(n), Fuel::UNLIMITED);
            prop_assert_eq!(a, b);
            prop_assert_eq!(ack_memo(&nat(m), &nat(n)), ack_memo(&nat(m), &nat(n)));
        }
    }
}
