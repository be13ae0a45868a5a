//! Least fixed points of finite rule sets, and the graph relations of `A`
//! and of the everywhere-undefined `U(x) = U(x) + 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::nat::{Fuel, Nat};

/// Default entry cap for [`graph_saturate_ack`].
pub const GRAPH_DEFAULT_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("saturation would admit more than {cap} entries")]
pub struct EntryCapExceeded {
    pub cap: usize,
}

/// Outcome of [`saturate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation<T> {
    pub set: BTreeSet<T>,
    /// Rounds actually run.
    pub rounds: u64,
    /// False when fuel ran out before a round added nothing.
    pub fixpoint: bool,
}

/// A rule maps the current set to the conclusions it licenses. Axioms are
/// rules that ignore their input.
pub type Rule<'a, T> = &'a dyn Fn(&BTreeSet<T>) -> Vec<T>;

/// Iterates `rules` from the empty set until no round adds anything, or
/// until `fuel` rounds have run.
pub fn saturate<T: Ord + Clone>(
    rules: &[Rule<'_, T>],
    mut fuel: Fuel,
    cap: usize,
) -> Result<Saturation<T>, EntryCapExceeded> {
    let mut set = BTreeSet::new();
    let mut rounds = 0;
    loop {
        if !fuel.burn() {
            return Ok(Saturation {
                set,
                rounds,
                fixpoint: false,
            });
        }
        rounds += 1;
        let fresh: Vec<T> = rules
            .iter()
            .flat_map(|rule| rule(&set))
            .filter(|t| !set.contains(t))
            .collect();
        if fresh.is_empty() {
            return Ok(Saturation {
                set,
                rounds,
                fixpoint: true,
            });
        }
        set.extend(fresh);
        if set.len() > cap {
            return Err(EntryCapExceeded { cap });
        }
    }
}

/// A finite input/output relation generated by saturation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRelation<I> {
    entries: BTreeSet<(I, Nat)>,
    pub fixpoint: bool,
}

impl<I: Ord + Clone> GraphRelation<I> {
    fn from_saturation(s: Saturation<(I, Nat)>) -> Self {
        GraphRelation {
            entries: s.set,
            fixpoint: s.fixpoint,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, input: &I, output: &Nat) -> bool {
        self.entries.contains(&(input.clone(), output.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(I, Nat)> {
        self.entries.iter()
    }

    pub fn outputs<'a>(&'a self, input: &'a I) -> impl Iterator<Item = &'a Nat> + 'a {
        self.entries
            .range((input.clone(), Nat::ZERO)..)
            .take_while(move |(i, _)| i == input)
            .map(|(_, o)| o)
    }

    /// Inputs related to more than one output.
    pub fn conflicts(&self) -> Vec<&I> {
        let mut out = Vec::new();
        let mut prev: Option<&I> = None;
        for (i, _) in &self.entries {
            if prev == Some(i) && out.last() != Some(&i) {
                out.push(i);
            }
            prev = Some(i);
        }
        out
    }

    /// No input appears with two distinct outputs.
    pub fn is_functional(&self) -> bool {
        self.conflicts().is_empty()
    }
}

/// Saturation bounds for the graph of `A`.
///
/// Row `max_m` is limited to `n <= max_n`; lower rows, which only feed
/// intermediate values, to `n <= max_val`. Every output is at most
/// `max_val`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AckBounds {
    pub max_m: u64,
    pub max_n: u64,
    pub max_val: u64,
}

impl AckBounds {
    pub fn admits(&self, m: &Nat, n: &Nat, r: &Nat) -> bool {
        let (Some(m), Some(n), Some(r)) = (m.to_u64(), n.to_u64(), r.to_u64()) else {
            return false;
        };
        let n_cap = if m == self.max_m {
            self.max_n
        } else {
            self.max_val
        };
        m <= self.max_m && n <= n_cap && r <= self.max_val
    }

    /// Number of admissible inputs.
    fn input_count(&self) -> Option<u64> {
        let row = self.max_val.checked_add(1)?;
        self.max_m
            .checked_mul(row)?
            .checked_add(self.max_n.checked_add(1)?)
    }
}

type AckEntry = ((Nat, Nat), Nat);

/// Least fixed point, within `bounds`, of the graph rules of `A`:
///
/// ```text
/// ((0, n), n+1)
/// ((m, 1), r)                          ==> ((m+1, 0), r)
/// ((m+1, n), r1) and ((m, r1), r2)     ==> ((m+1, n+1), r2)
/// ```
pub fn graph_saturate_ack(
    bounds: AckBounds,
    cap: usize,
) -> Result<GraphRelation<(Nat, Nat)>, EntryCapExceeded> {
    match bounds.input_count() {
        Some(c) if c <= cap as u64 => {}
        _ => return Err(EntryCapExceeded { cap }),
    }

    let axioms = |_: &BTreeSet<AckEntry>| -> Vec<AckEntry> {
        let top = if bounds.max_m == 0 {
            bounds.max_n
        } else {
            bounds.max_val
        };
        (0..=top)
            .map(|n| ((Nat::ZERO, Nat::from(n)), Nat::from(n + 1)))
            .filter(|((m, n), r)| bounds.admits(m, n, r))
            .collect()
    };
    let zero_case = |set: &BTreeSet<AckEntry>| -> Vec<AckEntry> {
        set.iter()
            .filter(|((_, n), _)| *n == 1)
            .map(|((m, _), r)| ((m.succ(), Nat::ZERO), r.clone()))
            .filter(|((m, n), r)| bounds.admits(m, n, r))
            .collect()
    };
    let succ_case = |set: &BTreeSet<AckEntry>| -> Vec<AckEntry> {
        let mut by_input: BTreeMap<&(Nat, Nat), Vec<&Nat>> = BTreeMap::new();
        for (i, r) in set {
            by_input.entry(i).or_default().push(r);
        }
        let mut out = Vec::new();
        for ((m1, n), r1) in set {
            let Some(m) = m1.pred() else { continue };
            let key = (m, r1.clone());
            let Some(r2s) = by_input.get(&key) else {
                continue;
            };
            let input = (m1.clone(), n.succ());
            for r2 in r2s {
                if bounds.admits(&input.0, &input.1, r2) {
                    out.push((input.clone(), (*r2).clone()));
                }
            }
        }
        out
    };

    let s = saturate::<AckEntry>(&[&axioms, &zero_case, &succ_case], Fuel::UNLIMITED, cap)?;
    Ok(GraphRelation::from_saturation(s))
}

/// Graph of `U(x) = U(x) + 1`: the only rule is
/// `(x, y) in G_U ==> (x, y+1) in G_U`, with no base case.
pub fn graph_saturate_u(fuel: Fuel) -> GraphRelation<Nat> {
    let grow = |set: &BTreeSet<(Nat, Nat)>| -> Vec<(Nat, Nat)> {
        set.iter().map(|(x, y)| (x.clone(), y.succ())).collect()
    };
    let s = saturate::<(Nat, Nat)>(&[&grow], fuel, usize::MAX)
        .expect("an unbounded cap cannot be exceeded");
    GraphRelation::from_saturation(s)
}

/// Domain of `U`: the only rule is `x in D_U ==> x in D_U`.
pub fn domain_saturate_u(fuel: Fuel) -> Saturation<Nat> {
    let same = |set: &BTreeSet<Nat>| -> Vec<Nat> { set.iter().cloned().collect() };
    saturate::<Nat>(&[&same], fuel, usize::MAX).expect("an unbounded cap cannot be exceeded")
}
