//! Bounded search for divergent derivations.
//!
//! Breadth-first over `(start, position sequence)`, starts in the order
//! given and positions ascending, so the first witness found is the
//! shortest and, among those, the lexicographically least. Two things
//! count as a witness:
//!
//! * growth: a derived stack longer than the threshold;
//! * embedding: a derived stack `p ++ s ++ q` with `p ++ q` non-empty,
//!   where `s` is an earlier stack on the same derivation. Free-mode
//!   rewriting is closed under both contexts, so this repeats forever.
//!
//! `NoneFound` is a statement about the budget, never a termination proof.

use alloc::collections::BTreeSet;
use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::engine::{apply_at, Applied, ApplyError};
use super::{Mode, RewriteSystem};
use crate::nat::{Fuel, Nat};
use crate::stack::Stack;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// The final stack has `length` elements, more than the threshold.
    Growth { length: usize },
    /// The final stack contains state `earlier` of the derivation (0 is the
    /// start) at element offset `offset`.
    Embedding { earlier: usize, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub start: Stack,
    pub positions: Vec<usize>,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness(Witness),
    NoneFound {
        /// Rewrites performed.
        explored: u64,
        /// True when the frontier emptied before fuel ran out.
        exhaustive: bool,
    },
}

struct Node {
    stack: Stack,
    parent: Option<usize>,
    start: usize,
    position: usize,
}

fn permitted(sys: &RewriteSystem, s: &Stack) -> core::ops::Range<usize> {
    match sys.mode {
        Mode::Anchored => 0..1,
        Mode::Free => 0..s.len(),
    }
}

/// Offset at which `needle` occurs as a contiguous block of `hay`.
fn find_block(hay: &[Nat], needle: &[Nat]) -> Option<usize> {
    if needle.is_empty() {
        return Some(0);
    }
    hay.windows(needle.len()).position(|w| w == needle)
}

// Anchored rewriting is only closed under suffix contexts, so there an
// embedding must sit at offset 0.
fn embedding_ok(mode: Mode, offset: usize) -> bool {
    mode == Mode::Free || offset == 0
}

/// Checks `path.last()` against the earlier states of `path`.
fn classify(mode: Mode, path: &[Stack], threshold: usize) -> Option<WitnessKind> {
    let last = path.last()?;
    if last.len() > threshold {
        return Some(WitnessKind::Growth { length: last.len() });
    }
    let hay = last.to_vec();
    path[..path.len() - 1]
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_empty() && s.len() < last.len())
        .find_map(|(earlier, s)| {
            let offset = match mode {
                Mode::Free => find_block(&hay, &s.to_vec())?,
                Mode::Anchored => s.iter().zip(&hay).all(|(a, b)| a == b).then_some(0)?,
            };
            Some(WitnessKind::Embedding { earlier, offset })
        })
}

/// Searches for a divergence witness, spending one unit of fuel per rewrite.
pub fn divergence_search(
    sys: &RewriteSystem,
    starts: &[Stack],
    mut fuel: Fuel,
    threshold: usize,
) -> SearchOutcome {
    let mut nodes: Vec<Node> = Vec::new();
    let mut queue = VecDeque::new();
    let mut seen = BTreeSet::new();
    for (i, s) in starts.iter().enumerate() {
        if seen.insert(s.clone()) {
            queue.push_back(nodes.len());
            nodes.push(Node {
                stack: s.clone(),
                parent: None,
                start: i,
                position: 0,
            });
        }
    }
    let mut explored = 0;

    while let Some(id) = queue.pop_front() {
        let current = nodes[id].stack.clone();
        for position in permitted(sys, &current) {
            let Ok(Applied::Rewritten { stack, .. }) = apply_at(sys, &current, position) else {
                continue;
            };
            if !fuel.burn() {
                return SearchOutcome::NoneFound {
                    explored,
                    exhaustive: false,
                };
            }
            explored += 1;
            let child = nodes.len();
            nodes.push(Node {
                stack: stack.clone(),
                parent: Some(id),
                start: nodes[id].start,
                position,
            });
            let (path, positions) = path_to(&nodes, child);
            if let Some(kind) = classify(sys.mode, &path, threshold) {
                return SearchOutcome::Witness(Witness {
                    start: starts[nodes[child].start].clone(),
                    positions,
                    kind,
                });
            }
            if seen.insert(stack) {
                queue.push_back(child);
            } else {
                nodes.pop();
            }
        }
    }
    SearchOutcome::NoneFound {
        explored,
        exhaustive: true,
    }
}

fn path_to(nodes: &[Node], mut id: usize) -> (Vec<Stack>, Vec<usize>) {
    let mut states = Vec::new();
    let mut positions = Vec::new();
    loop {
        let n = &nodes[id];
        states.push(n.stack.clone());
        match n.parent {
            Some(p) => {
                positions.push(n.position);
                id = p;
            }
            None => break,
        }
    }
    states.reverse();
    positions.reverse();
    (states, positions)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {index}: {error}")]
    Apply { index: usize, error: ApplyError },
    #[error("step {index}: no rule matches at position {position}")]
    NoMatch { index: usize, position: usize },
    #[error("replayed derivation does not exhibit {claimed:?}")]
    NotAWitness { claimed: WitnessKind },
}

/// Re-applies a witness's positions with [`apply_at`] and checks its claim.
/// Returns the replayed derivation.
pub fn replay(
    sys: &RewriteSystem,
    w: &Witness,
    threshold: usize,
) -> Result<Vec<Stack>, ReplayError> {
    let mut path = alloc::vec![w.start.clone()];
    for (index, &position) in w.positions.iter().enumerate() {
        let current = path.last().expect("path is non-empty");
        match apply_at(sys, current, position) {
            Ok(Applied::Rewritten { stack, .. }) => path.push(stack),
            Ok(Applied::NoMatch) => return Err(ReplayError::NoMatch { index, position }),
            Err(error) => return Err(ReplayError::Apply { index, error }),
        }
    }
    let last = path.last().expect("path is non-empty");
    let holds = match w.kind {
        WitnessKind::Growth { length } => last.len() == length && length > threshold,
        WitnessKind::Embedding { earlier, offset } => match path.get(earlier) {
            Some(s)
                if earlier + 1 < path.len()
                    && !s.is_empty()
                    && s.len() < last.len()
                    && embedding_ok(sys.mode, offset) =>
            {
                let hay = last.to_vec();
                let needle = s.to_vec();
                hay.get(offset..offset + needle.len()) == Some(needle.as_slice())
            }
            _ => false,
        },
    };
    if holds {
        Ok(path)
    } else {
        Err(ReplayError::NotAWitness { claimed: w.kind })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_rules;
    use alloc::vec;

    #[test]
    fn empty_system_finds_nothing() {
        let sys = parse_rules("").unwrap().with_mode(Mode::Free);
        let out = divergence_search(&sys, &[Stack::from([1, 2]), Stack::new()], Fuel(100), 5);
        assert_eq!(
            out,
            SearchOutcome::NoneFound {
                explored: 0,
                exhaustive: true
            }
        );
    }

    #[test]
    fn growing_rule() {
        let sys = parse_rules("x | L -> S(x) x | L")
            .unwrap()
            .with_mode(Mode::Free);
        let SearchOutcome::Witness(w) = divergence_search(&sys, &[Stack::from([0])], Fuel(1000), 5)
        else {
            panic!("expected a witness");
        };
        assert_eq!(w.start, Stack::from([0]));
        // [0] -> [1, 0] already contains [0] with a longer context
        assert_eq!(w.positions, [0]);
        assert_eq!(
            w.kind,
            WitnessKind::Embedding {
                earlier: 0,
                offset: 1
            }
        );
        let path = replay(&sys, &w, 5).unwrap();
        assert_eq!(path, [Stack::from([0]), Stack::from([1, 0])]);
    }

    #[test]
    fn growth_witness_when_no_embedding() {
        // each step grows by one and the head keeps increasing, so no earlier
        // state ever reappears as a block
        let sys = parse_rules("x | L -> S(x) 0 | L")
            .unwrap()
            .with_mode(Mode::Anchored);
        let SearchOutcome::Witness(w) = divergence_search(&sys, &[Stack::from([1])], Fuel(1000), 5)
        else {
            panic!("expected a witness");
        };
        assert_eq!(w.positions, [0; 5]);
        assert_eq!(w.kind, WitnessKind::Growth { length: 6 });
        assert_eq!(
            replay(&sys, &w, 5).unwrap().last().unwrap(),
            &Stack::from([6, 0, 0, 0, 0, 0])
        );
    }

    #[test]
    fn anchored_ackermann_has_no_witness_on_small_starts() {
        let sys = RewriteSystem::ackermann();
        let starts = [Stack::from([3, 2]), Stack::from([1, 1])];
        match divergence_search(&sys, &starts, Fuel(10_000), 50) {
            SearchOutcome::NoneFound { exhaustive, .. } => assert!(exhaustive),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fuel_bounds_the_search() {
        let sys = parse_rules("x | L -> S(x) | L")
            .unwrap()
            .with_mode(Mode::Free);
        assert_eq!(
            divergence_search(&sys, &[Stack::from([0])], Fuel(3), 5),
            SearchOutcome::NoneFound {
                explored: 3,
                exhaustive: false
            }
        );
    }

    #[test]
    fn replay_rejects_false_claims() {
        let sys = parse_rules("x | L -> S(x) x | L")
            .unwrap()
            .with_mode(Mode::Free);
        let w = Witness {
            start: Stack::from([0]),
            positions: vec![0],
            kind: WitnessKind::Growth { length: 2 },
        };
        assert!(matches!(
            replay(&sys, &w, 5),
            Err(ReplayError::NotAWitness { .. })
        ));
        let w = Witness {
            start: Stack::from([0]),
            positions: vec![4],
            kind: WitnessKind::Growth { length: 2 },
        };
        assert!(matches!(
            replay(&sys, &w, 1),
            Err(ReplayError::Apply { index: 0, .. })
        ));
    }

    #[test]
    fn blocks() {
        let n = |v: &[u64]| v.iter().copied().map(Nat::from).collect::<Vec<_>>();
        assert_eq!(find_block(&n(&[1, 2, 3]), &n(&[2, 3])), Some(1));
        assert_eq!(find_block(&n(&[1, 2, 3]), &n(&[3, 2])), None);
        assert_eq!(find_block(&n(&[1]), &n(&[])), Some(0));
    }
}
