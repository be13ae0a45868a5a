use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Mode, RewriteRule, RewriteSystem, Slot};
use crate::nat::{Fuel, Nat};
use crate::stack::Stack;

pub type Bindings = BTreeMap<String, Nat>;

/// A successful match of one rule against a stack suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    pub bindings: Bindings,
    /// What the tail variable bound to.
    pub tail: Stack,
}

/// Matches `rule` against the front of `s`.
pub fn match_rule(rule: &RewriteRule, s: &Stack) -> Option<Match> {
    let slots = &rule.pattern().slots;
    if s.len() < slots.len() {
        return None;
    }
    let mut bindings = Bindings::new();
    for (slot, v) in slots.iter().zip(s.iter()) {
        match slot {
            Slot::Zero if v.is_zero() => {}
            Slot::Zero => return None,
            Slot::Succ(name) => {
                bindings.insert(name.clone(), v.pred()?);
            }
            Slot::Var(name) => {
                bindings.insert(name.clone(), v.clone());
            }
        }
    }
    Some(Match {
        bindings,
        tail: s.drop_front(slots.len()),
    })
}

// Reference substitution through named bindings.
#[cfg(test)]
fn instantiate(rule: &RewriteRule, m: &Match) -> Stack {
    let terms = rule.template().terms.iter().map(|t| {
        let base = match &t.base {
            super::Base::Zero => Nat::ZERO,
            super::Base::Var(v) => m.bindings[v].clone(),
        };
        &base + &t.succs
    });
    m.tail.prepend(terms.collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApplyError {
    #[error("position {position} is out of range for a stack of length {len}")]
    OutOfRange { position: usize, len: usize },
    #[error("anchored systems only rewrite at position 0, not {0}")]
    Anchored(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applied {
    /// `rule` is the 0-based index of the first matching rule.
    Rewritten {
        stack: Stack,
        rule: usize,
    },
    NoMatch,
}

// `rule` applied to the front of `s`, without building named bindings.
fn rewrite_front(rule: &RewriteRule, s: &Stack) -> Option<Stack> {
    let slots = &rule.pattern().slots;
    if s.len() < slots.len() {
        return None;
    }
    for (slot, v) in slots.iter().zip(s.iter()) {
        match slot {
            Slot::Zero if !v.is_zero() => return None,
            Slot::Succ(_) if v.is_zero() => return None,
            _ => {}
        }
    }
    let terms = rule
        .template()
        .terms
        .iter()
        .zip(rule.sources())
        .map(|(t, src)| {
            let base = match *src {
                None => Nat::ZERO,
                Some(j) => {
                    let v = s.get(j).expect("slot index is within the matched prefix");
                    match slots[j] {
                        Slot::Succ(_) => v.pred().expect("checked positive"),
                        _ => v.clone(),
                    }
                }
            };
            if t.succs.is_zero() {
                base
            } else {
                &base + &t.succs
            }
        });
    Some(s.drop_front(slots.len()).prepend(terms))
}

/// Tries the rules in order at `position` (0 = head); the first match wins.
/// Positions `0..=len` are valid.
pub fn apply_at(sys: &RewriteSystem, s: &Stack, position: usize) -> Result<Applied, ApplyError> {
    if position > s.len() {
        return Err(ApplyError::OutOfRange {
            position,
            len: s.len(),
        });
    }
    if sys.mode == Mode::Anchored && position != 0 {
        return Err(ApplyError::Anchored(position));
    }
    let suffix = s.drop_front(position);
    for (i, rule) in sys.rules.iter().enumerate() {
        if let Some(rewritten) = rewrite_front(rule, &suffix) {
            let stack = if position == 0 {
                rewritten
            } else {
                let prefix: Vec<Nat> = s.iter().take(position).cloned().collect();
                rewritten.prepend(prefix)
            };
            return Ok(Applied::Rewritten { stack, rule: i });
        }
    }
    Ok(Applied::NoMatch)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rewrite {
    pub rule: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTrace {
    pub states: Vec<Stack>,
    pub steps: Vec<Rewrite>,
}

impl RewriteTrace {
    fn start(s: Stack) -> Self {
        RewriteTrace {
            states: alloc::vec![s],
            steps: Vec::new(),
        }
    }

    pub fn final_state(&self) -> &Stack {
        self.states.last().expect("trace is non-empty")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Rewrite at the smallest permitted position where some rule matches.
    Leftmost,
    /// Rewrite at exactly these positions, in order.
    Positions(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    /// No rule matches at any permitted position.
    Normal(Stack, RewriteTrace),
    /// A position sequence ran out while rules still apply.
    Pending(Stack, RewriteTrace),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RunError {
    #[error("fuel exhausted after {} steps", .0.steps.len())]
    FuelExhausted(RewriteTrace),
    #[error("no rule matches at position {position} (step {index})")]
    NoMatchAt {
        index: usize,
        position: usize,
        trace: RewriteTrace,
    },
    #[error("step {index}: {error}")]
    Apply {
        index: usize,
        error: ApplyError,
        trace: RewriteTrace,
    },
}

fn permitted(sys: &RewriteSystem, s: &Stack) -> core::ops::Range<usize> {
    match sys.mode {
        Mode::Anchored => 0..1,
        Mode::Free => 0..s.len(),
    }
}

/// Leftmost rewrite of `s`, if any.
pub(crate) fn leftmost(sys: &RewriteSystem, s: &Stack) -> Option<(Stack, Rewrite)> {
    permitted(sys, s).find_map(|position| match apply_at(sys, s, position) {
        Ok(Applied::Rewritten { stack, rule }) => Some((stack, Rewrite { rule, position })),
        _ => None,
    })
}

fn is_normal(sys: &RewriteSystem, s: &Stack) -> bool {
    leftmost(sys, s).is_none()
}

/// Runs `sys` from `s`, one unit of fuel per rewrite.
pub fn run(
    sys: &RewriteSystem,
    s: &Stack,
    strategy: &Strategy,
    mut fuel: Fuel,
) -> Result<RunOutcome, RunError> {
    let mut trace = RewriteTrace::start(s.clone());
    match strategy {
        Strategy::Leftmost => loop {
            let Some((next, step)) = leftmost(sys, trace.final_state()) else {
                return Ok(RunOutcome::Normal(trace.final_state().clone(), trace));
            };
            if !fuel.burn() {
                return Err(RunError::FuelExhausted(trace));
            }
            trace.states.push(next);
            trace.steps.push(step);
        },
        Strategy::Positions(positions) => {
            for (index, &position) in positions.iter().enumerate() {
                if !fuel.burn() {
                    return Err(RunError::FuelExhausted(trace));
                }
                match apply_at(sys, trace.final_state(), position) {
                    Ok(Applied::Rewritten { stack, rule }) => {
                        trace.states.push(stack);
                        trace.steps.push(Rewrite { rule, position });
                    }
                    Ok(Applied::NoMatch) => {
                        return Err(RunError::NoMatchAt {
                            index,
                            position,
                            trace,
                        })
                    }
                    Err(error) => {
                        return Err(RunError::Apply {
                            index,
                            error,
                            trace,
                        })
                    }
                }
            }
            let last = trace.final_state().clone();
            if is_normal(sys, &last) {
                Ok(RunOutcome::Normal(last, trace))
            } else {
                Ok(RunOutcome::Pending(last, trace))
            }
        }
    }
}

/// Streams a leftmost derivation without keeping it.
#[derive(Debug, Clone)]
pub struct Rewriter<'a> {
    sys: &'a RewriteSystem,
    current: Stack,
}

impl<'a> Rewriter<'a> {
    pub fn new(sys: &'a RewriteSystem, start: Stack) -> Self {
        Rewriter {
            sys,
            current: start,
        }
    }

    pub fn current(&self) -> &Stack {
        &self.current
    }
}

impl Iterator for Rewriter<'_> {
    type Item = (Rewrite, Stack);

    fn next(&mut self) -> Option<(Rewrite, Stack)> {
        let (next, step) = leftmost(self.sys, &self.current)?;
        self.current = next.clone();
        Some((step, next))
    }
}
