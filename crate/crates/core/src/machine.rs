//! Iterative Ackermann evaluation by head rewriting on a [`Stack`].
//!
//! ```text
//! R1:   n  # 0     # L  -->  n+1 # L
//! R2:   0  # m+1   # L  -->  1   # m   # L
//! R3:  n+1 # m+1   # L  -->  n   # m+1 # m # L
//! ```
//!
//! Rules only fire at the front of the list. A stack with fewer than two
//! elements is terminal: `[m]` evaluates to `m` and `[]` to `0`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::ack::{AckMemo, ResourceLimit};
use crate::nat::{Fuel, Nat, StepCount};
use crate::stack::Stack;

/// Which rule produced a step, or which kind of terminal state was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    TSingleton,
    TEmpty,
}

impl RuleId {
    pub const ALL: [RuleId; 5] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::TSingleton,
        RuleId::TEmpty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::R1 => "R1",
            RuleId::R2 => "R2",
            RuleId::R3 => "R3",
            RuleId::TSingleton => "T_SINGLETON",
            RuleId::TEmpty => "T_EMPTY",
        }
    }

    pub fn is_terminal(self) -> bool {
        matches!(self, RuleId::TSingleton | RuleId::TEmpty)
    }

    /// The rewrite rule at 0-based position `index`, if any.
    pub fn rewrite(index: usize) -> Option<RuleId> {
        [RuleId::R1, RuleId::R2, RuleId::R3].get(index).copied()
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule name {0:?}")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Next(Stack, RuleId),
    Terminal(RuleId),
}

/// One head rewrite. Total: stacks shorter than two are terminal.
pub fn step(s: &Stack) -> Step {
    let Some((head, rest)) = s.split_first() else {
        return Step::Terminal(RuleId::TEmpty);
    };
    let Some((second, below)) = rest.split_first() else {
        return Step::Terminal(RuleId::TSingleton);
    };
    match (head.pred(), second.pred()) {
        (_, None) => Step::Next(below.cons(head.succ()), RuleId::R1),
        (None, Some(k)) => Step::Next(below.cons(k).cons(Nat::ONE), RuleId::R2),
        (Some(j), Some(k)) => Step::Next(below.cons(k).cons(second.clone()).cons(j), RuleId::R3),
    }
}

/// Iterator over the rewrites of an evaluation, yielding `(rule, successor)`.
#[derive(Debug, Clone)]
pub struct Steps {
    current: Stack,
    terminal: Option<RuleId>,
}

impl Steps {
    pub fn new(start: Stack) -> Self {
        Steps {
            current: start,
            terminal: None,
        }
    }

    pub fn current(&self) -> &Stack {
        &self.current
    }

    /// Set once the iterator has returned `None`.
    pub fn terminal(&self) -> Option<RuleId> {
        self.terminal
    }
}

impl Iterator for Steps {
    type Item = (RuleId, Stack);

    fn next(&mut self) -> Option<(RuleId, Stack)> {
        if self.terminal.is_some() {
            return None;
        }
        match step(&self.current) {
            Step::Next(s, r) => {
                self.current = s.clone();
                Some((r, s))
            }
            Step::Terminal(r) => {
                self.terminal = Some(r);
                None
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("a trace needs at least one state")]
    Empty,
    #[error("{states} states but {steps} steps")]
    Misaligned { states: usize, steps: usize },
}

/// The sequence of stacks visited by an evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    states: Vec<Stack>,
    steps: Vec<RuleId>,
}

impl Trace {
    /// Assembles a trace, checking only the shape. Whether each step is a
    /// genuine rewrite is for `dom::certificate_verify` to decide.
    pub fn new(states: Vec<Stack>, steps: Vec<RuleId>) -> Result<Self, TraceError> {
        if states.is_empty() {
            return Err(TraceError::Empty);
        }
        if steps.len() + 1 != states.len() {
            return Err(TraceError::Misaligned {
                states: states.len(),
                steps: steps.len(),
            });
        }
        Ok(Trace { states, steps })
    }

    fn start(initial: Stack) -> Self {
        Trace {
            states: alloc::vec![initial],
            steps: Vec::new(),
        }
    }

    fn push(&mut self, rule: RuleId, next: Stack) {
        self.steps.push(rule);
        self.states.push(next);
    }

    pub fn states(&self) -> &[Stack] {
        &self.states
    }

    pub fn steps(&self) -> &[RuleId] {
        &self.steps
    }

    pub fn initial(&self) -> &Stack {
        &self.states[0]
    }

    pub fn final_state(&self) -> &Stack {
        self.states.last().expect("trace is non-empty")
    }

    /// True when the final state admits no further rewrite.
    pub fn is_complete(&self) -> bool {
        self.final_state().len() <= 1
    }

    pub fn into_parts(self) -> (Vec<Stack>, Vec<RuleId>) {
        (self.states, self.steps)
    }
}

/// Whether [`ackloop`] keeps every intermediate stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recording {
    Full,
    CountOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub value: Nat,
    pub steps: StepCount,
    pub terminal: RuleId,
    /// Present iff the run was recorded.
    pub trace: Option<Trace>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("fuel exhausted after {steps} steps")]
pub struct LoopExhausted {
    pub steps: StepCount,
    /// The state in which fuel ran out.
    pub last: Stack,
    /// The partial trace, if the run was recorded.
    pub trace: Option<Trace>,
}

/// Runs the stack machine to a terminal state, one unit of fuel per rewrite.
pub fn ackloop(s: &Stack, fuel: Fuel, recording: Recording) -> Result<Run, LoopExhausted> {
    match recording {
        Recording::Full => ackloop_recorded(s, fuel),
        Recording::CountOnly => ackloop_counted(s, fuel),
    }
}

fn terminal_value(s: &Stack) -> (Nat, RuleId) {
    match s.head() {
        Some(v) => (v.clone(), RuleId::TSingleton),
        None => (Nat::ZERO, RuleId::TEmpty),
    }
}

fn ackloop_recorded(s: &Stack, mut fuel: Fuel) -> Result<Run, LoopExhausted> {
    let mut trace = Trace::start(s.clone());
    let mut count = StepCount::default();
    loop {
        let current = trace.final_state();
        if current.len() < 2 {
            let (value, terminal) = terminal_value(current);
            return Ok(Run {
                value,
                steps: count,
                terminal,
                trace: Some(trace),
            });
        }
        if !fuel.burn() {
            return Err(LoopExhausted {
                steps: count,
                last: current.clone(),
                trace: Some(trace),
            });
        }
        match step(current) {
            Step::Next(next, rule) => {
                trace.push(rule, next);
                count.tick();
            }
            Step::Terminal(_) => unreachable!("stacks of length >= 2 always rewrite"),
        }
    }
}

// Same rules on a mutable vector (top of stack at the end), for long runs
// where no trace is kept.
fn ackloop_counted(s: &Stack, mut fuel: Fuel) -> Result<Run, LoopExhausted> {
    let mut v: Vec<Nat> = s.to_vec();
    v.reverse();
    let mut count = StepCount::default();
    if let Some(mut w) = v.iter().map(Nat::to_u64).collect::<Option<Vec<u64>>>() {
        let finished = counted_words(&mut w, &mut fuel, &mut count);
        v = w.into_iter().map(Nat::from_u64).collect();
        if finished && v.len() >= 2 {
            v.reverse();
            return Err(LoopExhausted {
                steps: count,
                last: Stack::from(v),
                trace: None,
            });
        }
    }
    while v.len() >= 2 {
        if !fuel.burn() {
            v.reverse();
            return Err(LoopExhausted {
                steps: count,
                last: Stack::from(v),
                trace: None,
            });
        }
        count.tick();
        let len = v.len();
        if v[len - 2].is_zero() {
            let mut head = v.pop().expect("len >= 2");
            head.incr();
            v[len - 2] = head;
        } else if v[len - 1].is_zero() {
            v[len - 1] = Nat::ONE;
            v[len - 2].decr();
        } else {
            let mut head = v.pop().expect("len >= 2");
            head.decr();
            let second = v[len - 2].clone();
            v[len - 2].decr();
            v.push(second);
            v.push(head);
        }
    }
    v.reverse();
    let (value, terminal) = terminal_value(&Stack::from(v));
    Ok(Run {
        value,
        steps: count,
        terminal,
        trace: None,
    })
}

// Word-sized fast path of `ackloop_counted`. Returns true when the run
// stopped for good (terminal or out of fuel), false when the next R1 would
// overflow; in both cases `w` holds the current state.
fn counted_words(w: &mut Vec<u64>, fuel: &mut Fuel, count: &mut StepCount) -> bool {
    while w.len() >= 2 {
        let len = w.len();
        let (second, head) = (w[len - 2], w[len - 1]);
        if second == 0 && head == u64::MAX {
            return false;
        }
        if !fuel.burn() {
            return true;
        }
        count.tick();
        if second == 0 {
            w.pop();
            w[len - 2] = head + 1;
        } else if head == 0 {
            w[len - 2] = second - 1;
            w[len - 1] = 1;
        } else {
            w[len - 2] = second - 1;
            w[len - 1] = second;
            w.push(head - 1);
        }
    }
    true
}

/// Collapses the top two elements `n # m # L` to `A(m, n) # L` until at most
/// one remains.
pub fn acklist(s: &Stack) -> Result<Nat, ResourceLimit> {
    acklist_with(s, &mut AckMemo::default())
}

pub fn acklist_with(s: &Stack, memo: &mut AckMemo) -> Result<Nat, ResourceLimit> {
    let mut s = s.clone();
    loop {
        let Some((n, rest)) = s.split_first() else {
            return Ok(Nat::ZERO);
        };
        let Some((m, below)) = rest.split_first() else {
            return Ok(n.clone());
        };
        let a = memo.eval(m, n)?;
        s = below.cons(a);
    }
}

/// One line per state, head first, single spaces, every line newline-terminated.
pub fn trace_render(t: &Trace) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for s in t.states() {
        writeln!(out, "{s}").expect("writing to a String cannot fail");
    }
    out
}
