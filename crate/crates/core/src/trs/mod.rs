//! A small rewriting engine over stacks of naturals.
//!
//! Rules are head patterns over a stack prefix with a tail variable, e.g.
//!
//! ```text
//! x 0 | L     -> S(x) | L
//! 0 S m | L   -> 1 m | L
//! S x S m | L -> x S(m) m | L
//! ```
//!
//! In [`Mode::Anchored`] rules fire only at position 0, which is exactly
//! the stack machine. [`Mode::Free`] lets them fire at any offset.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::nat::Nat;

mod engine;
mod parse;
mod search;

pub use engine::{
    apply_at, match_rule, run, Applied, ApplyError, Bindings, Match, Rewrite, RewriteTrace,
    Rewriter, RunError, RunOutcome, Strategy,
};
pub use parse::{parse_rules, ParseError, ParseErrorKind};
pub use search::{divergence_search, replay, ReplayError, SearchOutcome, Witness, WitnessKind};

/// The three Ackermann rules in the rule-file syntax.
pub const ACKERMANN_RULES: &str = "\
x 0 | L -> S(x) | L
0 S m | L -> 1 m | L
S x S m | L -> x S(m) m | L
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Zero,
    /// Matches a positive value, binding its predecessor.
    Succ(String),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub slots: Vec<Slot>,
    pub tail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Zero,
    Var(String),
}

/// `S^succs(base)`. Every term of the grammar normalises to this shape,
/// and decimal literals are `S^k(0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub base: Base,
    pub succs: Nat,
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term {
            base: Base::Var(name.into()),
            succs: Nat::ZERO,
        }
    }

    pub fn literal(v: Nat) -> Self {
        Term {
            base: Base::Zero,
            succs: v,
        }
    }

    pub fn succ(mut self) -> Self {
        self.succs.incr();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub terms: Vec<Term>,
    pub tail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("pattern has no slots")]
    EmptyPattern,
    #[error("variable {0:?} bound twice")]
    DuplicateVariable(String),
    #[error("variable {0:?} is not bound by the pattern")]
    UnboundVariable(String),
    #[error("tail {found:?} does not match pattern tail {expected:?}")]
    TailMismatch { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pattern: Pattern,
    template: Template,
    // For each template term, the pattern slot its variable comes from.
    sources: Vec<Option<usize>>,
}

impl RewriteRule {
    /// Checks linearity of the pattern and that the template only uses
    /// variables the pattern binds.
    pub fn new(pattern: Pattern, template: Template) -> Result<Self, RuleError> {
        if pattern.slots.is_empty() {
            return Err(RuleError::EmptyPattern);
        }
        let mut bound = BTreeSet::new();
        bound.insert(pattern.tail.as_str());
        for slot in &pattern.slots {
            if let Slot::Succ(v) | Slot::Var(v) = slot {
                if !bound.insert(v.as_str()) {
                    return Err(RuleError::DuplicateVariable(v.clone()));
                }
            }
        }
        for term in &template.terms {
            if let Base::Var(v) = &term.base {
                if !bound.contains(v.as_str()) || *v == pattern.tail {
                    return Err(RuleError::UnboundVariable(v.clone()));
                }
            }
        }
        if template.tail != pattern.tail {
            return Err(RuleError::TailMismatch {
                expected: pattern.tail.clone(),
                found: template.tail.clone(),
            });
        }
        let slot_of = |v: &str| {
            pattern
                .slots
                .iter()
                .position(|s| matches!(s, Slot::Succ(w) | Slot::Var(w) if w == v))
        };
        let sources = template
            .terms
            .iter()
            .map(|t| match &t.base {
                Base::Zero => None,
                Base::Var(v) => slot_of(v),
            })
            .collect();
        Ok(RewriteRule {
            pattern,
            template,
            sources,
        })
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    pub(crate) fn sources(&self) -> &[Option<usize>] {
        &self.sources
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Rules fire only at the front of the stack.
    Anchored,
    /// Rules fire at any position.
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    pub rules: Vec<RewriteRule>,
    pub mode: Mode,
}

impl RewriteSystem {
    pub fn new(rules: Vec<RewriteRule>, mode: Mode) -> Self {
        RewriteSystem { rules, mode }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// The parsed Ackermann rules, anchored.
    pub fn ackermann() -> Self {
        parse_rules(ACKERMANN_RULES).expect("built-in rules parse")
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Zero => f.write_str("0"),
            Slot::Succ(v) => write!(f, "S {v}"),
            Slot::Var(v) => f.write_str(v),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            Base::Zero => write!(f, "{}", self.succs),
            Base::Var(v) => {
                // Nested successors on a variable stay small in practice.
                let k = self.succs.to_u64().expect("successor depth fits in u64");
                for _ in 0..k {
                    f.write_str("S(")?;
                }
                f.write_str(v)?;
                for _ in 0..k {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

fn write_spaced<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for item in items {
        write!(f, "{item} ")?;
    }
    Ok(())
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spaced(f, &self.pattern.slots)?;
        write!(f, "| {} -> ", self.pattern.tail)?;
        write_spaced(f, &self.template.terms)?;
        write!(f, "| {}", self.template.tail)
    }
}

impl fmt::Display for RewriteSystem {
    /// One rule per line, in the rule-file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}
