//! Termination certificates for the stack machine.
//!
//! The domain of `ackloop` is the least set closed under
//!
//! ```text
//! dom (n+1 # L)           ==> dom (n # 0 # L)
//! dom (1 # m # L)         ==> dom (0 # m+1 # L)
//! dom (n # m+1 # m # L)   ==> dom (n+1 # m+1 # L)
//! dom [m]
//! dom []
//! ```
//!
//! A certificate is a forward chain of stacks ending in one of the two
//! axioms. Read from the end, link `i` instantiates the conditional
//! introduction rule matching `rules[i]`, so the chain is a derivation of
//! `dom conclusion`.
//!
//! The checker below deliberately does not call [`crate::machine::step`]:
//! it re-derives each rule instance arithmetically from both endpoints.

use alloc::vec::Vec;

use crate::machine::{ackloop, Recording, RuleId, Trace};
use crate::nat::{Fuel, Nat, StepCount};
use crate::stack::Stack;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomCertificate {
    pub conclusion: Stack,
    pub chain: Vec<Stack>,
    pub rules: Vec<RuleId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("trace ends in a stack of length {final_len}; only complete traces certify")]
pub struct IncompleteTrace {
    pub final_len: usize,
}

pub fn certificate_build(t: &Trace) -> Result<DomCertificate, IncompleteTrace> {
    if !t.is_complete() {
        return Err(IncompleteTrace {
            final_len: t.final_state().len(),
        });
    }
    Ok(DomCertificate {
        conclusion: t.initial().clone(),
        chain: t.states().to_vec(),
        rules: t.steps().to_vec(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum InvalidReason {
    #[error("empty chain")]
    EmptyChain,
    #[error("chain does not start at the conclusion")]
    ConclusionMismatch,
    #[error("rule list does not align with the chain")]
    Misaligned,
    #[error("{0} is not a rewrite rule")]
    NotARewrite(RuleId),
    #[error("not an instance of {0}")]
    NotAnInstance(RuleId),
    #[error("no axiom case")]
    NoAxiomCase,
}

/// `Invalid.position` is the index of the first chain entry that is not
/// justified: the conclusion itself (0), the later state of a broken link,
/// or the last state when it is not an axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid {
        position: usize,
        reason: InvalidReason,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

pub fn certificate_verify(c: &DomCertificate) -> Verdict {
    let invalid = |position, reason| Verdict::Invalid { position, reason };
    let Some(first) = c.chain.first() else {
        return invalid(0, InvalidReason::EmptyChain);
    };
    if *first != c.conclusion {
        return invalid(0, InvalidReason::ConclusionMismatch);
    }
    let links = c.chain.len() - 1;
    for (i, (pair, &rule)) in c.chain.windows(2).zip(&c.rules).enumerate() {
        if rule.is_terminal() {
            return invalid(i + 1, InvalidReason::NotARewrite(rule));
        }
        if !is_instance(rule, &pair[0], &pair[1]) {
            return invalid(i + 1, InvalidReason::NotAnInstance(rule));
        }
    }
    if c.rules.len() != links {
        return invalid(
            (links.min(c.rules.len()) + 1).min(links),
            InvalidReason::Misaligned,
        );
    }
    if c.chain[links].len() > 1 {
        return invalid(links, InvalidReason::NoAxiomCase);
    }
    Verdict::Valid
}

// Checks `before --rule--> after` from both sides, using only addition.
fn is_instance(rule: RuleId, before: &Stack, after: &Stack) -> bool {
    let b: Vec<&Nat> = before.iter().take(2).collect();
    let a: Vec<&Nat> = after.iter().take(3).collect();
    if b.len() < 2 {
        return false;
    }
    let (x, y) = (b[0], b[1]);
    let one = Nat::ONE;
    match rule {
        // x # 0 # L  ->  x+1 # L
        RuleId::R1 => {
            !a.is_empty()
                && y.is_zero()
                && *a[0] == x + &one
                && after.drop_front(1) == before.drop_front(2)
        }
        // 0 # y # L  ->  1 # y-1 # L, y > 0
        RuleId::R2 => {
            a.len() >= 2
                && x.is_zero()
                && !y.is_zero()
                && *a[0] == one
                && &(a[1] + &one) == y
                && after.drop_front(2) == before.drop_front(2)
        }
        // x # y # L  ->  x-1 # y # y-1 # L, x > 0, y > 0
        RuleId::R3 => {
            a.len() >= 3
                && !x.is_zero()
                && !y.is_zero()
                && &(a[0] + &one) == x
                && a[1] == y
                && &(a[2] + &one) == y
                && after.drop_front(3) == before.drop_front(2)
        }
        RuleId::TSingleton | RuleId::TEmpty => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomVerdict {
    pub member: bool,
    pub evidence: Option<DomCertificate>,
    pub fuel_used: StepCount,
}

/// Decides membership in the domain by running the machine within `fuel`.
/// A negative verdict only means the budget was too small.
pub fn dom_check(s: &Stack, fuel: Fuel) -> DomVerdict {
    match ackloop(s, fuel, Recording::Full) {
        Ok(run) => {
            let trace = run.trace.expect("recorded run carries a trace");
            DomVerdict {
                member: true,
                evidence: Some(certificate_build(&trace).expect("finished runs are complete")),
                fuel_used: run.steps,
            }
        }
        Err(e) => DomVerdict {
            member: false,
            evidence: None,
            fuel_used: e.steps,
        },
    }
}
