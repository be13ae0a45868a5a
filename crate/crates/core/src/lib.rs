//! Ackermann's function, recursively and as a stack rewriting machine.
//!
//! * [`ack`]: reference evaluators (naive recursion, memo table, closed form).
//! * [`machine`]: the head-rewriting stack machine, `acklist`, traces.
//! * [`dom`]: graph saturation and domain certificates for the machine.
//! * [`trs`]: a generic rule engine with anchored and free application.
//!
//! The crate is `no_std` (with `alloc`) when the `std` feature is off.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ack;
pub mod dom;
pub mod machine;
pub mod nat;
pub mod stack;
pub mod trs;

pub use ack::{ack_closed, ack_memo, ack_naive, AckMemo};
pub use machine::{
    acklist, acklist_with, ackloop, step, trace_render, Recording, RuleId, Run, Step, Trace,
};
pub use nat::{Fuel, Nat, StepCount};
pub use stack::Stack;
