//! Graph and domain relations as executable inductive definitions.
//!
//! [`saturate`] computes bounded least fixed points: the graph of `A` and
//! the (empty) graph and domain of `U(x) = U(x) + 1`. [`cert`] covers the
//! domain of the stack machine through checkable certificates.

pub mod cert;
pub mod saturate;

pub use cert::{
    certificate_build, certificate_verify, dom_check, DomCertificate, DomVerdict, IncompleteTrace,
    InvalidReason, Verdict,
};
pub use saturate::{
    domain_saturate_u, graph_saturate_ack, graph_saturate_u, saturate, AckBounds, EntryCapExceeded,
    GraphRelation, Saturation, GRAPH_DEFAULT_CAP,
};
