//! JSON encodings of traces, certificates, rewrite runs and witnesses.
//!
//! Every document carries `version`. Naturals are decimal strings, so
//! values beyond 64 bits survive any JSON reader; positions and counts are
//! plain numbers.

use std::str::FromStr;

use ackloop_core::dom::DomCertificate;
use ackloop_core::machine::UnknownRule;
use ackloop_core::nat::ParseNatError;
use ackloop_core::trs::{Rewrite, RewriteTrace, Witness, WitnessKind};
use ackloop_core::{Nat, RuleId, Run, Stack, Trace};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DecodeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u32 },
    #[error(transparent)]
    Number(#[from] ParseNatError),
    #[error(transparent)]
    Rule(#[from] UnknownRule),
    #[error("inconsistent document: {0}")]
    Shape(String),
}

fn check_version(found: u32) -> Result<(), DecodeError> {
    if found == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(DecodeError::Version { found })
    }
}

pub fn encode_stack(s: &Stack) -> Vec<String> {
    s.iter().map(Nat::to_string).collect()
}

pub fn decode_stack(v: &[String]) -> Result<Stack, DecodeError> {
    v.iter()
        .map(|d| Nat::from_str(d))
        .collect::<Result<Vec<_>, _>>()
        .map(Stack::from)
        .map_err(DecodeError::from)
}

fn decode_rules(v: &[String]) -> Result<Vec<RuleId>, DecodeError> {
    v.iter()
        .map(|r| r.parse::<RuleId>().map_err(DecodeError::from))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub version: u32,
    pub states: Vec<Vec<String>>,
    pub steps: Vec<String>,
    pub terminal: String,
    pub value: String,
}

impl TraceDoc {
    pub fn from_run(run: &Run, trace: &Trace) -> Self {
        TraceDoc {
            version: SCHEMA_VERSION,
            states: trace.states().iter().map(encode_stack).collect(),
            steps: trace.steps().iter().map(|r| r.name().to_owned()).collect(),
            terminal: run.terminal.name().to_owned(),
            value: run.value.to_string(),
        }
    }

    pub fn to_trace(&self) -> Result<Trace, DecodeError> {
        check_version(self.version)?;
        let states = self
            .states
            .iter()
            .map(|s| decode_stack(s))
            .collect::<Result<Vec<_>, _>>()?;
        Trace::new(states, decode_rules(&self.steps)?)
            .map_err(|e| DecodeError::Shape(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub version: u32,
    pub conclusion: Vec<String>,
    pub chain: Vec<Vec<String>>,
    pub rules: Vec<String>,
}

impl From<&DomCertificate> for CertificateDoc {
    fn from(c: &DomCertificate) -> Self {
        CertificateDoc {
            version: SCHEMA_VERSION,
            conclusion: encode_stack(&c.conclusion),
            chain: c.chain.iter().map(encode_stack).collect(),
            rules: c.rules.iter().map(|r| r.name().to_owned()).collect(),
        }
    }
}

impl TryFrom<&CertificateDoc> for DomCertificate {
    type Error = DecodeError;

    // Structural decoding only; whether the chain is a derivation is the
    // verifier's business.
    fn try_from(d: &CertificateDoc) -> Result<Self, DecodeError> {
        check_version(d.version)?;
        Ok(DomCertificate {
            conclusion: decode_stack(&d.conclusion)?,
            chain: d
                .chain
                .iter()
                .map(|s| decode_stack(s))
                .collect::<Result<_, _>>()?,
            rules: decode_rules(&d.rules)?,
        })
    }
}

pub fn certificate_from_json(text: &str) -> Result<DomCertificate, DecodeError> {
    let doc: CertificateDoc = serde_json::from_str(text)?;
    DomCertificate::try_from(&doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteDoc {
    /// 1-based, as in the rule file.
    pub rule: usize,
    pub position: usize,
}

impl From<&Rewrite> for RewriteDoc {
    fn from(r: &Rewrite) -> Self {
        RewriteDoc {
            rule: r.rule + 1,
            position: r.position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Normal,
    Pending,
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewriteRunDoc {
    pub version: u32,
    pub status: RunStatus,
    #[serde(rename = "final")]
    pub final_state: Vec<String>,
    pub states: Vec<Vec<String>>,
    pub steps: Vec<RewriteDoc>,
}

impl RewriteRunDoc {
    pub fn new(status: RunStatus, trace: &RewriteTrace) -> Self {
        RewriteRunDoc {
            version: SCHEMA_VERSION,
            status,
            final_state: encode_stack(trace.final_state()),
            states: trace.states.iter().map(encode_stack).collect(),
            steps: trace.steps.iter().map(RewriteDoc::from).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WitnessKindDoc {
    Growth { length: usize },
    Embedding { earlier: usize, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub version: u32,
    pub start: Vec<String>,
    pub positions: Vec<usize>,
    pub kind: WitnessKindDoc,
}

impl From<&Witness> for WitnessDoc {
    fn from(w: &Witness) -> Self {
        WitnessDoc {
            version: SCHEMA_VERSION,
            start: encode_stack(&w.start),
            positions: w.positions.clone(),
            kind: match w.kind {
                WitnessKind::Growth { length } => WitnessKindDoc::Growth { length },
                WitnessKind::Embedding { earlier, offset } => {
                    WitnessKindDoc::Embedding { earlier, offset }
                }
            },
        }
    }
}

impl TryFrom<&WitnessDoc> for Witness {
    type Error = DecodeError;

    fn try_from(d: &WitnessDoc) -> Result<Self, DecodeError> {
        check_version(d.version)?;
        Ok(Witness {
            start: decode_stack(&d.start)?,
            positions: d.positions.clone(),
            kind: match d.kind {
                WitnessKindDoc::Growth { length } => WitnessKind::Growth { length },
                WitnessKindDoc::Embedding { earlier, offset } => {
                    WitnessKind::Embedding { earlier, offset }
                }
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ackloop_core::dom::certificate_build;
    use ackloop_core::{ackloop, Fuel, Recording};

    fn a23() -> (Run, Trace) {
        let mut run = ackloop(&Stack::from([3, 2]), Fuel(1000), Recording::Full).unwrap();
        let t = run.trace.take().unwrap();
        (run, t)
    }

    #[test]
    fn trace_round_trip() {
        let (run, t) = a23();
        let doc = TraceDoc::from_run(&run, &t);
        assert_eq!(doc.states[0], ["3", "2"]);
        assert_eq!(doc.steps[0], "R3");
        assert_eq!(doc.value, "9");
        let back: TraceDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back.to_trace().unwrap(), t);
    }

    #[test]
    fn certificate_round_trip() {
        let (_, t) = a23();
        let c = certificate_build(&t).unwrap();
        let json = serde_json::to_string(&CertificateDoc::from(&c)).unwrap();
        assert_eq!(certificate_from_json(&json).unwrap(), c);
    }

    #[test]
    fn big_values_stay_exact() {
        let s: Stack = "340282366920938463463374607431768211457 0".parse().unwrap();
        assert_eq!(decode_stack(&encode_stack(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_bad_documents() {
        let ok = r#"{"version":1,"conclusion":["0"],"chain":[["0"]],"rules":[]}"#;
        assert!(certificate_from_json(ok).is_ok());
        for bad in [
            r#"{"version":2,"conclusion":["0"],"chain":[["0"]],"rules":[]}"#,
            r#"{"version":1,"conclusion":["-1"],"chain":[],"rules":[]}"#,
            r#"{"version":1,"conclusion":[],"chain":[],"rules":["R9"]}"#,
            r#"{"version":1,"conclusion":[],"chain":[]}"#,
            r#"{"version":1,"conclusion":[],"chain":[],"rules":[],"extra":0}"#,
            "not json",
        ] {
            assert!(certificate_from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn witness_round_trip() {
        let w = Witness {
            start: Stack::from([0, 1]),
            positions: vec![1, 0],
            kind: WitnessKind::Embedding {
                earlier: 0,
                offset: 1,
            },
        };
        let json = serde_json::to_string(&WitnessDoc::from(&w)).unwrap();
        assert!(json.contains(r#""type":"embedding""#));
        let doc: WitnessDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(Witness::try_from(&doc).unwrap(), w);
    }
}
