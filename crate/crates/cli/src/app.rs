use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use ackloop_core::ack::{ClosedFormError, NaiveError};
use ackloop_core::dom::{
    certificate_build, certificate_verify, domain_saturate_u, graph_saturate_ack, graph_saturate_u,
    AckBounds, Verdict, GRAPH_DEFAULT_CAP,
};
use ackloop_core::trs::{
    divergence_search, parse_rules, run, Mode, RunError, RunOutcome, SearchOutcome, Strategy,
    WitnessKind,
};
use ackloop_core::{
    ack_closed, ack_naive, acklist, ackloop, trace_render, AckMemo, Fuel, Nat, Recording, Stack,
};
use clap::{Parser, Subcommand, ValueEnum};

use crate::encode::{self, CertificateDoc, RewriteRunDoc, RunStatus, TraceDoc, WitnessDoc};

pub const DEFAULT_FUEL: u64 = 1_000_000;
pub const EQUIV_DEFAULT_FUEL: u64 = 10_000_000;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Exit {
    Ok = 0,
    /// A check ran and failed: invalid certificate, failing grid cell.
    Failed = 1,
    /// Bad arguments or malformed input.
    Usage = 2,
    FuelExhausted = 3,
    ResourceCap = 4,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    fn new(exit: Exit, message: impl Into<String>) -> Self {
        Failure {
            exit,
            message: message.into(),
        }
    }

    fn fuel(consumed: u64, fuel: u64) -> Self {
        Failure::new(
            Exit::FuelExhausted,
            format!("fuel exhausted: consumed {consumed} of {fuel}"),
        )
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(Exit::Failed, format!("i/o error: {e}"))
    }
}

type Outcome = Result<Exit, Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "ackloop",
    version,
    about = "Ackermann evaluation by stack rewriting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Naive,
    Memo,
    Closed,
    Loop,
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Anchored,
    Free,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute A(m, n).
    Compute {
        m: Nat,
        n: Nat,
        #[arg(long, value_enum, default_value = "loop")]
        method: Method,
        /// Call budget (naive) or step budget (loop).
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Also print the call or step count.
        #[arg(short, long)]
        verbose: bool,
        /// Print nothing but the value.
        #[arg(short, long, conflicts_with = "verbose")]
        quiet: bool,
    },
    /// Print the stack machine trace from [n, m].
    Trace {
        m: Nat,
        n: Nat,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Emit a termination certificate for [n, m], or verify one.
    Cert {
        #[arg(required_unless_present = "verify")]
        m: Option<Nat>,
        #[arg(required_unless_present = "verify")]
        n: Option<Nat>,
        /// Certificate file to verify instead.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["m", "n"])]
        verify: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
    },
    /// Check every evaluator against every other on 0..=max_m x 0..=max_n.
    Equiv {
        max_m: u64,
        max_n: u64,
        #[arg(long, default_value_t = EQUIV_DEFAULT_FUEL)]
        fuel: u64,
        #[arg(short, long)]
        quiet: bool,
    },
    /// Saturate the graph of A within bounds.
    Graph {
        max_m: u64,
        max_n: u64,
        max_val: u64,
        #[arg(long, default_value_t = GRAPH_DEFAULT_CAP)]
        cap: usize,
        /// Print only the summary lines.
        #[arg(short, long)]
        quiet: bool,
    },
    /// Saturate the graph and domain of U(x) = U(x) + 1.
    DomU {
        /// Round budget.
        #[arg(long, default_value_t = 1000)]
        fuel: u64,
    },
    /// Run a rule file on a stack, or search it for divergence.
    Rewrite {
        rules: PathBuf,
        /// Start stack, whitespace-separated, head first.
        stack: Option<String>,
        #[arg(long, value_enum, default_value = "anchored")]
        mode: ModeArg,
        /// Comma-separated rewrite positions; leftmost-first when absent.
        #[arg(long, value_delimiter = ',', conflicts_with = "search")]
        positions: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Search for a divergence witness instead of running.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 50)]
        threshold: usize,
        /// Without a stack, --search starts from every stack of at most
        /// this length...
        #[arg(long, default_value_t = 3)]
        start_len: usize,
        /// ...with elements at most this value.
        #[arg(long, default_value_t = 2)]
        start_max: u64,
    },
}

/// Runs `cli`, writing results to `out`. Error messages are left to the
/// caller.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Compute {
            m,
            n,
            method,
            fuel,
            verbose,
            quiet,
        } => compute(out, &m, &n, method, fuel, verbose && !quiet),
        Command::Trace { m, n, format, fuel } => trace(out, &m, &n, format, fuel),
        Command::Cert {
            verify: Some(path), ..
        } => cert_verify(out, &path),
        Command::Cert {
            m: Some(m),
            n: Some(n),
            fuel,
            ..
        } => cert_emit(out, &m, &n, fuel),
        Command::Cert { .. } => Err(Failure::new(Exit::Usage, "cert needs M and N, or --verify")),
        Command::Equiv {
            max_m,
            max_n,
            fuel,
            quiet,
        } => equiv(out, max_m, max_n, fuel, quiet),
        Command::Graph {
            max_m,
            max_n,
            max_val,
            cap,
            quiet,
        } => graph(out, max_m, max_n, max_val, cap, quiet),
        Command::DomU { fuel } => dom_u(out, fuel),
        Command::Rewrite {
            rules,
            stack,
            mode,
            positions,
            fuel,
            format,
            search,
            threshold,
            start_len,
            start_max,
        } => {
            let text = fs::read_to_string(&rules)
                .map_err(|e| Failure::new(Exit::Usage, format!("{}: {e}", rules.display())))?;
            let sys = parse_rules(&text)
                .map_err(|e| Failure::new(Exit::Usage, format!("{}: {e}", rules.display())))?
                .with_mode(match mode {
                    ModeArg::Anchored => Mode::Anchored,
                    ModeArg::Free => Mode::Free,
                });
            let start = stack
                .map(|s| {
                    s.parse::<Stack>()
                        .map_err(|e| Failure::new(Exit::Usage, e.to_string()))
                })
                .transpose()?;
            if search {
                let starts = match start {
                    Some(s) => vec![s],
                    None => Stack::all_up_to(start_len, start_max),
                };
                rewrite_search(out, &sys, &starts, fuel, threshold, format)
            } else {
                let start = start.ok_or_else(|| {
                    Failure::new(
                        Exit::Usage,
                        "a start stack is required unless --search is given",
                    )
                })?;
                let strategy = match positions {
                    Some(p) => Strategy::Positions(p),
                    None => Strategy::Leftmost,
                };
                rewrite_run(out, &sys, &start, &strategy, fuel, format)
            }
        }
    }
}

fn compute(
    out: &mut dyn Write,
    m: &Nat,
    n: &Nat,
    method: Method,
    fuel: u64,
    verbose: bool,
) -> Outcome {
    let (value, note) = match method {
        Method::Naive => match ack_naive(m, n, Fuel(fuel)) {
            Ok(c) => (c.value, Some(format!("calls {}", c.calls))),
            Err(NaiveError::FuelExhausted(used)) => return Err(Failure::fuel(used.get(), fuel)),
            Err(e @ NaiveError::DepthExceeded(_)) => {
                return Err(Failure::new(Exit::ResourceCap, e.to_string()))
            }
        },
        Method::Memo => {
            let mut memo = AckMemo::default();
            let v = memo
                .eval(m, n)
                .map_err(|e| Failure::new(Exit::ResourceCap, e.to_string()))?;
            (v, Some(format!("entries {}", memo.len())))
        }
        Method::Closed => match ack_closed(m, n) {
            Ok(v) => (v, None),
            Err(e @ ClosedFormError::OutOfRange(_)) => {
                return Err(Failure::new(Exit::Usage, e.to_string()))
            }
            Err(e @ ClosedFormError::TooLarge(_)) => {
                return Err(Failure::new(Exit::ResourceCap, e.to_string()))
            }
        },
        Method::Loop => {
            let start = Stack::new().cons(m.clone()).cons(n.clone());
            match ackloop(&start, Fuel(fuel), Recording::CountOnly) {
                Ok(r) => (r.value, Some(format!("steps {}", r.steps))),
                Err(e) => return Err(Failure::fuel(e.steps.get(), fuel)),
            }
        }
        Method::List => {
            let start = Stack::new().cons(m.clone()).cons(n.clone());
            let v = acklist(&start).map_err(|e| Failure::new(Exit::ResourceCap, e.to_string()))?;
            (v, None)
        }
    };
    writeln!(out, "{value}")?;
    if let (true, Some(note)) = (verbose, note) {
        writeln!(out, "{note}")?;
    }
    Ok(Exit::Ok)
}

fn recorded(m: &Nat, n: &Nat, fuel: u64) -> Result<ackloop_core::Run, Failure> {
    let start = Stack::new().cons(m.clone()).cons(n.clone());
    ackloop(&start, Fuel(fuel), Recording::Full).map_err(|e| Failure::fuel(e.steps.get(), fuel))
}

fn trace(out: &mut dyn Write, m: &Nat, n: &Nat, format: Format, fuel: u64) -> Outcome {
    let mut run = recorded(m, n, fuel)?;
    let t = run.trace.take().expect("recorded run carries a trace");
    match format {
        Format::Text => out.write_all(trace_render(&t).as_bytes())?,
        Format::Json => {
            serde_json::to_writer(&mut *out, &TraceDoc::from_run(&run, &t))
                .map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(Exit::Ok)
}

fn cert_emit(out: &mut dyn Write, m: &Nat, n: &Nat, fuel: u64) -> Outcome {
    let run = recorded(m, n, fuel)?;
    let t = run.trace.expect("recorded run carries a trace");
    let c = certificate_build(&t).expect("finished runs are complete");
    serde_json::to_writer_pretty(&mut *out, &CertificateDoc::from(&c)).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(Exit::Ok)
}

fn cert_verify(out: &mut dyn Write, path: &PathBuf) -> Outcome {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(Exit::Usage, format!("{}: {e}", path.display())))?;
    let c = encode::certificate_from_json(&text)
        .map_err(|e| Failure::new(Exit::Usage, format!("{}: {e}", path.display())))?;
    match certificate_verify(&c) {
        Verdict::Valid => {
            writeln!(out, "Valid")?;
            Ok(Exit::Ok)
        }
        Verdict::Invalid { position, reason } => {
            writeln!(out, "Invalid at position {position}: {reason}")?;
            Ok(Exit::Failed)
        }
    }
}

// One grid cell: every applicable evaluator must produce the same value.
fn equiv_cell(m: u64, n: u64, fuel: u64, memo: &mut AckMemo) -> Result<Nat, String> {
    let (mm, nn) = (Nat::from(m), Nat::from(n));
    let memo_v = memo.eval(&mm, &nn).map_err(|e| format!("memo: {e}"))?;
    let naive = ack_naive(&mm, &nn, Fuel(fuel))
        .map_err(|e| format!("naive: {e}"))?
        .value;
    let start = Stack::from([n, m]);
    let looped = ackloop(&start, Fuel(fuel), Recording::CountOnly)
        .map_err(|e| format!("loop: {e}"))?
        .value;
    let listed = acklist(&start).map_err(|e| format!("list: {e}"))?;
    let closed = match ack_closed(&mm, &nn) {
        Ok(v) => Some(v),
        Err(ClosedFormError::OutOfRange(_)) => None,
        Err(e) => return Err(format!("closed: {e}")),
    };
    let mut disagree = Vec::new();
    for (name, v) in [
        ("naive", Some(&naive)),
        ("loop", Some(&looped)),
        ("list", Some(&listed)),
        ("closed", closed.as_ref()),
    ] {
        if let Some(v) = v {
            if *v != memo_v {
                disagree.push(format!("{name}={v}"));
            }
        }
    }
    if disagree.is_empty() {
        Ok(memo_v)
    } else {
        Err(format!("memo={memo_v} but {}", disagree.join(" ")))
    }
}

fn equiv(out: &mut dyn Write, max_m: u64, max_n: u64, fuel: u64, quiet: bool) -> Outcome {
    let mut memo = AckMemo::default();
    let (mut cells, mut passed) = (0u64, 0u64);
    for m in 0..=max_m {
        for n in 0..=max_n {
            cells += 1;
            match equiv_cell(m, n, fuel, &mut memo) {
                Ok(v) => {
                    passed += 1;
                    if !quiet {
                        writeln!(out, "{m} {n} {v} PASS")?;
                    }
                }
                Err(why) => writeln!(out, "{m} {n} FAIL {why}")?,
            }
        }
    }
    writeln!(out, "{passed}/{cells} cells pass")?;
    Ok(if passed == cells {
        Exit::Ok
    } else {
        Exit::Failed
    })
}

fn graph(
    out: &mut dyn Write,
    max_m: u64,
    max_n: u64,
    max_val: u64,
    cap: usize,
    quiet: bool,
) -> Outcome {
    let bounds = AckBounds {
        max_m,
        max_n,
        max_val,
    };
    let g = graph_saturate_ack(bounds, cap)
        .map_err(|e| Failure::new(Exit::ResourceCap, e.to_string()))?;
    writeln!(out, "entries {}", g.len())?;
    let functional = g.is_functional();
    writeln!(out, "functional {}", if functional { "yes" } else { "no" })?;
    if !quiet {
        for ((m, n), r) in g.iter() {
            writeln!(out, "{m} {n} {r}")?;
        }
    }
    Ok(if functional { Exit::Ok } else { Exit::Failed })
}

fn dom_u(out: &mut dyn Write, fuel: u64) -> Outcome {
    let g = graph_saturate_u(Fuel(fuel));
    let d = domain_saturate_u(Fuel(fuel));
    let show = |empty: bool| if empty { "empty" } else { "non-empty" };
    writeln!(out, "G_U {} ({} entries)", show(g.is_empty()), g.len())?;
    writeln!(
        out,
        "D_U {} ({} entries)",
        show(d.set.is_empty()),
        d.set.len()
    )?;
    Ok(Exit::Ok)
}

fn rewrite_run(
    out: &mut dyn Write,
    sys: &ackloop_core::trs::RewriteSystem,
    start: &Stack,
    strategy: &Strategy,
    fuel: u64,
    format: Format,
) -> Outcome {
    let (status, trace, failure) = match run(sys, start, strategy, Fuel(fuel)) {
        Ok(RunOutcome::Normal(_, t)) => (RunStatus::Normal, t, None),
        Ok(RunOutcome::Pending(_, t)) => (RunStatus::Pending, t, None),
        Err(RunError::FuelExhausted(t)) => {
            let used = t.steps.len() as u64;
            (RunStatus::FuelExhausted, t, Some(Failure::fuel(used, fuel)))
        }
        Err(e @ RunError::NoMatchAt { .. }) => {
            return Err(Failure::new(Exit::Failed, e.to_string()))
        }
        Err(e @ RunError::Apply { .. }) => return Err(Failure::new(Exit::Usage, e.to_string())),
    };
    match format {
        Format::Text => writeln!(out, "{}", trace.final_state())?,
        Format::Json => {
            serde_json::to_writer(&mut *out, &RewriteRunDoc::new(status, &trace))
                .map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    match failure {
        Some(f) => Err(f),
        None => Ok(Exit::Ok),
    }
}

fn rewrite_search(
    out: &mut dyn Write,
    sys: &ackloop_core::trs::RewriteSystem,
    starts: &[Stack],
    fuel: u64,
    threshold: usize,
    format: Format,
) -> Outcome {
    let outcome = divergence_search(sys, starts, Fuel(fuel), threshold);
    match (format, &outcome) {
        (Format::Json, SearchOutcome::Witness(w)) => {
            serde_json::to_writer(&mut *out, &WitnessDoc::from(w)).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        (Format::Text, SearchOutcome::Witness(w)) => {
            let positions: Vec<String> = w.positions.iter().map(usize::to_string).collect();
            let kind = match w.kind {
                WitnessKind::Growth { length } => format!("growth to length {length}"),
                WitnessKind::Embedding { earlier, offset } => {
                    format!("state {earlier} embedded at offset {offset}")
                }
            };
            writeln!(
                out,
                "witness start \"{}\" positions [{}] {kind}",
                w.start,
                positions.join(",")
            )?;
        }
        (
            Format::Json,
            SearchOutcome::NoneFound {
                explored,
                exhaustive,
            },
        ) => {
            let doc = serde_json::json!({
                "version": encode::SCHEMA_VERSION,
                "none_found": { "explored": explored, "exhaustive": exhaustive },
            });
            writeln!(out, "{doc}")?;
        }
        (
            Format::Text,
            SearchOutcome::NoneFound {
                explored,
                exhaustive,
            },
        ) => {
            let scope = if *exhaustive {
                "search space exhausted"
            } else {
                "fuel exhausted"
            };
            writeln!(out, "none found after {explored} rewrites ({scope})")?;
        }
    }
    Ok(Exit::Ok)
}
