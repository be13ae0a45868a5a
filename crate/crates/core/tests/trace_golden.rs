use ackloop_core::dom::{certificate_build, certificate_verify};
use ackloop_core::trs::{run, RewriteSystem, RunOutcome, Strategy};
use ackloop_core::{ackloop, trace_render, Fuel, Recording, RuleId, Stack};

const LISTING: &str = include_str!("data/trace_2_3.txt");

#[test]
fn a23_listing_is_reproduced_byte_for_byte() {
    let run = ackloop(&Stack::from([3, 2]), Fuel(10_000), Recording::Full).unwrap();
    let trace = run.trace.unwrap();
    assert_eq!(trace_render(&trace), LISTING);
    assert_eq!(LISTING.lines().count(), 45);
    assert_eq!(LISTING.lines().next(), Some("3 2"));
    assert_eq!(LISTING.lines().last(), Some("9"));
    assert_eq!(run.steps.get(), 44);
    assert_eq!(run.terminal, RuleId::TSingleton);
}

#[test]
fn every_listed_line_parses_and_follows_from_the_previous() {
    let states: Vec<Stack> = LISTING.lines().map(|l| l.parse().unwrap()).collect();
    for pair in states.windows(2) {
        match ackloop_core::step(&pair[0]) {
            ackloop_core::Step::Next(s, _) => assert_eq!(s, pair[1]),
            other => panic!("{other:?} at {}", pair[0]),
        }
    }
}

#[test]
fn anchored_rule_file_walks_the_same_listing() {
    let out = run(
        &RewriteSystem::ackermann(),
        &Stack::from([3, 2]),
        &Strategy::Leftmost,
        Fuel(10_000),
    )
    .unwrap();
    let RunOutcome::Normal(last, trace) = out else {
        panic!("anchored leftmost runs end in normal form");
    };
    assert_eq!(last, Stack::from([9]));
    let text: String = trace.states.iter().map(|s| format!("{s}\n")).collect();
    assert_eq!(text, LISTING);
}

#[test]
fn listing_certifies() {
    let run = ackloop(&Stack::from([3, 2]), Fuel(10_000), Recording::Full).unwrap();
    let cert = certificate_build(&run.trace.unwrap()).unwrap();
    assert_eq!(cert.chain.len(), 45);
    assert!(certificate_verify(&cert).is_valid());
}
