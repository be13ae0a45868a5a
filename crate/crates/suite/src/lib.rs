//! No library code lives here. `cargo test -p ackloop-suite --test acceptance`
//! runs the acceptance criteria and prints one PASS or FAIL line for each.
