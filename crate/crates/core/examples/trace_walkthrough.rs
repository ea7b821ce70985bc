//! Restart-per-position scan of `XYZ` over `ZXYXYZ`.
//!
//! ```text
//! cargo run --example trace_walkthrough -- [PATTERN] [INPUT]
//! ```

use boundsearch::{compile_nfa, parse_pattern};

fn main() {
    let mut args = std::env::args().skip(1);
    let pattern = args.next().unwrap_or_else(|| "XYZ".into());
    let input = args.next().unwrap_or_else(|| "ZXYXYZ".into());

    let nfa = compile_nfa(&parse_pattern(&pattern).expect("pattern should parse"));
    println!("{pattern}: {} states", nfa.state_count());
    println!("whole input accepted: {}", nfa.match_full(&input));

    let trace = nfa.trace_scan(&input);
    for attempt in &trace.attempts {
        match attempt.accepted_end {
            Some(end) => println!("start {}: accepted [{}, {end})", attempt.start, attempt.start),
            None => println!("start {}: non-acceptance after {} steps", attempt.start, attempt.steps.len()),
        }
    }
    match trace.result {
        Some(span) => {
            let text: String = input.chars().skip(span.start).take(span.len()).collect();
            println!("first match [{}, {}) {text:?}", span.start, span.end);
        }
        None => println!("no match"),
    }
}
