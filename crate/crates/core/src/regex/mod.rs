//! Pattern syntax, Thompson automata and their simulation.
//!
//! Patterns use a deliberately small grammar: literals, `.` for any symbol,
//! `|`, `*`, parentheses and `\` escapes. Matching is case-exact and works
//! on Unicode scalar values; every offset reported here counts scalars.
//!
//! ```
//! use boundsearch::regex::{compile_nfa, parse_pattern, MatchSpan};
//!
//! let nfa = compile_nfa(&parse_pattern("XYZ")?);
//! assert!(!nfa.match_full("ZXYXYZ"));
//! assert_eq!(nfa.find_first("ZXYXYZ"), Some(MatchSpan::new(3, 6)));
//! # Ok::<(), boundsearch::regex::ParseError>(())
//! ```

mod ast;
mod nfa;
mod oracle;
mod parse;
mod words;

pub use ast::{is_metacharacter, PatternAst, METACHARACTERS};
pub use nfa::{
    compile_nfa, find_first, match_full, Label, MatchSpan, Nfa, ScanTrace, StartAttempt, StateId,
    TraceStep, Transition,
};
pub use oracle::oracle_match;
pub use parse::{escape, parse_pattern, ParseError};
pub use words::{words_to_pattern, WordsError, MAX_WORDS};
