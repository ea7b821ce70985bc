//! Faceted record search with a state-machine regex engine.
//!
//! Search runs in two stages. Keyword facets (property type, transaction,
//! state) act as *boundaries* and are resolved through a posting-list
//! index to a candidate set. A pattern built from the user's string is then
//! compiled to a Thompson NFA and run over the searchable text fields of
//! each candidate, producing at most one span-annotated hit per record.
//!
//! * [`regex`]: pattern parsing, NFA compilation, matching, keyword translation
//! * [`corpus`]: the line-delimited listing file and its facet schema
//! * [`index`]: boundary index and facet selection
//! * [`search`]: the combined query, ranking and snippets
//! * [`service`]: HTTP API over an atomically swappable snapshot
//! * [`cli`]: the `boundsearch` command line

pub mod cli;
pub mod corpus;
pub mod index;
pub mod regex;
pub mod search;
pub mod service;

pub use corpus::{load_corpus, Corpus, CorpusError, FacetSchema, Listing};
pub use index::{apply_boundaries, build_index, BoundaryIndex, FacetSelection, PostingList};
pub use regex::{compile_nfa, parse_pattern, words_to_pattern, MatchSpan, Nfa, PatternAst};
pub use search::{execute_search, ResultPage, SearchError, SearchHit, SearchMode, SearchQuery};
