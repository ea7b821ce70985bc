//! The combined query: facet boundaries pick the candidates, then a pattern
//! runs over each candidate's text fields.
//!
//! Each listing yields at most one hit, from the first field (in query
//! order) where the pattern matches. Hits are ranked by field position in
//! the query, then span start, then corpus order.

use crate::corpus::{Corpus, Listing, SearchField};
use crate::index::{apply_boundaries, BoundaryError, BoundaryIndex, FacetSelection};
use crate::regex::{
    compile_nfa, parse_pattern, words_to_pattern, MatchSpan, Nfa, ParseError, PatternAst,
    WordsError,
};
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_LIMIT: usize = 20;

/// Characters of context kept on each side of a match in API hit objects.
pub const SNIPPET_CONTEXT: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("pattern syntax: {0}")]
    PatternSyntax(#[from] ParseError),
    #[error("too many words: {count} given, at most {max}", max = crate::regex::MAX_WORDS)]
    TooManyWords { count: usize },
    #[error("keywords mode needs at least one word")]
    EmptyPattern,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("span {start}..{end} lies outside a field of {len} characters")]
    SpanOutOfRange { start: usize, end: usize, len: usize },
}

impl SearchError {
    /// Machine-readable error code shared by the HTTP API and the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            SearchError::PatternSyntax(_) => "pattern_syntax",
            SearchError::TooManyWords { .. } => "too_many_words",
            SearchError::Boundary(BoundaryError::UnknownFacet(_)) => "unknown_facet",
            SearchError::Boundary(BoundaryError::UnknownValue { .. }) => "unknown_value",
            SearchError::EmptyPattern
            | SearchError::InvalidQuery(_)
            | SearchError::SpanOutOfRange { .. } => "bad_parameter",
        }
    }
}

impl From<WordsError> for SearchError {
    fn from(e: WordsError) -> Self {
        match e {
            WordsError::TooManyWords { count } => SearchError::TooManyWords { count },
            // Whitespace splitting never produces empty words.
            WordsError::EmptyWordList | WordsError::EmptyWord { .. } => SearchError::EmptyPattern,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SearchMode {
    /// The text is matched verbatim as a substring.
    #[default]
    Literal,
    /// The text is a pattern, matched as a substring.
    Regex,
    /// Whitespace-separated words, all of which must occur in the field.
    Keywords,
}

impl SearchMode {
    pub fn name(self) -> &'static str {
        match self {
            SearchMode::Literal => "literal",
            SearchMode::Regex => "regex",
            SearchMode::Keywords => "keywords",
        }
    }
}

impl FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(SearchMode::Literal),
            "regex" => Ok(SearchMode::Regex),
            "keywords" => Ok(SearchMode::Keywords),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SearchMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchQuery {
    #[serde(rename = "facets")]
    pub boundaries: FacetSelection,
    #[serde(rename = "q")]
    pub pattern_text: String,
    pub mode: SearchMode,
    pub case_sensitive: bool,
    pub fields: Vec<SearchField>,
    pub limit: usize,
    pub offset: usize,
}

impl Default for SearchQuery {
    fn default() -> Self {
        SearchQuery {
            boundaries: FacetSelection::new(),
            pattern_text: String::new(),
            mode: SearchMode::Literal,
            case_sensitive: false,
            fields: SearchField::ALL.to_vec(),
            limit: DEFAULT_LIMIT,
            offset: 0,
        }
    }
}

impl SearchQuery {
    pub fn new(pattern_text: impl Into<String>) -> Self {
        SearchQuery {
            pattern_text: pattern_text.into(),
            ..Default::default()
        }
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_boundaries(mut self, boundaries: FacetSelection) -> Self {
        self.boundaries = boundaries;
        self
    }

    pub fn with_page(mut self, offset: usize, limit: usize) -> Self {
        self.offset = offset;
        self.limit = limit;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.fields.is_empty() {
            return Err(SearchError::InvalidQuery("fields must not be empty".into()));
        }
        if self.limit == 0 {
            return Err(SearchError::InvalidQuery("limit must be at least 1".into()));
        }
        Ok(())
    }
}

/// Whether a pattern must cover a whole field or any part of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchoring {
    Substring,
    Whole,
}

/// The pattern a query runs over each field, before compilation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldPattern {
    pub ast: PatternAst,
    /// ASCII case folding; literals in `ast` are already lowercased.
    pub fold_case: bool,
    pub anchoring: Anchoring,
}

pub fn build_field_pattern(query: &SearchQuery) -> Result<FieldPattern, SearchError> {
    let (ast, anchoring) = match query.mode {
        SearchMode::Literal => (
            PatternAst::literal_string(&query.pattern_text),
            Anchoring::Substring,
        ),
        SearchMode::Regex => (parse_pattern(&query.pattern_text)?, Anchoring::Substring),
        SearchMode::Keywords => {
            let words: Vec<&str> = query.pattern_text.split_whitespace().collect();
            if words.is_empty() {
                return Err(SearchError::EmptyPattern);
            }
            (words_to_pattern(&words)?, Anchoring::Whole)
        }
    };
    let fold_case = !query.case_sensitive;
    let ast = if fold_case { ast.ascii_folded() } else { ast };
    Ok(FieldPattern {
        ast,
        fold_case,
        anchoring,
    })
}

impl FieldPattern {
    pub fn compile(&self) -> CompiledPattern {
        CompiledPattern {
            nfa: compile_nfa(&self.ast),
            fold_case: self.fold_case,
            anchoring: self.anchoring,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompiledPattern {
    nfa: Nfa,
    fold_case: bool,
    anchoring: Anchoring,
}

impl CompiledPattern {
    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    /// Locates the match in `text`. Whole-field patterns report the span of
    /// the entire field.
    pub fn find(&self, text: &str) -> Option<MatchSpan> {
        let chars: Vec<char> = if self.fold_case {
            text.chars().map(|c| c.to_ascii_lowercase()).collect()
        } else {
            text.chars().collect()
        };
        match self.anchoring {
            Anchoring::Substring => self.nfa.find_first_chars(&chars),
            Anchoring::Whole => {
                let folded: String = chars.iter().collect();
                self.nfa
                    .match_full(&folded)
                    .then(|| MatchSpan::new(0, chars.len()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub id: String,
    pub matched_field: SearchField,
    pub span: MatchSpan,
    /// Position of `matched_field` in the query's field list.
    pub field_rank: usize,
    /// Position of the listing in the corpus.
    pub corpus_position: usize,
}

impl SearchHit {
    fn rank_key(&self) -> (usize, usize, usize) {
        (self.field_rank, self.span.start, self.corpus_position)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultPage {
    pub hits: Vec<SearchHit>,
    /// Hit count before pagination.
    pub total: usize,
    pub query: SearchQuery,
}

pub fn execute_search(
    corpus: &Corpus,
    index: &BoundaryIndex,
    query: &SearchQuery,
) -> Result<ResultPage, SearchError> {
    query.validate()?;
    let pattern = build_field_pattern(query)?.compile();
    let candidates = apply_boundaries(index, &query.boundaries)?;

    let mut hits: Vec<SearchHit> = candidates
        .positions()
        .iter()
        .filter_map(|&pos| {
            let listing = &corpus.listings()[pos];
            query
                .fields
                .iter()
                .enumerate()
                .find_map(|(rank, &field)| {
                    pattern.find(listing.text(field)).map(|span| SearchHit {
                        id: listing.id.clone(),
                        matched_field: field,
                        span,
                        field_rank: rank,
                        corpus_position: pos,
                    })
                })
        })
        .collect();
    hits.sort_by_key(SearchHit::rank_key);

    let total = hits.len();
    let page = hits
        .into_iter()
        .skip(query.offset)
        .take(query.limit)
        .collect();
    Ok(ResultPage {
        hits: page,
        total,
        query: query.clone(),
    })
}

/// A clipped excerpt of a field with the match span re-based onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snippet {
    pub text: String,
    pub span: MatchSpan,
}

impl Snippet {
    pub fn matched_text(&self) -> String {
        self.text
            .chars()
            .skip(self.span.start)
            .take(self.span.len())
            .collect()
    }
}

/// Clips the hit's field to `context` characters either side of the span.
pub fn highlight_snippet(
    listing: &Listing,
    hit: &SearchHit,
    context: usize,
) -> Result<Snippet, SearchError> {
    let chars: Vec<char> = listing.text(hit.matched_field).chars().collect();
    let MatchSpan { start, end } = hit.span;
    if start > end || end > chars.len() {
        return Err(SearchError::SpanOutOfRange {
            start,
            end,
            len: chars.len(),
        });
    }
    let from = start.saturating_sub(context);
    let to = end.saturating_add(context).min(chars.len());
    Ok(Snippet {
        text: chars[from..to].iter().collect(),
        span: MatchSpan::new(start - from, end - from),
    })
}

/// The hit object shared by the HTTP API and the CLI's records output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct HitRecord {
    pub id: String,
    pub title: String,
    pub matched_field: String,
    pub span: SpanRecord,
    pub snippet: String,
    pub snippet_span: SpanRecord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SpanRecord {
    pub start: usize,
    pub end: usize,
}

impl From<MatchSpan> for SpanRecord {
    fn from(s: MatchSpan) -> Self {
        SpanRecord {
            start: s.start,
            end: s.end,
        }
    }
}

impl HitRecord {
    pub fn new(corpus: &Corpus, hit: &SearchHit) -> Result<Self, SearchError> {
        let listing = &corpus.listings()[hit.corpus_position];
        let snippet = highlight_snippet(listing, hit, SNIPPET_CONTEXT)?;
        Ok(HitRecord {
            id: hit.id.clone(),
            title: listing.title.clone(),
            matched_field: hit.matched_field.name().to_string(),
            span: hit.span.into(),
            snippet: snippet.text,
            snippet_span: snippet.span.into(),
        })
    }
}

/// Hit objects for every hit on the page.
pub fn hit_records(corpus: &Corpus, page: &ResultPage) -> Result<Vec<HitRecord>, SearchError> {
    page.hits.iter().map(|h| HitRecord::new(corpus, h)).collect()
}
