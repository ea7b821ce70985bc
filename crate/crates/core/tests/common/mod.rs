//! Generators and brute-force references shared by the integration tests.
//!
//! Nothing here goes through the automaton or the posting-list index: the
//! references use plain substring tests, direct predicate filters and the
//! recursive membership oracle.

#![allow(dead_code)]

use boundsearch::corpus::{Corpus, FacetSchema, Listing, SearchField};
use boundsearch::index::FacetSelection;
use boundsearch::regex::{oracle_match, parse_pattern, PatternAst};
use boundsearch::search::{SearchMode, SearchQuery};
use rand::seq::SliceRandom;
use rand::Rng;
use std::path::PathBuf;

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/awka.jsonl")
}

pub fn fixture() -> Corpus {
    let text = std::fs::read(fixture_path()).unwrap();
    boundsearch::load_corpus(text.as_slice()).unwrap()
}

/// Every tree of depth ≤ `max_depth` (leaves have depth 1) over the leaves
/// `Epsilon`, `AnySymbol` and one literal per alphabet symbol.
pub fn enumerate_patterns(max_depth: usize, alphabet: &[char]) -> Vec<PatternAst> {
    let mut leaves = vec![PatternAst::Epsilon, PatternAst::AnySymbol];
    leaves.extend(alphabet.iter().map(|&c| PatternAst::Literal(c)));
    let mut all = leaves.clone();
    for _ in 1..max_depth {
        let prev = all.clone();
        let mut next = leaves.clone();
        for p in &prev {
            next.push(PatternAst::star(p.clone()));
        }
        for l in &prev {
            for r in &prev {
                next.push(PatternAst::concat(l.clone(), r.clone()));
                next.push(PatternAst::union(l.clone(), r.clone()));
            }
        }
        all = next;
    }
    all
}

/// Every string over `alphabet` of length ≤ `max_len`, shortest first.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|s| alphabet.iter().map(move |c| format!("{s}{c}")))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

pub fn random_pattern<R: Rng>(rng: &mut R, max_depth: usize, alphabet: &[char]) -> PatternAst {
    if max_depth <= 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => PatternAst::Epsilon,
            1 => PatternAst::AnySymbol,
            _ => PatternAst::Literal(*alphabet.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 => PatternAst::star(random_pattern(rng, max_depth - 1, alphabet)),
        1 => PatternAst::concat(
            random_pattern(rng, max_depth - 1, alphabet),
            random_pattern(rng, max_depth - 1, alphabet),
        ),
        _ => PatternAst::union(
            random_pattern(rng, max_depth - 1, alphabet),
            random_pattern(rng, max_depth - 1, alphabet),
        ),
    }
}

pub fn random_string<R: Rng>(rng: &mut R, alphabet: &[char], max_len: usize) -> String {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// Naive reference for substring search: leftmost start, longest end,
/// checked with the recursive oracle over every substring.
pub fn oracle_find_first(ast: &PatternAst, input: &str) -> Option<(usize, usize)> {
    let chars: Vec<char> = input.chars().collect();
    for i in 0..=chars.len() {
        for j in (i..=chars.len()).rev() {
            let sub: String = chars[i..j].iter().collect();
            if oracle_match(ast, &sub) {
                return Some((i, j));
            }
        }
    }
    None
}

pub const FACET_VALUES: [&[&str]; 3] = [
    &["Student Hostel", "Flat", "Duplex"],
    &["Rent", "Sale"],
    &["Anambra", "Benue", "Enugu"],
];

pub fn random_schema() -> FacetSchema {
    let owned = |vs: &[&str]| vs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    FacetSchema::new(
        owned(FACET_VALUES[0]),
        owned(FACET_VALUES[1]),
        owned(FACET_VALUES[2]),
    )
    .unwrap()
}

/// Text alphabet for random corpora: mixed case so folding matters.
pub const TEXT_ALPHABET: [char; 6] = ['a', 'b', 'A', 'B', 'c', ' '];

pub fn random_corpus<R: Rng>(rng: &mut R, max_records: usize, max_text: usize) -> Corpus {
    let n = rng.gen_range(0..=max_records);
    let listings = (0..n)
        .map(|i| {
            let mut text = || random_string(rng, &TEXT_ALPHABET, max_text);
            let (street, locality, title, description) = (text(), text(), text(), text());
            Listing {
                id: format!("R-{i:03}"),
                title: format!("t{title}"),
                description,
                location_state: FACET_VALUES[2].choose(rng).unwrap().to_string(),
                location_locality: locality,
                location_street: street,
                property_type: FACET_VALUES[0].choose(rng).unwrap().to_string(),
                transaction_type: FACET_VALUES[1].choose(rng).unwrap().to_string(),
                price: rng.gen_bool(0.5).then(|| rng.gen_range(0..1_000_000)),
            }
        })
        .collect();
    Corpus::new(random_schema(), listings).unwrap()
}

pub fn random_selection<R: Rng>(rng: &mut R) -> FacetSelection {
    let names = ["property_type", "transaction_type", "location_state"];
    let mut sel = FacetSelection::new();
    for (name, values) in names.iter().zip(FACET_VALUES) {
        if rng.gen_bool(0.5) {
            sel.insert(*name, *values.choose(rng).unwrap());
        }
    }
    sel
}

/// A query drawn from all three modes. Regex patterns are printed from
/// random trees so they always parse.
pub fn random_query<R: Rng>(rng: &mut R) -> SearchQuery {
    let pattern_alphabet = ['a', 'b', 'A', 'c'];
    let mode = *[SearchMode::Literal, SearchMode::Regex, SearchMode::Keywords]
        .choose(rng)
        .unwrap();
    let pattern_text = match mode {
        SearchMode::Literal => random_string(rng, &pattern_alphabet, 3),
        SearchMode::Regex => random_pattern(rng, 3, &pattern_alphabet).to_pattern_string(),
        SearchMode::Keywords => {
            let words = rng.gen_range(1..=2);
            (0..words)
                .map(|_| {
                    let len = rng.gen_range(1..=2);
                    (0..len).map(|_| *pattern_alphabet.choose(rng).unwrap()).collect::<String>()
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    let mut fields = SearchField::ALL.to_vec();
    if rng.gen_bool(0.3) {
        fields.shuffle(rng);
        fields.truncate(rng.gen_range(1..=5));
    }
    SearchQuery {
        boundaries: random_selection(rng),
        pattern_text,
        mode,
        case_sensitive: rng.gen_bool(0.3),
        fields,
        limit: rng.gen_range(1..=50),
        offset: rng.gen_range(0..=5),
    }
}

/// Listing ids satisfying every selected facet, by direct comparison.
pub fn brute_boundary(corpus: &Corpus, selection: &FacetSelection) -> Vec<String> {
    corpus
        .listings()
        .iter()
        .filter(|l| selection.iter().all(|(f, v)| l.facet_value(f) == Some(v)))
        .map(|l| l.id.clone())
        .collect()
}

/// Does `text` satisfy the query's pattern, decided without the automaton?
pub fn brute_field_matches(query: &SearchQuery, text: &str) -> bool {
    let fold = |s: &str| {
        if query.case_sensitive {
            s.to_string()
        } else {
            s.to_ascii_lowercase()
        }
    };
    let text = fold(text);
    match query.mode {
        SearchMode::Literal => text.contains(&fold(&query.pattern_text)),
        SearchMode::Keywords => {
            let words: Vec<String> = query.pattern_text.split_whitespace().map(fold).collect();
            let refs: Vec<&str> = words.iter().map(String::as_str).collect();
            words_placeable(&refs, &text)
        }
        SearchMode::Regex => {
            let ast = parse_pattern(&query.pattern_text).unwrap();
            let ast = if query.case_sensitive { ast } else { ast.ascii_folded() };
            oracle_find_first(&ast, &text).is_some()
        }
    }
}

/// The unpaginated hit id set of `query`, as a double filter.
pub fn brute_hits(corpus: &Corpus, query: &SearchQuery) -> Vec<String> {
    let bounded = brute_boundary(corpus, &query.boundaries);
    corpus
        .listings()
        .iter()
        .filter(|l| bounded.contains(&l.id))
        .filter(|l| query.fields.iter().any(|&f| brute_field_matches(query, l.text(f))))
        .map(|l| l.id.clone())
        .collect()
}

/// Can the words be placed as pairwise non-overlapping substrings of `s`,
/// in some order? Tries each ordering with greedy leftmost placement.
pub fn words_placeable(words: &[&str], s: &str) -> bool {
    fn orders(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for rest in orders(n - 1) {
            for i in 0..=rest.len() {
                let mut o = rest.clone();
                o.insert(i, n - 1);
                out.push(o);
            }
        }
        out
    }
    orders(words.len()).into_iter().any(|order| {
        let mut from = 0;
        order.iter().all(|&i| match s[from..].find(words[i]) {
            Some(at) => {
                from += at + words[i].len();
                true
            }
            None => false,
        })
    })
}
