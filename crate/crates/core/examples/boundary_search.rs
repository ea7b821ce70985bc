//! Narrows the bundled fixture by facets, then runs a literal search
//! inside the boundary set.

use boundsearch::search::highlight_snippet;
use boundsearch::{apply_boundaries, build_index, execute_search, load_corpus, FacetSelection, SearchQuery};
use std::fs::File;
use std::io::BufReader;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/awka.jsonl");
    let corpus = load_corpus(BufReader::new(File::open(path).unwrap())).unwrap();
    let index = build_index(&corpus);

    let boundaries = FacetSelection::new()
        .with("property_type", "Student Hostel")
        .with("transaction_type", "Rent")
        .with("location_state", "Anambra");
    let bounded = apply_boundaries(&index, &boundaries).unwrap();
    println!("{} of {} listings inside the boundaries", bounded.len(), corpus.len());

    let query = SearchQuery::new("ifi").with_boundaries(boundaries);
    let page = execute_search(&corpus, &index, &query).unwrap();
    println!("{} hits for {:?}", page.total, query.pattern_text);
    for hit in &page.hits {
        let listing = corpus.get_listing(&hit.id).unwrap();
        let snippet = highlight_snippet(listing, hit, 10).unwrap();
        println!(
            "  {} {:<18} [{}] {:?} matched {:?}",
            hit.id,
            hit.matched_field,
            hit.span.start,
            snippet.text,
            snippet.matched_text()
        );
    }
}
