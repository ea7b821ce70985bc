//! Reports every problem in a corpus file, not just the first.
//!
//! ```text
//! cargo run --example validate_corpus -- path/to/corpus.jsonl
//! ```

use boundsearch::corpus::validate_corpus;
use std::fs::File;
use std::io::BufReader;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/awka.jsonl").into());
    let file = File::open(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    match validate_corpus(BufReader::new(file)) {
        Ok(corpus) => {
            println!("{path}: {} listings", corpus.len());
            for (facet, values) in corpus.schema().iter() {
                println!("  {facet}: {}", values.join(", "));
            }
        }
        Err(errors) => {
            for e in &errors {
                println!("{path}: {e}");
            }
            std::process::exit(1);
        }
    }
}
