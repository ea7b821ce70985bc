//! Builds the word-order-free pattern for a keyword list and tries it on
//! a few strings.

use boundsearch::{compile_nfa, words_to_pattern};

fn main() {
    let words = ["regular", "expression"];
    let ast = words_to_pattern(&words).expect("two non-empty words");
    println!("pattern: {ast}");

    let nfa = compile_nfa(&ast);
    for text in [
        "a regular expression",
        "expression, regular",
        "regularexpression",
        "only regular here",
        "",
    ] {
        println!("{:<24} {}", format!("{text:?}"), nfa.match_full(text));
    }
}
