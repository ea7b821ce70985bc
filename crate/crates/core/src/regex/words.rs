use super::ast::PatternAst;
use thiserror::Error;

/// Largest word count [`words_to_pattern`] accepts; the translation has
/// one branch per ordering, so it grows factorially.
pub const MAX_WORDS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WordsError {
    #[error("no words to translate")]
    EmptyWordList,
    #[error("{count} words given, at most {MAX_WORDS} supported")]
    TooManyWords { count: usize },
    #[error("word {index} is empty")]
    EmptyWord { index: usize },
}

/// Translates a keyword list into a pattern accepting any text that
/// contains every word.
///
/// Each word needs its own stretch of text: occurrences may come in any
/// order but may not overlap, so `["ab", "ba"]` rejects `"aba"` and accepts
/// `"abba"`.
///
/// The result is the union, over every ordering `w1 … wk` of the words, of
/// `Σ* w1 Σ* w2 … Σ* wk Σ*`. Words are taken verbatim; metacharacters in
/// them are literals. Orderings are generated lexicographically by index,
/// so `["regular", "expression"]` yields the `regular…expression` branch
/// first.
pub fn words_to_pattern<S: AsRef<str>>(words: &[S]) -> Result<PatternAst, WordsError> {
    if words.is_empty() {
        return Err(WordsError::EmptyWordList);
    }
    if words.len() > MAX_WORDS {
        return Err(WordsError::TooManyWords { count: words.len() });
    }
    if let Some(index) = words.iter().position(|w| w.as_ref().is_empty()) {
        return Err(WordsError::EmptyWord { index });
    }

    let literals: Vec<PatternAst> = words
        .iter()
        .map(|w| PatternAst::literal_string(w.as_ref()))
        .collect();

    let branches = permutations(literals.len()).into_iter().map(|order| {
        let mut parts = vec![PatternAst::any_string()];
        for i in order {
            parts.push(literals[i].clone());
            parts.push(PatternAst::any_string());
        }
        PatternAst::concat_all(parts)
    });
    Ok(PatternAst::union_all(branches).expect("at least one ordering"))
}

/// All orderings of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}
