//! Reference membership test by structural recursion over the tree.
//!
//! Shares nothing with the automaton path; tests use it as ground truth.

use super::ast::PatternAst;
use std::collections::HashMap;

/// Returns whether the whole of `input` belongs to the language of `ast`.
///
/// Cost grows polynomially with input length; keep inputs short.
pub fn oracle_match(ast: &PatternAst, input: &str) -> bool {
    let chars: Vec<char> = input.chars().collect();
    let mut memo = Memo {
        chars: &chars,
        table: HashMap::new(),
    };
    memo.matches(ast, 0, chars.len())
}

struct Memo<'a> {
    chars: &'a [char],
    table: HashMap<(*const PatternAst, usize, usize), bool>,
}

impl Memo<'_> {
    /// Does `ast` match exactly `chars[i..j]`?
    fn matches(&mut self, ast: &PatternAst, i: usize, j: usize) -> bool {
        let key = (ast as *const PatternAst, i, j);
        if let Some(&hit) = self.table.get(&key) {
            return hit;
        }
        let result = match ast {
            PatternAst::Epsilon => i == j,
            PatternAst::Literal(c) => j == i + 1 && self.chars[i] == *c,
            PatternAst::AnySymbol => j == i + 1,
            PatternAst::Union(l, r) => self.matches(l, i, j) || self.matches(r, i, j),
            PatternAst::Concat(l, r) => (i..=j).any(|k| self.matches(l, i, k) && self.matches(r, k, j)),
            // Either empty, or a non-empty first iteration followed by the rest.
            PatternAst::Star(inner) => {
                i == j || (i + 1..=j).any(|k| self.matches(inner, i, k) && self.matches(ast, k, j))
            }
        };
        self.table.insert(key, result);
        result
    }
}
