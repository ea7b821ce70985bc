use std::fmt;

/// Syntax tree of a pattern.
///
/// `AnySymbol` stands for the whole alphabet, so `Star(AnySymbol)` is the
/// "anything" padding used by keyword translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternAst {
    Epsilon,
    Literal(char),
    AnySymbol,
    Concat(Box<PatternAst>, Box<PatternAst>),
    Union(Box<PatternAst>, Box<PatternAst>),
    Star(Box<PatternAst>),
}

/// Characters with syntactic meaning in pattern text.
pub const METACHARACTERS: [char; 6] = ['.', '|', '*', '(', ')', '\\'];

pub fn is_metacharacter(c: char) -> bool {
    METACHARACTERS.contains(&c)
}

impl PatternAst {
    pub fn literal(c: char) -> Self {
        PatternAst::Literal(c)
    }

    pub fn concat(left: PatternAst, right: PatternAst) -> Self {
        PatternAst::Concat(Box::new(left), Box::new(right))
    }

    pub fn union(left: PatternAst, right: PatternAst) -> Self {
        PatternAst::Union(Box::new(left), Box::new(right))
    }

    pub fn star(inner: PatternAst) -> Self {
        PatternAst::Star(Box::new(inner))
    }

    /// `Σ*`
    pub fn any_string() -> Self {
        PatternAst::star(PatternAst::AnySymbol)
    }

    /// Right-nested concatenation of the characters of `text`, matched
    /// verbatim. The empty string yields `Epsilon`.
    pub fn literal_string(text: &str) -> Self {
        let mut chars: Vec<char> = text.chars().collect();
        let Some(last) = chars.pop() else {
            return PatternAst::Epsilon;
        };
        chars
            .into_iter()
            .rev()
            .fold(PatternAst::Literal(last), |acc, c| {
                PatternAst::concat(PatternAst::Literal(c), acc)
            })
    }

    /// Left-folds `parts` with `Concat`; an empty sequence is `Epsilon`.
    pub fn concat_all<I: IntoIterator<Item = PatternAst>>(parts: I) -> Self {
        let mut iter = parts.into_iter();
        match iter.next() {
            None => PatternAst::Epsilon,
            Some(first) => iter.fold(first, PatternAst::concat),
        }
    }

    /// Left-folds `alternatives` with `Union`. Returns `None` when empty.
    pub fn union_all<I: IntoIterator<Item = PatternAst>>(alternatives: I) -> Option<Self> {
        let mut iter = alternatives.into_iter();
        let first = iter.next()?;
        Some(iter.fold(first, PatternAst::union))
    }

    /// Height of the tree; leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            PatternAst::Epsilon | PatternAst::Literal(_) | PatternAst::AnySymbol => 1,
            PatternAst::Star(inner) => 1 + inner.depth(),
            PatternAst::Concat(l, r) | PatternAst::Union(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            PatternAst::Epsilon | PatternAst::Literal(_) | PatternAst::AnySymbol => 1,
            PatternAst::Star(inner) => 1 + inner.node_count(),
            PatternAst::Concat(l, r) | PatternAst::Union(l, r) => {
                1 + l.node_count() + r.node_count()
            }
        }
    }

    /// Applies ASCII lowercasing to every literal.
    pub fn ascii_folded(&self) -> Self {
        match self {
            PatternAst::Epsilon => PatternAst::Epsilon,
            PatternAst::AnySymbol => PatternAst::AnySymbol,
            PatternAst::Literal(c) => PatternAst::Literal(c.to_ascii_lowercase()),
            PatternAst::Star(inner) => PatternAst::star(inner.ascii_folded()),
            PatternAst::Concat(l, r) => PatternAst::concat(l.ascii_folded(), r.ascii_folded()),
            PatternAst::Union(l, r) => PatternAst::union(l.ascii_folded(), r.ascii_folded()),
        }
    }

    /// Renders the tree back into pattern text accepted by
    /// [`parse_pattern`](super::parse_pattern).
    ///
    /// Parentheses are emitted only where precedence requires them. An
    /// `Epsilon` that would otherwise vanish is written as `()`.
    pub fn to_pattern_string(&self) -> String {
        let mut out = String::new();
        write_union(self, &mut out);
        out
    }
}

impl fmt::Display for PatternAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pattern_string())
    }
}

fn write_union(ast: &PatternAst, out: &mut String) {
    match ast {
        PatternAst::Union(l, r) => {
            write_union(l, out);
            out.push('|');
            // Union parses left-associatively, so a right-hand union needs parens.
            if matches!(**r, PatternAst::Union(..)) {
                out.push('(');
                write_union(r, out);
                out.push(')');
            } else {
                write_concat(r, out);
            }
        }
        _ => write_concat(ast, out),
    }
}

fn write_concat(ast: &PatternAst, out: &mut String) {
    match ast {
        PatternAst::Concat(l, r) => {
            write_concat_operand(l, out);
            write_concat_operand(r, out);
        }
        _ => write_star(ast, out),
    }
}

fn write_concat_operand(ast: &PatternAst, out: &mut String) {
    match ast {
        PatternAst::Union(..) => {
            out.push('(');
            write_union(ast, out);
            out.push(')');
        }
        // Epsilon inside a concatenation contributes nothing.
        PatternAst::Epsilon => {}
        _ => write_concat(ast, out),
    }
}

fn write_star(ast: &PatternAst, out: &mut String) {
    match ast {
        PatternAst::Star(inner) => {
            match **inner {
                PatternAst::Literal(_) | PatternAst::AnySymbol => write_atom(inner, out),
                _ => {
                    out.push('(');
                    write_union(inner, out);
                    out.push(')');
                }
            }
            out.push('*');
        }
        _ => write_atom(ast, out),
    }
}

fn write_atom(ast: &PatternAst, out: &mut String) {
    match ast {
        PatternAst::Epsilon => out.push_str("()"),
        PatternAst::AnySymbol => out.push('.'),
        PatternAst::Literal(c) => {
            if is_metacharacter(*c) {
                out.push('\\');
            }
            out.push(*c);
        }
        _ => {
            out.push('(');
            write_union(ast, out);
            out.push(')');
        }
    }
}
