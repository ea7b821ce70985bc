use super::ast::PatternAst;
use thiserror::Error;

/// A syntax error in pattern text. Offsets count Unicode scalar values.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unbalanced parenthesis at offset {offset}")]
    UnbalancedParenthesis { offset: usize },
    #[error("'*' with nothing to repeat at offset {offset}")]
    DanglingStar { offset: usize },
    #[error("trailing escape at offset {offset}")]
    TrailingEscape { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match *self {
            ParseError::UnbalancedParenthesis { offset }
            | ParseError::DanglingStar { offset }
            | ParseError::TrailingEscape { offset } => offset,
        }
    }
}

/// Parses pattern text.
///
/// Grammar, loosest binding first:
///
/// ```text
/// union  := concat ('|' concat)*
/// concat := repeat*
/// repeat := atom '*'*
/// atom   := '.' | '\' any | '(' union ')' | any non-metacharacter
/// ```
///
/// An empty branch (including the empty pattern) is `Epsilon`.
pub fn parse_pattern(text: &str) -> Result<PatternAst, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut parser = Parser { chars, pos: 0 };
    let ast = parser.union()?;
    match parser.peek() {
        None => Ok(ast),
        // The only way `union` stops early is an unmatched ')'.
        Some(_) => Err(ParseError::UnbalancedParenthesis { offset: parser.pos }),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<PatternAst, ParseError> {
        let mut ast = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.concat()?;
            ast = PatternAst::union(ast, rhs);
        }
        Ok(ast)
    }

    fn concat(&mut self) -> Result<PatternAst, ParseError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            match c {
                '|' | ')' => break,
                '*' => return Err(ParseError::DanglingStar { offset: self.pos }),
                _ => parts.push(self.repeat()?),
            }
        }
        Ok(PatternAst::concat_all(parts))
    }

    fn repeat(&mut self) -> Result<PatternAst, ParseError> {
        let mut ast = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            ast = PatternAst::star(ast);
        }
        Ok(ast)
    }

    fn atom(&mut self) -> Result<PatternAst, ParseError> {
        let start = self.pos;
        let c = self.chars[start];
        self.pos += 1;
        match c {
            '.' => Ok(PatternAst::AnySymbol),
            '\\' => match self.peek() {
                Some(escaped) => {
                    self.pos += 1;
                    Ok(PatternAst::Literal(escaped))
                }
                None => Err(ParseError::TrailingEscape { offset: start }),
            },
            '(' => {
                let inner = self.union()?;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(ParseError::UnbalancedParenthesis { offset: start })
                }
            }
            other => Ok(PatternAst::Literal(other)),
        }
    }
}

/// Escapes every metacharacter so the text parses back to its literal
/// concatenation.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if super::ast::is_metacharacter(c) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}
