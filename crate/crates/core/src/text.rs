//! Shared lexer for the line-oriented file formats.
//!
//! A file is a sequence of statements. Statements end at a newline or a `;`,
//! `#` starts a comment running to the end of the line, and tokens are
//! separated by whitespace.

use crate::algebra::{parse_rational, RatVector, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Statement<'a> {
    pub line: usize,
    pub column: usize,
    pub tokens: Vec<Token<'a>>,
}

impl<'a> Statement<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    pub fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::syntax(self.line, self.column, message)
    }

    /// Split the arguments around a single `|`.
    pub fn split_bar(&self) -> Result<(&[Token<'a>], &[Token<'a>])> {
        let args = self.args();
        let bars: Vec<usize> = (0..args.len()).filter(|&i| args[i].text == "|").collect();
        match bars.as_slice() {
            [i] => Ok((&args[..*i], &args[*i + 1..])),
            [] => Err(self.error(format!("expected `|` in `{}` statement", self.keyword()))),
            [_, second, ..] => Err(args[*second].error("unexpected second `|`")),
        }
    }
}

impl Token<'_> {
    pub fn error(&self, message: impl Into<String>) -> Error {
        Error::syntax(self.line, self.column, message)
    }

    pub fn rational(&self) -> Result<Rational> {
        parse_rational(self.text)
            .ok_or_else(|| self.error(format!("invalid rational `{}`", self.text)))
    }

    pub fn count(&self) -> Result<usize> {
        match self.text.parse::<usize>() {
            Ok(v) if v >= 1 && self.text.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
            _ => Err(self.error(format!(
                "expected a positive integer, found `{}`",
                self.text
            ))),
        }
    }
}

pub(crate) fn rationals(tokens: &[Token<'_>]) -> Result<RatVector> {
    tokens
        .iter()
        .map(Token::rational)
        .collect::<Result<Vec<_>>>()
        .map(RatVector::new)
}

pub(crate) fn statements(text: &str) -> Vec<Statement<'_>> {
    let mut out = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let mut offset = 0;
        for segment in content.split(';') {
            let tokens = tokenize(segment, line, offset);
            if let Some(first) = tokens.first() {
                out.push(Statement {
                    line,
                    column: first.column,
                    tokens,
                });
            }
            offset += segment.len() + 1;
        }
    }
    out
}

fn tokenize(segment: &str, line: usize, offset: usize) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in segment.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &segment[s..i],
                    line,
                    column: offset + s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &segment[s..],
            line,
            column: offset + s + 1,
        });
    }
    tokens
}

/// Check a vector against an expected length, reporting at the statement.
pub(crate) fn expect_len(stmt: &Statement<'_>, what: &str, v: &RatVector, n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::dimension(
            format!("{what} at line {}", stmt.line),
            n,
            v.len(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_lines_semicolons_and_comments() {
        let stmts = statements("mvf 2 # header\n\nterm 1 0 | -1 1; term 0 -1 | 1 -1\n");
        let kws: Vec<&str> = stmts.iter().map(|s| s.keyword()).collect();
        assert_eq!(kws, ["mvf", "term", "term"]);
        assert_eq!(stmts[1].line, 3);
        assert_eq!(stmts[2].column, 18);
    }

    #[test]
    fn reports_token_columns() {
        let stmts = statements("term 1 x | 0");
        let err = stmts[0].args()[1].rational().unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 1,
                column: 8,
                message: "invalid rational `x`".into()
            }
        );
    }
}
