//! Plain-text game files.
//!
//! ```text
//! # optional comments
//! n m [k]
//! a b c s      (m lines)
//! ```
//!
//! `k`, when present, must be 3. Blank lines and lines starting with `#`
//! are ignored everywhere.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Clause, GameError, XorGame};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: GameError },
    #[error("expected {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
    #[error("empty game file")]
    Empty,
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Malformed { line, .. } | ParseError::Invalid { line, .. } => Some(*line),
            _ => None,
        }
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| malformed(line, format!("`{tok}` is not a nonnegative integer")))
        })
        .collect()
}

pub fn parse_game(text: &str) -> Result<XorGame, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let head = numbers(hline, header)?;
    let (n, m) = match head[..] {
        [n, m] => (n, m),
        [n, m, 3] => (n, m),
        [_, _, k] => return Err(malformed(hline, format!("only 3-player games are supported, got k={k}"))),
        _ => return Err(malformed(hline, "header must be `n m` or `n m k`")),
    };

    let mut clauses = Vec::with_capacity(m);
    let mut clause_lines = Vec::with_capacity(m);
    for (lineno, text) in lines {
        let v = numbers(lineno, text)?;
        let [a, b, c, s] = v[..] else {
            return Err(malformed(lineno, "clause must be `a b c s`"));
        };
        if s > 1 {
            return Err(malformed(lineno, format!("parity bit must be 0 or 1, got {s}")));
        }
        clauses.push(Clause::new(a, b, c, s as u8));
        clause_lines.push(lineno);
    }
    if clauses.len() != m {
        return Err(ParseError::ClauseCount {
            expected: m,
            found: clauses.len(),
        });
    }
    XorGame::new(n, clauses).map_err(|source| {
        let line = match &source {
            GameError::IndexOutOfRange { index, .. }
            | GameError::BadParity { index }
            | GameError::DuplicateClause { index, .. } => clause_lines[*index],
            _ => hline,
        };
        ParseError::Invalid { line, source }
    })
}

/// Serialises a game; `comment` lines are written first with a `# ` prefix.
pub fn format_game(game: &XorGame, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "{} {}", game.n(), game.m());
    for cl in game.clauses() {
        let _ = writeln!(out, "{cl}");
    }
    out
}
