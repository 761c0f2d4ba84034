//! Tokens and questions.
//!
//! A [`Token`] is an interned symbol: a nonempty string with no whitespace
//! and no `#` (which starts comment lines in every file format here). The
//! only exception is the reserved separator `##`, used to join a question
//! id and a sentence into one machine input.

use std::fmt;

use thiserror::Error;

/// Reserved separator placed between the question id and the sentence when
/// a (question, sentence) pair is linearized into a single input.
pub const SEPARATOR: &str = "##";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TokenError {
    #[error("empty token")]
    Empty,
    #[error("token {0:?} contains whitespace")]
    Whitespace(String),
    #[error("token {0:?} contains '#'")]
    Hash(String),
}

/// An interned symbol. Equality is exact string equality, no case folding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    pub fn new(text: &str) -> Result<Self, TokenError> {
        if text == SEPARATOR {
            return Ok(Token(text.to_string()));
        }
        if text.is_empty() {
            return Err(TokenError::Empty);
        }
        if text.chars().any(char::is_whitespace) {
            return Err(TokenError::Whitespace(text.to_string()));
        }
        if text.contains('#') {
            return Err(TokenError::Hash(text.to_string()));
        }
        Ok(Token(text.to_string()))
    }

    pub fn separator() -> Self {
        Token(SEPARATOR.to_string())
    }

    pub fn is_separator(&self) -> bool {
        self.0 == SEPARATOR
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Token({})", self.0)
    }
}

/// Render a token sequence as a space-joined string.
pub fn join(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(Token::as_str)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parse a whitespace-separated token sequence.
pub fn split(text: &str) -> Result<Vec<Token>, TokenError> {
    text.split_whitespace().map(Token::new).collect()
}

/// The three question types: yes/no, wh, and alternative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuestionKind {
    YesNo,
    Wh,
    Alternative,
}

impl fmt::Display for QuestionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuestionKind::YesNo => f.write_str("yes_no"),
            QuestionKind::Wh => f.write_str("wh"),
            QuestionKind::Alternative => f.write_str("alternative"),
        }
    }
}

/// A question: an id token plus its type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Question {
    pub id: Token,
    pub kind: QuestionKind,
}

impl Question {
    pub fn new(id: Token, kind: QuestionKind) -> Self {
        Question { id, kind }
    }

    /// A wh-question with the given id; the default reading when a table
    /// file gives only the id.
    pub fn wh(id: Token) -> Self {
        Question {
            id,
            kind: QuestionKind::Wh,
        }
    }
}
