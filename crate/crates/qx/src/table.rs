//! QA tables: the extensional map (sentence, question) -> answer.
//!
//! File format is tab-separated, three columns per line:
//! `question-id <TAB> sentence <TAB> answer`, with sentence tokens
//! space-separated. Lines starting with `#` are comments.

use std::collections::HashMap;

use thiserror::Error;

use crate::token::{self, Question, Token, TokenError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: expected 3 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: {source}")]
    BadToken { line: usize, source: TokenError },
    #[error("line {line}: empty sentence")]
    EmptySentence { line: usize },
    #[error(
        "conflicting answers for question {question} on sentence {sentence:?}: {first} vs {second}"
    )]
    NotFunctional {
        question: Token,
        sentence: String,
        first: Token,
        second: Token,
    },
    #[error("empty table")]
    Empty,
}

/// One table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QaEntry {
    pub question: Question,
    pub sentence: Vec<Token>,
    pub answer: Token,
}

/// A finite extensional semantics: every (sentence, question id) pair maps
/// to at most one answer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QaTable {
    entries: Vec<QaEntry>,
}

impl QaTable {
    /// Builds a table, rejecting functional violations. Entry order is kept.
    pub fn new(entries: Vec<QaEntry>) -> Result<Self, TableError> {
        let mut seen: HashMap<(Vec<Token>, Token), Token> = HashMap::new();
        for e in &entries {
            let key = (e.sentence.clone(), e.question.id.clone());
            if let Some(prev) = seen.get(&key) {
                if *prev != e.answer {
                    return Err(TableError::NotFunctional {
                        question: e.question.id.clone(),
                        sentence: token::join(&e.sentence),
                        first: prev.clone(),
                        second: e.answer.clone(),
                    });
                }
            } else {
                seen.insert(key, e.answer.clone());
            }
        }
        Ok(QaTable { entries })
    }

    pub fn entries(&self) -> &[QaEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 3 {
                return Err(TableError::ColumnCount {
                    line,
                    found: cols.len(),
                });
            }
            let question = Token::new(cols[0].trim())
                .map_err(|source| TableError::BadToken { line, source })?;
            let sentence = token::split(cols[1])
                .map_err(|source| TableError::BadToken { line, source })?;
            if sentence.is_empty() {
                return Err(TableError::EmptySentence { line });
            }
            let answer = Token::new(cols[2].trim())
                .map_err(|source| TableError::BadToken { line, source })?;
            entries.push(QaEntry {
                question: Question::wh(question),
                sentence,
                answer,
            });
        }
        QaTable::new(entries)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(e.question.id.as_str());
            out.push('\t');
            out.push_str(&token::join(&e.sentence));
            out.push('\t');
            out.push_str(e.answer.as_str());
            out.push('\n');
        }
        out
    }
}
