//! Q-semantics of sentences, question classification, and iterated
//! what-complexity over answer-link graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::table::QaTable;
use crate::token::{self, QuestionKind, Token, TokenError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("sentence {0:?} not present in the table")]
    UnknownSentence(String),
    #[error("initial item {0} not in graph")]
    UnknownItem(Token),
    #[error("line {line}: expected 2 tab-separated columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: {source}")]
    BadToken { line: usize, source: TokenError },
}

/// The Q-semantics of a sentence: every (question, answer) pair the table
/// records for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticsSet {
    pub sentence: Vec<Token>,
    pub pairs: BTreeSet<(Token, Token)>,
}

/// Projects the table onto one sentence.
pub fn semantics_of(t: &QaTable, sentence: &[Token]) -> Result<SemanticsSet, SemanticsError> {
    let pairs: BTreeSet<(Token, Token)> = t
        .entries()
        .iter()
        .filter(|e| e.sentence == sentence)
        .map(|e| (e.question.id.clone(), e.answer.clone()))
        .collect();
    if pairs.is_empty() {
        return Err(SemanticsError::UnknownSentence(token::join(sentence)));
    }
    Ok(SemanticsSet {
        sentence: sentence.to_vec(),
        pairs,
    })
}

const WH_WORDS: &[&str] = &["what", "who", "when", "where", "why", "how", "which"];
const YES_NO_WORDS: &[&str] = &["is", "are", "do", "does", "can", "did", "will", "have", "has"];

/// Classifies question text into the three types. Precedence: an `or`
/// anywhere makes it alternative, then a leading wh-word, then a leading
/// auxiliary; anything else defaults to wh.
pub fn classify_question(text: &[Token]) -> QuestionKind {
    if text.iter().any(|t| t.as_str() == "or") {
        return QuestionKind::Alternative;
    }
    let first = match text.first() {
        Some(t) => t.as_str(),
        None => return QuestionKind::Wh,
    };
    if WH_WORDS.contains(&first) {
        QuestionKind::Wh
    } else if YES_NO_WORDS.contains(&first) {
        QuestionKind::YesNo
    } else {
        QuestionKind::Wh
    }
}

/// Directed graph of askable items; an edge a -> b means the answer about
/// `a` mentions `b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnswerLinkGraph {
    nodes: BTreeSet<Token>,
    edges: BTreeMap<Token, BTreeSet<Token>>,
}

impl AnswerLinkGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, item: Token) {
        self.nodes.insert(item);
    }

    pub fn add_edge(&mut self, from: Token, to: Token) {
        self.nodes.insert(from.clone());
        self.nodes.insert(to.clone());
        self.edges.entry(from).or_default().insert(to);
    }

    pub fn contains(&self, item: &Token) -> bool {
        self.nodes.contains(item)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn successors(&self, item: &Token) -> impl Iterator<Item = &Token> {
        self.edges.get(item).into_iter().flatten()
    }

    /// Parses the edge-list format: `from <TAB> to` per line, isolated
    /// nodes as `node <TAB> item`, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, SemanticsError> {
        let mut g = AnswerLinkGraph::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            if cols.len() != 2 {
                return Err(SemanticsError::ColumnCount {
                    line,
                    found: cols.len(),
                });
            }
            let a = Token::new(cols[0].trim())
                .map_err(|source| SemanticsError::BadToken { line, source })?;
            let b = Token::new(cols[1].trim())
                .map_err(|source| SemanticsError::BadToken { line, source })?;
            if a.as_str() == "node" {
                g.add_node(b);
            } else {
                g.add_edge(a, b);
            }
        }
        Ok(g)
    }
}

/// Counts the distinct items askable after at most `k` rounds of following
/// answer links from the initial set. `k = 0` is just the initial set.
pub fn iterated_what(
    g: &AnswerLinkGraph,
    initial: &BTreeSet<Token>,
    k: usize,
) -> Result<usize, SemanticsError> {
    for item in initial {
        if !g.contains(item) {
            return Err(SemanticsError::UnknownItem(item.clone()));
        }
    }
    let mut seen: BTreeSet<&Token> = initial.iter().collect();
    let mut frontier: VecDeque<(&Token, usize)> = initial.iter().map(|t| (t, 0)).collect();
    while let Some((item, depth)) = frontier.pop_front() {
        if depth == k {
            continue;
        }
        for next in g.successors(item) {
            if seen.insert(next) {
                frontier.push_back((next, depth + 1));
            }
        }
    }
    Ok(seen.len())
}

/// A count with a saturation marker for arithmetic that overflowed u64.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturatingCount {
    pub value: u64,
    pub saturated: bool,
}

impl SaturatingCount {
    fn exact(value: u64) -> Self {
        SaturatingCount {
            value,
            saturated: false,
        }
    }
}

/// Closed-form upper bound on iterated what-complexity assuming every link
/// reaches a fresh item: items x (1 + L + L^2 + ... + L^k).
pub fn iterated_estimate(items: u64, links_per_answer: u64, k: u32) -> SaturatingCount {
    let mut sum: u64 = 1;
    let mut power: u64 = 1;
    let mut saturated = false;
    for _ in 0..k {
        power = power.checked_mul(links_per_answer).unwrap_or_else(|| {
            saturated = true;
            u64::MAX
        });
        sum = sum.checked_add(power).unwrap_or_else(|| {
            saturated = true;
            u64::MAX
        });
    }
    match items.checked_mul(sum) {
        Some(v) if !saturated => SaturatingCount::exact(v),
        _ => SaturatingCount {
            value: items.saturating_mul(sum),
            saturated: true,
        },
    }
}

/// The 200-item help-system fixture: each initial item's answer links to
/// 14 fresh items, and depth-1 items link back only to existing ones, so
/// two rounds reach exactly 3000 items.
pub fn help_system_fixture() -> (AnswerLinkGraph, BTreeSet<Token>) {
    let mut g = AnswerLinkGraph::new();
    let mut initial = BTreeSet::new();
    for i in 0..200 {
        let item = Token::new(&format!("item_{i}")).unwrap();
        initial.insert(item.clone());
        for j in 0..14 {
            let child = Token::new(&format!("detail_{i}_{j}")).unwrap();
            g.add_edge(item.clone(), child.clone());
            // answers about details point back at already-known items
            g.add_edge(child, item.clone());
        }
    }
    (g, initial)
}
