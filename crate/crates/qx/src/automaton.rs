//! Deterministic finite-state transducers over tokens ("meaning automata"),
//! their execution, the meaning constraint check, and the two size measures
//! (State x Symbol and T-rule).
//!
//! A machine is a set of four-column rules (state, input, output, next).
//! Running a machine consumes the whole input; the answer is the last
//! non-empty output emitted, provided the run ends in an accepting state.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::table::QaTable;
use crate::token::{Question, Token, TokenError};

/// Nonnegative integer state identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl std::fmt::Display for StateId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One transition rule. `output = None` means the rule emits nothing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub state: StateId,
    pub input: Token,
    pub output: Option<Token>,
    pub next: StateId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("two rules for (state {state}, input {input})")]
    Nondeterministic { state: StateId, input: Token },
    #[error("initial state {0} not in state set")]
    InitialNotInStates(StateId),
    #[error("accepting state {0} not in state set")]
    AcceptingNotInStates(StateId),
    #[error("rule references state {0} not in state set")]
    DanglingState(StateId),
    #[error("empty state set")]
    NoStates,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("empty input")]
    EmptyInput,
    #[error("no rule for (state {state}, input {input})")]
    NoRule { state: StateId, input: Token },
    #[error("halted in non-accepting state {0}")]
    NotAccepting(StateId),
    #[error("accepting run emitted no output")]
    NoOutput,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("sentence contains the reserved separator token '##'")]
    SeparatorInSentence,
    #[error("question id is the reserved separator token '##'")]
    SeparatorAsQuestionId,
    #[error("empty sentence")]
    EmptySentence,
}

/// A deterministic transducer: at most one rule per (state, input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeaningAutomaton {
    states: BTreeSet<StateId>,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    rules: BTreeMap<(StateId, Token), (Option<Token>, StateId)>,
}

impl MeaningAutomaton {
    pub fn new(
        states: BTreeSet<StateId>,
        initial: StateId,
        accepting: BTreeSet<StateId>,
        rules: Vec<Rule>,
    ) -> Result<Self, BuildError> {
        if states.is_empty() {
            return Err(BuildError::NoStates);
        }
        if !states.contains(&initial) {
            return Err(BuildError::InitialNotInStates(initial));
        }
        for a in &accepting {
            if !states.contains(a) {
                return Err(BuildError::AcceptingNotInStates(*a));
            }
        }
        let mut map = BTreeMap::new();
        for r in rules {
            if !states.contains(&r.state) {
                return Err(BuildError::DanglingState(r.state));
            }
            if !states.contains(&r.next) {
                return Err(BuildError::DanglingState(r.next));
            }
            let key = (r.state, r.input.clone());
            if map.insert(key, (r.output, r.next)).is_some() {
                return Err(BuildError::Nondeterministic {
                    state: r.state,
                    input: r.input,
                });
            }
        }
        Ok(MeaningAutomaton {
            states,
            initial,
            accepting,
            rules: map,
        })
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting.contains(&s)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Rules in (state, input) order.
    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.rules.iter().map(|((state, input), (output, next))| Rule {
            state: *state,
            input: input.clone(),
            output: output.clone(),
            next: *next,
        })
    }

    pub fn step(&self, state: StateId, input: &Token) -> Option<(&Option<Token>, StateId)> {
        self.rules
            .get(&(state, input.clone()))
            .map(|(out, next)| (out, *next))
    }

    /// Distinct tokens over rule inputs and outputs; the empty marker does
    /// not count, the separator does when it appears in a rule.
    pub fn symbol_count(&self) -> usize {
        let mut symbols = BTreeSet::new();
        for ((_, input), (output, _)) in &self.rules {
            symbols.insert(input.clone());
            if let Some(out) = output {
                symbols.insert(out.clone());
            }
        }
        symbols.len()
    }

    /// Runs the machine on `input`, returning the last non-empty output of
    /// an accepting run.
    pub fn run(&self, input: &[Token]) -> Result<Token, RunError> {
        if input.is_empty() {
            return Err(RunError::EmptyInput);
        }
        let mut state = self.initial;
        let mut answer: Option<Token> = None;
        for tok in input {
            let (output, next) = self.step(state, tok).ok_or_else(|| RunError::NoRule {
                state,
                input: tok.clone(),
            })?;
            if let Some(out) = output {
                answer = Some(out.clone());
            }
            state = next;
        }
        if !self.is_accepting(state) {
            return Err(RunError::NotAccepting(state));
        }
        answer.ok_or(RunError::NoOutput)
    }
}

/// Linearizes a (question, sentence) pair as `[q.id, ##, s...]`.
pub fn encode_input(q: &Question, sentence: &[Token]) -> Result<Vec<Token>, EncodeError> {
    if sentence.is_empty() {
        return Err(EncodeError::EmptySentence);
    }
    if q.id.is_separator() {
        return Err(EncodeError::SeparatorAsQuestionId);
    }
    if sentence.iter().any(Token::is_separator) {
        return Err(EncodeError::SeparatorInSentence);
    }
    let mut out = Vec::with_capacity(sentence.len() + 2);
    out.push(q.id.clone());
    out.push(Token::separator());
    out.extend_from_slice(sentence);
    Ok(out)
}

/// What the machine actually produced for a table entry, when it differs
/// from the expected answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observed {
    Answer(Token),
    Failed(RunError),
    EncodeFailed(EncodeError),
}

impl std::fmt::Display for Observed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Observed::Answer(t) => write!(f, "{t}"),
            Observed::Failed(e) => write!(f, "error: {e}"),
            Observed::EncodeFailed(e) => write!(f, "error: {e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub question: Token,
    pub sentence: Vec<Token>,
    pub expected: Token,
    pub got: Observed,
}

fn check_entry(m: &MeaningAutomaton, e: &crate::table::QaEntry) -> Option<Mismatch> {
    let got = match encode_input(&e.question, &e.sentence) {
        Ok(encoded) => match m.run(&encoded) {
            Ok(answer) if answer == e.answer => return None,
            Ok(answer) => Observed::Answer(answer),
            Err(err) => Observed::Failed(err),
        },
        Err(err) => Observed::EncodeFailed(err),
    };
    Some(Mismatch {
        question: e.question.id.clone(),
        sentence: e.sentence.clone(),
        expected: e.answer.clone(),
        got,
    })
}

/// Checks the meaning constraint M(s,q) = q(s) entry by entry; mismatches
/// are data, not errors. Empty result means `m` is a meaning automaton
/// for `t`.
#[cfg(feature = "parallel")]
pub fn verify(m: &MeaningAutomaton, t: &QaTable) -> Vec<Mismatch> {
    use rayon::prelude::*;
    t.entries()
        .par_iter()
        .filter_map(|e| check_entry(m, e))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn verify(m: &MeaningAutomaton, t: &QaTable) -> Vec<Mismatch> {
    verify_serial(m, t)
}

/// Single-threaded verify; same result as [`verify`] in the same order.
pub fn verify_serial(m: &MeaningAutomaton, t: &QaTable) -> Vec<Mismatch> {
    t.entries().iter().filter_map(|e| check_entry(m, e)).collect()
}

/// The paper's four abstraction levels a complexity figure can refer to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Level {
    #[default]
    ATask,
    BEngine,
    CProgram,
    DPerformance,
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Level::ATask => f.write_str("A"),
            Level::BEngine => f.write_str("B"),
            Level::CProgram => f.write_str("C"),
            Level::DPerformance => f.write_str("D"),
        }
    }
}

/// State/symbol/rule counts and the two derived size measures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityReport {
    pub state_count: usize,
    pub symbol_count: usize,
    pub state_symbol: usize,
    pub rule_count: usize,
    pub t_rule: usize,
    pub level: Level,
}

impl ComplexityReport {
    pub fn of(m: &MeaningAutomaton, level: Level) -> Self {
        let state_count = m.state_count();
        let symbol_count = m.symbol_count();
        let rule_count = m.rule_count();
        ComplexityReport {
            state_count,
            symbol_count,
            state_symbol: state_count * symbol_count,
            rule_count,
            t_rule: 4 * rule_count,
            level,
        }
    }
}

/// (Number of states) x (number of distinct symbols).
pub fn state_symbol_complexity(m: &MeaningAutomaton) -> ComplexityReport {
    ComplexityReport::of(m, Level::ATask)
}

/// 4 x (number of four-column rules).
pub fn t_rule_complexity(m: &MeaningAutomaton) -> ComplexityReport {
    ComplexityReport::of(m, Level::ATask)
}

/// Builds the two-state machine with one rule `(1, u, def_u, acc)` per
/// definition: ask about `u`, get its definition.
pub fn build_what_machine(defs: &BTreeMap<Token, Token>) -> MeaningAutomaton {
    let start = StateId(1);
    let acc = StateId(2);
    let rules = defs
        .iter()
        .map(|(u, def)| Rule {
            state: start,
            input: u.clone(),
            output: Some(def.clone()),
            next: acc,
        })
        .collect();
    MeaningAutomaton::new(
        [start, acc].into_iter().collect(),
        start,
        [acc].into_iter().collect(),
        rules,
    )
    .expect("what-machine construction is always deterministic")
}

// --- automaton file format ---

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    BadToken { line: usize, source: TokenError },
    #[error("line {line}: determinism violation: {source}")]
    Determinism { line: usize, source: BuildError },
    #[error("missing 'initial' directive")]
    MissingInitial,
    #[error("{0}")]
    Build(BuildError),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_state(line: usize, field: &str) -> Result<StateId, ParseError> {
    field
        .parse::<u32>()
        .map(StateId)
        .map_err(|_| syntax(line, format!("invalid state id {field:?}")))
}

/// Parses the line-oriented automaton format:
/// `initial <state>`, `accept <state>...`, `rule <state> <input> <output|-> <next>`,
/// `#` comments. The state set is the union of all mentioned states; states
/// not reached by any directive can be declared with `state <state>...`.
pub fn parse_automaton(text: &str) -> Result<MeaningAutomaton, ParseError> {
    let mut initial: Option<StateId> = None;
    let mut accepting: BTreeSet<StateId> = BTreeSet::new();
    let mut states: BTreeSet<StateId> = BTreeSet::new();
    let mut rules: Vec<(usize, Rule)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(' ').filter(|f| !f.is_empty()).collect();
        match fields[0] {
            "initial" => {
                if fields.len() != 2 {
                    return Err(syntax(line, "expected: initial <state>"));
                }
                if initial.is_some() {
                    return Err(syntax(line, "duplicate 'initial' directive"));
                }
                let s = parse_state(line, fields[1])?;
                states.insert(s);
                initial = Some(s);
            }
            "state" => {
                if fields.len() < 2 {
                    return Err(syntax(line, "expected: state <state> [<state>...]"));
                }
                for f in &fields[1..] {
                    states.insert(parse_state(line, f)?);
                }
            }
            "accept" => {
                if fields.len() < 2 {
                    return Err(syntax(line, "expected: accept <state> [<state>...]"));
                }
                for f in &fields[1..] {
                    let s = parse_state(line, f)?;
                    states.insert(s);
                    accepting.insert(s);
                }
            }
            "rule" => {
                if fields.len() != 5 {
                    return Err(syntax(
                        line,
                        "expected: rule <state> <input> <output|-> <next>",
                    ));
                }
                let state = parse_state(line, fields[1])?;
                let input = Token::new(fields[2])
                    .map_err(|source| ParseError::BadToken { line, source })?;
                let output = if fields[3] == "-" {
                    None
                } else {
                    Some(
                        Token::new(fields[3])
                            .map_err(|source| ParseError::BadToken { line, source })?,
                    )
                };
                let next = parse_state(line, fields[4])?;
                states.insert(state);
                states.insert(next);
                rules.push((
                    line,
                    Rule {
                        state,
                        input,
                        output,
                        next,
                    },
                ));
            }
            other => return Err(syntax(line, format!("unknown directive {other:?}"))),
        }
    }

    let initial = initial.ok_or(ParseError::MissingInitial)?;

    // detect determinism violations with a line number before handing off
    let mut seen: BTreeMap<(StateId, Token), usize> = BTreeMap::new();
    for (line, r) in &rules {
        if seen.insert((r.state, r.input.clone()), *line).is_some() {
            return Err(ParseError::Determinism {
                line: *line,
                source: BuildError::Nondeterministic {
                    state: r.state,
                    input: r.input.clone(),
                },
            });
        }
    }

    MeaningAutomaton::new(
        states,
        initial,
        accepting,
        rules.into_iter().map(|(_, r)| r).collect(),
    )
    .map_err(ParseError::Build)
}

/// Renders a machine in the automaton file format; output is deterministic
/// (accepting states and rules sorted).
pub fn render_automaton(m: &MeaningAutomaton) -> String {
    let mut out = String::new();
    out.push_str(&format!("initial {}\n", m.initial()));
    // states not mentioned by any other directive need explicit declaration
    let mut mentioned: BTreeSet<StateId> = m.accepting().clone();
    mentioned.insert(m.initial());
    for r in m.rules() {
        mentioned.insert(r.state);
        mentioned.insert(r.next);
    }
    let isolated: Vec<String> = m
        .states()
        .iter()
        .filter(|s| !mentioned.contains(s))
        .map(|s| s.to_string())
        .collect();
    if !isolated.is_empty() {
        out.push_str(&format!("state {}\n", isolated.join(" ")));
    }
    if !m.accepting().is_empty() {
        let accs: Vec<String> = m.accepting().iter().map(|s| s.to_string()).collect();
        out.push_str(&format!("accept {}\n", accs.join(" ")));
    }
    for r in m.rules() {
        let output = r
            .output
            .as_ref()
            .map_or_else(|| "-".to_string(), |t| t.to_string());
        out.push_str(&format!("rule {} {} {} {}\n", r.state, r.input, output, r.next));
    }
    out
}

/// Enumerates a QA table from a machine's accepting single-step behavior
/// on encoded inputs; used for fixtures and cross-checks. Walks every
/// input sequence of the form the encoder produces that the machine covers.
pub fn table_from_machine(m: &MeaningAutomaton, max_len: usize) -> QaTable {
    use crate::table::QaEntry;
    let mut entries = Vec::new();
    // depth-first over rule paths from the initial state
    let mut stack: Vec<(StateId, Vec<Token>)> = vec![(m.initial(), Vec::new())];
    while let Some((state, path)) = stack.pop() {
        if path.len() >= max_len {
            continue;
        }
        for r in m.rules().filter(|r| r.state == state) {
            let mut next_path = path.clone();
            next_path.push(r.input.clone());
            if m.is_accepting(r.next) {
                if let Ok(answer) = m.run(&next_path) {
                    // decode [q, ##, s...] back into a table entry
                    if next_path.len() >= 3 && next_path[1].is_separator() {
                        entries.push(QaEntry {
                            question: Question::wh(next_path[0].clone()),
                            sentence: next_path[2..].to_vec(),
                            answer,
                        });
                    }
                }
            }
            stack.push((r.next, next_path));
        }
    }
    entries.sort_by(|a, b| {
        (&a.question.id, &a.sentence, &a.answer).cmp(&(&b.question.id, &b.sentence, &b.answer))
    });
    entries.dedup();
    QaTable::new(entries).expect("machine-derived table is functional by determinism")
}
