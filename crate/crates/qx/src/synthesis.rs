//! Machine synthesis from QA tables.
//!
//! A table is turned into a prefix-tree transducer over encoded inputs and
//! then minimized by partition refinement. The minimized machine is the
//! computable surrogate for the smallest machine consistent with the table:
//! the true minimum over all model schemes is not computable, so the result
//! is an upper bound on the table's Q-complexity.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::automaton::{
    encode_input, ComplexityReport, EncodeError, Level, MeaningAutomaton, Rule, StateId,
};
use crate::table::QaTable;
use crate::token::Token;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("empty table")]
    EmptyTable,
    #[error("table entry cannot be encoded: {0}")]
    Encode(#[from] EncodeError),
}

/// A trie-shaped transducer: one path per table entry, answer emitted on
/// the final transition of the path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixMachine {
    pub machine: MeaningAutomaton,
}

/// Builds the prefix-tree transducer for a table. States are trie nodes
/// over encoded inputs; only the last transition of each entry's path
/// emits, and its target is accepting.
pub fn build_prefix_machine(t: &QaTable) -> Result<PrefixMachine, SynthesisError> {
    if t.is_empty() {
        return Err(SynthesisError::EmptyTable);
    }
    let root = StateId(0);
    let mut next_id: u32 = 1;
    let mut children: HashMap<(StateId, Token), StateId> = HashMap::new();
    let mut outputs: HashMap<(StateId, Token), Token> = HashMap::new();
    let mut accepting: BTreeSet<StateId> = BTreeSet::new();

    for e in t.entries() {
        let encoded = encode_input(&e.question, &e.sentence)?;
        let mut state = root;
        for tok in &encoded {
            let key = (state, tok.clone());
            state = *children.entry(key).or_insert_with(|| {
                let s = StateId(next_id);
                next_id += 1;
                s
            });
        }
        // the last transition of the path carries the answer
        let last = encoded.last().expect("encoded input is nonempty");
        let parent = {
            let mut s = root;
            for tok in &encoded[..encoded.len() - 1] {
                s = children[&(s, tok.clone())];
            }
            s
        };
        outputs.insert((parent, last.clone()), e.answer.clone());
        accepting.insert(state);
    }

    let mut states: BTreeSet<StateId> = BTreeSet::new();
    states.insert(root);
    let mut rules = Vec::with_capacity(children.len());
    for ((state, input), next) in &children {
        states.insert(*state);
        states.insert(*next);
        rules.push(Rule {
            state: *state,
            input: input.clone(),
            output: outputs.get(&(*state, input.clone())).cloned(),
            next: *next,
        });
    }
    let machine = MeaningAutomaton::new(states, root, accepting, rules)
        .expect("trie construction is deterministic by keying on (state, input)");
    Ok(PrefixMachine { machine })
}

/// Minimizes a deterministic transducer by partition refinement. Two states
/// end up merged iff no input suffix distinguishes their output sequence or
/// acceptance; unreachable states are dropped. States of the result are
/// renumbered in breadth-first order from the initial state.
pub fn minimize(m: &MeaningAutomaton) -> MeaningAutomaton {
    let reachable = reachable_states(m);

    // initial partition: acceptance + the (input -> output) fingerprint,
    // since differing outputs are immediately observable
    type OutputFingerprint = Vec<(Token, Option<Token>)>;
    let mut block_of: HashMap<StateId, usize> = HashMap::new();
    {
        let mut sig_to_block: BTreeMap<(bool, OutputFingerprint), usize> = BTreeMap::new();
        for &s in &reachable {
            let mut fingerprint: Vec<(Token, Option<Token>)> = m
                .rules()
                .filter(|r| r.state == s)
                .map(|r| (r.input, r.output))
                .collect();
            fingerprint.sort();
            let sig = (m.is_accepting(s), fingerprint);
            let n = sig_to_block.len();
            let block = *sig_to_block.entry(sig).or_insert(n);
            block_of.insert(s, block);
        }
    }

    // refine on successor blocks until the partition stops splitting;
    // each pass only refines, so a stable block count is the fixpoint
    loop {
        let before = block_count(&block_of);
        let mut sig_to_block: BTreeMap<(usize, Vec<(Token, usize)>), usize> = BTreeMap::new();
        let mut next_block_of: HashMap<StateId, usize> = HashMap::new();
        for &s in &reachable {
            let mut succ: Vec<(Token, usize)> = m
                .rules()
                .filter(|r| r.state == s)
                .map(|r| (r.input, block_of[&r.next]))
                .collect();
            succ.sort();
            let sig = (block_of[&s], succ);
            let n = sig_to_block.len();
            let block = *sig_to_block.entry(sig).or_insert(n);
            next_block_of.insert(s, block);
        }
        let after = sig_to_block.len();
        block_of = next_block_of;
        if after == before {
            break;
        }
    }

    quotient(m, &reachable, &block_of)
}

fn block_count(block_of: &HashMap<StateId, usize>) -> usize {
    block_of.values().collect::<BTreeSet<_>>().len()
}

fn reachable_states(m: &MeaningAutomaton) -> Vec<StateId> {
    let mut seen: BTreeSet<StateId> = BTreeSet::new();
    let mut queue = VecDeque::from([m.initial()]);
    seen.insert(m.initial());
    while let Some(s) = queue.pop_front() {
        for r in m.rules().filter(|r| r.state == s) {
            if seen.insert(r.next) {
                queue.push_back(r.next);
            }
        }
    }
    seen.into_iter().collect()
}

/// Builds the quotient machine and renumbers blocks breadth-first from the
/// initial state, visiting transitions in sorted input order.
fn quotient(
    m: &MeaningAutomaton,
    reachable: &[StateId],
    block_of: &HashMap<StateId, usize>,
) -> MeaningAutomaton {
    // representative rules per block, in sorted input order
    let mut block_rules: BTreeMap<usize, BTreeMap<Token, (Option<Token>, usize)>> =
        BTreeMap::new();
    let mut block_accepting: BTreeMap<usize, bool> = BTreeMap::new();
    for &s in reachable {
        let b = block_of[&s];
        block_accepting.insert(b, m.is_accepting(s));
        let entry = block_rules.entry(b).or_default();
        for r in m.rules().filter(|r| r.state == s) {
            entry.insert(r.input, (r.output, block_of[&r.next]));
        }
    }

    let initial_block = block_of[&m.initial()];
    let mut number_of: HashMap<usize, u32> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([initial_block]);
    number_of.insert(initial_block, 0);
    order.push(initial_block);
    while let Some(b) = queue.pop_front() {
        if let Some(rules) = block_rules.get(&b) {
            for (_, next) in rules.values() {
                if !number_of.contains_key(next) {
                    number_of.insert(*next, number_of.len() as u32);
                    order.push(*next);
                    queue.push_back(*next);
                }
            }
        }
    }

    let mut states = BTreeSet::new();
    let mut accepting = BTreeSet::new();
    let mut rules = Vec::new();
    for &b in &order {
        let id = StateId(number_of[&b]);
        states.insert(id);
        if block_accepting[&b] {
            accepting.insert(id);
        }
        if let Some(rs) = block_rules.get(&b) {
            for (input, (output, next)) in rs {
                rules.push(Rule {
                    state: id,
                    input: input.clone(),
                    output: output.clone(),
                    next: StateId(number_of[next]),
                });
            }
        }
    }
    MeaningAutomaton::new(states, StateId(0), accepting, rules)
        .expect("quotient of a deterministic machine is deterministic")
}

/// The minimized machine for a table together with its size measures.
/// The report is an upper bound on the table's true Q-complexity: it is
/// minimal only among deterministic transducers under the fixed encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QComplexityResult {
    pub machine: MeaningAutomaton,
    pub report: ComplexityReport,
    pub table_size: usize,
    pub note: String,
}

pub fn q_complexity(t: &QaTable) -> Result<QComplexityResult, SynthesisError> {
    let prefix = build_prefix_machine(t)?;
    let machine = minimize(&prefix.machine);
    let report = ComplexityReport::of(&machine, Level::ATask);
    Ok(QComplexityResult {
        machine,
        report,
        table_size: t.len(),
        note: "upper bound: minimal deterministic transducer under the fixed encoding"
            .to_string(),
    })
}
