//! End-to-end acceptance suite. Each test covers one criterion and prints
//! a pass line; run with `cargo test --test acceptance -- --nocapture` to
//! see them.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::process::Command;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use qx::automaton::{
    build_what_machine, parse_automaton, verify_serial, ComplexityReport, Level,
    MeaningAutomaton, Rule, StateId,
};
use qx::semantics::{help_system_fixture, iterated_what, AnswerLinkGraph};
use qx::synthesis::{build_prefix_machine, minimize};
use qx::table::{QaEntry, QaTable};
use qx::token::{Question, Token};
use qx::zipf;

fn tok(s: &str) -> Token {
    Token::new(s).unwrap()
}

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn pass(criterion: &str) {
    println!("PASS {criterion}");
}

// --- independent oracle: pairwise distinguishability by BFS over state pairs ---

/// Counts behavioral equivalence classes among reachable states by the
/// table-filling method: a pair is marked distinguishable if acceptance,
/// defined inputs, or outputs differ, then marks propagate backwards until
/// fixpoint. Independent of the partition-refinement implementation.
fn oracle_minimal_state_count(m: &MeaningAutomaton) -> usize {
    let mut reachable: Vec<StateId> = Vec::new();
    {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([m.initial()]);
        seen.insert(m.initial());
        while let Some(s) = queue.pop_front() {
            reachable.push(s);
            for r in m.rules().filter(|r| r.state == s) {
                if seen.insert(r.next) {
                    queue.push_back(r.next);
                }
            }
        }
    }
    reachable.sort();

    let sig = |s: StateId| -> BTreeMap<Token, (Option<Token>, StateId)> {
        m.rules()
            .filter(|r| r.state == s)
            .map(|r| (r.input, (r.output, r.next)))
            .collect()
    };
    let sigs: HashMap<StateId, BTreeMap<Token, (Option<Token>, StateId)>> =
        reachable.iter().map(|&s| (s, sig(s))).collect();

    let mut distinguishable: HashSet<(StateId, StateId)> = HashSet::new();
    for (i, &p) in reachable.iter().enumerate() {
        for &q in &reachable[i + 1..] {
            let sp = &sigs[&p];
            let sq = &sigs[&q];
            let immediately = m.is_accepting(p) != m.is_accepting(q)
                || sp.keys().collect::<Vec<_>>() != sq.keys().collect::<Vec<_>>()
                || sp
                    .iter()
                    .any(|(input, (out, _))| sq[input].0 != *out);
            if immediately {
                distinguishable.insert((p, q));
            }
        }
    }
    // propagate: bounded by the number of state pairs, i.e. suffixes up to
    // the machine's state count
    loop {
        let mut changed = false;
        for (i, &p) in reachable.iter().enumerate() {
            for &q in &reachable[i + 1..] {
                if distinguishable.contains(&(p, q)) {
                    continue;
                }
                for (input, (_, pn)) in &sigs[&p] {
                    let (_, qn) = &sigs[&q][input];
                    let key = if pn < qn { (*pn, *qn) } else { (*qn, *pn) };
                    if pn != qn && distinguishable.contains(&key) {
                        distinguishable.insert((p, q));
                        changed = true;
                        break;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    // count classes via union of unmarked pairs
    let mut class_of: HashMap<StateId, usize> = HashMap::new();
    let mut classes = 0usize;
    for (i, &p) in reachable.iter().enumerate() {
        if class_of.contains_key(&p) {
            continue;
        }
        class_of.insert(p, classes);
        for &q in &reachable[i + 1..] {
            if !class_of.contains_key(&q) && !distinguishable.contains(&(p, q)) {
                class_of.insert(q, classes);
            }
        }
        classes += 1;
    }
    classes
}

// --- random generators ---

fn random_table(rng: &mut ChaCha8Rng) -> QaTable {
    let questions: Vec<Token> = (0..3).map(|i| tok(&format!("q{i}"))).collect();
    let words: Vec<Token> = (0..5).map(|i| tok(&format!("w{i}"))).collect();
    let answers: Vec<Token> = (0..3).map(|i| tok(&format!("a{i}"))).collect();
    let n = rng.gen_range(1..=8);
    let mut seen: HashSet<(Token, Vec<Token>)> = HashSet::new();
    let mut entries = Vec::new();
    for _ in 0..n {
        let q = questions.choose(rng).unwrap().clone();
        let len = rng.gen_range(1..=4);
        let sentence: Vec<Token> = (0..len)
            .map(|_| words.choose(rng).unwrap().clone())
            .collect();
        if seen.insert((q.clone(), sentence.clone())) {
            entries.push(QaEntry {
                question: Question::wh(q),
                sentence,
                answer: answers.choose(rng).unwrap().clone(),
            });
        }
    }
    QaTable::new(entries).unwrap()
}

fn random_machine(rng: &mut ChaCha8Rng) -> MeaningAutomaton {
    let n_states = rng.gen_range(1..=10u32);
    let states: BTreeSet<StateId> = (0..n_states).map(StateId).collect();
    let alphabet: Vec<Token> = (0..rng.gen_range(1..=5))
        .map(|i| tok(&format!("t{i}")))
        .collect();
    let outputs: Vec<Option<Token>> = vec![
        None,
        Some(tok("x")),
        Some(tok("y")),
    ];
    let mut rules = Vec::new();
    for s in 0..n_states {
        for input in &alphabet {
            if rng.gen_bool(0.7) {
                rules.push(Rule {
                    state: StateId(s),
                    input: input.clone(),
                    output: outputs.choose(rng).unwrap().clone(),
                    next: StateId(rng.gen_range(0..n_states)),
                });
            }
        }
    }
    let accepting: BTreeSet<StateId> = (0..n_states)
        .map(StateId)
        .filter(|_| rng.gen_bool(0.4))
        .collect();
    MeaningAutomaton::new(states, StateId(0), accepting, rules).unwrap()
}

fn random_graph(rng: &mut ChaCha8Rng) -> (AnswerLinkGraph, BTreeSet<Token>, usize) {
    let n = rng.gen_range(1..=40usize);
    let items: Vec<Token> = (0..n).map(|i| tok(&format!("n{i}"))).collect();
    let mut g = AnswerLinkGraph::new();
    for item in &items {
        g.add_node(item.clone());
    }
    for _ in 0..rng.gen_range(0..=3 * n) {
        let a = items.choose(rng).unwrap().clone();
        let b = items.choose(rng).unwrap().clone();
        g.add_edge(a, b);
    }
    let initial: BTreeSet<Token> = items
        .iter()
        .filter(|_| rng.gen_bool(0.3))
        .cloned()
        .chain(std::iter::once(items[0].clone()))
        .collect();
    let k = rng.gen_range(0..=4);
    (g, initial, k)
}

/// Naive bounded-depth reach count, written independently of the library's
/// queue-based version: k rounds of expanding the whole frontier set.
fn bfs_oracle(g: &AnswerLinkGraph, initial: &BTreeSet<Token>, k: usize) -> usize {
    let mut seen: BTreeSet<Token> = initial.clone();
    let mut frontier: BTreeSet<Token> = initial.clone();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for item in &frontier {
            for succ in g.successors(item) {
                if !seen.contains(succ) {
                    next.insert(succ.clone());
                }
            }
        }
        seen.extend(next.iter().cloned());
        frontier = next;
    }
    seen.len()
}

// --- criteria ---

#[test]
fn criterion_01_eliza_t_rule() {
    let m = parse_automaton(&fixture("eliza.qam")).unwrap();
    assert_eq!(m.rule_count(), 118);
    let r = ComplexityReport::of(&m, Level::ATask);
    assert_eq!(r.t_rule, 472);
    // the fixture also satisfies the meaning constraint on its own table
    let t = QaTable::parse(&fixture("eliza_table.tsv")).unwrap();
    assert_eq!(t.len(), 100);
    assert!(verify_serial(&m, &t).is_empty());
    pass("1: ELIZA fixture has 118 rules and t_rule 472");
}

#[test]
fn criterion_02_yes_no_state_symbol() {
    let m = parse_automaton(&fixture("yesno.qam")).unwrap();
    let r = ComplexityReport::of(&m, Level::ATask);
    assert_eq!(r.state_count, 2);
    assert_eq!(r.symbol_count, 3);
    assert_eq!(r.state_symbol, 6);
    assert_eq!(m.run(&[tok("q")]).unwrap(), tok("yes"));
    pass("2: yes/no fixture has state_symbol 6 = 2 x 3");
}

#[test]
fn criterion_03_what_machine_schema() {
    for size in [1usize, 10, 50] {
        let defs: BTreeMap<Token, Token> = (0..size)
            .map(|i| (tok(&format!("u{i}")), tok(&format!("def{i}"))))
            .collect();
        let m = build_what_machine(&defs);
        let r = ComplexityReport::of(&m, Level::ATask);
        assert_eq!(r.rule_count, size);
        assert_eq!(r.t_rule, 4 * size);
        for (u, def) in &defs {
            assert_eq!(m.run(std::slice::from_ref(u)).unwrap(), *def);
        }
    }
    pass("3: what-machine has rule_count |U| and t_rule 4|U| for |U| in {1,10,50}");
}

#[test]
fn criterion_04_minimization_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9a4a);
    for _ in 0..200 {
        let table = random_table(&mut rng);
        let prefix = build_prefix_machine(&table).unwrap();
        let minimized = minimize(&prefix.machine);
        assert_eq!(
            minimized.state_count(),
            oracle_minimal_state_count(&prefix.machine),
            "partition refinement disagrees with the distinguishability oracle"
        );
        assert!(verify_serial(&minimized, &table).is_empty());
    }
    pass("4: minimize matches the brute-force oracle and verifies on 200 random tables");
}

#[test]
fn criterion_05_minimization_ordering_and_idempotence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ed);
    for _ in 0..500 {
        let m = random_machine(&mut rng);
        let once = minimize(&m);
        assert!(once.state_count() <= m.state_count());
        let twice = minimize(&once);
        assert_eq!(once.state_count(), twice.state_count());
        assert_eq!(once, twice, "minimize is not a fixpoint after one pass");
    }
    pass("5: minimize is ordering-sound and idempotent on 500 random machines");
}

#[test]
fn criterion_06_iterated_complexity() {
    let (g, initial) = help_system_fixture();
    assert_eq!(iterated_what(&g, &initial, 2).unwrap(), 3000);

    let mut rng = ChaCha8Rng::seed_from_u64(0x17e2);
    for _ in 0..100 {
        let (g, initial, k) = random_graph(&mut rng);
        assert_eq!(
            iterated_what(&g, &initial, k).unwrap(),
            bfs_oracle(&g, &initial, k)
        );
    }
    pass("6: 200/14 fixture reaches 3000 at k=2; iterated_what matches the BFS oracle on 100 graphs");
}

#[test]
fn criterion_07_zipf_recovery() {
    // real-valued exact law, s = 1.0, N = 100
    let points: Vec<(f64, f64)> = (1..=100)
        .map(|r| (r as f64, 1234.0 * (r as f64).powf(-1.0)))
        .collect();
    let fit = zipf::fit_zipf_points(&points).unwrap();
    assert!((fit.exponent - 1.0).abs() < 1e-3);

    // integer-rounded corpus, N = 1000
    let counts: Vec<(Token, u64)> = (1..=1000)
        .map(|r| {
            (
                tok(&format!("w{r}")),
                (1_000_000.0 / r as f64).round().max(1.0) as u64,
            )
        })
        .collect();
    let table = zipf::RankTable::from_counts(counts).unwrap();
    let fit = zipf::fit_zipf(&table).unwrap();
    assert!(
        (fit.exponent - 1.0).abs() < 0.05,
        "rounded-Zipf exponent was {}",
        fit.exponent
    );

    assert_eq!(zipf::coverage(&table, 1000).unwrap(), 1.0);
    let mut last = 0.0;
    for k in 1..=1000 {
        let c = zipf::coverage(&table, k).unwrap();
        assert!(c >= last);
        last = c;
    }
    pass("7: fit_zipf recovers s=1 within tolerance; coverage is total and monotone");
}

#[test]
fn criterion_08_harmonic_coverage() {
    // direct harmonic oracle
    let h = |n: usize| (1..=n).map(|r| 1.0 / r as f64).sum::<f64>();
    assert!(h(5) / h(30) >= 0.57 && h(4) / h(30) < 0.57);
    assert_eq!(zipf::estimate_constructions(30, 0.57, 1.0), 5);
    pass("8: estimate_constructions(30, 0.57, 1.0) = 5, matching H_5/H_30");
}

#[test]
fn criterion_09_estimator_figures() {
    use qx::estimator::*;
    let mut p = TaskProfile {
        concepts: 20,
        ..TaskProfile::default()
    };
    assert_eq!(estimate_kb_facts(&p), 200);
    p.concepts = 300;
    assert_eq!(estimate_kb_facts(&p), 3000);
    assert!(full_report(&p)
        .unwrap()
        .notes
        .iter()
        .any(|n| n.contains("expert-system limit")));

    p.concepts = 299;
    assert_eq!(classify_domain(&p), DomainClass::Small);
    p.concepts = 300;
    assert_eq!(classify_domain(&p), DomainClass::Large);

    assert_eq!(situation_bound(&atm_actions()).unwrap(), 26);

    let boris = TaskProfile {
        vocab: 350,
        dialog_rounds: 5,
        ..TaskProfile::default()
    };
    let (low, high) = narrative_estimate(&boris);
    assert_eq!(low.value, 112_000);
    assert_eq!(high.value, 10_937_500);
    pass("9: estimator reproduces 200/3000 facts, the 299|300 boundary, bound 26, and the 10^5..10^7 band");
}

#[test]
fn criterion_10_cli_determinism_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_qx");
    let fx = |name: &str| format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));

    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    // byte-identical output across two consecutive runs, per command
    let invocations: Vec<Vec<String>> = vec![
        vec!["validate".into(), fx("what_range.qam"), fx("what_range.tsv")],
        vec!["complexity".into(), fx("eliza.qam")],
        vec!["zipf".into(), fx("corpus.txt"), "--coverage".into(), "0.5".into()],
        vec!["estimate".into(), fx("atm.profile")],
        vec!["estimate".into(), "--format".into(), "kv".into(), fx("atm.profile")],
    ];
    for args in &invocations {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&argv);
        let b = run(&argv);
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {argv:?}");
        assert!(a.status.success());
    }

    // exit-code contract: 0 success, 1 mismatch, 2 malformed input
    let ok = run(&["validate", &fx("what_range.qam"), &fx("what_range.tsv")]);
    assert_eq!(ok.status.code(), Some(0));
    let mismatch = run(&["validate", &fx("what_range.qam"), &fx("what_range_flipped.tsv")]);
    assert_eq!(mismatch.status.code(), Some(1));
    let malformed = run(&["complexity", &fx("bad.qam")]);
    assert_eq!(malformed.status.code(), Some(2));
    pass("10: CLI output is byte-identical across runs and the 0/1/2 exit contract holds");
}
