use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qx::automaton::{self, ComplexityReport, Level};
use qx::estimator::{self, TaskProfile};
use qx::report::{Format, Report};
use qx::semantics::{self, AnswerLinkGraph};
use qx::synthesis;
use qx::table::QaTable;
use qx::token::{self, Token};
use qx::zipf::{self, RankTable};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qx",
    about = "Build, validate, synthesize and size question-answering automata",
    version
)]
struct Cli {
    /// Output format: human text or tab-separated key-value lines
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Abstraction level the reported figures refer to
    #[arg(long, global = true, value_enum, default_value_t = LevelArg::A)]
    level: LevelArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Kv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Kv => Format::Kv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    A,
    B,
    C,
    D,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::A => Level::ATask,
            LevelArg::B => Level::BEngine,
            LevelArg::C => Level::CProgram,
            LevelArg::D => Level::DPerformance,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    StateSymbol,
    TRule,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Check an automaton against a QA table; exit 1 on mismatches
    Validate {
        automaton: PathBuf,
        table: PathBuf,
    },
    /// Report the size measures of an automaton
    Complexity {
        automaton: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureArg::Both)]
        measure: MeasureArg,
    },
    /// Synthesize a (minimized) automaton from a QA table
    Synth {
        table: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_minimize: bool,
    },
    /// Count askable items reachable in k rounds over an answer-link graph
    Iterate {
        graph: PathBuf,
        init: PathBuf,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
    /// Fit a rank-frequency power law to a whitespace-tokenized corpus
    Zipf {
        corpus: PathBuf,
        #[arg(long)]
        coverage: Option<f64>,
        #[arg(long)]
        min_freq: Option<u64>,
    },
    /// Derive complexity estimates from a task profile
    Estimate { profile: PathBuf },
}

struct InputError(String);

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<automaton::MeaningAutomaton, InputError> {
    let text = read(path)?;
    automaton::parse_automaton(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<QaTable, InputError> {
    let text = read(path)?;
    QaTable::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = cli.format.into();
    let level: Level = cli.level.into();
    match run(cli.command, format, level) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}

fn run(command: Command, format: Format, level: Level) -> Result<ExitCode, InputError> {
    match command {
        Command::Validate { automaton, table } => {
            let m = load_automaton(&automaton)?;
            let t = load_table(&table)?;
            let mismatches = automaton::verify(&m, &t);
            let mut report = Report::new("validate", level);
            report
                .input("automaton", automaton.display())
                .input("table", table.display())
                .result("entries", t.len())
                .result("mismatches", mismatches.len());
            for mm in &mismatches {
                report.result(
                    "mismatch",
                    format!(
                        "question={} sentence={} expected={} got={}",
                        mm.question,
                        token::join(&mm.sentence),
                        mm.expected,
                        mm.got
                    ),
                );
            }
            print!("{}", report.render(format));
            Ok(if mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_MISMATCH)
            })
        }
        Command::Complexity { automaton, measure } => {
            let m = load_automaton(&automaton)?;
            let r = ComplexityReport::of(&m, level);
            let mut report = Report::new("complexity", level);
            report.input("automaton", automaton.display());
            if matches!(measure, MeasureArg::StateSymbol | MeasureArg::Both) {
                report
                    .result("state-count", r.state_count)
                    .result("symbol-count", r.symbol_count)
                    .result("state-symbol", r.state_symbol);
            }
            if matches!(measure, MeasureArg::TRule | MeasureArg::Both) {
                report
                    .result("rule-count", r.rule_count)
                    .result("t-rule", r.t_rule);
            }
            print!("{}", report.render(format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Synth {
            table,
            out,
            no_minimize,
        } => {
            let t = load_table(&table)?;
            let prefix = synthesis::build_prefix_machine(&t)
                .map_err(|e| InputError(format!("{}: {e}", table.display())))?;
            let before = prefix.machine.state_count();
            let machine = if no_minimize {
                prefix.machine
            } else {
                synthesis::minimize(&prefix.machine)
            };
            let r = ComplexityReport::of(&machine, level);
            fs::write(&out, automaton::render_automaton(&machine))
                .map_err(|e| InputError(format!("{}: {e}", out.display())))?;
            let mut report = Report::new("synth", level);
            report
                .input("table", table.display())
                .input("out", out.display())
                .result("table-size", t.len())
                .result("states-before", before)
                .result("states-after", r.state_count)
                .result("rule-count", r.rule_count)
                .result("state-symbol", r.state_symbol)
                .result("t-rule", r.t_rule)
                .note("upper bound: minimal deterministic transducer under the fixed encoding");
            print!("{}", report.render(format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Iterate {
            graph,
            init,
            rounds,
        } => {
            let g = AnswerLinkGraph::parse(&read(&graph)?)
                .map_err(|e| InputError(format!("{}: {e}", graph.display())))?;
            let initial: BTreeSet<Token> = read(&init)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| Token::new(l).map_err(|e| InputError(format!("{}: {e}", init.display()))))
                .collect::<Result<_, _>>()?;
            let reached = semantics::iterated_what(&g, &initial, rounds)
                .map_err(|e| InputError(format!("{}: {e}", init.display())))?;
            let mut report = Report::new("iterate", level);
            report
                .input("graph", graph.display())
                .input("init", init.display())
                .result("rounds", rounds)
                .result("initial-items", initial.len())
                .result("reachable", reached);
            print!("{}", report.render(format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Zipf {
            corpus,
            coverage,
            min_freq,
        } => {
            let text = read(&corpus)?;
            let tokens = token::split(&text)
                .map_err(|e| InputError(format!("{}: {e}", corpus.display())))?;
            let table = zipf::rank_frequency(&tokens)
                .map_err(|e| InputError(format!("{}: {e}", corpus.display())))?;
            let table = match min_freq {
                Some(min) => {
                    let kept: Vec<(Token, u64)> = table
                        .entries()
                        .iter()
                        .filter(|(_, _, f)| *f >= min)
                        .map(|(_, t, f)| (t.clone(), *f))
                        .collect();
                    RankTable::from_counts(kept)
                        .map_err(|e| InputError(format!("{}: {e}", corpus.display())))?
                }
                None => table,
            };
            let fit = zipf::fit_zipf(&table)
                .map_err(|e| InputError(format!("{}: {e}", corpus.display())))?;
            let mut report = Report::new("zipf", level);
            report
                .input("corpus", corpus.display())
                .result("n-ranks", fit.n_ranks)
                .result("total-tokens", table.total_frequency())
                .result("exponent", format!("{:.6}", fit.exponent))
                .result("constant", format!("{:.6}", fit.constant))
                .result("residual", format!("{:.6}", fit.residual));
            if let Some(target) = coverage {
                let k = zipf::required_rank(&table, target)
                    .map_err(|e| InputError(format!("coverage target: {e}")))?;
                report.result("required-rank", k);
            }
            print!("{}", report.render(format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate { profile } => {
            let p = TaskProfile::parse(&read(&profile)?)
                .map_err(|e| InputError(format!("{}: {e}", profile.display())))?;
            let r = estimator::full_report(&p)
                .map_err(|e| InputError(format!("{}: {e}", profile.display())))?;
            let mut report = Report::new("estimate", level);
            report
                .input("profile", profile.display())
                .result("kb-facts", r.kb_facts)
                .result("domain", r.domain_class)
                .result("situation-bound", r.situation_bound)
                .result("dialog-states-low", r.dialog_states.0)
                .result("dialog-states-high", r.dialog_states.1)
                .result("narrative-low", r.narrative_range.0)
                .result("narrative-high", r.narrative_range.1);
            if let Some(k) = r.grammar_constructions {
                report.result("grammar-constructions", k);
            }
            for note in &r.notes {
                report.note(note);
            }
            print!("{}", report.render(format));
            Ok(ExitCode::SUCCESS)
        }
    }
}
