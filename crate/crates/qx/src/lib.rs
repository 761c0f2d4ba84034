//! Question-answering automata and their complexity.
//!
//! The crate models sentence meaning extensionally: a QA table records
//! which answer each question receives for each sentence, and a meaning
//! automaton is a deterministic finite-state transducer that reproduces
//! the table when run on encoded (question, sentence) inputs. On top of
//! that sit two machine size measures (State x Symbol and T-rule),
//! synthesis of the minimal transducer for a table, iterated
//! what-complexity over answer-link graphs, Zipf rank-frequency fitting
//! for grammar size estimates, and a task-profile estimator for sizing
//! new NLP tasks.
//!
//! With the default `parallel` feature, batch verification and corpus
//! counting use rayon; disable it for a fully sequential build.

pub mod automaton;
pub mod estimator;
pub mod report;
pub mod semantics;
pub mod synthesis;
pub mod table;
pub mod token;
pub mod zipf;
