//! Order-of-magnitude complexity estimates for NLP tasks from a declarative
//! profile: knowledge-base size via the 10:1 facts-per-concept ratio, the
//! 300-concept small-domain threshold, dialog-state counts, the sum-of-
//! powers situation bound, and the geometric narrative-domain range.
//!
//! All arithmetic is exact integer with saturation flags; estimates are
//! order-of-magnitude, so no floating point is used.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::semantics::SaturatingCount;
use crate::token::{Token, TokenError};
use crate::zipf;

/// Concepts beyond this bound put a domain outside small-domain range:
/// at 10 facts per concept it would exceed the ~3000-axiom knowledge-base
/// ceiling of classic expert systems.
pub const SMALL_DOMAIN_CONCEPT_LIMIT: u64 = 300;

/// Knowledge bases at or above this axiom count are flagged as being at
/// the expert-system ceiling.
pub const EXPERT_SYSTEM_AXIOM_LIMIT: u64 = 3000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EstimatorError {
    #[error("action {name} has {params} parameters; the exact 2^p bound requires at most 16")]
    TooManyParams { name: Token, params: u32 },
    #[error("line {line}: {msg}")]
    Profile { line: usize, msg: String },
    #[error("line {line}: {source}")]
    BadToken { line: usize, source: TokenError },
}

/// One action a dialog manager can execute, with its parameter count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionSpec {
    pub name: Token,
    pub param_count: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainClass {
    Small,
    Large,
}

impl std::fmt::Display for DomainClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainClass::Small => f.write_str("small"),
            DomainClass::Large => f.write_str("large"),
        }
    }
}

/// Declarative description of an NLP task. Defaults carry the standard
/// figures: 10 facts per concept and per token, dialog growth between 2x
/// and 5x per round, 7-9 main dialog states with about 10 substates each.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskProfile {
    pub concepts: u64,
    pub vocab: u64,
    pub actions: Vec<ActionSpec>,
    pub dialog_rounds: u32,
    pub facts_per_concept: u64,
    pub facts_per_token: u64,
    pub growth_low: u64,
    pub growth_high: u64,
    pub main_states_low: u64,
    pub main_states_high: u64,
    pub substates: u64,
    /// Optional grammar-estimate inputs: (construction universe size,
    /// coverage target in (0,1], Zipf exponent).
    pub constructions: Option<(usize, f64, f64)>,
}

impl Default for TaskProfile {
    fn default() -> Self {
        TaskProfile {
            concepts: 0,
            vocab: 0,
            actions: Vec::new(),
            dialog_rounds: 0,
            facts_per_concept: 10,
            facts_per_token: 10,
            growth_low: 2,
            growth_high: 5,
            main_states_low: 7,
            main_states_high: 9,
            substates: 10,
            constructions: None,
        }
    }
}

impl TaskProfile {
    /// Parses the `key = value` profile format with repeated
    /// `action <name> <param_count>` lines and `#` comments.
    pub fn parse(text: &str) -> Result<Self, EstimatorError> {
        let mut p = TaskProfile::default();
        let mut cons: BTreeMap<&str, f64> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("action ") {
                let fields: Vec<&str> = rest.split_whitespace().collect();
                if fields.len() != 2 {
                    return Err(EstimatorError::Profile {
                        line,
                        msg: "expected: action <name> <param_count>".to_string(),
                    });
                }
                let name = Token::new(fields[0])
                    .map_err(|source| EstimatorError::BadToken { line, source })?;
                let param_count = fields[1].parse::<u32>().map_err(|_| EstimatorError::Profile {
                    line,
                    msg: format!("invalid param count {:?}", fields[1]),
                })?;
                p.actions.push(ActionSpec { name, param_count });
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| EstimatorError::Profile {
                line,
                msg: "expected: key = value".to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_u64 = |v: &str| {
                v.parse::<u64>().map_err(|_| EstimatorError::Profile {
                    line,
                    msg: format!("invalid number {v:?} for {key}"),
                })
            };
            let parse_f64 = |v: &str| {
                v.parse::<f64>().map_err(|_| EstimatorError::Profile {
                    line,
                    msg: format!("invalid number {v:?} for {key}"),
                })
            };
            match key {
                "concepts" => p.concepts = parse_u64(value)?,
                "vocab" => p.vocab = parse_u64(value)?,
                "dialog_rounds" => {
                    p.dialog_rounds =
                        value.parse::<u32>().map_err(|_| EstimatorError::Profile {
                            line,
                            msg: format!("invalid number {value:?} for dialog_rounds"),
                        })?
                }
                "facts_per_concept" => p.facts_per_concept = parse_u64(value)?,
                "facts_per_token" => p.facts_per_token = parse_u64(value)?,
                "growth_low" => p.growth_low = parse_u64(value)?,
                "growth_high" => p.growth_high = parse_u64(value)?,
                "main_states_low" => p.main_states_low = parse_u64(value)?,
                "main_states_high" => p.main_states_high = parse_u64(value)?,
                "substates" => p.substates = parse_u64(value)?,
                "construction_universe" => {
                    cons.insert("universe", parse_u64(value)? as f64);
                }
                "construction_target" => {
                    cons.insert("target", parse_f64(value)?);
                }
                "construction_exponent" => {
                    cons.insert("exponent", parse_f64(value)?);
                }
                other => {
                    return Err(EstimatorError::Profile {
                        line,
                        msg: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        if p.growth_low > p.growth_high {
            return Err(EstimatorError::Profile {
                line: 0,
                msg: "growth_low exceeds growth_high".to_string(),
            });
        }
        if let Some(universe) = cons.get("universe") {
            let target = cons.get("target").copied().unwrap_or(0.9);
            let exponent = cons.get("exponent").copied().unwrap_or(1.0);
            p.constructions = Some((*universe as usize, target, exponent));
        }
        Ok(p)
    }
}

/// Knowledge-base size: concepts x facts-per-concept.
pub fn estimate_kb_facts(p: &TaskProfile) -> u64 {
    p.concepts.saturating_mul(p.facts_per_concept)
}

/// Small iff fewer than 300 concepts.
pub fn classify_domain(p: &TaskProfile) -> DomainClass {
    if p.concepts < SMALL_DOMAIN_CONCEPT_LIMIT {
        DomainClass::Small
    } else {
        DomainClass::Large
    }
}

/// Upper bound on distinct parameter-presence situations: sum of 2^p over
/// all actions.
pub fn situation_bound(actions: &[ActionSpec]) -> Result<u64, EstimatorError> {
    let mut total: u64 = 0;
    for a in actions {
        if a.param_count > 16 {
            return Err(EstimatorError::TooManyParams {
                name: a.name.clone(),
                params: a.param_count,
            });
        }
        total += 1u64 << a.param_count;
    }
    Ok(total)
}

/// Dialog-state range: (main states low..high) x average substates.
pub fn estimate_dialog_states(p: &TaskProfile) -> (u64, u64) {
    (
        p.main_states_low.saturating_mul(p.substates),
        p.main_states_high.saturating_mul(p.substates),
    )
}

/// Geometric reconstruction of the narrative-domain range: each dialog
/// round multiplies the askable space by a growth factor between
/// `growth_low` and `growth_high`, starting from vocab x facts-per-token.
pub fn narrative_estimate(p: &TaskProfile) -> (SaturatingCount, SaturatingCount) {
    let base = p.vocab.saturating_mul(p.facts_per_token);
    let bound = |growth: u64| {
        let mut value = base;
        let mut saturated = p.vocab.checked_mul(p.facts_per_token).is_none();
        for _ in 0..p.dialog_rounds {
            match value.checked_mul(growth) {
                Some(v) => value = v,
                None => {
                    value = u64::MAX;
                    saturated = true;
                    break;
                }
            }
        }
        SaturatingCount { value, saturated }
    };
    (bound(p.growth_low), bound(p.growth_high))
}

/// The aggregated estimate for a task profile.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub kb_facts: u64,
    pub domain_class: DomainClass,
    pub situation_bound: u64,
    pub dialog_states: (u64, u64),
    pub narrative_range: (u64, u64),
    pub grammar_constructions: Option<usize>,
    pub notes: Vec<String>,
}

/// Runs every estimator over the profile and collects notes: the
/// small/large verdict, the expert-system ceiling flag, saturation flags,
/// and the grammar estimate when construction parameters are supplied.
pub fn full_report(p: &TaskProfile) -> Result<EstimateReport, EstimatorError> {
    let kb_facts = estimate_kb_facts(p);
    let domain_class = classify_domain(p);
    let situation = situation_bound(&p.actions)?;
    let dialog_states = estimate_dialog_states(p);
    let (low, high) = narrative_estimate(p);

    let mut notes = Vec::new();
    match domain_class {
        DomainClass::Small => notes.push("domain is small (under 300 concepts)".to_string()),
        DomainClass::Large => notes.push("not a small domain (300+ concepts)".to_string()),
    }
    if kb_facts >= EXPERT_SYSTEM_AXIOM_LIMIT {
        notes.push(format!(
            "knowledge base of {kb_facts} facts is at or beyond the expert-system limit of {EXPERT_SYSTEM_AXIOM_LIMIT} axioms"
        ));
    }
    if low.saturated || high.saturated {
        notes.push("narrative range saturated 64-bit arithmetic".to_string());
    }
    notes.push(
        "narrative range is a reconstruction: vocab x facts-per-token x growth^rounds"
            .to_string(),
    );

    let grammar_constructions = p.constructions.map(|(universe, target, exponent)| {
        let k = zipf::estimate_constructions(universe, target, exponent);
        notes.push(format!(
            "grammar estimate: {k} of {universe} constructions cover target {target}"
        ));
        k
    });

    Ok(EstimateReport {
        kb_facts,
        domain_class,
        situation_bound: situation,
        dialog_states,
        narrative_range: (low.value, high.value),
        grammar_constructions,
        notes,
    })
}

/// The nine-action ATM inventory used as a worked estimation example:
/// transfer/3, withdraw/2, deposit/2, pay/1, inquire/1, summary/1, ok/1,
/// quit/0, help/0.
pub fn atm_actions() -> Vec<ActionSpec> {
    [
        ("transfer", 3),
        ("withdraw", 2),
        ("deposit", 2),
        ("pay", 1),
        ("inquire", 1),
        ("summary", 1),
        ("ok", 1),
        ("quit", 0),
        ("help", 0),
    ]
    .into_iter()
    .map(|(name, param_count)| ActionSpec {
        name: Token::new(name).unwrap(),
        param_count,
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kb_facts_examples() {
        let mut p = TaskProfile {
            concepts: 20,
            ..TaskProfile::default()
        };
        assert_eq!(estimate_kb_facts(&p), 200);
        p.concepts = 0;
        assert_eq!(estimate_kb_facts(&p), 0);
        p.concepts = 300;
        assert_eq!(estimate_kb_facts(&p), 3000);
        let report = full_report(&p).unwrap();
        assert!(report
            .notes
            .iter()
            .any(|n| n.contains("expert-system limit")));
    }

    #[test]
    fn domain_boundary_is_exact() {
        let mut p = TaskProfile {
            concepts: 299,
            ..TaskProfile::default()
        };
        assert_eq!(classify_domain(&p), DomainClass::Small);
        p.concepts = 300;
        assert_eq!(classify_domain(&p), DomainClass::Large);
        p.concepts = 20;
        assert_eq!(classify_domain(&p), DomainClass::Small);
    }

    #[test]
    fn atm_situation_bound_is_26() {
        assert_eq!(situation_bound(&atm_actions()).unwrap(), 26);
    }

    #[test]
    fn situation_bound_edge_cases() {
        let zero_param: Vec<ActionSpec> = (0..5)
            .map(|i| ActionSpec {
                name: Token::new(&format!("a{i}")).unwrap(),
                param_count: 0,
            })
            .collect();
        assert_eq!(situation_bound(&zero_param).unwrap(), 5);
        let single = [ActionSpec {
            name: Token::new("x").unwrap(),
            param_count: 3,
        }];
        assert_eq!(situation_bound(&single).unwrap(), 8);
        let too_many = [ActionSpec {
            name: Token::new("x").unwrap(),
            param_count: 17,
        }];
        assert!(situation_bound(&too_many).is_err());
    }

    #[test]
    fn dialog_state_estimates() {
        let p = TaskProfile::default();
        assert_eq!(estimate_dialog_states(&p), (70, 90));
        let substate_free = TaskProfile {
            substates: 1,
            ..TaskProfile::default()
        };
        assert_eq!(estimate_dialog_states(&substate_free), (7, 9));
        let bunt = TaskProfile {
            main_states_low: 18,
            main_states_high: 18,
            substates: 1,
            ..TaskProfile::default()
        };
        assert_eq!(estimate_dialog_states(&bunt), (18, 18));
    }

    #[test]
    fn narrative_band() {
        let boris = TaskProfile {
            vocab: 350,
            dialog_rounds: 5,
            ..TaskProfile::default()
        };
        let (low, high) = narrative_estimate(&boris);
        assert_eq!(low.value, 112_000);
        assert_eq!(high.value, 10_937_500);
        assert!(!low.saturated && !high.saturated);
    }

    #[test]
    fn narrative_zero_rounds_and_saturation() {
        let p = TaskProfile {
            vocab: 7,
            facts_per_token: 3,
            dialog_rounds: 0,
            ..TaskProfile::default()
        };
        let (low, high) = narrative_estimate(&p);
        assert_eq!((low.value, high.value), (21, 21));
        let big = TaskProfile {
            vocab: u64::MAX / 2,
            dialog_rounds: 10,
            ..TaskProfile::default()
        };
        let (_, high) = narrative_estimate(&big);
        assert!(high.saturated);
        assert_eq!(high.value, u64::MAX);
    }

    #[test]
    fn empty_profile_report() {
        let r = full_report(&TaskProfile::default()).unwrap();
        assert_eq!(r.kb_facts, 0);
        assert_eq!(r.domain_class, DomainClass::Small);
        assert_eq!(r.situation_bound, 0);
        assert_eq!(r.narrative_range, (0, 0));
    }

    #[test]
    fn profile_parsing() {
        let text = "\
# MINCAL-like profile
concepts = 30
vocab = 350
dialog_rounds = 5
action schedule 2
action cancel 1
construction_universe = 30
construction_target = 0.57
construction_exponent = 1.0
";
        let p = TaskProfile::parse(text).unwrap();
        assert_eq!(p.concepts, 30);
        assert_eq!(p.vocab, 350);
        assert_eq!(p.actions.len(), 2);
        assert_eq!(p.constructions, Some((30, 0.57, 1.0)));
        let report = full_report(&p).unwrap();
        assert_eq!(report.kb_facts, 300);
        assert_eq!(report.grammar_constructions, Some(5));
    }

    #[test]
    fn profile_parse_errors_carry_lines() {
        let err = TaskProfile::parse("concepts = x\n").unwrap_err();
        assert!(matches!(err, EstimatorError::Profile { line: 1, .. }));
        let err = TaskProfile::parse("nonsense\n").unwrap_err();
        assert!(matches!(err, EstimatorError::Profile { line: 1, .. }));
    }
}
